#ifndef DFC_KERNELS_HPP
#define DFC_KERNELS_HPP

#include "dfc/scalar.hpp"

#include <cstddef>
#include <map>
#include <vector>

namespace dfc {

// Raised when a gamma ratio is pole over pole; the caller has to fall back to
// the kernel recurrence, which carries the correct limit.
class UndefinedForm : public DomainError {
public:
  using DomainError::DomainError;
};

/// Fractional order alpha > 0 with n = [alpha] + 1, where [alpha] is the
/// greatest integer strictly below alpha (n == alpha for integer alpha).
class FracOrder {
public:
  explicit FracOrder(mpq_class alpha);

  const mpq_class &alpha() const { return alpha_; }
  int n() const { return n_; }
  // n - alpha, the order of the inner sum of a fractional difference.
  mpq_class complement() const { return mpq_class(n_) - alpha_; }
  bool is_integer() const { return dfc::is_integer(alpha_); }

private:
  mpq_class alpha_;
  int n_;
};

/// c_m(nu) = Gamma(m + nu) / (Gamma(m + 1) Gamma(nu)), m = 0..M. Every
/// fractional sum kernel in this library is one of these sequences.
template <typename T> struct KernelSequence {
  mpq_class order;
  std::vector<T> coeffs;
};

// Rejects nonpositive integer orders (Gamma(nu) at a pole).
template <typename T>
KernelSequence<T> kernel_sequence(const mpq_class &order, std::size_t max_index);

// Recurrence c_0 = 1, c_m = c_{m-1} (m + nu - 1) / m for any real nu. At
// nonpositive integer nu it yields the limit of the gamma formula.
template <typename T>
std::vector<T> kernel_coefficients(const mpq_class &order, std::size_t max_index);

// x^{(nu-1)} / Gamma(nu). x - nu + 1 must be an integer m; the value is
// c_m(nu) for m >= 0 and 0 below (denominator pole).
template <typename T> T falling_over_gamma(const mpq_class &x, const mpq_class &nu);

// x^{overline{nu-1}} / Gamma(nu) for integer x: c_{x-1}(nu), and 0 at x = 0.
template <typename T> T rising_over_gamma(const mpq_class &x, const mpq_class &nu);

/// Exact value coeff * prod Gamma(phase)^power with phases in (0, 1).
/// Products of gamma values at rational points reduce to this form through
/// Gamma(x + 1) = x Gamma(x), so factorial identities can be checked exactly.
class GammaProduct {
public:
  GammaProduct() = default;
  GammaProduct(mpq_class coeff) : coeff_(std::move(coeff)) {}

  // Gamma(x); throws DomainError at nonpositive integers.
  static GammaProduct gamma(const mpq_class &x);

  const mpq_class &coefficient() const { return coeff_; }
  const std::map<mpq_class, int> &factors() const { return factors_; }
  bool is_rational() const { return factors_.empty(); }
  bool is_zero() const { return coeff_ == 0; }
  double to_double() const;

  friend GammaProduct operator*(const GammaProduct &x, const GammaProduct &y);
  friend GammaProduct operator/(const GammaProduct &x, const GammaProduct &y);
  // Sums need identical gamma factors (or a zero operand).
  friend GammaProduct operator+(const GammaProduct &x, const GammaProduct &y);
  friend GammaProduct operator-(const GammaProduct &x, const GammaProduct &y);
  friend bool operator==(const GammaProduct &x, const GammaProduct &y);

private:
  void normalize();

  mpq_class coeff_{0};
  std::map<mpq_class, int> factors_;
};

// t^{(alpha)} = Gamma(t+1) / Gamma(t+1-alpha); zero at a denominator pole.
double falling_factorial(double t, double alpha);
GammaProduct falling_factorial_exact(const mpq_class &t, const mpq_class &alpha);

// t^{overline{alpha}} = Gamma(t+alpha) / Gamma(t), with 0^{overline{alpha}} = 0.
double rising_factorial(double t, double alpha);
GammaProduct rising_factorial_exact(const mpq_class &t, const mpq_class &alpha);

} // namespace dfc

#endif
