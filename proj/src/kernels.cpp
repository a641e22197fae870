#include "dfc/kernels.hpp"

#include <cmath>

namespace dfc {

namespace {

bool is_pole(const mpq_class &z) { return is_integer(z) && z <= 0; }

bool is_pole(double z) { return z <= 0.0 && z == std::floor(z); }

bool is_nonnegative_integer(double a) { return a >= 0.0 && a == std::floor(a); }

// Gamma(x) with sign, away from poles.
double signed_gamma_ratio(double x, double y) {
  const double lx = std::lgamma(x);
  const double ly = std::lgamma(y);
  auto sign = [](double z) {
    if (z > 0)
      return 1.0;
    return (static_cast<long>(std::floor(z)) % 2 == 0) ? 1.0 : -1.0;
  };
  return sign(x) * sign(y) * std::exp(lx - ly);
}

template <typename T> T to_scalar(const mpq_class &q) { return scalar_traits<T>::from_rational(q); }

} // namespace

FracOrder::FracOrder(mpq_class alpha) : alpha_(std::move(alpha)) {
  if (alpha_ <= 0)
    throw DomainError("fractional order must be positive, got " + format_rational(alpha_));
  const long fl = floor_to_long(alpha_);
  n_ = static_cast<int>(dfc::is_integer(alpha_) ? fl : fl + 1);
}

template <>
std::vector<mpq_class> kernel_coefficients<mpq_class>(const mpq_class &order,
                                                      std::size_t max_index) {
  std::vector<mpq_class> c(max_index + 1);
  c[0] = 1;
  for (std::size_t m = 1; m <= max_index; ++m) {
    const mpq_class mm(static_cast<unsigned long>(m));
    c[m] = c[m - 1] * (mm + order - 1) / mm;
  }
  return c;
}

template <>
std::vector<double> kernel_coefficients<double>(const mpq_class &order, std::size_t max_index) {
  const double nu = order.get_d();
  std::vector<double> c(max_index + 1);
  c[0] = 1.0;
  for (std::size_t m = 1; m <= max_index; ++m) {
    const double mm = static_cast<double>(m);
    c[m] = c[m - 1] * (mm + nu - 1.0) / mm;
  }
  return c;
}

template <typename T>
KernelSequence<T> kernel_sequence(const mpq_class &order, std::size_t max_index) {
  if (is_pole(order))
    throw DomainError("kernel order " + format_rational(order) +
                      " is a nonpositive integer (Gamma pole)");
  return KernelSequence<T>{order, kernel_coefficients<T>(order, max_index)};
}

template <typename T> T falling_over_gamma(const mpq_class &x, const mpq_class &nu) {
  const mpq_class m = x - nu + 1;
  if (!is_integer(m))
    throw DomainError("falling kernel needs x - nu + 1 integer");
  const long mi = m.get_num().get_si();
  if (mi < 0)
    return to_scalar<T>(mpq_class(0));
  return kernel_coefficients<T>(nu, static_cast<std::size_t>(mi))[static_cast<std::size_t>(mi)];
}

template <typename T> T rising_over_gamma(const mpq_class &x, const mpq_class &nu) {
  if (!is_integer(x))
    throw DomainError("rising kernel needs an integer argument");
  const long xi = x.get_num().get_si();
  if (xi < 0)
    throw DomainError("rising function undefined at negative integer " + format_rational(x));
  if (xi == 0)
    return to_scalar<T>(mpq_class(0));
  const auto m = static_cast<std::size_t>(xi - 1);
  return kernel_coefficients<T>(nu, m)[m];
}

template KernelSequence<mpq_class> kernel_sequence<mpq_class>(const mpq_class &, std::size_t);
template KernelSequence<double> kernel_sequence<double>(const mpq_class &, std::size_t);
template mpq_class falling_over_gamma<mpq_class>(const mpq_class &, const mpq_class &);
template double falling_over_gamma<double>(const mpq_class &, const mpq_class &);
template mpq_class rising_over_gamma<mpq_class>(const mpq_class &, const mpq_class &);
template double rising_over_gamma<double>(const mpq_class &, const mpq_class &);

// GammaProduct

GammaProduct GammaProduct::gamma(const mpq_class &x) {
  if (is_pole(x))
    throw DomainError("Gamma pole at " + format_rational(x));
  mpq_class phase = x - floor_to_long(x);
  if (phase == 0)
    phase = 1;
  GammaProduct g(mpq_class(1));
  if (phase != 1)
    g.factors_[phase] = 1;
  // Gamma(x) = Gamma(phase) * prod_{z=phase}^{x-1} z   for x > phase,
  //          = Gamma(phase) / prod_{z=x}^{phase-1} z   for x < phase.
  for (mpq_class z = phase; z < x; z += 1)
    g.coeff_ *= z;
  for (mpq_class z = x; z < phase; z += 1)
    g.coeff_ /= z;
  return g;
}

void GammaProduct::normalize() {
  if (coeff_ == 0) {
    factors_.clear();
    return;
  }
  for (auto it = factors_.begin(); it != factors_.end();)
    it = it->second == 0 ? factors_.erase(it) : std::next(it);
}

double GammaProduct::to_double() const {
  double v = coeff_.get_d();
  for (const auto &[phase, power] : factors_)
    v *= std::pow(std::tgamma(phase.get_d()), power);
  return v;
}

GammaProduct operator*(const GammaProduct &x, const GammaProduct &y) {
  GammaProduct r(x.coeff_ * y.coeff_);
  r.factors_ = x.factors_;
  for (const auto &[phase, power] : y.factors_)
    r.factors_[phase] += power;
  r.normalize();
  return r;
}

GammaProduct operator/(const GammaProduct &x, const GammaProduct &y) {
  if (y.coeff_ == 0)
    throw DomainError("division by zero gamma product");
  GammaProduct r(x.coeff_ / y.coeff_);
  r.factors_ = x.factors_;
  for (const auto &[phase, power] : y.factors_)
    r.factors_[phase] -= power;
  r.normalize();
  return r;
}

GammaProduct operator+(const GammaProduct &x, const GammaProduct &y) {
  if (x.is_zero())
    return y;
  if (y.is_zero())
    return x;
  if (x.factors_ != y.factors_)
    throw DomainError("sum of incommensurable gamma products");
  GammaProduct r(x.coeff_ + y.coeff_);
  r.factors_ = x.factors_;
  r.normalize();
  return r;
}

GammaProduct operator-(const GammaProduct &x, const GammaProduct &y) {
  GammaProduct neg = y;
  neg.coeff_ = -neg.coeff_;
  return x + neg;
}

bool operator==(const GammaProduct &x, const GammaProduct &y) {
  return x.coeff_ == y.coeff_ && x.factors_ == y.factors_;
}

// Factorial functions

double falling_factorial(double t, double alpha) {
  if (is_nonnegative_integer(alpha)) {
    double p = 1.0;
    for (long j = 0; j < static_cast<long>(alpha); ++j)
      p *= t - static_cast<double>(j);
    return p;
  }
  const double x = t + 1.0;
  const double y = t + 1.0 - alpha;
  if (is_pole(x) && is_pole(y))
    throw UndefinedForm("falling factorial: pole over pole");
  if (is_pole(x))
    throw DomainError("falling factorial: numerator pole");
  if (is_pole(y))
    return 0.0;
  return signed_gamma_ratio(x, y);
}

GammaProduct falling_factorial_exact(const mpq_class &t, const mpq_class &alpha) {
  if (is_integer(alpha) && alpha >= 0) {
    mpq_class p = 1;
    for (mpq_class j = 0; j < alpha; j += 1)
      p *= t - j;
    return GammaProduct(p);
  }
  const mpq_class x = t + 1;
  const mpq_class y = t + 1 - alpha;
  if (is_pole(x) && is_pole(y))
    throw UndefinedForm("falling factorial: pole over pole");
  if (is_pole(x))
    throw DomainError("falling factorial: numerator pole");
  if (is_pole(y))
    return GammaProduct(mpq_class(0));
  return GammaProduct::gamma(x) / GammaProduct::gamma(y);
}

double rising_factorial(double t, double alpha) {
  if (t == 0.0)
    return 0.0;
  if (is_pole(t))
    throw DomainError("rising factorial undefined at negative integer t");
  if (is_nonnegative_integer(alpha)) {
    double p = 1.0;
    for (long k = 0; k < static_cast<long>(alpha); ++k)
      p *= t + static_cast<double>(k);
    return p;
  }
  if (is_pole(t + alpha))
    throw DomainError("rising factorial: numerator pole");
  return signed_gamma_ratio(t + alpha, t);
}

GammaProduct rising_factorial_exact(const mpq_class &t, const mpq_class &alpha) {
  if (t == 0)
    return GammaProduct(mpq_class(0));
  if (is_pole(t))
    throw DomainError("rising factorial undefined at negative integer t");
  if (is_integer(alpha) && alpha >= 0) {
    mpq_class p = 1;
    for (mpq_class k = 0; k < alpha; k += 1)
      p *= t + k;
    return GammaProduct(p);
  }
  if (is_pole(t + alpha))
    throw DomainError("rising factorial: numerator pole");
  return GammaProduct::gamma(t + alpha) / GammaProduct::gamma(t);
}

} // namespace dfc
