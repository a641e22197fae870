#ifndef DFC_SCALAR_HPP
#define DFC_SCALAR_HPP

#include <gmpxx.h>

#include <cmath>
#include <stdexcept>
#include <string>
#include <string_view>

namespace dfc {

// Grid coordinates and fractional orders are always exact.
using Point = mpq_class;

class DomainError : public std::domain_error {
public:
  using std::domain_error::domain_error;
};

class ParseError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

// Accepts "p/q", integers and terminating decimals ("-1.25", "3e-2").
mpq_class parse_rational(std::string_view text);

// Canonical form: "p/q" reduced with q > 0, bare "p" when q == 1.
std::string format_rational(const mpq_class &q);

// Shortest decimal that round-trips through strtod.
std::string format_double(double x);

double parse_double(std::string_view text);

bool is_integer(const mpq_class &q);

// floor for rationals, result must fit in long.
long floor_to_long(const mpq_class &q);

// Difference of two points that must be an integer.
long integer_offset(const mpq_class &from, const mpq_class &to);

/// Per-backend operations. `exact` backends promise bit-exact identities;
/// floating backends are compared with a scaled tolerance.
template <typename T> struct scalar_traits;

template <> struct scalar_traits<mpq_class> {
  static constexpr bool exact = true;
  static constexpr const char *name = "exact";
  static mpq_class from_rational(const mpq_class &q) { return q; }
  static mpq_class from_long(long v) { return mpq_class(v); }
  static double to_double(const mpq_class &q) { return q.get_d(); }
  static mpq_class abs(const mpq_class &q) { return ::abs(q); }
  static std::string to_string(const mpq_class &q) { return format_rational(q); }
  static mpq_class parse(std::string_view s) { return parse_rational(s); }
};

template <> struct scalar_traits<double> {
  static constexpr bool exact = false;
  static constexpr const char *name = "float";
  static double from_rational(const mpq_class &q) { return q.get_d(); }
  static double from_long(long v) { return static_cast<double>(v); }
  static double to_double(double x) { return x; }
  static double abs(double x) { return std::fabs(x); }
  static std::string to_string(double x) { return format_double(x); }
  static double parse(std::string_view s) { return parse_double(s); }
};

} // namespace dfc

#endif
