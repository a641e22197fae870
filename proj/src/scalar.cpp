#include "dfc/scalar.hpp"

#include <charconv>
#include <limits>
#include <system_error>

namespace dfc {

namespace {

bool all_digits(std::string_view s) {
  if (s.empty())
    return false;
  for (char c : s)
    if (c < '0' || c > '9')
      return false;
  return true;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r'))
    s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r'))
    s.remove_suffix(1);
  return s;
}

mpq_class pow10(long e) {
  mpz_class p;
  mpz_ui_pow_ui(p.get_mpz_t(), 10, static_cast<unsigned long>(e < 0 ? -e : e));
  return e < 0 ? mpq_class(mpz_class(1), p) : mpq_class(p);
}

} // namespace

mpq_class parse_rational(std::string_view text) {
  std::string_view s = trim(text);
  const std::string original(s);
  if (s.empty())
    throw ParseError("empty rational literal");

  bool negative = false;
  if (s.front() == '+' || s.front() == '-') {
    negative = s.front() == '-';
    s.remove_prefix(1);
  }

  if (auto slash = s.find('/'); slash != std::string_view::npos) {
    const auto num = s.substr(0, slash);
    const auto den = s.substr(slash + 1);
    if (!all_digits(num) || !all_digits(den))
      throw ParseError("malformed rational '" + original + "'");
    mpz_class d(std::string(den), 10);
    if (d == 0)
      throw ParseError("zero denominator in '" + original + "'");
    mpq_class q(mpz_class(std::string(num), 10), d);
    q.canonicalize();
    return negative ? mpq_class(-q) : q;
  }

  long exponent = 0;
  if (auto e = s.find_first_of("eE"); e != std::string_view::npos) {
    auto exp_text = s.substr(e + 1);
    bool exp_negative = false;
    if (!exp_text.empty() && (exp_text.front() == '+' || exp_text.front() == '-')) {
      exp_negative = exp_text.front() == '-';
      exp_text.remove_prefix(1);
    }
    if (!all_digits(exp_text) || exp_text.size() > 6)
      throw ParseError("malformed exponent in '" + original + "'");
    exponent = std::stol(std::string(exp_text));
    if (exp_negative)
      exponent = -exponent;
    s = s.substr(0, e);
  }

  std::string digits;
  long scale = 0;
  if (auto dot = s.find('.'); dot != std::string_view::npos) {
    const auto whole = s.substr(0, dot);
    const auto frac = s.substr(dot + 1);
    if ((!whole.empty() && !all_digits(whole)) || (!frac.empty() && !all_digits(frac)) ||
        (whole.empty() && frac.empty()))
      throw ParseError("malformed decimal '" + original + "'");
    digits = std::string(whole) + std::string(frac);
    scale = static_cast<long>(frac.size());
  } else {
    if (!all_digits(s))
      throw ParseError("malformed number '" + original + "'");
    digits = std::string(s);
  }

  mpq_class q(mpz_class(digits, 10));
  q *= pow10(exponent - scale);
  q.canonicalize();
  return negative ? mpq_class(-q) : q;
}

std::string format_rational(const mpq_class &q) {
  mpq_class c(q);
  c.canonicalize();
  return c.get_str(10);
}

std::string format_double(double x) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, x);
  if (ec != std::errc())
    throw std::runtime_error("cannot format double");
  return std::string(buf, end);
}

double parse_double(std::string_view text) {
  std::string_view s = trim(text);
  if (!s.empty() && s.front() == '+')
    s.remove_prefix(1);
  double value = 0.0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc() || ptr != s.data() + s.size())
    throw ParseError("malformed decimal '" + std::string(text) + "'");
  return value;
}

bool is_integer(const mpq_class &q) { return q.get_den() == 1; }

long floor_to_long(const mpq_class &q) {
  mpz_class f;
  mpz_fdiv_q(f.get_mpz_t(), q.get_num_mpz_t(), q.get_den_mpz_t());
  if (!f.fits_slong_p())
    throw DomainError("coordinate out of range");
  return f.get_si();
}

long integer_offset(const mpq_class &from, const mpq_class &to) {
  const mpq_class d = to - from;
  if (!is_integer(d))
    throw DomainError("points " + format_rational(from) + " and " + format_rational(to) +
                      " are not integer-aligned");
  if (!d.get_num().fits_slong_p())
    throw DomainError("offset out of range");
  return d.get_num().get_si();
}

} // namespace dfc
