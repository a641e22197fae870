#include "dfc/byparts.hpp"

#include <algorithm>
#include <cctype>

namespace dfc {

namespace {

std::string lower(std::string_view s) {
  std::string out(s);
  for (auto &c : out)
    c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

using D = Direction;
using S = Side;

template <typename T> struct Terms {
  T lhs = T(0);
  T boundary = T(0);
  T sum = T(0);
};

} // namespace

const std::vector<SbpTheorem> &all_sbp_theorems() {
  static const std::vector<SbpTheorem> v{SbpTheorem::SBP_CAPUTO_LEFT, SbpTheorem::SBP_RL_LEFT,
                                         SbpTheorem::SBP_CAPUTO_RIGHT, SbpTheorem::SBP_RL_RIGHT};
  return v;
}

std::string sbp_name(SbpTheorem th) {
  switch (th) {
  case SbpTheorem::SBP_CAPUTO_LEFT:
    return "SBP_CAPUTO_LEFT";
  case SbpTheorem::SBP_RL_LEFT:
    return "SBP_RL_LEFT";
  case SbpTheorem::SBP_CAPUTO_RIGHT:
    return "SBP_CAPUTO_RIGHT";
  case SbpTheorem::SBP_RL_RIGHT:
    return "SBP_RL_RIGHT";
  }
  return "UNKNOWN";
}

SbpTheorem parse_sbp_theorem(std::string_view name) {
  for (auto th : all_sbp_theorems())
    if (lower(sbp_name(th)) == lower(name))
      return th;
  throw ParseError("unknown summation by parts theorem '" + std::string(name) + "'");
}

std::string reading_name(SbpReading r) {
  switch (r) {
  case SbpReading::literal:
    return "literal";
  case SbpReading::corrected:
    return "corrected";
  case SbpReading::proof:
    return "proof";
  }
  return "unknown";
}

SbpReading parse_reading(std::string_view name) {
  for (auto r : {SbpReading::literal, SbpReading::corrected, SbpReading::proof})
    if (reading_name(r) == lower(name))
      return r;
  throw ParseError("unknown reading '" + std::string(name) + "'");
}

template <typename T>
T sbp_boundary_convention(SbpTheorem th, const GridFunction<T> &g, const mpq_class &alpha, const Point &endpoint) {
  const Point a = g.grid().base();
  const Point b = g.grid().top();
  const mpq_class nu = 1 - alpha;
  Point expected;
  T value;
  OperatorSpec spec;
  switch (th) {
  case SbpTheorem::SBP_CAPUTO_LEFT:
    expected = b - 1;
    spec = OperatorSpec::sum(D::nabla, S::right, nu, b);
    break;
  case SbpTheorem::SBP_RL_LEFT:
    expected = a;
    spec = OperatorSpec::sum(D::nabla, S::left, nu, a);
    break;
  case SbpTheorem::SBP_CAPUTO_RIGHT:
    expected = a + 1;
    spec = OperatorSpec::sum(D::nabla, S::left, nu, a);
    break;
  case SbpTheorem::SBP_RL_RIGHT:
    expected = b;
    spec = OperatorSpec::sum(D::nabla, S::right, nu, b);
    break;
  }
  if (endpoint != expected)
    throw DomainError(sbp_name(th) + " fixes its convention at " + format_rational(expected) + ", not " +
                      format_rational(endpoint));
  value = (th == SbpTheorem::SBP_CAPUTO_LEFT || th == SbpTheorem::SBP_CAPUTO_RIGHT) ? g.at(endpoint) : T(0);
  const auto evaluated = apply(spec, g);
  if (evaluated.at(endpoint) != value)
    throw std::logic_error("boundary convention of " + sbp_name(th) + " disagrees with the operator");
  return value;
}

template <typename T>
SbpReport<T> sbp(SbpTheorem th, const GridFunction<T> &f, const GridFunction<T> &g, const mpq_class &alpha,
                 const SbpOptions &options) {
  if (!(alpha > 0 && alpha < 1))
    throw DomainError("summation by parts needs 0 < alpha < 1, got " + format_rational(alpha));
  if (!(f.grid() == g.grid()))
    throw DomainError("f and g must share one window");
  const bool proof = options.reading == SbpReading::proof;
  const bool corrected = options.reading == SbpReading::corrected;
  if (proof && th != SbpTheorem::SBP_CAPUTO_RIGHT)
    throw DomainError("the proof reading exists only for SBP_CAPUTO_RIGHT");
  if (options.shift_mutant && th != SbpTheorem::SBP_CAPUTO_RIGHT && th != SbpTheorem::SBP_RL_RIGHT)
    throw DomainError("the shift mutant applies to SBP_CAPUTO_RIGHT and SBP_RL_RIGHT only");
  const Point a = f.grid().base();
  const Point b = proof ? f.grid().top() - 1 : f.grid().top();
  if (b - a < 3)
    throw DomainError("summation by parts needs b - a >= 3");
  const bool mutant = options.shift_mutant;
  const mpq_class nu = 1 - alpha;
  Terms<T> t;

  switch (th) {
  case SbpTheorem::SBP_CAPUTO_LEFT: {
    const auto cf = apply(OperatorSpec::caputo(D::nabla, S::left, alpha, a), f);
    const auto ig = apply(OperatorSpec::sum(D::nabla, S::right, nu, b), g);
    const auto dg = apply(OperatorSpec::rl(D::nabla, S::right, alpha, b), g);
    for (Point s = a + 1; s <= b - 1; s += 1) {
      t.lhs += g.at(s) * cf.at(s);
      t.sum += f.at(s - 1) * dg.at(s - 1);
    }
    t.boundary = f.at(b - 1) * sbp_boundary_convention(th, g, alpha, b - 1) - f.at(a) * ig.at(a);
    break;
  }
  case SbpTheorem::SBP_RL_LEFT: {
    const auto dg = apply(OperatorSpec::rl(D::nabla, S::left, alpha, a), g);
    const auto ig = apply(OperatorSpec::sum(D::nabla, S::left, nu, a), g);
    const auto cf = apply(OperatorSpec::caputo(D::nabla, S::right, alpha, corrected ? b - 1 : b), f);
    for (Point s = a + 1; s <= b - 1; s += 1) {
      t.lhs += f.at(s - 1) * dg.at(s);
      t.sum += g.at(s) * cf.at(s - 1);
    }
    t.boundary = f.at(b - 1) * ig.at(b - 1) - f.at(a) * sbp_boundary_convention(th, g, alpha, a);
    break;
  }
  case SbpTheorem::SBP_CAPUTO_RIGHT: {
    const auto cf = apply(OperatorSpec::caputo(D::nabla, S::right, alpha, b), f);
    const auto ig = apply(OperatorSpec::sum(D::nabla, S::left, nu, a), g);
    const auto dg = apply(OperatorSpec::rl(D::nabla, S::left, alpha, a), g);
    const int k = mutant ? 0 : 1;
    for (Point s = a + 1; s <= b - 1; s += 1)
      t.lhs += g.at(s) * cf.at(s);
    for (Point s = a + 1; s <= (proof ? b : b - 1); s += 1)
      t.sum += f.at(s + k) * dg.at(s + k);
    const T at_start = mutant ? ig.at(a) : sbp_boundary_convention(th, g, alpha, a + 1);
    t.boundary = f.at(a + k) * at_start - f.at(b) * ig.at(b);
    break;
  }
  case SbpTheorem::SBP_RL_RIGHT: {
    const auto dg = apply(OperatorSpec::rl(D::nabla, S::right, alpha, b), g);
    const auto ig = apply(OperatorSpec::sum(D::nabla, S::right, nu, b), g);
    const auto cf = apply(OperatorSpec::caputo(D::nabla, S::left, alpha, corrected ? a + 1 : a), f);
    const int k = mutant ? 0 : 1;
    const int lhs_shift = mutant ? 0 : (corrected ? 1 : -1);
    for (Point s = a + 1; s <= b - 1; s += 1) {
      t.lhs += f.at(s + lhs_shift) * dg.at(s);
      t.sum += g.at(s) * cf.at(s + k);
    }
    t.boundary = f.at(a + k) * ig.at(a + k) - f.at(b) * sbp_boundary_convention(th, g, alpha, b);
    break;
  }
  }

  const T dev = scalar_traits<T>::abs(t.lhs - (t.boundary + t.sum));
  bool pass;
  if constexpr (scalar_traits<T>::exact) {
    pass = dev == 0;
  } else {
    const double scale = std::max({1.0, std::fabs(t.lhs), std::fabs(t.boundary), std::fabs(t.sum)});
    pass = dev / scale <= options.tolerance;
  }
  return SbpReport<T>{th, options.reading, mutant, alpha, Grid::between(a, b), t.lhs, t.boundary, t.sum, dev,
                      pass};
}

template <typename T> nlohmann::json to_json(const SbpReport<T> &r) {
  using tr = scalar_traits<T>;
  return {
      {"theorem", sbp_name(r.theorem)},
      {"reading", reading_name(r.reading)},
      {"mutant", r.mutant},
      {"alpha", format_rational(r.alpha)},
      {"base", format_rational(r.grid.base())},
      {"count", r.grid.count()},
      {"lhs", tr::to_string(r.lhs)},
      {"rhs_boundary", tr::to_string(r.rhs_boundary)},
      {"rhs_sum", tr::to_string(r.rhs_sum)},
      {"deviation", tr::to_string(r.deviation)},
      {"pass", r.pass},
      {"backend", tr::name},
  };
}

#define DFC_INSTANTIATE(T)                                                                                   \
  template T sbp_boundary_convention(SbpTheorem, const GridFunction<T> &, const mpq_class &, const Point &); \
  template SbpReport<T> sbp(SbpTheorem, const GridFunction<T> &, const GridFunction<T> &, const mpq_class &,  \
                            const SbpOptions &);                                                             \
  template nlohmann::json to_json(const SbpReport<T> &);

DFC_INSTANTIATE(mpq_class)
DFC_INSTANTIATE(double)

#undef DFC_INSTANTIATE

} // namespace dfc
