#include "dfc/identities.hpp"

#include <algorithm>
#include <cctype>
#include <random>

namespace dfc {

namespace {

struct NamedId {
  IdentityId id;
  const char *name;
};

constexpr NamedId kNames[] = {
    {IdentityId::SUM_DUAL_NABLA, "SUM_DUAL_NABLA"},
    {IdentityId::SUM_DUAL_DELTA, "SUM_DUAL_DELTA"},
    {IdentityId::INT_DUAL_1, "INT_DUAL_1"},
    {IdentityId::INT_DUAL_N, "INT_DUAL_N"},
    {IdentityId::RL_DUAL_NABLA, "RL_DUAL_NABLA"},
    {IdentityId::CAPUTO_DUAL_NABLA, "CAPUTO_DUAL_NABLA"},
    {IdentityId::RL_DUAL_DELTA, "RL_DUAL_DELTA"},
    {IdentityId::CAPUTO_DUAL_DELTA, "CAPUTO_DUAL_DELTA"},
    {IdentityId::SHIFT_LEFT_I, "SHIFT_LEFT_I"},
    {IdentityId::SHIFT_LEFT_II, "SHIFT_LEFT_II"},
    {IdentityId::SHIFT_RIGHT_I, "SHIFT_RIGHT_I"},
    {IdentityId::SHIFT_RIGHT_II, "SHIFT_RIGHT_II"},
    {IdentityId::CAPUTO_SHIFT_L, "CAPUTO_SHIFT_L"},
    {IdentityId::CAPUTO_SHIFT_R, "CAPUTO_SHIFT_R"},
    {IdentityId::COMM_ATO, "COMM_ATO"},
    {IdentityId::COMM_TD, "COMM_TD"},
    {IdentityId::COMM_AtT, "COMM_AtT"},
    {IdentityId::COMM_RN, "COMM_RN"},
    {IdentityId::COMM_LNG, "COMM_LNG"},
    {IdentityId::COMM_RNG, "COMM_RNG"},
};

std::string upper(std::string_view s) {
  std::string out(s);
  for (auto &c : out)
    c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  return out;
}

bool accepts_any_order(IdentityId id) {
  return id == IdentityId::COMM_AtT || id == IdentityId::COMM_RN || id == IdentityId::COMM_LNG ||
         id == IdentityId::COMM_RNG;
}

template <typename T> struct Tally {
  std::size_t points = 0;
  T max_dev = T(0);
  T scale = T(0);

  void compare(const GridFunction<T> &lhs, const GridFunction<T> &rhs) {
    const auto common = lhs.grid().intersect(rhs.grid());
    if (!common)
      throw DomainError("sides have no common point");
    const std::size_t lo = lhs.grid().index_of(common->base());
    const std::size_t ro = rhs.grid().index_of(common->base());
    for (std::size_t i = 0; i < common->count(); ++i) {
      const T &x = lhs[lo + i];
      const T &y = rhs[ro + i];
      const T d = scalar_traits<T>::abs(x - y);
      if (d > max_dev)
        max_dev = d;
      scale = std::max({scale, scalar_traits<T>::abs(x), scalar_traits<T>::abs(y)});
      ++points;
    }
  }
};

template <typename T> GridFunction<T> negate(GridFunction<T> g) {
  for (auto &v : g.values())
    v = -v;
  return g;
}

// Nabla sums of any real order; positive orders go through the ordinary sum.
template <typename T>
GridFunction<T> nabla_sum(Side s, const mpq_class &nu, const Point &anchor, const GridFunction<T> &f) {
  if (nu > 0)
    return frac_sum(OperatorSpec::sum(Direction::nabla, s, nu, anchor), f);
  return nabla_sum_any_order(s, nu, anchor, f);
}

template <typename T, typename Term> void subtract_term(GridFunction<T> &g, bool keep, Term term) {
  if (!keep)
    return;
  for (std::size_t i = 0; i < g.size(); ++i)
    g[i] -= term(g.grid().point(i));
}

IdentityReport blank_report(IdentityId id, std::string function, const mpq_class &alpha, const Grid &grid,
                            std::string backend) {
  IdentityReport r{id, std::move(function), alpha, grid, std::move(backend), 0, "", 0.0, 0.0, false, ""};
  return r;
}

template <typename T> GridFunction<T> op(const OperatorSpec &spec, const GridFunction<T> &f) {
  return apply(spec, f);
}

} // namespace

const std::vector<IdentityId> &all_identities() {
  static const std::vector<IdentityId> ids = [] {
    std::vector<IdentityId> v;
    for (const auto &n : kNames)
      v.push_back(n.id);
    return v;
  }();
  return ids;
}

std::string identity_name(IdentityId id) {
  for (const auto &n : kNames)
    if (n.id == id)
      return n.name;
  return "UNKNOWN";
}

IdentityId parse_identity(std::string_view name) {
  const std::string key = upper(name);
  for (const auto &n : kNames)
    if (upper(n.name) == key)
      return n.id;
  throw ParseError("unknown identity '" + std::string(name) + "'");
}

bool has_boundary_term(IdentityId id) {
  switch (id) {
  case IdentityId::COMM_ATO:
  case IdentityId::COMM_TD:
  case IdentityId::COMM_AtT:
  case IdentityId::COMM_RN:
  case IdentityId::COMM_LNG:
  case IdentityId::COMM_RNG:
    return true;
  default:
    return false;
  }
}

template <typename T>
IdentityReport check_identity(IdentityId id, const GridFunction<T> &f, const mpq_class &alpha,
                              const IdentityParams &params) {
  if (!accepts_any_order(id) && alpha <= 0)
    throw DomainError(identity_name(id) + " needs a positive order, got " + format_rational(alpha));
  const Point a = f.grid().base();
  const Point b = f.grid().top();
  const bool keep = !params.omit_boundary_term;
  using D = Direction;
  using S = Side;
  Tally<T> tally;

  switch (id) {
  case IdentityId::SUM_DUAL_NABLA:
    tally.compare(op(OperatorSpec::sum(D::nabla, S::left, alpha, a), f),
                  symmetric_dual(op(OperatorSpec::sum(D::nabla, S::right, alpha, -a), symmetric_dual(f))));
    break;
  case IdentityId::SUM_DUAL_DELTA:
    tally.compare(op(OperatorSpec::sum(D::delta, S::left, alpha, a), f),
                  symmetric_dual(op(OperatorSpec::sum(D::delta, S::right, alpha, -a), symmetric_dual(f))));
    break;
  case IdentityId::INT_DUAL_1: {
    const auto fs = symmetric_dual(f);
    tally.compare(negate(symmetric_dual(int_diff(D::nabla, false, 1, f))), int_diff(D::delta, false, 1, fs));
    tally.compare(negate(symmetric_dual(int_diff(D::delta, false, 1, f))), int_diff(D::nabla, false, 1, fs));
    break;
  }
  case IdentityId::INT_DUAL_N: {
    if (params.p < 1)
      throw DomainError("INT_DUAL_N needs p >= 1");
    const auto fs = symmetric_dual(f);
    tally.compare(symmetric_dual(int_diff(D::nabla, false, params.p, f)), int_diff(D::delta, true, params.p, fs));
    tally.compare(symmetric_dual(int_diff(D::delta, false, params.p, f)), int_diff(D::nabla, true, params.p, fs));
    break;
  }
  case IdentityId::RL_DUAL_NABLA:
    tally.compare(op(OperatorSpec::rl(D::nabla, S::left, alpha, a), f),
                  symmetric_dual(op(OperatorSpec::rl(D::nabla, S::right, alpha, -a), symmetric_dual(f))));
    break;
  case IdentityId::CAPUTO_DUAL_NABLA: {
    const Point shifted = caputo_anchor(S::left, a, alpha); // a(alpha) = a + n - 1
    tally.compare(
        op(OperatorSpec::caputo(D::nabla, S::left, alpha, shifted), f),
        symmetric_dual(op(OperatorSpec::caputo(D::nabla, S::right, alpha, -shifted), symmetric_dual(f))));
    break;
  }
  case IdentityId::RL_DUAL_DELTA:
    tally.compare(op(OperatorSpec::rl(D::delta, S::left, alpha, a), f),
                  symmetric_dual(op(OperatorSpec::rl(D::delta, S::right, alpha, -a), symmetric_dual(f))));
    break;
  case IdentityId::CAPUTO_DUAL_DELTA:
    tally.compare(op(OperatorSpec::caputo(D::delta, S::left, alpha, a), f),
                  symmetric_dual(op(OperatorSpec::caputo(D::delta, S::right, alpha, -a), symmetric_dual(f))));
    break;
  case IdentityId::SHIFT_LEFT_I:
    tally.compare(shift(op(OperatorSpec::rl(D::delta, S::left, alpha, a), f), alpha),
                  op(OperatorSpec::rl(D::nabla, S::left, alpha, a - 1), f));
    break;
  case IdentityId::SHIFT_LEFT_II:
    tally.compare(shift(op(OperatorSpec::sum(D::delta, S::left, alpha, a), f), -alpha),
                  op(OperatorSpec::sum(D::nabla, S::left, alpha, a - 1), f));
    break;
  case IdentityId::SHIFT_RIGHT_I:
    // nabla side ends at b+1, as in the sum version
    tally.compare(shift(op(OperatorSpec::rl(D::delta, S::right, alpha, b), f), -alpha),
                  op(OperatorSpec::rl(D::nabla, S::right, alpha, b + 1), f));
    break;
  case IdentityId::SHIFT_RIGHT_II:
    tally.compare(shift(op(OperatorSpec::sum(D::delta, S::right, alpha, b), f), alpha),
                  op(OperatorSpec::sum(D::nabla, S::right, alpha, b + 1), f));
    break;
  case IdentityId::CAPUTO_SHIFT_L:
    tally.compare(shift(op(OperatorSpec::caputo(D::delta, S::left, alpha, a), f), alpha),
                  op(OperatorSpec::caputo(D::nabla, S::left, alpha, caputo_anchor(S::left, a, alpha)), f));
    break;
  case IdentityId::CAPUTO_SHIFT_R:
    tally.compare(shift(op(OperatorSpec::caputo(D::delta, S::right, alpha, b), f), -alpha),
                  op(OperatorSpec::caputo(D::nabla, S::right, alpha, caputo_anchor(S::right, b, alpha)), f));
    break;
  case IdentityId::COMM_ATO: {
    const auto spec = OperatorSpec::sum(D::delta, S::left, alpha, a);
    auto rhs = int_diff(D::delta, false, 1, op(spec, f));
    // (t-a)^{(alpha-1)} / Gamma(alpha) f(a)
    subtract_term(rhs, keep, [&](const Point &t) -> T { return falling_over_gamma<T>(t - a, alpha) * f.at(a); });
    tally.compare(op(spec, int_diff(D::delta, false, 1, f)), rhs);
    break;
  }
  case IdentityId::COMM_TD: {
    const auto spec = OperatorSpec::sum(D::delta, S::right, alpha, b);
    auto rhs = int_diff(D::nabla, true, 1, op(spec, f));
    subtract_term(rhs, keep, [&](const Point &t) -> T { return falling_over_gamma<T>(b - t, alpha) * f.at(b); });
    tally.compare(op(spec, int_diff(D::nabla, true, 1, f)), rhs);
    break;
  }
  case IdentityId::COMM_AtT: {
    auto rhs = int_diff(D::nabla, false, 1, nabla_sum(S::left, alpha, a, f));
    // (t-a)^{overline{alpha-1}} / Gamma(alpha) f(a)
    subtract_term(rhs, keep, [&](const Point &t) -> T { return rising_over_gamma<T>(t - a, alpha) * f.at(a); });
    tally.compare(nabla_sum(S::left, alpha, a, int_diff(D::nabla, false, 1, f)), rhs);
    break;
  }
  case IdentityId::COMM_RN: {
    auto rhs = int_diff(D::delta, true, 1, nabla_sum(S::right, alpha, b, f));
    subtract_term(rhs, keep, [&](const Point &t) -> T { return rising_over_gamma<T>(b - t, alpha) * f.at(b); });
    tally.compare(nabla_sum(S::right, alpha, b, int_diff(D::delta, true, 1, f)), rhs);
    break;
  }
  case IdentityId::COMM_LNG: {
    const int p = params.p;
    if (p < 1)
      throw DomainError("COMM_LNG needs p >= 1");
    const Point start = a + p - 1;
    std::vector<T> diffs_at_start;
    for (int k = 0; k < p; ++k)
      diffs_at_start.push_back(int_diff(D::nabla, false, k, f).at(start));
    auto rhs = int_diff(D::nabla, false, p, nabla_sum(S::left, alpha, start, f));
    subtract_term(rhs, keep, [&](const Point &t) -> T {
      T acc = T(0);
      for (int k = 0; k < p; ++k)
        acc += rising_over_gamma<T>(t - start, alpha - p + k + 1) * diffs_at_start[static_cast<std::size_t>(k)];
      return acc;
    });
    tally.compare(nabla_sum(S::left, alpha, start, int_diff(D::nabla, false, p, f)), rhs);
    break;
  }
  case IdentityId::COMM_RNG: {
    const int p = params.p;
    if (p < 1)
      throw DomainError("COMM_RNG needs p >= 1");
    const Point end = b - p + 1;
    std::vector<T> diffs_at_end;
    for (int k = 0; k < p; ++k)
      diffs_at_end.push_back(int_diff(D::delta, true, k, f).at(end));
    auto rhs = int_diff(D::delta, true, p, nabla_sum(S::right, alpha, end, f));
    subtract_term(rhs, keep, [&](const Point &t) -> T {
      T acc = T(0);
      for (int k = 0; k < p; ++k)
        acc += rising_over_gamma<T>(end - t, alpha - p + k + 1) * diffs_at_end[static_cast<std::size_t>(k)];
      return acc;
    });
    tally.compare(nabla_sum(S::right, alpha, end, int_diff(D::delta, true, p, f)), rhs);
    break;
  }
  }

  IdentityReport r = blank_report(id, "", alpha, f.grid(), scalar_traits<T>::name);
  r.points_checked = tally.points;
  r.max_dev = scalar_traits<T>::to_string(tally.max_dev);
  r.max_dev_value = scalar_traits<T>::to_double(tally.max_dev);
  r.scale = scalar_traits<T>::to_double(tally.scale);
  if constexpr (scalar_traits<T>::exact)
    r.pass = tally.points > 0 && tally.max_dev == 0;
  else
    r.pass = tally.points > 0 && r.max_dev_value / std::max(1.0, r.scale) <= params.tolerance;
  return r;
}

template IdentityReport check_identity(IdentityId, const GridFunction<mpq_class> &, const mpq_class &,
                                       const IdentityParams &);
template IdentityReport check_identity(IdentityId, const GridFunction<double> &, const mpq_class &,
                                       const IdentityParams &);

std::vector<FunctionFamily> default_functions(unsigned long seed) {
  std::vector<FunctionFamily> out;
  out.push_back({"1", [](const Grid &g) { return GridFunction<mpq_class>::constant(g, mpq_class(1)); }});
  out.push_back({"t", [](const Grid &g) {
                   return GridFunction<mpq_class>::sample(g, [](const Point &t) { return mpq_class(t); });
                 }});
  out.push_back({"t^2", [](const Grid &g) {
                   return GridFunction<mpq_class>::sample(g, [](const Point &t) { return mpq_class(t * t); });
                 }});
  out.push_back({"random", [seed](const Grid &g) {
                   std::mt19937_64 rng(seed + g.count());
                   std::uniform_int_distribution<long> num(-63, 63), den(1, 7);
                   std::vector<mpq_class> v;
                   for (std::size_t i = 0; i < g.count(); ++i) {
                     mpq_class x(num(rng), den(rng));
                     x.canonicalize();
                     v.push_back(x);
                   }
                   return GridFunction<mpq_class>(g, std::move(v));
                 }});
  return out;
}

std::vector<mpq_class> default_alphas() {
  return {mpq_class(1, 4), mpq_class(1, 3), mpq_class(1, 2), mpq_class(2, 3),
          mpq_class(3, 4), mpq_class(5, 4), mpq_class(3, 2)};
}

std::vector<Grid> default_windows() { return {Grid(Point(0), 5), Grid(Point(0), 9), Grid(Point(0), 17)}; }

std::vector<IdentityReport> run_suite(const std::vector<FunctionFamily> &functions,
                                      const std::vector<mpq_class> &alphas,
                                      const std::vector<Grid> &windows, const SuiteOptions &options) {
  if (functions.empty() || alphas.empty() || windows.empty() || options.identities.empty())
    throw DomainError("suite needs nonempty identity, function, order and window lists");
  std::vector<IdentityReport> reports;
  for (auto id : options.identities)
    for (const auto &alpha : alphas)
      for (const auto &window : windows)
        for (const auto &family : functions) {
          IdentityReport r = blank_report(id, family.name, alpha, window, options.exact ? "exact" : "float");
          try {
            const auto f = family.make(window);
            r = options.exact ? check_identity(id, f, alpha, options.params)
                              : check_identity(id, to_float(f), alpha, options.params);
            r.function = family.name;
          } catch (const std::exception &e) {
            r.pass = false;
            r.error = e.what();
          }
          reports.push_back(std::move(r));
        }
  return reports;
}

bool all_pass(const std::vector<IdentityReport> &reports) {
  return !reports.empty() &&
         std::all_of(reports.begin(), reports.end(), [](const IdentityReport &r) { return r.pass; });
}

nlohmann::json to_json(const IdentityReport &r) {
  nlohmann::json j = {
      {"identity", identity_name(r.identity)},
      {"function", r.function},
      {"alpha", format_rational(r.alpha)},
      {"base", format_rational(r.grid.base())},
      {"count", r.grid.count()},
      {"points_checked", r.points_checked},
      {"max_dev", r.max_dev},
      {"pass", r.pass},
      {"backend", r.backend},
  };
  if (!r.error.empty())
    j["error"] = r.error;
  return j;
}

nlohmann::json to_json(const std::vector<IdentityReport> &reports) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto &r : reports)
    arr.push_back(to_json(r));
  return arr;
}

} // namespace dfc
