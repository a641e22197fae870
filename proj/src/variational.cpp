#include "dfc/variational.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace dfc {

namespace {

using D = Direction;
using S = Side;

template <typename T> T from_q(const mpq_class &q) { return scalar_traits<T>::from_rational(q); }

template <typename T> OperatorSpec v_operator(const VariationalProblem<T> &p) {
  return p.variant == Variant::mm ? OperatorSpec::rl(D::nabla, S::right, p.alpha, p.b())
                                  : OperatorSpec::caputo(D::nabla, S::right, p.alpha, caputo_anchor(S::right, p.b(), p.alpha));
}

template <typename T> Point u_point(const VariationalProblem<T> &p, const Point &t) {
  return p.variant == Variant::mm ? t : Point(t + 1);
}

template <typename T> Grid sum_grid(const VariationalProblem<T> &p) { return Grid::between(p.a() + 1, p.b() - 1); }

template <typename T> GridFunction<T> zero_extend(const GridFunction<T> &inner, const Grid &window) {
  auto out = GridFunction<T>::constant(window, T(0));
  for (std::size_t i = 0; i < inner.size(); ++i)
    out.at(inner.grid().point(i)) = inner[i];
  return out;
}

template <typename T> void require_window(const VariationalProblem<T> &p, const GridFunction<T> &f) {
  if (!(f.grid() == p.window))
    throw DomainError("function lives on a different window than the problem");
}

template <typename T> OperatorSpec left_rl(const VariationalProblem<T> &p) {
  return OperatorSpec::rl(D::nabla, S::left, p.alpha, p.a());
}

// Row of _b nabla^{-(1-alpha)} at a+1 over the window.
template <typename T> std::vector<T> rl_boundary_row(const VariationalProblem<T> &p) {
  const auto m = operator_matrix<T>(OperatorSpec::sum(D::nabla, S::right, 1 - p.alpha, p.b()), p.window);
  const std::size_t r = m.output_grid().index_of(p.a() + 1);
  std::vector<T> row(m.cols());
  for (std::size_t j = 0; j < m.cols(); ++j)
    row[j] = m(r, j);
  return row;
}

std::string describe(const mpq_class &alpha, const Grid &w) {
  return "alpha=" + format_rational(alpha) + " on [" + format_rational(w.base()) + ", " + format_rational(w.top()) +
         "]";
}

template <typename T> Lagrangian<T> make(std::string name, typename Lagrangian<T>::Fn eval,
                                         typename Lagrangian<T>::Fn du, typename Lagrangian<T>::Fn dv) {
  Lagrangian<T> L;
  L.name = std::move(name);
  L.eval = std::move(eval);
  L.d_u = std::move(du);
  L.d_v = std::move(dv);
  return L;
}

mpq_class rational_field(const nlohmann::json &j, const char *key) {
  if (j.is_string())
    return parse_rational(j.get<std::string>());
  if (j.is_number_integer())
    return mpq_class(j.get<long>());
  if (j.is_number_float())
    return parse_rational(j.dump());
  throw ParseError(std::string("field '") + key + "' must be a number or a \"p/q\" string");
}

} // namespace

template <typename T> Lagrangian<T> quadratic_lagrangian(std::function<T(const Point &)> g) {
  auto L = make<T>(
      "quadratic", [g](const Point &t, const T &u, const T &v) -> T { return v * v / 2 + u * g(t); },
      [g](const Point &t, const T &, const T &) -> T { return g(t); },
      [](const Point &, const T &, const T &v) -> T { return v; });
  L.quadratic_g = std::move(g);
  return L;
}

const std::vector<std::string> &builtin_lagrangian_names() {
  static const std::vector<std::string> names{"half_v2", "linear_u", "half_v_minus_1_sq", "quartic"};
  return names;
}

template <typename T> Lagrangian<T> builtin_lagrangian(const std::string &name) {
  if (name == "half_v2") {
    auto L = quadratic_lagrangian<T>([](const Point &) { return T(0); });
    L.name = name;
    return L;
  }
  if (name == "linear_u")
    return make<T>(
        name, [](const Point &, const T &u, const T &) -> T { return u; },
        [](const Point &, const T &, const T &) -> T { return T(1); },
        [](const Point &, const T &, const T &) -> T { return T(0); });
  if (name == "half_v_minus_1_sq")
    return make<T>(
        name, [](const Point &, const T &, const T &v) -> T { return (v - 1) * (v - 1) / 2; },
        [](const Point &, const T &, const T &) -> T { return T(0); },
        [](const Point &, const T &, const T &v) -> T { return v - 1; });
  if (name == "quartic")
    return make<T>(
        name, [](const Point &, const T &u, const T &v) -> T { return v * v * v * v / 4 + u * u / 2; },
        [](const Point &, const T &u, const T &) -> T { return u; },
        [](const Point &, const T &, const T &v) -> T { return v * v * v; });
  throw ParseError("unknown builtin Lagrangian '" + name + "'");
}

double check_partials(const Lagrangian<double> &L, const Grid &window, unsigned long seed, int samples) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::size_t> pick(0, window.count() - 1);
  std::uniform_real_distribution<double> val(-2.0, 2.0);
  const double h = 1e-5;
  double worst = 0.0;
  for (int i = 0; i < samples; ++i) {
    const Point t = window.point(pick(rng));
    const double u = val(rng), v = val(rng);
    const double fu = (L.eval(t, u + h, v) - L.eval(t, u - h, v)) / (2 * h);
    const double fv = (L.eval(t, u, v + h) - L.eval(t, u, v - h)) / (2 * h);
    const double du = L.d_u(t, u, v), dv = L.d_v(t, u, v);
    worst = std::max({worst, std::fabs(fu - du) / (1 + std::fabs(du)), std::fabs(fv - dv) / (1 + std::fabs(dv))});
  }
  return worst;
}

template <typename T> void validate(const VariationalProblem<T> &p) {
  if (!(p.alpha > 0 && p.alpha < 1))
    throw DomainError("variational problems need 0 < alpha < 1, got " + format_rational(p.alpha));
  if (p.window.count() < 5)
    throw DomainError("variational problems need b - a >= 4");
  const auto kind = p.boundary.kind;
  if (p.variant == Variant::mm && kind == BoundaryKind::fixed)
    throw DomainError("mm takes natural or rl boundary conditions");
  if (p.variant == Variant::mmm && kind == BoundaryKind::rl)
    throw DomainError("mmm takes fixed or natural boundary conditions");
  if (!p.lagrangian.eval || !p.lagrangian.d_u || !p.lagrangian.d_v)
    throw DomainError("Lagrangian is missing eval or a partial derivative");
}

template <typename T> Grid el_grid(const VariationalProblem<T> &p) {
  validate(p);
  return Grid::between(p.variant == Variant::mm ? p.a() + 1 : p.a() + 2, p.b() - 1);
}

template <typename T> Grid free_grid(const VariationalProblem<T> &p) {
  validate(p);
  if (p.variant == Variant::mm)
    return Grid::between(p.a() + 1, p.b() - 1);
  if (p.boundary.kind == BoundaryKind::fixed)
    return Grid::between(p.a() + 2, p.b() - 1);
  return Grid::between(p.a() + 1, p.b());
}

template <typename T> T functional_value(const VariationalProblem<T> &p, const GridFunction<T> &f) {
  validate(p);
  require_window(p, f);
  const auto v = apply(v_operator(p), f);
  T J = T(0);
  const Grid g = sum_grid(p);
  for (std::size_t i = 0; i < g.count(); ++i) {
    const Point t = g.point(i);
    J += p.lagrangian.eval(t, f.at(u_point(p, t)), v.at(t));
  }
  return J;
}

template <typename T> Partials<T> partials(const VariationalProblem<T> &p, const GridFunction<T> &f) {
  validate(p);
  require_window(p, f);
  const auto v = apply(v_operator(p), f);
  const Grid g = sum_grid(p);
  std::vector<T> l1, l2;
  for (std::size_t i = 0; i < g.count(); ++i) {
    const Point t = g.point(i);
    const T &u = f.at(u_point(p, t));
    l1.push_back(p.lagrangian.d_u(t, u, v.at(t)));
    l2.push_back(p.lagrangian.d_v(t, u, v.at(t)));
  }
  return {GridFunction<T>(g, std::move(l1)), GridFunction<T>(g, std::move(l2))};
}

template <typename T> GridFunction<T> el_residual(const VariationalProblem<T> &p, const GridFunction<T> &f) {
  const auto P = partials(p, f);
  const auto dl2 = apply(left_rl(p), zero_extend(P.L2, p.window));
  const Grid g = el_grid(p);
  return GridFunction<T>::sample(g, [&](const Point &s) -> T {
    const Point s1 = p.variant == Variant::mm ? s : Point(s - 1);
    return P.L1.at(s1) + dl2.at(s);
  });
}

template <typename T>
GridFunction<T> el_residual_literal(const VariationalProblem<T> &p, const GridFunction<T> &f) {
  const auto P = partials(p, f);
  const auto ext = zero_extend(P.L2, p.window);
  const Grid g = el_grid(p);
  if (p.variant == Variant::mm) {
    // L_2^sigma on [a, b], zero past b
    const auto shifted = GridFunction<T>::sample(p.window, [&](const Point &t) -> T {
      return t + 1 <= p.b() ? ext.at(t + 1) : T(0);
    });
    const auto c = apply(OperatorSpec::caputo(D::nabla, S::left, p.alpha, p.a()), shifted);
    return GridFunction<T>::sample(g, [&](const Point &s) -> T { return P.L1.at(s) + c.at(s + 1); });
  }
  const auto dl2 = apply(left_rl(p), ext);
  return GridFunction<T>::sample(g, [&](const Point &s) -> T { return P.L1.at(s) + dl2.at(s + 1); });
}

template <typename T>
T first_variation(const VariationalProblem<T> &p, const GridFunction<T> &f, const GridFunction<T> &eta) {
  const auto P = partials(p, f);
  require_window(p, eta);
  if (p.boundary.kind == BoundaryKind::fixed && (eta.at(p.a() + 1) != 0 || eta.at(p.b()) != 0))
    throw DomainError("variation must vanish at a+1 and b for fixed boundary values");
  if (p.boundary.kind == BoundaryKind::rl) {
    const auto row = rl_boundary_row(p);
    T h = T(0);
    T scale = T(1);
    for (std::size_t j = 0; j < row.size(); ++j) {
      h += row[j] * eta[j];
      scale = std::max(scale, scalar_traits<T>::abs(eta[j]));
    }
    const bool ok = scalar_traits<T>::exact ? h == 0 : scalar_traits<T>::to_double(scalar_traits<T>::abs(h)) <=
                                                         1e-12 * scalar_traits<T>::to_double(scale);
    if (!ok)
      throw DomainError("variation must keep _b nabla^{-(1-alpha)} f(a+1) fixed");
  }
  const auto dv = apply(v_operator(p), eta);
  T acc = T(0);
  const Grid g = sum_grid(p);
  for (std::size_t i = 0; i < g.count(); ++i) {
    const Point t = g.point(i);
    acc += P.L1[i] * eta.at(u_point(p, t)) + P.L2[i] * dv.at(t);
  }
  return acc;
}

template <typename T>
std::pair<T, T> natural_boundary_values(const VariationalProblem<T> &p, const GridFunction<T> &f) {
  const auto P = partials(p, f);
  const auto s =
      apply(OperatorSpec::sum(D::nabla, S::left, 1 - p.alpha, p.a()), zero_extend(P.L2, p.window));
  return {s.at(p.a() + 1), s.at(p.b())};
}

template <typename T> GridFunction<T> constraint_gradient(const VariationalProblem<T> &p) {
  validate(p);
  const Grid rows = el_grid(p);
  auto out = GridFunction<T>::constant(rows, T(0));
  if (p.boundary.kind != BoundaryKind::rl)
    return out;
  const auto row = rl_boundary_row(p);
  for (std::size_t i = 0; i < rows.count(); ++i)
    out[i] = row[p.window.index_of(rows.point(i))];
  return out;
}

template <typename T> QuadraticSolution<T> solve_quadratic(const VariationalProblem<T> &p) {
  validate(p);
  if (!p.lagrangian.quadratic_g)
    throw DomainError("solve_quadratic needs L = v^2/2 + u g(t)");
  if (p.variant == Variant::mmm && p.boundary.kind == BoundaryKind::natural)
    throw DomainError("mmm with natural boundary has no unique minimizer: J(f + c) = J(f) + c * sum g");
  const auto &g = p.lagrangian.quadratic_g;
  const Grid &w = p.window;

  // EL operator f -> nabla_a^alpha (zero-extended V f), V the difference in L.
  const auto V = operator_matrix<T>(v_operator(p), w);
  OperatorMatrix<T> EV(w, w);
  const Grid inner = sum_grid(p);
  for (std::size_t i = 0; i < inner.count(); ++i) {
    const std::size_t src = V.output_grid().index_of(inner.point(i));
    const std::size_t dst = w.index_of(inner.point(i));
    for (std::size_t j = 0; j < w.count(); ++j)
      EV(dst, j) = V(src, j);
  }
  const auto A = compose(operator_matrix<T>(left_rl(p), w), EV);

  const Grid rows = el_grid(p);
  const Grid unknowns = free_grid(p);
  const bool rl = p.boundary.kind == BoundaryKind::rl;
  const std::size_t n = unknowns.count();
  const std::size_t size = n + (rl ? 1 : 0);

  std::vector<std::pair<Point, T>> known;
  if (p.boundary.kind == BoundaryKind::fixed) {
    known.emplace_back(p.a() + 1, from_q<T>(p.boundary.C));
    known.emplace_back(p.b(), from_q<T>(p.boundary.D));
  }

  DenseMatrix<T> M(size, size);
  std::vector<T> rhs(size, T(0));
  for (std::size_t i = 0; i < rows.count(); ++i) {
    const Point s = rows.point(i);
    const std::size_t r = A.output_grid().index_of(s);
    for (std::size_t j = 0; j < n; ++j)
      M(i, j) = A(r, w.index_of(unknowns.point(j)));
    rhs[i] = -g(p.variant == Variant::mm ? s : Point(s - 1));
    for (const auto &[pt, val] : known)
      rhs[i] -= A(r, w.index_of(pt)) * val;
  }
  if (rl) {
    const auto row = rl_boundary_row(p);
    for (std::size_t j = 0; j < n; ++j) {
      const T &h = row[w.index_of(unknowns.point(j))];
      M(n, j) = h;
      M(j, n) = h;
    }
    rhs[n] = from_q<T>(p.boundary.B);
  }

  std::vector<T> x;
  try {
    x = solve_linear(M, rhs);
  } catch (const SingularSystem &e) {
    throw SingularSystem(std::string(e.what()) + " (" + describe(p.alpha, w) + ")");
  }

  auto f = GridFunction<T>::constant(w, T(0));
  for (std::size_t j = 0; j < n; ++j)
    f.at(unknowns.point(j)) = x[j];
  for (const auto &[pt, val] : known)
    f.at(pt) = val;
  QuadraticSolution<T> sol{f, unknowns, std::move(M), std::move(rhs), std::nullopt};
  if (rl)
    sol.multiplier = x[n];
  return sol;
}

DescentResult brute_force_minimize(const VariationalProblem<double> &p, const GridFunction<double> &initial,
                                   const DescentOptions &options) {
  validate(p);
  require_window(p, initial);
  if (p.boundary.kind == BoundaryKind::rl)
    throw DomainError("descent oracle handles natural and fixed boundaries only");
  if (p.window.count() > 12)
    throw DomainError("descent oracle is limited to windows of at most 12 points");
  DescentResult res{initial, 0, 0.0, {}};
  auto &f = res.f;
  if (p.boundary.kind == BoundaryKind::fixed) {
    f.at(p.a() + 1) = p.boundary.C.get_d();
    f.at(p.b()) = p.boundary.D.get_d();
  }
  const Grid free = free_grid(p);
  auto gradient = [&](const GridFunction<double> &x) {
    std::vector<double> grad(free.count());
    auto eta = GridFunction<double>::constant(p.window, 0.0);
    for (std::size_t k = 0; k < free.count(); ++k) {
      eta.at(free.point(k)) = 1.0;
      grad[k] = first_variation(p, x, eta);
      eta.at(free.point(k)) = 0.0;
    }
    return grad;
  };

  double J = functional_value(p, f);
  res.history.push_back(J);
  auto eta = GridFunction<double>::constant(p.window, 0.0);
  for (;;) {
    const auto grad = gradient(f);
    double gmax = 0.0;
    for (double d : grad)
      gmax = std::max(gmax, std::fabs(d));
    res.gradient_norm = gmax;
    if (gmax <= options.gradient_tol)
      return res;
    if (res.iterations >= options.max_iters)
      throw NonConvergence("descent did not converge after " + std::to_string(res.iterations) +
                               " sweeps, gradient norm " + format_double(gmax),
                           gmax);
    // One sweep of coordinate steps, each with Armijo backtracking from 1.
    for (std::size_t k = 0; k < free.count(); ++k) {
      const Point t = free.point(k);
      eta.at(t) = 1.0;
      const double d = first_variation(p, f, eta);
      eta.at(t) = 0.0;
      if (d == 0.0)
        continue;
      for (double step = 1.0; step >= 1e-30; step /= 2) {
        auto trial = f;
        trial.at(t) -= step * d;
        const double Jt = functional_value(p, trial);
        if (Jt <= J - options.armijo * step * d * d) {
          f = std::move(trial);
          J = Jt;
          break;
        }
      }
    }
    res.history.push_back(J);
    ++res.iterations;
  }
}

template <typename T> VariationalProblem<T> parse_problem(const nlohmann::json &j) {
  try {
    VariationalProblem<T> p;
    const std::string variant = j.at("variant").get<std::string>();
    if (variant == "mm")
      p.variant = Variant::mm;
    else if (variant == "mmm")
      p.variant = Variant::mmm;
    else
      throw ParseError("variant must be \"mm\" or \"mmm\", got \"" + variant + "\"");
    p.alpha = rational_field(j.at("alpha"), "alpha");
    p.window = Grid::between(rational_field(j.at("a"), "a"), rational_field(j.at("b"), "b"));

    const auto &lj = j.at("lagrangian");
    const std::string form = lj.at("form").get<std::string>();
    if (form == "quadratic") {
      const auto &gj = lj.at("g");
      if (!gj.is_array() || gj.size() != p.window.count())
        throw ParseError("g must list one value per window point (" + std::to_string(p.window.count()) + ")");
      std::vector<T> gv;
      for (const auto &e : gj)
        gv.push_back(from_q<T>(rational_field(e, "g")));
      const GridFunction<T> g(p.window, std::move(gv));
      p.lagrangian = quadratic_lagrangian<T>([g](const Point &t) { return g.at(t); });
    } else if (form == "builtin") {
      p.lagrangian = builtin_lagrangian<T>(lj.at("name").get<std::string>());
    } else {
      throw ParseError("lagrangian form must be \"quadratic\" or \"builtin\"");
    }

    if (j.contains("boundary")) {
      const auto &bj = j.at("boundary");
      const std::string kind = bj.value("kind", std::string("natural"));
      if (kind == "natural")
        p.boundary.kind = BoundaryKind::natural;
      else if (kind == "fixed")
        p.boundary.kind = BoundaryKind::fixed;
      else if (kind == "rl")
        p.boundary.kind = BoundaryKind::rl;
      else
        throw ParseError("boundary kind must be natural, fixed or rl");
      if (bj.contains("C"))
        p.boundary.C = rational_field(bj.at("C"), "C");
      if (bj.contains("D"))
        p.boundary.D = rational_field(bj.at("D"), "D");
      if (bj.contains("B"))
        p.boundary.B = rational_field(bj.at("B"), "B");
    }
    validate(p);
    if constexpr (std::is_same_v<T, double>) {
      if (check_partials(p.lagrangian, p.window, 1) > 1e-6)
        throw DomainError("Lagrangian partials disagree with finite differences");
    }
    return p;
  } catch (const nlohmann::json::exception &e) {
    throw ParseError(std::string("problem JSON: ") + e.what());
  }
}

#define DFC_INSTANTIATE(T)                                                                                   \
  template Lagrangian<T> quadratic_lagrangian(std::function<T(const Point &)>);                              \
  template Lagrangian<T> builtin_lagrangian(const std::string &);                                            \
  template void validate(const VariationalProblem<T> &);                                                     \
  template Grid el_grid(const VariationalProblem<T> &);                                                      \
  template Grid free_grid(const VariationalProblem<T> &);                                                    \
  template T functional_value(const VariationalProblem<T> &, const GridFunction<T> &);                       \
  template Partials<T> partials(const VariationalProblem<T> &, const GridFunction<T> &);                     \
  template GridFunction<T> el_residual(const VariationalProblem<T> &, const GridFunction<T> &);              \
  template GridFunction<T> el_residual_literal(const VariationalProblem<T> &, const GridFunction<T> &);      \
  template T first_variation(const VariationalProblem<T> &, const GridFunction<T> &, const GridFunction<T> &); \
  template std::pair<T, T> natural_boundary_values(const VariationalProblem<T> &, const GridFunction<T> &);  \
  template GridFunction<T> constraint_gradient(const VariationalProblem<T> &);                              \
  template QuadraticSolution<T> solve_quadratic(const VariationalProblem<T> &);                              \
  template VariationalProblem<T> parse_problem(const nlohmann::json &);

DFC_INSTANTIATE(mpq_class)
DFC_INSTANTIATE(double)

#undef DFC_INSTANTIATE

} // namespace dfc
