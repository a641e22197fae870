#ifndef DFC_VARIATIONAL_HPP
#define DFC_VARIATIONAL_HPP

#include "dfc/linalg.hpp"
#include "dfc/operators.hpp"

#include <json.hpp>

#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace dfc {

// mm:  J = sum_{t=a+1}^{b-1} L(t, f(t), _b nabla^alpha f(t))
// mmm: J = sum_{t=a+1}^{b-1} L(t, f(t+1), ^C_b nabla^alpha f(t))
enum class Variant { mm, mmm };

// natural: nothing imposed. fixed: f(a+1) = C, f(b) = D (mmm).
// rl: _b nabla^{-(1-alpha)} f(a+1) = B (mm).
enum class BoundaryKind { natural, fixed, rl };

struct Boundary {
  BoundaryKind kind = BoundaryKind::natural;
  mpq_class C = 0, D = 0, B = 0;
};

class NonConvergence : public std::runtime_error {
public:
  NonConvergence(const std::string &what, double gradient_norm)
      : std::runtime_error(what), gradient_norm(gradient_norm) {}
  double gradient_norm;
};

template <typename T> struct Lagrangian {
  using Fn = std::function<T(const Point &t, const T &u, const T &v)>;
  std::string name;
  Fn eval, d_u, d_v;
  // Set when L = v^2/2 + u g(t).
  std::function<T(const Point &)> quadratic_g;
};

template <typename T> Lagrangian<T> quadratic_lagrangian(std::function<T(const Point &)> g);
// half_v2 (v^2/2), linear_u (u), half_v_minus_1_sq ((v-1)^2/2), quartic (v^4/4 + u^2/2)
template <typename T> Lagrangian<T> builtin_lagrangian(const std::string &name);
const std::vector<std::string> &builtin_lagrangian_names();

// Largest central-difference mismatch of d_u, d_v at random (t, u, v).
double check_partials(const Lagrangian<double> &L, const Grid &window, unsigned long seed, int samples = 64);

template <typename T> struct VariationalProblem {
  Variant variant = Variant::mm;
  mpq_class alpha;
  Grid window{Point(0), 5};
  Lagrangian<T> lagrangian;
  Boundary boundary{};

  Point a() const { return window.base(); }
  Point b() const { return window.top(); }
};

// Throws DomainError on alpha outside (0,1), b - a < 4, or a boundary kind the
// variant does not have.
template <typename T> void validate(const VariationalProblem<T> &p);

// mm: [a+1, b-1]; mmm: [a+2, b-1]
template <typename T> Grid el_grid(const VariationalProblem<T> &p);
// Values of f that J depends on and the boundary leaves free.
template <typename T> Grid free_grid(const VariationalProblem<T> &p);

template <typename T> T functional_value(const VariationalProblem<T> &p, const GridFunction<T> &f);

// L_1, L_2 on [a+1, b-1].
template <typename T> struct Partials {
  GridFunction<T> L1, L2;
};
template <typename T> Partials<T> partials(const VariationalProblem<T> &p, const GridFunction<T> &f);

// Stationarity residual with L_2 zero-extended to [a, b]:
//   mm:  L_1(s) + (nabla_a^alpha L_2)(s),            s in [a+1, b-1]
//   mmm: L_1(s-1) + (nabla_a^alpha L_2)(s),          s in [a+2, b-1]
template <typename T> GridFunction<T> el_residual(const VariationalProblem<T> &p, const GridFunction<T> &f);

// The displayed equations, same grids:
//   mm:  L_1(s) + (^C nabla_a^alpha L_2^sigma)(s+1)
//   mmm: L_1(s) + (nabla_a^alpha L_2)(s+1)
template <typename T>
GridFunction<T> el_residual_literal(const VariationalProblem<T> &p, const GridFunction<T> &f);

// d/de J(f + e eta) at e = 0 through the operator's linearity.
template <typename T>
T first_variation(const VariationalProblem<T> &p, const GridFunction<T> &f, const GridFunction<T> &eta);

// mmm: (nabla_a^{-(1-alpha)} L_2)(a+1) and (b).
template <typename T>
std::pair<T, T> natural_boundary_values(const VariationalProblem<T> &p, const GridFunction<T> &f);

template <typename T> struct QuadraticSolution {
  GridFunction<T> f;          // points J ignores are 0
  Grid unknowns;              // free_grid(p)
  DenseMatrix<T> system;      // EL rows (plus constraint row for rl)
  std::vector<T> rhs;
  std::optional<T> multiplier; // rl: gradient + mu * constraint = 0
};

// rl: d/df(s) of the constraint, s over el_grid(p). Zero for other boundaries.
template <typename T> GridFunction<T> constraint_gradient(const VariationalProblem<T> &p);

// L must be quadratic. Throws SingularSystem with alpha and window in the message.
template <typename T> QuadraticSolution<T> solve_quadratic(const VariationalProblem<T> &p);

struct DescentOptions {
  int max_iters = 10000; // sweeps
  double gradient_tol = 1e-8; // max |dJ/df(k)| over free k; Armijo on J stalls far below this
  double armijo = 1e-4;
};

struct DescentResult {
  GridFunction<double> f;
  int iterations = 0;
  double gradient_norm = 0.0;
  std::vector<double> history; // J after each sweep
};

// Coordinate descent with backtracking on the free values; natural and fixed
// boundaries only. Throws NonConvergence after max_iters.
DescentResult brute_force_minimize(const VariationalProblem<double> &p, const GridFunction<double> &initial,
                                   const DescentOptions &options = {});

// {variant, alpha, a, b, lagrangian: {form: quadratic, g} | {form: builtin, name},
//  boundary: {kind, C, D, B}}
template <typename T> VariationalProblem<T> parse_problem(const nlohmann::json &j);

} // namespace dfc

#endif
