#ifndef DFC_OPERATORS_HPP
#define DFC_OPERATORS_HPP

#include "dfc/grid.hpp"
#include "dfc/kernels.hpp"

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace dfc {

enum class Direction { delta, nabla };
enum class Side { left, right };
enum class Flavor { sum, riemann_liouville, caputo, integer };

/// One operator with its anchor. For sums and RL differences the anchor is a
/// (left) or b (right). For Caputo differences it is the anchor of the inner
/// sum, i.e. the subscript in ^C nabla_{a(alpha)}; use caputo_anchor() to get
/// a(alpha) = a+n-1 or b(alpha) = b-n+1 from a window endpoint.
struct OperatorSpec {
  Direction direction = Direction::nabla;
  Side side = Side::left;
  Flavor flavor = Flavor::sum;
  mpq_class order;  // alpha, or p for Flavor::integer
  Point anchor;     // unused for Flavor::integer
  bool negated = false; // integer flavor: multiply by (-1)^p

  static OperatorSpec sum(Direction d, Side s, mpq_class alpha, Point anchor);
  static OperatorSpec rl(Direction d, Side s, mpq_class alpha, Point anchor);
  static OperatorSpec caputo(Direction d, Side s, mpq_class alpha, Point anchor);
  static OperatorSpec integer(Direction d, int p, bool negated = false);

  // n = [alpha] + 1 (or p).
  int n() const;
};

// "{delta|nabla}-{left|right}-{sum|rl|caputo}"
std::string operator_name(const OperatorSpec &spec);
OperatorSpec parse_operator(std::string_view name, const mpq_class &alpha, const Point &anchor);

Point caputo_anchor(Side side, const Point &endpoint, const mpq_class &alpha);

// Exact output window of spec applied to a function on `input`. Throws
// DomainError when the input cannot support a single output point.
Grid output_grid(const OperatorSpec &spec, const Grid &input);

// Sums. Order zero is the identity on the output window.
template <typename T> GridFunction<T> frac_sum(const OperatorSpec &spec, const GridFunction<T> &f);

// Delta^p drops the top p points, nabla^p the bottom p.
template <typename T>
GridFunction<T> int_diff(Direction direction, bool negated, int p, const GridFunction<T> &f);

template <typename T>
GridFunction<T> frac_diff_rl(const OperatorSpec &spec, const GridFunction<T> &f);
template <typename T>
GridFunction<T> frac_diff_caputo(const OperatorSpec &spec, const GridFunction<T> &f);

// Dispatch on spec.flavor.
template <typename T> GridFunction<T> apply(const OperatorSpec &spec, const GridFunction<T> &f);

// Nabla sum with the extended kernel c_m(nu) for any real nu (negative
// orders included). nu = 0 gives the empty-sum 0 at the anchor, not f.
template <typename T>
GridFunction<T> nabla_sum_any_order(Side side, const mpq_class &nu, const Point &anchor,
                                    const GridFunction<T> &f);

/// Dense matrix of a linear operator, rows indexed by output points.
template <typename T> class OperatorMatrix {
public:
  OperatorMatrix(Grid input, Grid output);

  const Grid &input_grid() const { return input_; }
  const Grid &output_grid() const { return output_; }
  std::size_t rows() const { return output_.count(); }
  std::size_t cols() const { return input_.count(); }

  T &operator()(std::size_t r, std::size_t c) { return entries_[r * cols() + c]; }
  const T &operator()(std::size_t r, std::size_t c) const { return entries_[r * cols() + c]; }

  GridFunction<T> apply(const GridFunction<T> &f) const;

private:
  Grid input_;
  Grid output_;
  std::vector<T> entries_;
};

template <typename T> OperatorMatrix<T> operator_matrix(const OperatorSpec &spec, const Grid &input);

// outer after inner; requires outer.input_grid() == inner.output_grid().
template <typename T>
OperatorMatrix<T> compose(const OperatorMatrix<T> &outer, const OperatorMatrix<T> &inner);

// First row "t,<input points>", then one row per output point.
template <typename T> void write_matrix_csv(std::ostream &out, const OperatorMatrix<T> &m);

} // namespace dfc

#endif
