#include "dfc/operators.hpp"

#include <algorithm>
#include <ostream>

namespace dfc {

namespace {

void require(bool ok, const std::string &msg) {
  if (!ok)
    throw DomainError(msg);
}

std::string window(const Grid &g) {
  return "[" + format_rational(g.base()) + ", " + format_rational(g.top()) + "]";
}

std::size_t offset(const Point &from, const Point &to) {
  const long d = integer_offset(from, to);
  require(d >= 0, "negative offset");
  return static_cast<std::size_t>(d);
}

template <typename T> T binomial_signed(int p, int j, bool negative) {
  mpz_class b;
  mpz_bin_uiui(b.get_mpz_t(), static_cast<unsigned long>(p), static_cast<unsigned long>(j));
  mpq_class q(b);
  if (negative)
    q = -q;
  return scalar_traits<T>::from_rational(q);
}

// Integer difference paired with each fractional operator: Delta^n,
// nabla_(-)^n = (-1)^n nabla^n, nabla^n, _(-)Delta^n = (-1)^n Delta^n.
struct DiffKind {
  Direction direction;
  bool negated;
};

DiffKind diff_kind(Direction d, Side s) {
  if (d == Direction::delta)
    return s == Side::left ? DiffKind{Direction::delta, false} : DiffKind{Direction::nabla, true};
  return s == Side::left ? DiffKind{Direction::nabla, false} : DiffKind{Direction::delta, true};
}

Grid sum_output(Direction d, Side s, const mpq_class &nu, const Point &anchor, const Grid &in) {
  require(in.aligned_with(anchor), "anchor " + format_rational(anchor) +
                                       " not aligned with input grid " + window(in));
  if (d == Direction::nabla && s == Side::left) {
    require(in.base() <= anchor + 1, "nabla left sum at " + format_rational(anchor) +
                                         " needs input from a+1, got " + window(in));
    const Point lo = std::max(anchor, in.base());
    require(in.top() >= lo, "input " + window(in) + " ends before the anchor");
    return Grid::between(lo, in.top());
  }
  if (d == Direction::nabla) {
    require(in.top() >= anchor - 1, "nabla right sum at " + format_rational(anchor) +
                                        " needs input up to b-1, got " + window(in));
    const Point hi = std::min(anchor, in.top());
    require(in.base() <= hi, "input " + window(in) + " starts after the anchor");
    return Grid::between(in.base(), hi);
  }
  require(in.contains(anchor), "delta sum anchor " + format_rational(anchor) +
                                   " outside input " + window(in));
  if (s == Side::left)
    return Grid(anchor + nu, offset(anchor, in.top()) + 1);
  const std::size_t k = offset(in.base(), anchor);
  return Grid(anchor - nu - static_cast<long>(k), k + 1);
}

Grid diff_output(Direction d, int p, const Grid &in) {
  require(p >= 0, "integer difference order must be nonnegative");
  require(in.count() > static_cast<std::size_t>(p),
          "grid " + window(in) + " too small for a difference of order " + std::to_string(p));
  const std::size_t c = in.count() - static_cast<std::size_t>(p);
  return d == Direction::delta ? Grid(in.base(), c) : Grid(in.base() + p, c);
}

// Calls visit(row, col, coefficient) for every kernel term of the sum.
template <typename T, typename Visit>
void sum_terms(Direction d, Side s, const mpq_class &nu, const Point &anchor, const Grid &in,
               const Grid &out, bool identity_at_zero, Visit &&visit) {
  if (identity_at_zero && nu == 0) {
    for (std::size_t i = 0; i < out.count(); ++i)
      visit(i, in.index_of(out.point(i)), T(1));
    return;
  }
  const auto c = kernel_coefficients<T>(nu, in.count());
  if (d == Direction::nabla && s == Side::left) {
    // sum_{s=a+1}^{t} c_{t-s} f(s)
    const long first = integer_offset(in.base(), anchor + 1);
    for (std::size_t i = 0; i < out.count(); ++i) {
      const long it = static_cast<long>(in.index_of(out.point(i)));
      for (long j = first; j <= it; ++j)
        visit(i, static_cast<std::size_t>(j), c[static_cast<std::size_t>(it - j)]);
    }
  } else if (d == Direction::nabla) {
    // sum_{s=t}^{b-1} c_{s-t} f(s)
    const long last = integer_offset(in.base(), anchor - 1);
    for (std::size_t i = 0; i < out.count(); ++i) {
      const long it = static_cast<long>(in.index_of(out.point(i)));
      for (long j = it; j <= last; ++j)
        visit(i, static_cast<std::size_t>(j), c[static_cast<std::size_t>(j - it)]);
    }
  } else if (s == Side::left) {
    // at a+nu+k: sum_{j=0}^{k} c_{k-j} f(a+j)
    const std::size_t ia = offset(in.base(), anchor);
    for (std::size_t k = 0; k < out.count(); ++k)
      for (std::size_t j = 0; j <= k; ++j)
        visit(k, ia + j, c[k - j]);
  } else {
    // at b-nu-k: sum_{m=0}^{k} c_{k-m} f(b-m); output row i holds k = K - i
    const std::size_t ib = offset(in.base(), anchor);
    const std::size_t kmax = out.count() - 1;
    for (std::size_t i = 0; i < out.count(); ++i) {
      const std::size_t k = kmax - i;
      for (std::size_t m = 0; m <= k; ++m)
        visit(i, ib - m, c[k - m]);
    }
  }
}

template <typename T>
GridFunction<T> sum_impl(Direction d, Side s, const mpq_class &nu, const Point &anchor,
                         const GridFunction<T> &f, bool identity_at_zero) {
  const Grid out = sum_output(d, s, nu, anchor, f.grid());
  std::vector<T> v(out.count(), T(0));
  sum_terms<T>(d, s, nu, anchor, f.grid(), out, identity_at_zero,
               [&](std::size_t r, std::size_t col, const T &w) { v[r] += w * f[col]; });
  return GridFunction<T>(out, std::move(v));
}

template <typename T>
OperatorMatrix<T> sum_matrix(Direction d, Side s, const mpq_class &nu, const Point &anchor,
                             const Grid &in) {
  OperatorMatrix<T> m(in, sum_output(d, s, nu, anchor, in));
  sum_terms<T>(d, s, nu, anchor, in, m.output_grid(), true,
               [&](std::size_t r, std::size_t col, const T &w) { m(r, col) += w; });
  return m;
}

template <typename T> OperatorMatrix<T> diff_matrix(Direction d, bool negated, int p, const Grid &in) {
  OperatorMatrix<T> m(in, diff_output(d, p, in));
  const bool flip = negated && (p % 2 != 0);
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (int j = 0; j <= p; ++j) {
      if (d == Direction::delta)
        m(i, i + static_cast<std::size_t>(j)) = binomial_signed<T>(p, j, ((p - j) % 2 != 0) != flip);
      else
        m(i, i + static_cast<std::size_t>(p - j)) = binomial_signed<T>(p, j, (j % 2 != 0) != flip);
    }
  return m;
}

void require_flavor(const OperatorSpec &spec, Flavor f, const char *what) {
  require(spec.flavor == f, std::string(what) + " called with a " + operator_name(spec) + " spec");
}

} // namespace

OperatorSpec OperatorSpec::sum(Direction d, Side s, mpq_class alpha, Point anchor) {
  require(alpha > 0, "fractional sum order must be positive, got " + format_rational(alpha));
  return OperatorSpec{d, s, Flavor::sum, std::move(alpha), std::move(anchor), false};
}

OperatorSpec OperatorSpec::rl(Direction d, Side s, mpq_class alpha, Point anchor) {
  FracOrder check(alpha);
  return OperatorSpec{d, s, Flavor::riemann_liouville, std::move(alpha), std::move(anchor), false};
}

OperatorSpec OperatorSpec::caputo(Direction d, Side s, mpq_class alpha, Point anchor) {
  FracOrder check(alpha);
  return OperatorSpec{d, s, Flavor::caputo, std::move(alpha), std::move(anchor), false};
}

OperatorSpec OperatorSpec::integer(Direction d, int p, bool negated) {
  require(p >= 0, "integer difference order must be nonnegative");
  return OperatorSpec{d, Side::left, Flavor::integer, mpq_class(p), Point(0), negated};
}

int OperatorSpec::n() const {
  if (flavor == Flavor::integer)
    return static_cast<int>(order.get_num().get_si());
  return FracOrder(order).n();
}

std::string operator_name(const OperatorSpec &spec) {
  std::string name = spec.direction == Direction::delta ? "delta" : "nabla";
  if (spec.flavor == Flavor::integer)
    return (spec.negated ? "signed-" : "") + name + "-" + format_rational(spec.order);
  name += spec.side == Side::left ? "-left" : "-right";
  switch (spec.flavor) {
  case Flavor::sum:
    return name + "-sum";
  case Flavor::riemann_liouville:
    return name + "-rl";
  default:
    return name + "-caputo";
  }
}

OperatorSpec parse_operator(std::string_view name, const mpq_class &alpha, const Point &anchor) {
  auto bad = [&]() {
    return ParseError("unknown operator '" + std::string(name) +
                      "', expected {delta|nabla}-{left|right}-{sum|rl|caputo}");
  };
  const auto d1 = name.find('-');
  const auto d2 = d1 == std::string_view::npos ? d1 : name.find('-', d1 + 1);
  if (d2 == std::string_view::npos)
    throw bad();
  const auto dir = name.substr(0, d1);
  const auto side = name.substr(d1 + 1, d2 - d1 - 1);
  const auto kind = name.substr(d2 + 1);
  Direction d;
  Side s;
  if (dir == "delta")
    d = Direction::delta;
  else if (dir == "nabla")
    d = Direction::nabla;
  else
    throw bad();
  if (side == "left")
    s = Side::left;
  else if (side == "right")
    s = Side::right;
  else
    throw bad();
  if (kind == "sum")
    return OperatorSpec::sum(d, s, alpha, anchor);
  if (kind == "rl")
    return OperatorSpec::rl(d, s, alpha, anchor);
  if (kind == "caputo")
    return OperatorSpec::caputo(d, s, alpha, anchor);
  throw bad();
}

Point caputo_anchor(Side side, const Point &endpoint, const mpq_class &alpha) {
  const int n = FracOrder(alpha).n();
  return side == Side::left ? Point(endpoint + n - 1) : Point(endpoint - n + 1);
}

Grid output_grid(const OperatorSpec &spec, const Grid &input) {
  switch (spec.flavor) {
  case Flavor::sum:
    return sum_output(spec.direction, spec.side, spec.order, spec.anchor, input);
  case Flavor::integer:
    return diff_output(spec.direction, spec.n(), input);
  case Flavor::riemann_liouville: {
    const FracOrder fo(spec.order);
    const auto k = diff_kind(spec.direction, spec.side);
    return diff_output(k.direction, fo.n(),
                       sum_output(spec.direction, spec.side, fo.complement(), spec.anchor, input));
  }
  case Flavor::caputo: {
    const FracOrder fo(spec.order);
    const auto k = diff_kind(spec.direction, spec.side);
    return sum_output(spec.direction, spec.side, fo.complement(), spec.anchor,
                      diff_output(k.direction, fo.n(), input));
  }
  }
  throw DomainError("unknown operator flavor");
}

template <typename T> GridFunction<T> frac_sum(const OperatorSpec &spec, const GridFunction<T> &f) {
  require_flavor(spec, Flavor::sum, "frac_sum");
  require(spec.order > 0, "fractional sum order must be positive");
  return sum_impl(spec.direction, spec.side, spec.order, spec.anchor, f, true);
}

template <typename T>
GridFunction<T> int_diff(Direction direction, bool negated, int p, const GridFunction<T> &f) {
  const Grid out = diff_output(direction, p, f.grid());
  const bool flip = negated && (p % 2 != 0);
  std::vector<T> v(out.count(), T(0));
  for (std::size_t i = 0; i < v.size(); ++i) {
    for (int j = 0; j <= p; ++j) {
      const auto uj = static_cast<std::size_t>(j);
      if (direction == Direction::delta) // sum_j (-1)^{p-j} C(p,j) f(t+j)
        v[i] += binomial_signed<T>(p, j, (p - j) % 2 != 0) * f[i + uj];
      else // sum_j (-1)^j C(p,j) f(t-j)
        v[i] += binomial_signed<T>(p, j, j % 2 != 0) * f[i + static_cast<std::size_t>(p) - uj];
    }
    if (flip)
      v[i] = -v[i];
  }
  return GridFunction<T>(out, std::move(v));
}

template <typename T>
GridFunction<T> frac_diff_rl(const OperatorSpec &spec, const GridFunction<T> &f) {
  require_flavor(spec, Flavor::riemann_liouville, "frac_diff_rl");
  const FracOrder fo(spec.order);
  const auto k = diff_kind(spec.direction, spec.side);
  const auto inner = sum_impl(spec.direction, spec.side, fo.complement(), spec.anchor, f, true);
  return int_diff(k.direction, k.negated, fo.n(), inner);
}

template <typename T>
GridFunction<T> frac_diff_caputo(const OperatorSpec &spec, const GridFunction<T> &f) {
  require_flavor(spec, Flavor::caputo, "frac_diff_caputo");
  const FracOrder fo(spec.order);
  const auto k = diff_kind(spec.direction, spec.side);
  const auto inner = int_diff(k.direction, k.negated, fo.n(), f);
  return sum_impl(spec.direction, spec.side, fo.complement(), spec.anchor, inner, true);
}

template <typename T> GridFunction<T> apply(const OperatorSpec &spec, const GridFunction<T> &f) {
  switch (spec.flavor) {
  case Flavor::sum:
    return frac_sum(spec, f);
  case Flavor::riemann_liouville:
    return frac_diff_rl(spec, f);
  case Flavor::caputo:
    return frac_diff_caputo(spec, f);
  case Flavor::integer:
    return int_diff(spec.direction, spec.negated, spec.n(), f);
  }
  throw DomainError("unknown operator flavor");
}

template <typename T>
GridFunction<T> nabla_sum_any_order(Side side, const mpq_class &nu, const Point &anchor,
                                    const GridFunction<T> &f) {
  return sum_impl(Direction::nabla, side, nu, anchor, f, false);
}

template <typename T>
OperatorMatrix<T>::OperatorMatrix(Grid input, Grid output)
    : input_(std::move(input)), output_(std::move(output)),
      entries_(input_.count() * output_.count(), T(0)) {}

template <typename T> GridFunction<T> OperatorMatrix<T>::apply(const GridFunction<T> &f) const {
  require(f.grid() == input_, "matrix input grid " + window(input_) + " does not match " +
                                  window(f.grid()));
  std::vector<T> v(rows(), T(0));
  for (std::size_t r = 0; r < rows(); ++r)
    for (std::size_t c = 0; c < cols(); ++c)
      v[r] += (*this)(r, c) * f[c];
  return GridFunction<T>(output_, std::move(v));
}

template <typename T> OperatorMatrix<T> operator_matrix(const OperatorSpec &spec, const Grid &input) {
  switch (spec.flavor) {
  case Flavor::sum:
    require(spec.order > 0, "fractional sum order must be positive");
    return sum_matrix<T>(spec.direction, spec.side, spec.order, spec.anchor, input);
  case Flavor::integer:
    return diff_matrix<T>(spec.direction, spec.negated, spec.n(), input);
  case Flavor::riemann_liouville: {
    const FracOrder fo(spec.order);
    const auto k = diff_kind(spec.direction, spec.side);
    const auto s = sum_matrix<T>(spec.direction, spec.side, fo.complement(), spec.anchor, input);
    return compose(diff_matrix<T>(k.direction, k.negated, fo.n(), s.output_grid()), s);
  }
  case Flavor::caputo: {
    const FracOrder fo(spec.order);
    const auto k = diff_kind(spec.direction, spec.side);
    const auto dm = diff_matrix<T>(k.direction, k.negated, fo.n(), input);
    return compose(
        sum_matrix<T>(spec.direction, spec.side, fo.complement(), spec.anchor, dm.output_grid()), dm);
  }
  }
  throw DomainError("unknown operator flavor");
}

template <typename T>
OperatorMatrix<T> compose(const OperatorMatrix<T> &outer, const OperatorMatrix<T> &inner) {
  require(outer.input_grid() == inner.output_grid(),
          "cannot compose: " + window(outer.input_grid()) + " vs " + window(inner.output_grid()));
  OperatorMatrix<T> m(inner.input_grid(), outer.output_grid());
  for (std::size_t r = 0; r < m.rows(); ++r)
    for (std::size_t k = 0; k < outer.cols(); ++k) {
      if (outer(r, k) == 0)
        continue;
      for (std::size_t c = 0; c < m.cols(); ++c)
        m(r, c) += outer(r, k) * inner(k, c);
    }
  return m;
}

template <typename T> void write_matrix_csv(std::ostream &out, const OperatorMatrix<T> &m) {
  out << 't';
  for (std::size_t c = 0; c < m.cols(); ++c)
    out << ',' << format_rational(m.input_grid().point(c));
  out << '\n';
  for (std::size_t r = 0; r < m.rows(); ++r) {
    out << format_rational(m.output_grid().point(r));
    for (std::size_t c = 0; c < m.cols(); ++c)
      out << ',' << scalar_traits<T>::to_string(m(r, c));
    out << '\n';
  }
}

#define DFC_OPERATORS_INSTANTIATE(T)                                                               \
  template GridFunction<T> frac_sum(const OperatorSpec &, const GridFunction<T> &);                \
  template GridFunction<T> int_diff(Direction, bool, int, const GridFunction<T> &);                \
  template GridFunction<T> frac_diff_rl(const OperatorSpec &, const GridFunction<T> &);            \
  template GridFunction<T> frac_diff_caputo(const OperatorSpec &, const GridFunction<T> &);        \
  template GridFunction<T> apply(const OperatorSpec &, const GridFunction<T> &);                   \
  template GridFunction<T> nabla_sum_any_order(Side, const mpq_class &, const Point &,             \
                                               const GridFunction<T> &);                           \
  template class OperatorMatrix<T>;                                                                \
  template OperatorMatrix<T> operator_matrix<T>(const OperatorSpec &, const Grid &);               \
  template OperatorMatrix<T> compose(const OperatorMatrix<T> &, const OperatorMatrix<T> &);        \
  template void write_matrix_csv(std::ostream &, const OperatorMatrix<T> &);

DFC_OPERATORS_INSTANTIATE(mpq_class)
DFC_OPERATORS_INSTANTIATE(double)

} // namespace dfc
