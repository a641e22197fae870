#ifndef DFC_GRID_HPP
#define DFC_GRID_HPP

#include "dfc/scalar.hpp"

#include <cstddef>
#include <functional>
#include <iosfwd>
#include <optional>
#include <vector>

namespace dfc {

/// base, base+1, ..., base+count-1. The base may be any rational, which is
/// how the alpha-shifted domains N_{a+alpha} are represented.
class Grid {
public:
  Grid(Point base, std::size_t count);
  // Inclusive integer-aligned range [first, last].
  static Grid between(const Point &first, const Point &last);

  const Point &base() const { return base_; }
  std::size_t count() const { return count_; }
  Point top() const { return base_ + static_cast<long>(count_) - 1; }
  Point point(std::size_t i) const { return base_ + static_cast<long>(i); }

  bool aligned_with(const Point &p) const;
  bool aligned_with(const Grid &other) const { return aligned_with(other.base_); }
  bool contains(const Point &p) const;
  // Throws DomainError when p is not a grid point.
  std::size_t index_of(const Point &p) const;

  // Empty optional when the grids do not overlap; throws if misaligned.
  std::optional<Grid> intersect(const Grid &other) const;
  Grid shifted(const Point &delta) const { return Grid(base_ + delta, count_); }

  friend bool operator==(const Grid &x, const Grid &y) {
    return x.base_ == y.base_ && x.count_ == y.count_;
  }

private:
  Point base_;
  std::size_t count_;
};

template <typename T> class GridFunction {
public:
  using value_type = T;

  GridFunction(Grid grid, std::vector<T> values);
  static GridFunction sample(const Grid &grid, const std::function<T(const Point &)> &fn);
  static GridFunction constant(const Grid &grid, const T &c);

  const Grid &grid() const { return grid_; }
  const std::vector<T> &values() const { return values_; }
  std::vector<T> &values() { return values_; }
  std::size_t size() const { return values_.size(); }

  const T &operator[](std::size_t i) const { return values_[i]; }
  T &operator[](std::size_t i) { return values_[i]; }
  const T &at(const Point &p) const { return values_[grid_.index_of(p)]; }
  T &at(const Point &p) { return values_[grid_.index_of(p)]; }

  friend bool operator==(const GridFunction &x, const GridFunction &y) {
    return x.grid_ == y.grid_ && x.values_ == y.values_;
  }

private:
  Grid grid_;
  std::vector<T> values_;
};

// f*(t) = f(-t), on [-top, -base].
template <typename T> GridFunction<T> symmetric_dual(const GridFunction<T> &f);

// Qf(t) = f(a + b - t) on the same grid.
template <typename T> GridFunction<T> q_reflect(const GridFunction<T> &f);

template <typename T> GridFunction<T> restrict(const GridFunction<T> &f, const Grid &sub);

// g(t + delta) = f(t).
template <typename T> GridFunction<T> shift(const GridFunction<T> &f, const Point &delta);

// Pointwise linear combination on identical grids.
template <typename T>
GridFunction<T> combine(const T &x, const GridFunction<T> &f, const T &y, const GridFunction<T> &g);

GridFunction<double> to_float(const GridFunction<mpq_class> &f);

// CSV with header "t,value"; t must step by exactly 1.
template <typename T> GridFunction<T> read_csv(std::istream &in);
template <typename T> void write_csv(std::ostream &out, const GridFunction<T> &f);

template <typename T> GridFunction<T> read_csv_file(const std::string &path);
template <typename T> void write_csv_file(const std::string &path, const GridFunction<T> &f);

} // namespace dfc

#endif
