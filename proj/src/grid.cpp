#include "dfc/grid.hpp"

#include <algorithm>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

namespace dfc {

Grid::Grid(Point base, std::size_t count) : base_(std::move(base)), count_(count) {
  if (count_ == 0)
    throw DomainError("grid must have at least one point");
}

Grid Grid::between(const Point &first, const Point &last) {
  const long span = integer_offset(first, last);
  if (span < 0)
    throw DomainError("empty range [" + format_rational(first) + ", " + format_rational(last) + "]");
  return Grid(first, static_cast<std::size_t>(span) + 1);
}

bool Grid::aligned_with(const Point &p) const { return is_integer(p - base_); }

bool Grid::contains(const Point &p) const {
  return aligned_with(p) && p >= base_ && p <= top();
}

std::size_t Grid::index_of(const Point &p) const {
  if (!contains(p))
    throw DomainError("point " + format_rational(p) + " not on grid [" + format_rational(base_) +
                      ", " + format_rational(top()) + "]");
  return static_cast<std::size_t>(integer_offset(base_, p));
}

std::optional<Grid> Grid::intersect(const Grid &other) const {
  if (!aligned_with(other))
    throw DomainError("grids with bases " + format_rational(base_) + " and " +
                      format_rational(other.base_) + " are not aligned");
  const Point lo = std::max(base_, other.base_);
  const Point hi = std::min(top(), other.top());
  if (lo > hi)
    return std::nullopt;
  return Grid::between(lo, hi);
}

template <typename T>
GridFunction<T>::GridFunction(Grid grid, std::vector<T> values)
    : grid_(std::move(grid)), values_(std::move(values)) {
  if (values_.size() != grid_.count())
    throw DomainError("grid function has " + std::to_string(values_.size()) +
                      " values for " + std::to_string(grid_.count()) + " points");
}

template <typename T>
GridFunction<T> GridFunction<T>::sample(const Grid &grid, const std::function<T(const Point &)> &fn) {
  std::vector<T> v;
  v.reserve(grid.count());
  for (std::size_t i = 0; i < grid.count(); ++i)
    v.push_back(fn(grid.point(i)));
  return GridFunction(grid, std::move(v));
}

template <typename T> GridFunction<T> GridFunction<T>::constant(const Grid &grid, const T &c) {
  return GridFunction(grid, std::vector<T>(grid.count(), c));
}

template <typename T> GridFunction<T> symmetric_dual(const GridFunction<T> &f) {
  std::vector<T> v(f.values().rbegin(), f.values().rend());
  return GridFunction<T>(Grid(-f.grid().top(), f.grid().count()), std::move(v));
}

template <typename T> GridFunction<T> q_reflect(const GridFunction<T> &f) {
  std::vector<T> v(f.values().rbegin(), f.values().rend());
  return GridFunction<T>(f.grid(), std::move(v));
}

template <typename T> GridFunction<T> restrict(const GridFunction<T> &f, const Grid &sub) {
  if (!f.grid().contains(sub.base()) || !f.grid().contains(sub.top()))
    throw DomainError("restriction window [" + format_rational(sub.base()) + ", " +
                      format_rational(sub.top()) + "] outside grid [" +
                      format_rational(f.grid().base()) + ", " + format_rational(f.grid().top()) + "]");
  const std::size_t off = f.grid().index_of(sub.base());
  std::vector<T> v(f.values().begin() + static_cast<std::ptrdiff_t>(off),
                   f.values().begin() + static_cast<std::ptrdiff_t>(off + sub.count()));
  return GridFunction<T>(sub, std::move(v));
}

template <typename T> GridFunction<T> shift(const GridFunction<T> &f, const Point &delta) {
  return GridFunction<T>(f.grid().shifted(delta), f.values());
}

template <typename T>
GridFunction<T> combine(const T &x, const GridFunction<T> &f, const T &y, const GridFunction<T> &g) {
  if (!(f.grid() == g.grid()))
    throw DomainError("linear combination on different grids");
  std::vector<T> v(f.size());
  for (std::size_t i = 0; i < v.size(); ++i)
    v[i] = x * f[i] + y * g[i];
  return GridFunction<T>(f.grid(), std::move(v));
}

GridFunction<double> to_float(const GridFunction<mpq_class> &f) {
  std::vector<double> v;
  v.reserve(f.size());
  for (const auto &q : f.values())
    v.push_back(q.get_d());
  return GridFunction<double>(f.grid(), std::move(v));
}

template <typename T> GridFunction<T> read_csv(std::istream &in) {
  std::string line;
  auto next_line = [&]() {
    while (std::getline(in, line)) {
      if (!line.empty() && line.back() == '\r')
        line.pop_back();
      if (!line.empty())
        return true;
    }
    return false;
  };
  if (!next_line())
    throw ParseError("csv: empty input");
  {
    std::string h = line;
    h.erase(std::remove(h.begin(), h.end(), ' '), h.end());
    if (h != "t,value")
      throw ParseError("csv: expected header 't,value', got '" + line + "'");
  }
  std::vector<Point> ts;
  std::vector<T> vs;
  std::size_t row = 1;
  while (next_line()) {
    ++row;
    const auto comma = line.find(',');
    if (comma == std::string::npos || line.find(',', comma + 1) != std::string::npos)
      throw ParseError("csv: row " + std::to_string(row) + " must have two columns");
    try {
      ts.push_back(parse_rational(std::string_view(line).substr(0, comma)));
      vs.push_back(scalar_traits<T>::parse(std::string_view(line).substr(comma + 1)));
    } catch (const ParseError &e) {
      throw ParseError("csv: row " + std::to_string(row) + ": " + e.what());
    }
    if (ts.size() > 1 && ts.back() - ts[ts.size() - 2] != 1)
      throw ParseError("csv: row " + std::to_string(row) + ": t must increase by 1");
  }
  if (ts.empty())
    throw ParseError("csv: no data rows");
  return GridFunction<T>(Grid(ts.front(), ts.size()), std::move(vs));
}

template <typename T> void write_csv(std::ostream &out, const GridFunction<T> &f) {
  out << "t,value\n";
  for (std::size_t i = 0; i < f.size(); ++i)
    out << format_rational(f.grid().point(i)) << ',' << scalar_traits<T>::to_string(f[i]) << '\n';
}

template <typename T> GridFunction<T> read_csv_file(const std::string &path) {
  std::ifstream in(path);
  if (!in)
    throw ParseError("cannot open '" + path + "'");
  return read_csv<T>(in);
}

template <typename T> void write_csv_file(const std::string &path, const GridFunction<T> &f) {
  std::ofstream out(path);
  if (!out)
    throw ParseError("cannot write '" + path + "'");
  write_csv(out, f);
  if (!out)
    throw ParseError("write to '" + path + "' failed");
}

#define DFC_GRID_INSTANTIATE(T)                                                                    \
  template class GridFunction<T>;                                                                  \
  template GridFunction<T> symmetric_dual(const GridFunction<T> &);                                \
  template GridFunction<T> q_reflect(const GridFunction<T> &);                                     \
  template GridFunction<T> restrict(const GridFunction<T> &, const Grid &);                        \
  template GridFunction<T> shift(const GridFunction<T> &, const Point &);                          \
  template GridFunction<T> combine(const T &, const GridFunction<T> &, const T &,                  \
                                   const GridFunction<T> &);                                       \
  template GridFunction<T> read_csv<T>(std::istream &);                                            \
  template void write_csv(std::ostream &, const GridFunction<T> &);                                \
  template GridFunction<T> read_csv_file<T>(const std::string &);                                  \
  template void write_csv_file(const std::string &, const GridFunction<T> &);

DFC_GRID_INSTANTIATE(mpq_class)
DFC_GRID_INSTANTIATE(double)

} // namespace dfc
