#include "dfc/linalg.hpp"

#include <utility>

namespace dfc {

template <typename T> std::vector<T> solve_linear(DenseMatrix<T> A, std::vector<T> rhs) {
  const std::size_t n = A.rows;
  if (A.cols != n || rhs.size() != n)
    throw DomainError("solve_linear needs a square system");
  using tr = scalar_traits<T>;
  double norm = 0.0;
  for (const auto &x : A.data)
    norm = std::max(norm, tr::to_double(tr::abs(x)));

  for (std::size_t k = 0; k < n; ++k) {
    std::size_t piv = k;
    for (std::size_t i = k + 1; i < n; ++i)
      if (tr::abs(A(i, k)) > tr::abs(A(piv, k)))
        piv = i;
    const bool zero = tr::exact ? A(piv, k) == 0 : tr::to_double(tr::abs(A(piv, k))) <= 1e-13 * norm;
    if (zero)
      throw SingularSystem("singular system at column " + std::to_string(k) + " of " + std::to_string(n));
    if (piv != k) {
      for (std::size_t j = 0; j < n; ++j)
        std::swap(A(k, j), A(piv, j));
      std::swap(rhs[k], rhs[piv]);
    }
    for (std::size_t i = k + 1; i < n; ++i) {
      if (A(i, k) == 0)
        continue;
      const T m = A(i, k) / A(k, k);
      for (std::size_t j = k; j < n; ++j)
        A(i, j) -= m * A(k, j);
      rhs[i] -= m * rhs[k];
    }
  }
  std::vector<T> x(n, T(0));
  for (std::size_t k = n; k-- > 0;) {
    T acc = rhs[k];
    for (std::size_t j = k + 1; j < n; ++j)
      acc -= A(k, j) * x[j];
    x[k] = acc / A(k, k);
  }
  return x;
}

template <typename T> std::vector<T> multiply(const DenseMatrix<T> &A, const std::vector<T> &x) {
  if (x.size() != A.cols)
    throw DomainError("matrix-vector size mismatch");
  std::vector<T> y(A.rows, T(0));
  for (std::size_t i = 0; i < A.rows; ++i)
    for (std::size_t j = 0; j < A.cols; ++j)
      y[i] += A(i, j) * x[j];
  return y;
}

template std::vector<mpq_class> solve_linear(DenseMatrix<mpq_class>, std::vector<mpq_class>);
template std::vector<double> solve_linear(DenseMatrix<double>, std::vector<double>);
template std::vector<mpq_class> multiply(const DenseMatrix<mpq_class> &, const std::vector<mpq_class> &);
template std::vector<double> multiply(const DenseMatrix<double> &, const std::vector<double> &);

} // namespace dfc
