#ifndef DFC_LINALG_HPP
#define DFC_LINALG_HPP

#include "dfc/scalar.hpp"

#include <vector>

namespace dfc {

class SingularSystem : public DomainError {
public:
  using DomainError::DomainError;
};

// Row-major dense matrix.
template <typename T> struct DenseMatrix {
  std::size_t rows = 0, cols = 0;
  std::vector<T> data;

  DenseMatrix() = default;
  DenseMatrix(std::size_t r, std::size_t c) : rows(r), cols(c), data(r * c, T(0)) {}
  T &operator()(std::size_t i, std::size_t j) { return data[i * cols + j]; }
  const T &operator()(std::size_t i, std::size_t j) const { return data[i * cols + j]; }
};

// Gaussian elimination with partial pivoting. Exact for mpq_class.
template <typename T> std::vector<T> solve_linear(DenseMatrix<T> A, std::vector<T> rhs);

template <typename T> std::vector<T> multiply(const DenseMatrix<T> &A, const std::vector<T> &x);

} // namespace dfc

#endif
