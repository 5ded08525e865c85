#pragma once

#include <complex>
#include <cstddef>
#include <initializer_list>
#include <stdexcept>
#include <string>
#include <vector>

namespace punc {

using cplx = std::complex<double>;

// Raised when matrix shapes are incompatible or an index selection is malformed.
class DimensionError : public std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Raised when an iterative numerical routine fails to converge.
class NumericalError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Hard cap on entries per matrix. Kronecker chains grow multiplicatively, so
// blowing past this is almost always a circuit construction bug.
inline constexpr std::size_t kMaxMatrixEntries = std::size_t{1} << 20;

// Dense complex matrix, row-major storage. Values are immutable by
// convention once handed to a circuit; all operations return fresh matrices.
class ComplexMatrix {
 public:
  ComplexMatrix() = default;
  ComplexMatrix(std::size_t rows, std::size_t cols);
  ComplexMatrix(std::size_t rows, std::size_t cols, std::vector<cplx> entries);

  static ComplexMatrix identity(std::size_t n);
  static ComplexMatrix from_rows(std::initializer_list<std::initializer_list<cplx>> rows);
  // Column vector with a single 1 at position `index`.
  static ComplexMatrix basis_vector(std::size_t dim, std::size_t index);
  static ComplexMatrix diagonal(const std::vector<cplx>& diag);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  std::size_t size() const { return entries_.size(); }
  bool is_square() const { return rows_ == cols_; }
  bool is_vector() const { return cols_ == 1; }

  cplx& operator()(std::size_t i, std::size_t j) { return entries_[i * cols_ + j]; }
  const cplx& operator()(std::size_t i, std::size_t j) const { return entries_[i * cols_ + j]; }

  const std::vector<cplx>& entries() const { return entries_; }

  bool all_finite() const;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<cplx> entries_;
};

ComplexMatrix add(const ComplexMatrix& a, const ComplexMatrix& b);
ComplexMatrix subtract(const ComplexMatrix& a, const ComplexMatrix& b);
ComplexMatrix multiply(const ComplexMatrix& a, const ComplexMatrix& b);
ComplexMatrix scale(const cplx& s, const ComplexMatrix& a);

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b);
ComplexMatrix hadamard(const ComplexMatrix& a, const ComplexMatrix& b);
ComplexMatrix conj_transpose(const ComplexMatrix& a);
cplx trace(const ComplexMatrix& a);
// trace(multiply(a, b)) without materializing the product.
cplx trace_of_product(const ComplexMatrix& a, const ComplexMatrix& b);

double max_abs(const ComplexMatrix& a);
double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b);
// Largest |entry| off the main diagonal; 0 for 1x1.
double max_offdiag_abs(const ComplexMatrix& a);

bool approx_equal(const ComplexMatrix& a, const ComplexMatrix& b, double atol);

// Semi-unitary row-selection matrix P: row i has a single 1 at column
// selected[i], so P P* is exactly the |selected|-dimensional identity.
struct PartialPermutation {
  std::size_t in_dim = 0;
  std::vector<std::size_t> selected;

  PartialPermutation(std::size_t in_dim, std::vector<std::size_t> selected);

  std::size_t out_dim() const { return selected.size(); }
  ComplexMatrix to_matrix() const;
};

// Selection picking the principal sub-matrix indices {i*n + i : 0 <= i < n}
// of an n^2-dimensional space, i.e. the one turning A (x) B into A o B.
PartialPermutation diagonal_selection(std::size_t n);

// P (A (x) B) P* for the diagonal selection; equals hadamard(a, b).
ComplexMatrix hadamard_rewrite(const PartialPermutation& p, const ComplexMatrix& a,
                               const ComplexMatrix& b);

}  // namespace punc
