#include "punc/matrix.hpp"

#include <algorithm>
#include <cmath>

namespace punc {

ComplexMatrix::ComplexMatrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), entries_(rows * cols, cplx{0.0, 0.0}) {
  if (rows == 0 || cols == 0) throw DimensionError("matrix dimensions must be positive");
}

ComplexMatrix::ComplexMatrix(std::size_t rows, std::size_t cols, std::vector<cplx> entries)
    : rows_(rows), cols_(cols), entries_(std::move(entries)) {
  if (rows == 0 || cols == 0) throw DimensionError("matrix dimensions must be positive");
  if (entries_.size() != rows * cols)
    throw DimensionError("entry count does not match rows*cols");
}

ComplexMatrix ComplexMatrix::identity(std::size_t n) {
  ComplexMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

ComplexMatrix ComplexMatrix::from_rows(std::initializer_list<std::initializer_list<cplx>> rows) {
  std::size_t r = rows.size();
  if (r == 0) throw DimensionError("empty row list");
  std::size_t c = rows.begin()->size();
  ComplexMatrix m(r, c);
  std::size_t i = 0;
  for (const auto& row : rows) {
    if (row.size() != c) throw DimensionError("ragged row list");
    std::size_t j = 0;
    for (const auto& v : row) m(i, j++) = v;
    ++i;
  }
  return m;
}

ComplexMatrix ComplexMatrix::basis_vector(std::size_t dim, std::size_t index) {
  if (index >= dim) throw DimensionError("basis index out of range");
  ComplexMatrix v(dim, 1);
  v(index, 0) = 1.0;
  return v;
}

ComplexMatrix ComplexMatrix::diagonal(const std::vector<cplx>& diag) {
  ComplexMatrix m(diag.size(), diag.size());
  for (std::size_t i = 0; i < diag.size(); ++i) m(i, i) = diag[i];
  return m;
}

bool ComplexMatrix::all_finite() const {
  for (const auto& v : entries_)
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) return false;
  return true;
}

ComplexMatrix add(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols())
    throw DimensionError("add: shape mismatch");
  ComplexMatrix out(a.rows(), a.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) out(i, j) = a(i, j) + b(i, j);
  return out;
}

ComplexMatrix subtract(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols())
    throw DimensionError("subtract: shape mismatch");
  ComplexMatrix out(a.rows(), a.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) out(i, j) = a(i, j) - b(i, j);
  return out;
}

ComplexMatrix multiply(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.cols() != b.rows()) throw DimensionError("multiply: inner dimensions differ");
  ComplexMatrix out(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const cplx aik = a(i, k);
      if (aik == cplx{0.0, 0.0}) continue;
      for (std::size_t j = 0; j < b.cols(); ++j) out(i, j) += aik * b(k, j);
    }
  }
  return out;
}

ComplexMatrix scale(const cplx& s, const ComplexMatrix& a) {
  ComplexMatrix out(a.rows(), a.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) out(i, j) = s * a(i, j);
  return out;
}

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
  const std::size_t r = a.rows() * b.rows();
  const std::size_t c = a.cols() * b.cols();
  if (r == 0 || c == 0 || r > kMaxMatrixEntries / c)
    throw DimensionError("kron: dimension-overflow (result exceeds entry cap)");
  ComplexMatrix out(r, c);
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) {
      const cplx aij = a(i, j);
      for (std::size_t k = 0; k < b.rows(); ++k)
        for (std::size_t l = 0; l < b.cols(); ++l)
          out(i * b.rows() + k, j * b.cols() + l) = aij * b(k, l);
    }
  return out;
}

ComplexMatrix hadamard(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols())
    throw DimensionError("hadamard: shape mismatch");
  ComplexMatrix out(a.rows(), a.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) out(i, j) = a(i, j) * b(i, j);
  return out;
}

ComplexMatrix conj_transpose(const ComplexMatrix& a) {
  ComplexMatrix out(a.cols(), a.rows());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) out(j, i) = std::conj(a(i, j));
  return out;
}

cplx trace(const ComplexMatrix& a) {
  if (!a.is_square()) throw DimensionError("trace: non-square matrix");
  cplx t{0.0, 0.0};
  for (std::size_t i = 0; i < a.rows(); ++i) t += a(i, i);
  return t;
}

cplx trace_of_product(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.cols() != b.rows() || a.rows() != b.cols())
    throw DimensionError("trace_of_product: shapes do not yield a square product");
  cplx t{0.0, 0.0};
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t k = 0; k < a.cols(); ++k) t += a(i, k) * b(k, i);
  return t;
}

double max_abs(const ComplexMatrix& a) {
  double m = 0.0;
  for (const auto& v : a.entries()) m = std::max(m, std::abs(v));
  return m;
}

double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols())
    throw DimensionError("max_abs_diff: shape mismatch");
  double m = 0.0;
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) m = std::max(m, std::abs(a(i, j) - b(i, j)));
  return m;
}

double max_offdiag_abs(const ComplexMatrix& a) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j)
      if (i != j) m = std::max(m, std::abs(a(i, j)));
  return m;
}

bool approx_equal(const ComplexMatrix& a, const ComplexMatrix& b, double atol) {
  return a.rows() == b.rows() && a.cols() == b.cols() && max_abs_diff(a, b) <= atol;
}

PartialPermutation::PartialPermutation(std::size_t in_dim_, std::vector<std::size_t> selected_)
    : in_dim(in_dim_), selected(std::move(selected_)) {
  if (in_dim == 0) throw DimensionError("partial permutation: in_dim must be positive");
  std::vector<bool> seen(in_dim, false);
  for (std::size_t s : selected) {
    if (s >= in_dim) throw DimensionError("partial permutation: index out of range");
    if (seen[s]) throw DimensionError("partial permutation: duplicate index");
    seen[s] = true;
  }
}

ComplexMatrix PartialPermutation::to_matrix() const {
  ComplexMatrix p(selected.size(), in_dim);
  for (std::size_t i = 0; i < selected.size(); ++i) p(i, selected[i]) = 1.0;
  return p;
}

PartialPermutation diagonal_selection(std::size_t n) {
  std::vector<std::size_t> idx(n);
  for (std::size_t i = 0; i < n; ++i) idx[i] = i * n + i;
  return PartialPermutation(n * n, std::move(idx));
}

ComplexMatrix hadamard_rewrite(const PartialPermutation& p, const ComplexMatrix& a,
                               const ComplexMatrix& b) {
  if (!a.is_square() || a.rows() != b.rows() || a.cols() != b.cols())
    throw DimensionError("hadamard_rewrite: operands must be square and same shape");
  const std::size_t n = a.rows();
  const PartialPermutation expected = diagonal_selection(n);
  if (p.in_dim != expected.in_dim || p.selected != expected.selected)
    throw DimensionError("hadamard_rewrite: wrong selection pattern");
  const ComplexMatrix big = kron(a, b);
  ComplexMatrix out(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) out(i, j) = big(p.selected[i], p.selected[j]);
  return out;
}

}  // namespace punc
