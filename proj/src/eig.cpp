#include "punc/eig.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace punc {

double hermitian_residual(const ComplexMatrix& a) {
  if (!a.is_square()) throw DimensionError("hermitian_residual: non-square matrix");
  double r = 0.0;
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j)
      r = std::max(r, std::abs(a(i, j) - std::conj(a(j, i))));
  return r;
}

ComplexMatrix hermitize(const ComplexMatrix& a) {
  if (!a.is_square()) throw DimensionError("hermitize: non-square matrix");
  ComplexMatrix h(a.rows(), a.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j)
      h(i, j) = 0.5 * (a(i, j) + std::conj(a(j, i)));
  return h;
}

namespace {

// One Jacobi rotation zeroing m(p,q). m is Hermitian; v accumulates the
// product of rotations so that input = v m_final v*.
void rotate(ComplexMatrix& m, ComplexMatrix& v, std::size_t p, std::size_t q) {
  const cplx b = m(p, q);
  const double babs = std::abs(b);
  if (babs == 0.0) return;

  const double app = m(p, p).real();
  const double aqq = m(q, q).real();
  const cplx phase = b / babs;

  const double tau = (aqq - app) / (2.0 * babs);
  double t;
  if (tau >= 0.0)
    t = 1.0 / (tau + std::sqrt(1.0 + tau * tau));
  else
    t = -1.0 / (-tau + std::sqrt(1.0 + tau * tau));
  const double cs = 1.0 / std::sqrt(1.0 + t * t);
  const double sn = t * cs;

  // Embedded 2x2 unitary: U(p,p)=cs, U(p,q)=sn*phase, U(q,p)=-sn*conj(phase), U(q,q)=cs.
  const cplx upq = sn * phase;
  const cplx uqp = -sn * std::conj(phase);

  const std::size_t n = m.rows();
  // m <- U* m U, columns first then rows.
  for (std::size_t r = 0; r < n; ++r) {
    const cplx mp = m(r, p), mq = m(r, q);
    m(r, p) = mp * cs + mq * uqp;
    m(r, q) = mp * upq + mq * cs;
  }
  for (std::size_t c = 0; c < n; ++c) {
    const cplx mp = m(p, c), mq = m(q, c);
    m(p, c) = cs * mp + std::conj(uqp) * mq;
    m(q, c) = std::conj(upq) * mp + cs * mq;
  }
  // Pivot entries are real and the off-diagonal vanishes analytically.
  m(p, q) = 0.0;
  m(q, p) = 0.0;
  m(p, p) = cplx{m(p, p).real(), 0.0};
  m(q, q) = cplx{m(q, q).real(), 0.0};

  for (std::size_t r = 0; r < n; ++r) {
    const cplx vp = v(r, p), vq = v(r, q);
    v(r, p) = vp * cs + vq * uqp;
    v(r, q) = vp * upq + vq * cs;
  }
}

}  // namespace

EigResult hermitian_eig(const ComplexMatrix& a, double tol) {
  if (!a.is_square()) throw DimensionError("hermitian_eig: non-square matrix");
  if (hermitian_residual(a) > tol)
    throw std::invalid_argument("hermitian_eig: matrix is not Hermitian within tolerance");

  const std::size_t n = a.rows();
  ComplexMatrix m = hermitize(a);
  ComplexMatrix v = ComplexMatrix::identity(n);

  const double scale = std::max(1.0, max_abs(m));
  const double stop = 1e-15 * scale;
  constexpr int kMaxSweeps = 100;

  if (n > 1) {
    int sweep = 0;
    for (; sweep < kMaxSweeps; ++sweep) {
      double off = 0.0;
      for (std::size_t p = 0; p + 1 < n; ++p)
        for (std::size_t q = p + 1; q < n; ++q) off = std::max(off, std::abs(m(p, q)));
      if (off <= stop) break;
      for (std::size_t p = 0; p + 1 < n; ++p)
        for (std::size_t q = p + 1; q < n; ++q)
          if (std::abs(m(p, q)) > stop) rotate(m, v, p, q);
    }
    if (sweep == kMaxSweeps) throw NumericalError("hermitian_eig: no convergence");
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(),
            [&](std::size_t i, std::size_t j) { return m(i, i).real() > m(j, j).real(); });

  EigResult res;
  res.eigenvalues.resize(n);
  res.eigenvectors = ComplexMatrix(n, n);
  for (std::size_t k = 0; k < n; ++k) {
    res.eigenvalues[k] = m(order[k], order[k]).real();
    for (std::size_t r = 0; r < n; ++r) res.eigenvectors(r, k) = v(r, order[k]);
  }
  return res;
}

bool is_psd(const ComplexMatrix& a, double tol) {
  if (!a.is_square()) throw DimensionError("is_psd: non-square matrix");
  if (hermitian_residual(a) > tol) return false;
  return min_eigenvalue(a) >= -tol;
}

double min_eigenvalue(const ComplexMatrix& a) {
  const ComplexMatrix h = hermitize(a);
  const EigResult e = hermitian_eig(h, kDefaultTol);
  return e.eigenvalues.back();
}

bool loewner_leq(const ComplexMatrix& a, const ComplexMatrix& b, double tol) {
  if (!a.is_square() || a.rows() != b.rows() || a.cols() != b.cols())
    throw DimensionError("loewner_leq: shape mismatch");
  return is_psd(subtract(b, a), tol);
}

bool is_semi_unitary(const ComplexMatrix& u, double tol) {
  if (u.rows() > u.cols())
    throw DimensionError("is_semi_unitary: orientation-error (rows exceed cols)");
  const ComplexMatrix g = multiply(u, conj_transpose(u));
  return max_abs_diff(g, ComplexMatrix::identity(u.rows())) <= tol;
}

}  // namespace punc
