#pragma once

#include "punc/matrix.hpp"

namespace punc {

// Default numerical tolerance used across the library when none is given.
inline constexpr double kDefaultTol = 1e-9;

// max |a(i,j) - conj(a(j,i))| over all entries; 0 for exactly Hermitian input.
double hermitian_residual(const ComplexMatrix& a);

// (a + a*) / 2
ComplexMatrix hermitize(const ComplexMatrix& a);

struct EigResult {
  std::vector<double> eigenvalues;  // sorted descending
  ComplexMatrix eigenvectors;       // columns; a = V diag(l) V*
};

// Spectral decomposition of a Hermitian matrix via cyclic Jacobi rotations
// with a fixed sweep order. Input must be Hermitian within `tol`.
EigResult hermitian_eig(const ComplexMatrix& a, double tol = kDefaultTol);

// Hermitian within tol and min eigenvalue >= -tol (after symmetrization).
bool is_psd(const ComplexMatrix& a, double tol = kDefaultTol);

// Smallest eigenvalue of hermitize(a); requires square input.
double min_eigenvalue(const ComplexMatrix& a);

// a <= b in the Loewner order: b - a is PSD.
bool loewner_leq(const ComplexMatrix& a, const ComplexMatrix& b, double tol = kDefaultTol);

// u u* = identity within tol (max-entry). Requires rows <= cols.
bool is_semi_unitary(const ComplexMatrix& u, double tol = kDefaultTol);

}  // namespace punc
