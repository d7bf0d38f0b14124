#pragma once

#include <cstddef>
#include <cstdint>
#include <utility>
#include <vector>

namespace qcsc::math {

// Dense symmetric matrix stored row-major in a flat vector (n x n).
struct LowestEigenpair {
  double value;
  std::vector<double> vector;  // unit norm
};

// Cyclic Jacobi diagonalization; returns the lowest eigenpair. Intended for
// the small matrices produced by subspace projection (n up to a few hundred).
LowestEigenpair jacobi_lowest_eigenpair(std::vector<double> matrix, std::size_t n);

// Smallest eigenvalue of a symmetric tridiagonal matrix via Sturm-sequence
// bisection. alpha = diagonal (size m), beta = off-diagonal (size m-1).
double tridiag_smallest_eigenvalue(const std::vector<double>& alpha,
                                   const std::vector<double>& beta);

// Eigenvector for a known eigenvalue of a symmetric tridiagonal matrix,
// by inverse iteration with partial pivoting. Unit norm.
std::vector<double> tridiag_eigenvector(const std::vector<double>& alpha,
                                        const std::vector<double>& beta,
                                        double eigenvalue);

// Binomial coefficient, exact for the n <= 64 range used here.
std::uint64_t binomial(unsigned n, unsigned k);

}  // namespace qcsc::math
