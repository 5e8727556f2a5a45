#pragma once

#include <cstddef>
#include <vector>

#include "ratapprox/types.hpp"

namespace ratapprox::linalg {

struct SvdResult {
    ComplexMatrix U;                // rows x k, orthonormal columns
    RealVector singular_values;     // k = min(rows, cols), non-increasing
    ComplexMatrix V;                // cols x k, orthonormal columns
};

enum class SvdVectors { both, none };

/// Thin SVD A = U diag(s) V^*. Inputs are copied. Throws svd_failure if
/// the LAPACK driver does not converge.
SvdResult svd(const ComplexMatrix& A, SvdVectors vectors = SvdVectors::both);

inline constexpr double kDefaultInfinityCutoff = 1e8;
inline constexpr double kEigenResidualLimit = 1e-6;

struct GeneralizedSpectrum {
    std::vector<Complex> finite;
    std::size_t infinite = 0;   // eigenvalues at (or beyond the cutoff towards) infinity
};

/// Eigenvalues of the pencil (M, N), i.e. roots of det(M - lambda N),
/// split into the finite ones with |lambda| <= infinity_cutoff and small
/// backward residual, and a count of the rest. Throws pencil_singular if
/// det(M - lambda N) vanishes identically.
GeneralizedSpectrum generalized_spectrum(const ComplexMatrix& M, const ComplexMatrix& N,
                                         double infinity_cutoff = kDefaultInfinityCutoff);

std::vector<Complex> finite_generalized_eigenvalues(const ComplexMatrix& M, const ComplexMatrix& N,
                                                    double infinity_cutoff = kDefaultInfinityCutoff);

// Relative singular value cutoff of the pseudo-inverse used by least_squares.
inline constexpr double kLeastSquaresCutoff = 1e-13;

/// Minimum-norm minimiser of ||A x - b||_2; singular values below
/// kLeastSquaresCutoff * sigma_max are treated as zero.
ComplexVector least_squares(const ComplexMatrix& A, const ComplexVector& b);
RealVector least_squares(const RealMatrix& A, const RealVector& b);

/// Unit right singular vector belonging to the smallest singular value.
ComplexVector smallest_singular_vector(const ComplexMatrix& A);
RealVector smallest_singular_vector(const RealMatrix& A);

/// sigma_max / sigma_min of a square matrix (infinity when singular).
double condition_number(const ComplexMatrix& A);

} // namespace ratapprox::linalg
