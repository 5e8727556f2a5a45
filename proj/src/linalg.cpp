#include "ratapprox/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#define LAPACK_COMPLEX_CPP
#include <lapacke.h>

#include "ratapprox/error.hpp"

namespace ratapprox::linalg {

namespace {

using lapack_cd = lapack_complex_double;

lapack_cd* raw(ComplexMatrix& m) { return reinterpret_cast<lapack_cd*>(m.data()); }
lapack_cd* raw(ComplexVector& v) { return reinterpret_cast<lapack_cd*>(v.data()); }

lapack_int to_int(Eigen::Index n) { return static_cast<lapack_int>(n); }

void check_finite(const ComplexMatrix& A, const char* who)
{
    if (!A.allFinite()) {
        throw Error(ErrorKind::invalid_argument, std::string(who) + ": matrix has non-finite entries");
    }
}

// Complex SVD with full (jobz = 'A') or thin ('S') or no ('N') vectors.
// Falls back to the QR-iteration driver if divide and conquer fails.
void complex_svd(ComplexMatrix A, char jobz, ComplexMatrix& U, RealVector& s, ComplexMatrix& VH)
{
    const lapack_int m = to_int(A.rows());
    const lapack_int n = to_int(A.cols());
    const lapack_int k = std::min(m, n);
    s.resize(k);
    lapack_int ucols = jobz == 'A' ? m : (jobz == 'S' ? k : 1);
    lapack_int vrows = jobz == 'A' ? n : (jobz == 'S' ? k : 1);
    U.resize(jobz == 'N' ? 1 : m, ucols);
    VH.resize(vrows, jobz == 'N' ? 1 : n);
    const ComplexMatrix backup = A;
    lapack_int info = LAPACKE_zgesdd(LAPACK_COL_MAJOR, jobz, m, n, raw(A), m, s.data(), raw(U), to_int(U.rows()),
                                     raw(VH), to_int(VH.rows()));
    if (info > 0) {
        A = backup;
        RealVector superb(std::max<lapack_int>(k - 1, 1));
        info = LAPACKE_zgesvd(LAPACK_COL_MAJOR, jobz, jobz, m, n, raw(A), m, s.data(), raw(U), to_int(U.rows()),
                              raw(VH), to_int(VH.rows()), superb.data());
    }
    if (info != 0) {
        throw Error(ErrorKind::svd_failure, "svd: LAPACK returned info = " + std::to_string(info));
    }
}

void real_svd(RealMatrix A, char jobz, RealMatrix& U, RealVector& s, RealMatrix& VT)
{
    const lapack_int m = to_int(A.rows());
    const lapack_int n = to_int(A.cols());
    const lapack_int k = std::min(m, n);
    s.resize(k);
    lapack_int ucols = jobz == 'A' ? m : (jobz == 'S' ? k : 1);
    lapack_int vrows = jobz == 'A' ? n : (jobz == 'S' ? k : 1);
    U.resize(jobz == 'N' ? 1 : m, ucols);
    VT.resize(vrows, jobz == 'N' ? 1 : n);
    const RealMatrix backup = A;
    lapack_int info = LAPACKE_dgesdd(LAPACK_COL_MAJOR, jobz, m, n, A.data(), m, s.data(), U.data(), to_int(U.rows()),
                                     VT.data(), to_int(VT.rows()));
    if (info > 0) {
        A = backup;
        RealVector superb(std::max<lapack_int>(k - 1, 1));
        info = LAPACKE_dgesvd(LAPACK_COL_MAJOR, jobz, jobz, m, n, A.data(), m, s.data(), U.data(), to_int(U.rows()),
                              VT.data(), to_int(VT.rows()), superb.data());
    }
    if (info != 0) {
        throw Error(ErrorKind::svd_failure, "svd: LAPACK returned info = " + std::to_string(info));
    }
}

} // namespace

SvdResult svd(const ComplexMatrix& A, SvdVectors vectors)
{
    if (A.size() == 0) {
        throw Error(ErrorKind::invalid_argument, "svd: empty matrix");
    }
    check_finite(A, "svd");
    SvdResult out;
    ComplexMatrix VH;
    complex_svd(A, vectors == SvdVectors::both ? 'S' : 'N', out.U, out.singular_values, VH);
    if (vectors == SvdVectors::both) {
        out.V = VH.adjoint();
    } else {
        out.U.resize(0, 0);
    }
    return out;
}

GeneralizedSpectrum generalized_spectrum(const ComplexMatrix& M, const ComplexMatrix& N, double infinity_cutoff)
{
    if (M.rows() != M.cols() || N.rows() != N.cols() || M.rows() != N.rows()) {
        throw Error(ErrorKind::invalid_argument, "generalized eigenvalues: M and N must be square and the same size");
    }
    check_finite(M, "generalized eigenvalues");
    check_finite(N, "generalized eigenvalues");
    const lapack_int n = to_int(M.rows());
    GeneralizedSpectrum out;
    if (n == 0) {
        return out;
    }
    ComplexMatrix a = M;
    ComplexMatrix b = N;
    ComplexVector alpha(n), beta(n);
    ComplexMatrix vl(1, 1), vr(n, n);
    const lapack_int info = LAPACKE_zggev(LAPACK_COL_MAJOR, 'N', 'V', n, raw(a), n, raw(b), n, raw(alpha), raw(beta),
                                          raw(vl), 1, raw(vr), n);
    if (info != 0) {
        throw Error(ErrorKind::svd_failure, "generalized eigenvalues: QZ iteration failed, info = " + std::to_string(info));
    }

    const double norm_m = M.norm();
    const double norm_n = N.norm();
    const double singular_tol = 100.0 * static_cast<double>(n) * std::numeric_limits<double>::epsilon();
    for (lapack_int i = 0; i < n; ++i) {
        const double abs_alpha = std::abs(alpha(i));
        const double abs_beta = std::abs(beta(i));
        if (abs_alpha <= singular_tol * norm_m && abs_beta <= singular_tol * std::max(norm_n, norm_m)) {
            throw Error(ErrorKind::pencil_singular, "generalized eigenvalues: pencil is singular (alpha = beta = 0)");
        }
        if (abs_beta == 0.0 || abs_alpha > infinity_cutoff * abs_beta) {
            ++out.infinite;
            continue;
        }
        const Complex lambda = alpha(i) / beta(i);
        const ComplexVector x = vr.col(i);
        const double denom = (norm_m + std::abs(lambda) * norm_n) * x.norm();
        const double residual = denom > 0.0 ? (M * x - lambda * (N * x)).norm() / denom : 0.0;
        if (residual > kEigenResidualLimit) {
            ++out.infinite;
            continue;
        }
        out.finite.push_back(lambda);
    }
    return out;
}

std::vector<Complex> finite_generalized_eigenvalues(const ComplexMatrix& M, const ComplexMatrix& N,
                                                    double infinity_cutoff)
{
    return generalized_spectrum(M, N, infinity_cutoff).finite;
}

ComplexVector least_squares(const ComplexMatrix& A, const ComplexVector& b)
{
    if (A.rows() != b.size()) {
        throw Error(ErrorKind::invalid_argument, "least_squares: row count mismatch");
    }
    if (A.rows() < A.cols()) {
        throw Error(ErrorKind::invalid_argument, "least_squares: needs rows >= cols");
    }
    check_finite(A, "least_squares");
    const lapack_int m = to_int(A.rows());
    const lapack_int n = to_int(A.cols());
    ComplexMatrix a = A;
    ComplexVector rhs = b;
    RealVector s(std::min(m, n));
    lapack_int rank = 0;
    const lapack_int info = LAPACKE_zgelsd(LAPACK_COL_MAJOR, m, n, 1, raw(a), m, raw(rhs), m, s.data(),
                                           kLeastSquaresCutoff, &rank);
    if (info != 0) {
        throw Error(ErrorKind::svd_failure, "least_squares: LAPACK returned info = " + std::to_string(info));
    }
    return rhs.head(n);
}

RealVector least_squares(const RealMatrix& A, const RealVector& b)
{
    if (A.rows() != b.size()) {
        throw Error(ErrorKind::invalid_argument, "least_squares: row count mismatch");
    }
    if (A.rows() < A.cols()) {
        throw Error(ErrorKind::invalid_argument, "least_squares: needs rows >= cols");
    }
    if (!A.allFinite()) {
        throw Error(ErrorKind::invalid_argument, "least_squares: matrix has non-finite entries");
    }
    const lapack_int m = to_int(A.rows());
    const lapack_int n = to_int(A.cols());
    RealMatrix a = A;
    RealVector rhs = b;
    RealVector s(std::min(m, n));
    lapack_int rank = 0;
    const lapack_int info =
        LAPACKE_dgelsd(LAPACK_COL_MAJOR, m, n, 1, a.data(), m, rhs.data(), m, s.data(), kLeastSquaresCutoff, &rank);
    if (info != 0) {
        throw Error(ErrorKind::svd_failure, "least_squares: LAPACK returned info = " + std::to_string(info));
    }
    return rhs.head(n);
}

ComplexVector smallest_singular_vector(const ComplexMatrix& A)
{
    if (A.size() == 0) {
        throw Error(ErrorKind::invalid_argument, "smallest_singular_vector: empty matrix");
    }
    check_finite(A, "smallest_singular_vector");
    ComplexMatrix U, VH;
    RealVector s;
    complex_svd(A, A.rows() >= A.cols() ? 'S' : 'A', U, s, VH);
    return VH.row(VH.rows() - 1).adjoint();
}

RealVector smallest_singular_vector(const RealMatrix& A)
{
    if (A.size() == 0) {
        throw Error(ErrorKind::invalid_argument, "smallest_singular_vector: empty matrix");
    }
    RealMatrix U, VT;
    RealVector s;
    real_svd(A, A.rows() >= A.cols() ? 'S' : 'A', U, s, VT);
    return VT.row(VT.rows() - 1).transpose();
}

double condition_number(const ComplexMatrix& A)
{
    const auto s = svd(A, SvdVectors::none).singular_values;
    const double smin = s(s.size() - 1);
    return smin > 0.0 ? s(0) / smin : std::numeric_limits<double>::infinity();
}

} // namespace ratapprox::linalg
