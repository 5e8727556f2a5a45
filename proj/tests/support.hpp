#pragma once

// Independent oracles for the tests: a 50-digit J0, random real rational
// functions in pole-residue form, and a determinant-polynomial eigenvalue
// reference.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <limits>
#include <random>
#include <vector>

#include <boost/multiprecision/cpp_complex.hpp>

#include <Eigen/Dense>

#include "ratapprox/sampling.hpp"
#include "ratapprox/types.hpp"

namespace testing {

using ratapprox::Complex;
using ratapprox::SampleSet;
using ratapprox::ComplexSample;
using Wide = std::complex<long double>;
using Mp = boost::multiprecision::cpp_complex_50;

// J0 by its ascending series in 50-digit arithmetic.
inline Complex j0_reference(Complex s)
{
    Mp z(s.real(), s.imag());
    Mp q = -(z * z) / 4;
    Mp term = 1;
    Mp sum = 1;
    for (int k = 1; k < 200; ++k) {
        term *= q / (k * k);
        sum += term;
        if (abs(term) < 1e-45 * abs(sum) && k > 5) {
            break;
        }
    }
    return {static_cast<double>(sum.real()), static_cast<double>(sum.imag())};
}

// f(s) = sum_n c_n / (s - a_n) + d with conjugate-closed poles.
struct RandomRational {
    std::vector<Complex> poles;
    std::vector<Complex> residues;
    double d = 0.0;

    Complex operator()(Complex s) const
    {
        Wide sum(d, 0.0L);
        for (std::size_t n = 0; n < poles.size(); ++n) {
            sum += Wide(residues[n]) / (Wide(s) - Wide(poles[n]));
        }
        return Complex(sum);
    }
    std::size_t degree() const { return poles.size(); }
};

// Poles in the box [-3, 13] x [-4, 4] kept at least 0.3 away from the real
// sampling strip, residues of modulus ~1.
inline RandomRational random_rational(std::size_t degree, std::uint64_t seed, bool with_d = true)
{
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> ux(-3.0, 13.0);
    std::uniform_real_distribution<double> uy(1.5, 4.0);
    std::uniform_real_distribution<double> uc(-1.0, 1.0);
    RandomRational r;
    while (r.poles.size() < degree) {
        if (degree - r.poles.size() >= 2 && uc(rng) > -0.4) {
            const Complex p(ux(rng), uy(rng));
            const Complex c(uc(rng) + 1.5, uc(rng));
            r.poles.push_back(p);
            r.poles.push_back(std::conj(p));
            r.residues.push_back(c);
            r.residues.push_back(std::conj(c));
        } else {
            // Real poles sit outside the sampled x-range.
            const double x = uc(rng) > 0 ? 12.0 + 3.0 * std::abs(uc(rng)) : -2.0 - 3.0 * std::abs(uc(rng));
            r.poles.emplace_back(x, 0.0);
            r.residues.emplace_back(uc(rng) + 2.0, 0.0);
        }
    }
    r.d = with_d ? uc(rng) : 0.0;
    return r;
}

inline SampleSet sample_function(SampleSet points, const RandomRational& f)
{
    return ratapprox::sample_oracle(std::move(points), [&f](Complex s) { return f(s); });
}

// Fresh conjugate-closed evaluation points inside [0, 10] x [-1, 1].
inline std::vector<Complex> fresh_points(std::size_t n, std::uint64_t seed)
{
    std::mt19937_64 rng(seed ^ 0x9e3779b97f4a7c15ULL);
    std::uniform_real_distribution<double> ux(0.0, 10.0);
    std::uniform_real_distribution<double> uy(-1.0, 1.0);
    std::vector<Complex> out;
    for (std::size_t i = 0; i < n; ++i) {
        out.emplace_back(ux(rng), uy(rng));
    }
    return out;
}

// Eigenvalues of (M, N) as roots of det(M - lambda N): the polynomial is
// interpolated from determinants at roots of unity, rooted through its
// companion matrix and polished by Newton steps on the determinant, all
// in extended precision.
inline std::vector<Complex> determinant_eigenvalues(const ratapprox::ComplexMatrix& M,
                                                    const ratapprox::ComplexMatrix& N)
{
    using WideMatrix = Eigen::Matrix<Wide, Eigen::Dynamic, Eigen::Dynamic>;
    const WideMatrix Mw = M.cast<Wide>();
    const WideMatrix Nw = N.cast<Wide>();
    const auto n = M.rows();
    auto det = [&](Wide lambda) { return (Mw - lambda * Nw).partialPivLu().determinant(); };

    const long double radius = std::max<long double>(1.0L, static_cast<long double>(M.norm() / std::max(N.norm(), 1e-300)));
    const Eigen::Index m = n + 1;
    std::vector<Wide> coeff(static_cast<std::size_t>(m), Wide(0.0L, 0.0L));
    const long double pi = std::acos(-1.0L);
    for (Eigen::Index k = 0; k < m; ++k) {
        const Wide w = std::polar(1.0L, 2.0L * pi * static_cast<long double>(k) / static_cast<long double>(m));
        const Wide value = det(radius * w);
        for (Eigen::Index j = 0; j < m; ++j) {
            // Inverse DFT gives coefficients of p(radius * x).
            coeff[static_cast<std::size_t>(j)] += value * std::conj(std::pow(w, static_cast<int>(j))) / static_cast<long double>(m);
        }
    }
    // Degree: highest coefficient that is not roundoff.
    long double scale = 0.0L;
    for (const auto& c : coeff) {
        scale = std::max(scale, std::abs(c));
    }
    Eigen::Index deg = m - 1;
    while (deg > 0 && std::abs(coeff[static_cast<std::size_t>(deg)]) < 1e-13L * scale) {
        --deg;
    }
    std::vector<Complex> roots;
    if (deg == 0) {
        return roots;
    }
    WideMatrix companion = WideMatrix::Zero(deg, deg);
    for (Eigen::Index i = 1; i < deg; ++i) {
        companion(i, i - 1) = 1.0L;
    }
    for (Eigen::Index i = 0; i < deg; ++i) {
        companion(i, deg - 1) = -coeff[static_cast<std::size_t>(i)] / coeff[static_cast<std::size_t>(deg)];
    }
    Eigen::ComplexEigenSolver<WideMatrix> eig(companion);
    for (Eigen::Index i = 0; i < deg; ++i) {
        Wide x = eig.eigenvalues()(i) * radius;
        for (int it = 0; it < 8; ++it) {
            const Wide h = std::max<long double>(1e-9L, 1e-9L * std::abs(x));
            const Wide f = det(x);
            const Wide fp = (det(x + h) - det(x - h)) / (2.0L * h);
            if (std::abs(fp) == 0.0L) {
                break;
            }
            const Wide step = f / fp;
            x -= step;
            if (std::abs(step) < 1e-18L * (1.0L + std::abs(x))) {
                break;
            }
        }
        roots.push_back(Complex(x));
    }
    return roots;
}

// Largest distance from any element of a to its greedy partner in b
// (sizes must agree); infinity otherwise.
inline double matched_distance(std::vector<Complex> a, std::vector<Complex> b)
{
    if (a.size() != b.size()) {
        return std::numeric_limits<double>::infinity();
    }
    double worst = 0.0;
    std::vector<bool> used(b.size(), false);
    for (const Complex x : a) {
        double best = std::numeric_limits<double>::infinity();
        std::size_t at = 0;
        for (std::size_t j = 0; j < b.size(); ++j) {
            if (!used[j] && std::abs(x - b[j]) < best) {
                best = std::abs(x - b[j]);
                at = j;
            }
        }
        used[at] = true;
        worst = std::max(worst, best);
    }
    return worst;
}

// True if every non-real element has an element within tol (1 + |z|) of its conjugate.
inline bool conjugate_closed_within(const std::vector<Complex>& z, double tol)
{
    for (const Complex x : z) {
        if (std::abs(x.imag()) <= tol * (1.0 + std::abs(x))) {
            continue;
        }
        bool found = false;
        for (const Complex y : z) {
            if (std::abs(y - std::conj(x)) <= tol * (1.0 + std::abs(x))) {
                found = true;
                break;
            }
        }
        if (!found) {
            return false;
        }
    }
    return true;
}

} // namespace testing
