#pragma once

// Data-parallel inner loops shared by the fitters. Each kernel has a serial
// reference in kernels::serial and an OpenMP version in kernels::parallel;
// the two produce bit-identical output (no order-dependent reductions).

#include <cstddef>
#include <exception>
#include <optional>
#include <span>
#include <vector>

#include "ratapprox/error.hpp"
#include "ratapprox/types.hpp"

namespace ratapprox::kernels {

struct LoewnerBlocks {
    ComplexMatrix L;
    ComplexMatrix Ls;
};

namespace detail {

inline void loewner_row(std::span<const Complex> mu, std::span<const Complex> v, std::span<const Complex> lambda,
                        std::span<const Complex> w, std::size_t j, LoewnerBlocks& out, bool& coincident)
{
    const Complex mu_j = mu[j];
    const Complex v_j = v[j];
    const Complex mv = mu_j * v_j;
    for (std::size_t i = 0; i < lambda.size(); ++i) {
        const Complex denom = mu_j - lambda[i];
        if (denom == Complex(0.0, 0.0)) {
            coincident = true;
            continue;
        }
        const auto r = static_cast<Eigen::Index>(j);
        const auto c = static_cast<Eigen::Index>(i);
        out.L(r, c) = (v_j - w[i]) / denom;
        out.Ls(r, c) = (mv - lambda[i] * w[i]) / denom;
    }
}

inline void throw_coincident()
{
    throw Error(ErrorKind::coincident_points, "build_pencil: a left point coincides with a right point");
}

} // namespace detail

namespace serial {

inline LoewnerBlocks loewner_matrices(std::span<const Complex> mu, std::span<const Complex> v,
                                      std::span<const Complex> lambda, std::span<const Complex> w)
{
    LoewnerBlocks out{ComplexMatrix(mu.size(), lambda.size()), ComplexMatrix(mu.size(), lambda.size())};
    bool coincident = false;
    for (std::size_t j = 0; j < mu.size(); ++j) {
        detail::loewner_row(mu, v, lambda, w, j, out, coincident);
    }
    if (coincident) {
        detail::throw_coincident();
    }
    return out;
}

// out[i] = fn(points[i]). The exception of the lowest failing index is rethrown.
template <typename Fn>
std::vector<Complex> evaluate(const Fn& fn, std::span<const Complex> points)
{
    std::vector<Complex> out(points.size());
    for (std::size_t i = 0; i < points.size(); ++i) {
        out[i] = fn(points[i]);
    }
    return out;
}

} // namespace serial

namespace parallel {

inline LoewnerBlocks loewner_matrices(std::span<const Complex> mu, std::span<const Complex> v,
                                      std::span<const Complex> lambda, std::span<const Complex> w)
{
    LoewnerBlocks out{ComplexMatrix(mu.size(), lambda.size()), ComplexMatrix(mu.size(), lambda.size())};
    bool coincident = false;
    const auto rows = static_cast<std::ptrdiff_t>(mu.size());
#pragma omp parallel for schedule(static) reduction(|| : coincident)
    for (std::ptrdiff_t j = 0; j < rows; ++j) {
        bool local = false;
        detail::loewner_row(mu, v, lambda, w, static_cast<std::size_t>(j), out, local);
        coincident = coincident || local;
    }
    if (coincident) {
        detail::throw_coincident();
    }
    return out;
}

template <typename Fn>
std::vector<Complex> evaluate(const Fn& fn, std::span<const Complex> points)
{
    const auto n = static_cast<std::ptrdiff_t>(points.size());
    std::vector<Complex> out(points.size());
    std::vector<std::exception_ptr> failures(points.size());
    bool failed = false;
#pragma omp parallel for schedule(dynamic, 256) reduction(|| : failed)
    for (std::ptrdiff_t i = 0; i < n; ++i) {
        const auto u = static_cast<std::size_t>(i);
        try {
            out[u] = fn(points[u]);
        } catch (...) {
            failures[u] = std::current_exception();
            failed = true;
        }
    }
    if (failed) {
        for (const auto& f : failures) {
            if (f) {
                std::rethrow_exception(f);
            }
        }
    }
    return out;
}

} // namespace parallel

} // namespace ratapprox::kernels
