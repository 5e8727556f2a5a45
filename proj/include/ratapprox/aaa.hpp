#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "ratapprox/sampling.hpp"
#include "ratapprox/types.hpp"

namespace ratapprox::aaa {

// r(s) = sum_j w_j f_j / (s - z_j)  /  sum_j w_j / (s - z_j)
struct BarycentricModel {
    std::vector<Complex> support;
    std::vector<Complex> values;
    std::vector<Complex> weights;   // unit 2-norm
    bool real_symmetric = false;    // support conjugate-closed, w(conj z) = conj(w(z))

    std::size_t order() const { return support.size(); }
};

/// Returns the stored value at a support point with non-zero weight, and
/// +inf when the denominator vanishes exactly.
Complex eval_barycentric(const BarycentricModel& model, Complex s);

struct AaaOptions {
    double tol = 1e-13;                          // relative to max |f| over the samples
    std::size_t max_order = 100;
    bool real_mode = false;
    std::optional<std::uint64_t> random_seed;    // random first support point instead of the farthest from the mean
};

struct AaaStep {
    std::size_t order = 0;
    double max_error = 0.0;   // over the non-support samples
    Complex chosen;           // support point added to reach this order
};

struct AaaResult {
    BarycentricModel model;
    std::vector<AaaStep> history;
    double max_error = 0.0;   // re-evaluated over every sample
};

/// Greedy AAA: add the worst-fit sample as a support point, then take the
/// weights as the smallest right singular vector of the Loewner matrix
/// over the remaining samples, until max error <= tol * max|f| or
/// max_order is reached. Throws stagnation if the Loewner matrix runs out
/// of rows first.
AaaResult fit_aaa(const SampleSet& samples, const AaaOptions& options = {});

PolesZeros barycentric_poles_zeros(const BarycentricModel& model);

/// Residue n(p) / d'(p) at each (simple) pole.
std::vector<Complex> barycentric_residues(const BarycentricModel& model, const std::vector<Complex>& poles);

inline constexpr double kDefaultCleanupTol = 1e-8;

/// Removes the support point nearest to every spurious pole (one within
/// pair_tol * (1 + |p|) of a zero, or with |residue| <= pair_tol * median
/// |residue|) and re-solves the weights once over all samples. Returns the
/// model unchanged when nothing is spurious.
BarycentricModel cleanup(const BarycentricModel& model, const SampleSet& samples,
                         double pair_tol = kDefaultCleanupTol);

/// Weights for fixed support points: smallest right singular vector of the
/// Loewner matrix over the non-support samples. support holds indices
/// into samples. With real_symmetric the weights are constrained to
/// w(conj z) = conj(w(z)).
BarycentricModel solve_weights(const SampleSet& samples, const std::vector<std::size_t>& support,
                               bool real_symmetric);

} // namespace ratapprox::aaa
