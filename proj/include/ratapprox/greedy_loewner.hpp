#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <string_view>
#include <vector>

#include "ratapprox/loewner.hpp"
#include "ratapprox/sampling.hpp"
#include "ratapprox/types.hpp"

namespace ratapprox::greedy {

struct GreedyOptions {
    std::size_t order_target = 11;
    std::uint64_t seed = 0;
    bool relative_error = false;   // select by |H_r - f| / |f| instead of |H_r - f|
    std::size_t patience = 5;      // non-improving steps tolerated once the target order is reached
    double improvement = 0.5;      // a step improves if its error is <= improvement * the reference error
};

struct GreedyStep {
    std::size_t step = 0;
    std::size_t n_left = 0;
    std::size_t n_right = 0;
    std::size_t order = 0;
    double max_error = 0.0;              // over the samples not yet in the left/right sets
    std::vector<Complex> chosen;         // points added at this step, conjugates included
};

struct GreedyResult {
    loewner::StateSpaceModel model;      // lowest-error model of order order_target
    loewner::DataPartition partition;    // data the returned model was built from
    std::size_t best_step = 0;
    std::vector<GreedyStep> history;
};

/// Recursive Loewner: start from one random left and one random right
/// sample, then repeatedly move the two worst-fit unused samples (with
/// their conjugates) into the left and right sets and rebuild the model.
/// Stops once the order target is reached and the error has not improved
/// for `patience` steps, or when every sample is used. Throws
/// ill_conditioned when the pencil has the rank for the target order but
/// the admissible order stops growing for 4 * `patience` steps, and
/// insufficient_data when the target is never reached.
GreedyResult fit_greedy(const SampleSet& samples, const GreedyOptions& options = {});

/// CSV `step,n_left,n_right,max_error,chosen_re,chosen_im`, one row per chosen point.
void write_history_csv(std::ostream& os, const std::vector<GreedyStep>& history, std::string_view metadata = {});

} // namespace ratapprox::greedy
