#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <string_view>
#include <vector>

#include "ratapprox/sampling.hpp"
#include "ratapprox/types.hpp"

namespace ratapprox::vf {

// f(s) = sum_n c_n / (s - a_n) + d + s h. Complex poles are stored as
// (a, conj(a)) with Im a > 0 first, residues in the same order.
struct PoleResidueModel {
    std::vector<Complex> poles;
    std::vector<Complex> residues;
    double d = 0.0;
    double h = 0.0;

    std::size_t order() const { return poles.size(); }
};

/// Direct summation. Throws pole when s coincides with a pole.
Complex eval_pole_residue(const PoleResidueModel& model, Complex s);

/// Stored poles, and zeros of the equivalent descriptor realisation
/// (a nilpotent block carries the s h term).
PolesZeros pr_poles_zeros(const PoleResidueModel& model);

inline constexpr double kConvergenceTol = 1e-10;
inline constexpr double kDivergenceLimit = 1e6;
inline constexpr double kIllConditionedLimit = 1e12;

struct VfOptions {
    std::size_t order = 12;
    std::size_t n_iter = 20;
    std::optional<std::vector<Complex>> initial_poles;   // conjugate-closed; automatic when absent
    std::optional<std::vector<double>> weights;          // per-sample row weights, default all ones
};

struct VfStep {
    std::size_t iter = 0;
    double max_pole_move = 0.0;
    double linearized_residual = 0.0;   // || weighted (sigma f - (sigma f)_fit) ||_2 of the relocation solve
    double condition = 0.0;             // of the column-scaled relocation matrix
    bool ill_conditioned = false;
};

struct VfResult {
    PoleResidueModel model;
    std::vector<VfStep> history;
    bool converged = false;
};

/// Starting poles for data spanning [x_min, x_max] on the real axis:
/// lightly damped pairs -beta/100 +- i beta with beta equispaced over
/// [0.5, 1.2] times the span, plus the real pole -span/200 for odd orders.
std::vector<Complex> initial_poles(std::size_t order, double x_min, double x_max);

/// Non-relaxed Vector Fitting with real-arithmetic least squares. Each
/// iteration fits sigma(s) f(s) ~ p(s) with sigma = 1 + sum cbar_n / (s - a_n)
/// and moves the poles to the zeros of sigma. Stops after n_iter
/// iterations or once no pole moves by more than 1e-10 (1 + |a|); the
/// residues, d and h are then fitted with the poles fixed.
VfResult fit_vf(const SampleSet& samples, const VfOptions& options = {});

/// Residues, d and h by least squares for fixed conjugate-closed poles.
PoleResidueModel fit_residues(const SampleSet& samples, const std::vector<Complex>& poles,
                              const std::vector<double>* weights = nullptr);

/// CSV `iter,max_pole_move,linearized_residual`.
void write_history_csv(std::ostream& os, const std::vector<VfStep>& history, std::string_view metadata = {});

} // namespace ratapprox::vf
