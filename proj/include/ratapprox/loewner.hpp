#pragma once

#include <cstddef>
#include <string_view>
#include <utility>
#include <vector>

#include "ratapprox/linalg.hpp"
#include "ratapprox/sampling.hpp"
#include "ratapprox/types.hpp"

namespace ratapprox::loewner {

enum class PartitionScheme {
    alternating,    // units alternate left/right in input order
    half_split,     // first half of the units left, rest right
    epsilon_paired, // units sorted by (Re, |Im|), then alternated, so neighbours sit on opposite sides
};

PartitionScheme parse_scheme(std::string_view name);
std::string_view to_string(PartitionScheme scheme);

// Left data (mu_j, v_j) and right data (lambda_i, w_i).
struct DataPartition {
    std::vector<ComplexSample> left;
    std::vector<ComplexSample> right;
};

/// Splits a sample set into disjoint left/right sets. In a conjugate-closed
/// set a conjugate pair is one unit and always lands on a single side.
/// Throws partition_impossible if a flagged set holds an unpaired complex
/// point, or if fewer than two units exist.
DataPartition partition(const SampleSet& samples, PartitionScheme scheme = PartitionScheme::epsilon_paired);

// SISO Loewner pencil. The tangential directions R (right) and L (left)
// are all-ones and are not stored.
struct LoewnerPencil {
    ComplexMatrix L;        // q x k Loewner matrix
    ComplexMatrix Ls;       // q x k shifted Loewner matrix
    ComplexVector V;        // left values v_j
    ComplexRowVector W;     // right values w_i
    ComplexVector mu;       // left points
    ComplexVector lambda;   // right points

    Eigen::Index rows() const { return L.rows(); }
    Eigen::Index cols() const { return L.cols(); }
};

/// L(j,i) = (v_j - w_i)/(mu_j - lambda_i), Ls(j,i) = (mu_j v_j - lambda_i w_i)/(mu_j - lambda_i).
/// Throws coincident_points if some mu_j == lambda_i.
LoewnerPencil build_pencil(const DataPartition& partition);

// Descriptor realisation H(s) = C (sE - A)^{-1} B, D = 0.
struct StateSpaceModel {
    ComplexMatrix E;
    ComplexMatrix A;
    ComplexVector B;
    ComplexRowVector C;
    double e_condition = 0.0;

    std::size_t order() const { return static_cast<std::size_t>(A.rows()); }
};

// Order selection for truncate(): a fixed order, or the smallest r with
// sigma_{r+1}/sigma_1 <= tolerance.
struct Truncation {
    enum class Mode { by_order, by_tolerance } mode = Mode::by_order;
    std::size_t order = 0;
    double tolerance = 0.0;

    static Truncation by_order(std::size_t r) { return {Mode::by_order, r, 0.0}; }
    static Truncation by_tolerance(double tau) { return {Mode::by_tolerance, 0, tau}; }
};

inline constexpr double kMaxEConditioning = 1e12;

struct TruncationResult {
    StateSpaceModel model;
    std::vector<double> singular_values;   // of [L, Ls], normalised by sigma_1
    std::vector<double> singular_values_vertical;   // of [L; Ls], normalised
    ComplexMatrix Y;                       // q x r left projector
    ComplexMatrix X;                       // k x r right projector
};

// SVDs of the horizontal [L, Ls] and vertical [L; Ls] concatenations.
// Computing them dominates the cost of a fit, so they can be reused
// across truncation orders.
struct PencilSvd {
    linalg::SvdResult horizontal;
    linalg::SvdResult vertical;
};

PencilSvd decompose(const LoewnerPencil& pencil);

/// Projects the pencil onto the leading r singular subspaces:
/// E = -Y^* L X, A = -Y^* Ls X, B = Y^* V, C = W X.
/// Throws rank_zero if sigma_1 = 0 and ill_conditioned if cond(E) > 1e12
/// (unless check_conditioning is false).
TruncationResult truncate(const LoewnerPencil& pencil, const PencilSvd& svd, Truncation mode,
                          bool check_conditioning = true);
TruncationResult truncate(const LoewnerPencil& pencil, Truncation mode, bool check_conditioning = true);

/// Solves (sE - A) x = B and returns C x. Throws singular_at_point at a model pole.
Complex eval_state_space(const StateSpaceModel& model, Complex s);

/// Finite eigenvalues of (A, E).
std::vector<Complex> poles(const StateSpaceModel& model);

/// Finite eigenvalues of ([A B; C D], [E 0; 0 0]) with D = 0.
std::vector<Complex> zeros(const StateSpaceModel& model);

/// Zeros of a general descriptor system with scalar feedthrough D.
std::vector<Complex> descriptor_zeros(const ComplexMatrix& E, const ComplexMatrix& A, const ComplexVector& B,
                                      const ComplexRowVector& C, Complex D);

struct ProjectedPoints {
    std::vector<Complex> lambda_hat;   // right
    std::vector<Complex> mu_hat;       // left
};

inline constexpr double kProjectedResidualLimit = 1e-8;

/// Projected interpolation points: eigenvalues of (Ls^ - V^ R^, L^) and
/// (Ls^ - L^dir W^, L^) with L^ = Y^* L X etc. Checks the projected
/// Sylvester identities before returning; throws ill_conditioned when L^
/// is numerically singular.
ProjectedPoints projected_points(const LoewnerPencil& pencil, const ComplexMatrix& Y, const ComplexMatrix& X);

/// Frobenius norms of  M L - L Lambda - (V R - L W)  and
/// M Ls - Ls Lambda - (M V R - L W Lambda), each divided by ||Ls||.
std::pair<double, double> sylvester_residual(const LoewnerPencil& pencil);

struct LoewnerFit {
    DataPartition partition;
    LoewnerPencil pencil;
    PencilSvd svd;
    TruncationResult truncation;
};

/// partition + build_pencil + truncate.
LoewnerFit fit(const SampleSet& samples, Truncation mode,
               PartitionScheme scheme = PartitionScheme::epsilon_paired);

struct TrajectoryStep {
    std::size_t nx = 0;
    std::size_t ny = 0;
    ProjectedPoints points;

    std::size_t grid_size() const { return nx * ny; }
};

/// Fits the order-r Loewner model on the grids a x a, 2a x 2a, ..., n a x n a
/// and records the projected points of each. Even grid heights are bumped by
/// one so the real axis is sampled and conjugate closure stays exact.
std::vector<TrajectoryStep> trajectory_study(const Oracle& oracle, const Domain& domain, std::size_t a,
                                             std::size_t n_steps, std::size_t order,
                                             PartitionScheme scheme = PartitionScheme::epsilon_paired);

/// Largest |lambda^ - mu^| after greedy nearest matching of the two lists.
double max_matched_gap(const ProjectedPoints& points);

} // namespace ratapprox::loewner
