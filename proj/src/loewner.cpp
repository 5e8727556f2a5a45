#include "ratapprox/loewner.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

#include "ratapprox/error.hpp"
#include "ratapprox/kernels.hpp"
#include "ratapprox/linalg.hpp"

namespace ratapprox::loewner {

namespace {

constexpr double kMaxProjectedConditioning = 1e14;

} // namespace

PartitionScheme parse_scheme(std::string_view name)
{
    if (name == "alternating") {
        return PartitionScheme::alternating;
    }
    if (name == "half_split") {
        return PartitionScheme::half_split;
    }
    if (name == "epsilon_paired") {
        return PartitionScheme::epsilon_paired;
    }
    throw Error(ErrorKind::invalid_argument, "unknown partition scheme '" + std::string(name) + "'");
}

std::string_view to_string(PartitionScheme scheme)
{
    switch (scheme) {
    case PartitionScheme::alternating: return "alternating";
    case PartitionScheme::half_split: return "half_split";
    case PartitionScheme::epsilon_paired: return "epsilon_paired";
    }
    return "unknown";
}

DataPartition partition(const SampleSet& samples, PartitionScheme scheme)
{
    const auto& s = samples.samples;
    const auto partner = conjugate_partners(s);

    // A unit is a conjugate pair (upper member first) or a single point.
    std::vector<std::vector<std::size_t>> units;
    std::vector<bool> taken(s.size(), false);
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (taken[i]) {
            continue;
        }
        taken[i] = true;
        if (!samples.conjugate_closed || s[i].point.imag() == 0.0) {
            units.push_back({i});
            continue;
        }
        if (partner[i] < 0) {
            std::ostringstream msg;
            msg << "partition: point " << s[i].point << " has no conjugate partner";
            throw Error(ErrorKind::partition_impossible, msg.str(), s[i].point);
        }
        const auto j = static_cast<std::size_t>(partner[i]);
        taken[j] = true;
        if (s[i].point.imag() > 0.0) {
            units.push_back({i, j});
        } else {
            units.push_back({j, i});
        }
    }
    if (units.size() < 2) {
        throw Error(ErrorKind::partition_impossible, "partition: need at least two samples (or conjugate pairs)");
    }

    std::vector<std::size_t> order(units.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    if (scheme == PartitionScheme::epsilon_paired) {
        std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
            const Complex pa = s[units[a].front()].point;
            const Complex pb = s[units[b].front()].point;
            if (pa.real() != pb.real()) {
                return pa.real() < pb.real();
            }
            return std::abs(pa.imag()) < std::abs(pb.imag());
        });
    }

    DataPartition out;
    const std::size_t half = (units.size() + 1) / 2;
    for (std::size_t pos = 0; pos < order.size(); ++pos) {
        const bool left = scheme == PartitionScheme::half_split ? pos < half : pos % 2 == 0;
        auto& side = left ? out.left : out.right;
        for (std::size_t idx : units[order[pos]]) {
            side.push_back(s[idx]);
        }
    }
    return out;
}

LoewnerPencil build_pencil(const DataPartition& partition)
{
    if (partition.left.empty() || partition.right.empty()) {
        throw Error(ErrorKind::insufficient_data, "build_pencil: left and right data must be non-empty");
    }
    const std::size_t q = partition.left.size();
    const std::size_t k = partition.right.size();
    LoewnerPencil p;
    p.mu.resize(static_cast<Eigen::Index>(q));
    p.V.resize(static_cast<Eigen::Index>(q));
    p.lambda.resize(static_cast<Eigen::Index>(k));
    p.W.resize(static_cast<Eigen::Index>(k));
    for (std::size_t j = 0; j < q; ++j) {
        p.mu(static_cast<Eigen::Index>(j)) = partition.left[j].point;
        p.V(static_cast<Eigen::Index>(j)) = partition.left[j].value;
    }
    for (std::size_t i = 0; i < k; ++i) {
        p.lambda(static_cast<Eigen::Index>(i)) = partition.right[i].point;
        p.W(static_cast<Eigen::Index>(i)) = partition.right[i].value;
    }
    auto blocks = kernels::parallel::loewner_matrices({p.mu.data(), q}, {p.V.data(), q}, {p.lambda.data(), k},
                                                      {p.W.data(), k});
    p.L = std::move(blocks.L);
    p.Ls = std::move(blocks.Ls);
    return p;
}

PencilSvd decompose(const LoewnerPencil& pencil)
{
    const Eigen::Index q = pencil.rows();
    const Eigen::Index k = pencil.cols();
    ComplexMatrix horizontal(q, 2 * k);
    horizontal << pencil.L, pencil.Ls;
    ComplexMatrix vertical(2 * q, k);
    vertical << pencil.L, pencil.Ls;
    PencilSvd out;
    out.horizontal = linalg::svd(horizontal);
    out.vertical = linalg::svd(vertical);
    return out;
}

TruncationResult truncate(const LoewnerPencil& pencil, Truncation mode, bool check_conditioning)
{
    return truncate(pencil, decompose(pencil), mode, check_conditioning);
}

TruncationResult truncate(const LoewnerPencil& pencil, const PencilSvd& svd, Truncation mode,
                          bool check_conditioning)
{
    const Eigen::Index q = pencil.rows();
    const Eigen::Index k = pencil.cols();
    const auto& left = svd.horizontal;
    const auto& right = svd.vertical;
    const double sigma1 = left.singular_values(0);
    if (!(sigma1 > 0.0)) {
        throw Error(ErrorKind::rank_zero, "truncate: Loewner pencil is identically zero");
    }

    const auto max_order = static_cast<std::size_t>(std::min(q, k));
    std::size_t r = 0;
    if (mode.mode == Truncation::Mode::by_order) {
        if (mode.order < 1 || mode.order > max_order) {
            std::ostringstream msg;
            msg << "truncate: order " << mode.order << " outside [1, " << max_order << "]";
            throw Error(ErrorKind::invalid_argument, msg.str());
        }
        r = mode.order;
    } else {
        if (!(mode.tolerance > 0.0 && mode.tolerance < 1.0)) {
            throw Error(ErrorKind::invalid_argument, "truncate: tolerance must lie in (0, 1)");
        }
        r = max_order;
        for (std::size_t i = 1; i < max_order; ++i) {
            if (left.singular_values(static_cast<Eigen::Index>(i)) / sigma1 <= mode.tolerance) {
                r = i;
                break;
            }
        }
    }

    TruncationResult out;
    out.singular_values.reserve(static_cast<std::size_t>(left.singular_values.size()));
    for (Eigen::Index i = 0; i < left.singular_values.size(); ++i) {
        out.singular_values.push_back(left.singular_values(i) / sigma1);
    }
    const double sigma1_v = right.singular_values(0);
    for (Eigen::Index i = 0; i < right.singular_values.size(); ++i) {
        out.singular_values_vertical.push_back(right.singular_values(i) / sigma1_v);
    }
    const auto rr = static_cast<Eigen::Index>(r);
    out.Y = left.U.leftCols(rr);
    out.X = right.V.leftCols(rr);

    auto& m = out.model;
    m.E = -(out.Y.adjoint() * pencil.L * out.X);
    m.A = -(out.Y.adjoint() * pencil.Ls * out.X);
    m.B = out.Y.adjoint() * pencil.V;
    m.C = pencil.W * out.X;
    m.e_condition = linalg::condition_number(m.E);
    if (check_conditioning && !(m.e_condition <= kMaxEConditioning)) {
        std::ostringstream msg;
        msg << "truncate: cond(E) = " << m.e_condition << " exceeds " << kMaxEConditioning << " at order " << r
            << "; choose a smaller order";
        throw Error(ErrorKind::ill_conditioned, msg.str());
    }
    return out;
}

Complex eval_state_space(const StateSpaceModel& model, Complex s)
{
    const ComplexMatrix pencil = s * model.E - model.A;
    const Eigen::PartialPivLU<ComplexMatrix> lu(pencil);
    if (!(lu.rcond() > std::numeric_limits<double>::epsilon())) {
        std::ostringstream msg;
        msg << "eval_state_space: sE - A is singular at s = " << s;
        throw Error(ErrorKind::singular_at_point, msg.str(), s);
    }
    const ComplexVector x = lu.solve(model.B);
    return (model.C * x)(0);
}

std::vector<Complex> poles(const StateSpaceModel& model)
{
    return linalg::finite_generalized_eigenvalues(model.A, model.E);
}

std::vector<Complex> descriptor_zeros(const ComplexMatrix& E, const ComplexMatrix& A, const ComplexVector& B,
                                      const ComplexRowVector& C, Complex D)
{
    const Eigen::Index n = A.rows();
    ComplexMatrix M = ComplexMatrix::Zero(n + 1, n + 1);
    ComplexMatrix N = ComplexMatrix::Zero(n + 1, n + 1);
    M.topLeftCorner(n, n) = A;
    M.topRightCorner(n, 1) = B;
    M.bottomLeftCorner(1, n) = C;
    M(n, n) = D;
    N.topLeftCorner(n, n) = E;
    return linalg::finite_generalized_eigenvalues(M, N);
}

std::vector<Complex> zeros(const StateSpaceModel& model)
{
    return descriptor_zeros(model.E, model.A, model.B, model.C, Complex(0.0, 0.0));
}

ProjectedPoints projected_points(const LoewnerPencil& pencil, const ComplexMatrix& Y, const ComplexMatrix& X)
{
    if (Y.rows() != pencil.rows() || X.rows() != pencil.cols() || Y.cols() != X.cols()) {
        throw Error(ErrorKind::invalid_argument, "projected_points: projector shapes do not match the pencil");
    }
    const ComplexMatrix Lh = Y.adjoint() * pencil.L * X;
    const ComplexMatrix Lsh = Y.adjoint() * pencil.Ls * X;
    const ComplexVector Vh = Y.adjoint() * pencil.V;
    const ComplexVector Ldir = Y.adjoint() * ComplexVector::Ones(pencil.rows());
    const ComplexRowVector Wh = pencil.W * X;
    const ComplexRowVector Rh = ComplexRowVector::Ones(pencil.cols()) * X;

    const double cond = linalg::condition_number(Lh);
    if (!(cond < kMaxProjectedConditioning)) {
        std::ostringstream msg;
        msg << "projected_points: projected Loewner matrix is singular (cond = " << cond
            << "); truncation order too high";
        throw Error(ErrorKind::ill_conditioned, msg.str());
    }

    const ComplexMatrix right_rhs = Lsh - Vh * Rh;
    const ComplexMatrix left_rhs = Lsh - Ldir * Wh;
    const Eigen::PartialPivLU<ComplexMatrix> lu(Lh);
    const ComplexMatrix lambda_mat = lu.solve(right_rhs);
    const ComplexMatrix mu_mat = Lh.transpose().partialPivLu().solve(left_rhs.transpose()).transpose();

    const double scale = Lsh.norm();
    const double res_right = (Lsh - Lh * lambda_mat - Vh * Rh).norm() / scale;
    const double res_left = (Lsh - mu_mat * Lh - Ldir * Wh).norm() / scale;
    if (!(res_right <= kProjectedResidualLimit && res_left <= kProjectedResidualLimit)) {
        std::ostringstream msg;
        msg << "projected_points: projected Sylvester residuals " << res_right << ", " << res_left << " exceed "
            << kProjectedResidualLimit;
        throw Error(ErrorKind::ill_conditioned, msg.str());
    }

    ProjectedPoints out;
    out.lambda_hat = linalg::finite_generalized_eigenvalues(right_rhs, Lh);
    out.mu_hat = linalg::finite_generalized_eigenvalues(left_rhs, Lh);
    return out;
}

std::pair<double, double> sylvester_residual(const LoewnerPencil& p)
{
    const Eigen::Index q = p.rows();
    const Eigen::Index k = p.cols();
    double first = 0.0;
    double second = 0.0;
    for (Eigen::Index i = 0; i < k; ++i) {
        for (Eigen::Index j = 0; j < q; ++j) {
            const Complex mu = p.mu(j);
            const Complex lam = p.lambda(i);
            const Complex r1 = mu * p.L(j, i) - p.L(j, i) * lam - (p.V(j) - p.W(i));
            const Complex r2 = mu * p.Ls(j, i) - p.Ls(j, i) * lam - (mu * p.V(j) - p.W(i) * lam);
            first += std::norm(r1);
            second += std::norm(r2);
        }
    }
    const double scale = p.Ls.norm();
    if (scale == 0.0) {
        return {std::sqrt(first), std::sqrt(second)};
    }
    return {std::sqrt(first) / scale, std::sqrt(second) / scale};
}

LoewnerFit fit(const SampleSet& samples, Truncation mode, PartitionScheme scheme)
{
    LoewnerFit out;
    out.partition = partition(samples, scheme);
    out.pencil = build_pencil(out.partition);
    out.svd = decompose(out.pencil);
    out.truncation = truncate(out.pencil, out.svd, mode);
    return out;
}

std::vector<TrajectoryStep> trajectory_study(const Oracle& oracle, const Domain& domain, std::size_t a,
                                             std::size_t n_steps, std::size_t order, PartitionScheme scheme)
{
    if (a < 3 || n_steps < 1) {
        throw Error(ErrorKind::invalid_argument, "trajectory_study: need a >= 3 and n_steps >= 1");
    }
    std::vector<TrajectoryStep> steps;
    for (std::size_t i = 1; i <= n_steps; ++i) {
        TrajectoryStep step;
        step.nx = i * a;
        step.ny = (i * a) % 2 == 0 ? i * a + 1 : i * a;
        const auto samples = sample_oracle(structured_grid(domain, step.nx, step.ny, true), oracle);
        const auto f = fit(samples, Truncation::by_order(order), scheme);
        step.points = projected_points(f.pencil, f.truncation.Y, f.truncation.X);
        steps.push_back(std::move(step));
    }
    return steps;
}

double max_matched_gap(const ProjectedPoints& points)
{
    const auto& a = points.lambda_hat;
    const auto& b = points.mu_hat;
    struct Candidate {
        double gap;
        std::size_t i, j;
    };
    std::vector<Candidate> all;
    for (std::size_t i = 0; i < a.size(); ++i) {
        for (std::size_t j = 0; j < b.size(); ++j) {
            all.push_back({std::abs(a[i] - b[j]), i, j});
        }
    }
    std::stable_sort(all.begin(), all.end(), [](const Candidate& x, const Candidate& y) { return x.gap < y.gap; });
    std::vector<bool> used_a(a.size(), false);
    std::vector<bool> used_b(b.size(), false);
    double worst = 0.0;
    for (const auto& c : all) {
        if (used_a[c.i] || used_b[c.j]) {
            continue;
        }
        used_a[c.i] = used_b[c.j] = true;
        worst = std::max(worst, c.gap);
    }
    return worst;
}

} // namespace ratapprox::loewner
