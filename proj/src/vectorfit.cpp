#include "ratapprox/vectorfit.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>
#include <sstream>

#include <Eigen/Eigenvalues>

#include "ratapprox/error.hpp"
#include "ratapprox/linalg.hpp"
#include "ratapprox/loewner.hpp"

namespace ratapprox::vf {

namespace {

// A real pole, or the upper member of a conjugate pair.
struct PoleGroup {
    Complex pole;
    bool pair = false;
};

std::vector<PoleGroup> group_poles(const std::vector<Complex>& poles)
{
    std::vector<PoleGroup> groups;
    std::vector<bool> used(poles.size(), false);
    for (std::size_t i = 0; i < poles.size(); ++i) {
        if (used[i]) {
            continue;
        }
        used[i] = true;
        const Complex p = poles[i];
        if (p.imag() == 0.0) {
            groups.push_back({p, false});
            continue;
        }
        bool found = false;
        for (std::size_t j = i + 1; j < poles.size(); ++j) {
            if (!used[j] && poles[j] == std::conj(p)) {
                used[j] = true;
                found = true;
                break;
            }
        }
        if (!found) {
            throw Error(ErrorKind::symmetry, "vector fitting: pole without conjugate partner", p);
        }
        groups.push_back({p.imag() > 0.0 ? p : std::conj(p), true});
    }
    return groups;
}

std::vector<Complex> flatten(const std::vector<PoleGroup>& groups)
{
    std::vector<Complex> out;
    for (const auto& g : groups) {
        out.push_back(g.pole);
        if (g.pair) {
            out.push_back(std::conj(g.pole));
        }
    }
    return out;
}

std::size_t basis_size(const std::vector<PoleGroup>& groups)
{
    std::size_t n = 0;
    for (const auto& g : groups) {
        n += g.pair ? 2 : 1;
    }
    return n;
}

// Real basis functions at s: 1/(s-a) for a real pole; 1/(s-a) + 1/(s-conj a)
// and i/(s-a) - i/(s-conj a) for a pair.
void basis_row(const std::vector<PoleGroup>& groups, Complex s, Complex* out)
{
    const Complex I(0.0, 1.0);
    for (const auto& g : groups) {
        const Complex u = 1.0 / (s - g.pole);
        if (!g.pair) {
            *out++ = u;
            continue;
        }
        const Complex v = 1.0 / (s - std::conj(g.pole));
        *out++ = u + v;
        *out++ = I * (u - v);
    }
}

// Scales columns to unit norm, solves the real least-squares problem and
// returns the unscaled solution together with the scaled matrix's
// condition number.
RealVector scaled_solve(RealMatrix A, const RealVector& b, double& condition)
{
    RealVector scale(A.cols());
    for (Eigen::Index j = 0; j < A.cols(); ++j) {
        const double nrm = A.col(j).norm();
        scale(j) = nrm > 0.0 ? 1.0 / nrm : 1.0;
        A.col(j) *= scale(j);
    }
    const auto sv = linalg::svd(A.cast<Complex>(), linalg::SvdVectors::none).singular_values;
    condition = sv(sv.size() - 1) > 0.0 ? sv(0) / sv(sv.size() - 1) : std::numeric_limits<double>::infinity();
    RealVector x = linalg::least_squares(A, b);
    return x.cwiseProduct(scale);
}

std::vector<double> row_weights(const SampleSet& samples, const std::vector<double>* weights)
{
    if (weights == nullptr) {
        return std::vector<double>(samples.size(), 1.0);
    }
    if (weights->size() != samples.size()) {
        throw Error(ErrorKind::invalid_argument, "vector fitting: weight vector length differs from sample count");
    }
    for (double w : *weights) {
        if (!(w >= 0.0) || !std::isfinite(w)) {
            throw Error(ErrorKind::invalid_argument, "vector fitting: weights must be finite and non-negative");
        }
    }
    return *weights;
}

double max_move(const std::vector<Complex>& from, const std::vector<Complex>& to, bool& converged)
{
    double worst = 0.0;
    converged = true;
    for (const Complex p : to) {
        double best = std::numeric_limits<double>::infinity();
        for (const Complex q : from) {
            best = std::min(best, std::abs(p - q));
        }
        worst = std::max(worst, best);
        if (best > kConvergenceTol * (1.0 + std::abs(p))) {
            converged = false;
        }
    }
    return worst;
}

} // namespace

Complex eval_pole_residue(const PoleResidueModel& model, Complex s)
{
    Complex sum(model.d + s.real() * model.h, s.imag() * model.h);
    for (std::size_t n = 0; n < model.poles.size(); ++n) {
        if (s == model.poles[n]) {
            throw Error(ErrorKind::pole, "eval_pole_residue: evaluation at a pole", s);
        }
        sum += model.residues[n] / (s - model.poles[n]);
    }
    return sum;
}

PolesZeros pr_poles_zeros(const PoleResidueModel& model)
{
    const auto n = static_cast<Eigen::Index>(model.order());
    const Eigen::Index extra = model.h != 0.0 ? 2 : 0;
    const Eigen::Index m = n + extra;
    ComplexMatrix E = ComplexMatrix::Zero(m, m);
    ComplexMatrix A = ComplexMatrix::Zero(m, m);
    ComplexVector B = ComplexVector::Zero(m);
    ComplexRowVector C = ComplexRowVector::Zero(m);
    for (Eigen::Index i = 0; i < n; ++i) {
        E(i, i) = 1.0;
        A(i, i) = model.poles[static_cast<std::size_t>(i)];
        B(i) = 1.0;
        C(i) = model.residues[static_cast<std::size_t>(i)];
    }
    if (extra != 0) {
        // (s N - I)^{-1} = -(I + s N) for N = [0 1; 0 0], giving s h.
        E(n, n + 1) = 1.0;
        A(n, n) = 1.0;
        A(n + 1, n + 1) = 1.0;
        B(n + 1) = 1.0;
        C(n) = -model.h;
    }
    PolesZeros out;
    out.poles = model.poles;
    if (m > 0) {
        out.zeros = loewner::descriptor_zeros(E, A, B, C, Complex(model.d, 0.0));
    }
    return out;
}

std::vector<Complex> initial_poles(std::size_t order, double x_min, double x_max)
{
    if (order == 0) {
        throw Error(ErrorKind::invalid_argument, "initial_poles: order must be >= 1");
    }
    const double span = x_max - x_min;
    if (!(span > 0.0)) {
        throw Error(ErrorKind::invalid_argument, "initial_poles: empty real extent");
    }
    const std::size_t pairs = order / 2;
    std::vector<Complex> poles;
    for (std::size_t k = 0; k < pairs; ++k) {
        const double t = pairs > 1 ? static_cast<double>(k) / static_cast<double>(pairs - 1) : 0.5;
        const double beta = span * (0.5 + 0.7 * t);
        poles.emplace_back(-beta / 100.0, beta);
        poles.emplace_back(-beta / 100.0, -beta);
    }
    if (order % 2 == 1) {
        poles.emplace_back(-span / 200.0, 0.0);
    }
    return poles;
}

PoleResidueModel fit_residues(const SampleSet& samples, const std::vector<Complex>& poles,
                              const std::vector<double>* weights)
{
    const auto groups = group_poles(poles);
    const auto w = row_weights(samples, weights);
    const std::size_t nb = basis_size(groups);
    const std::size_t ns = samples.size();
    const auto cols = static_cast<Eigen::Index>(nb + 2);
    RealMatrix A(static_cast<Eigen::Index>(2 * ns), cols);
    RealVector b(static_cast<Eigen::Index>(2 * ns));
    std::vector<Complex> row(nb + 2);
    for (std::size_t i = 0; i < ns; ++i) {
        const Complex s = samples.samples[i].point;
        basis_row(groups, s, row.data());
        row[nb] = 1.0;
        row[nb + 1] = s;
        const auto r = static_cast<Eigen::Index>(i);
        for (Eigen::Index j = 0; j < cols; ++j) {
            const Complex v = w[i] * row[static_cast<std::size_t>(j)];
            A(r, j) = v.real();
            A(static_cast<Eigen::Index>(ns) + r, j) = v.imag();
        }
        const Complex f = w[i] * samples.samples[i].value;
        b(r) = f.real();
        b(static_cast<Eigen::Index>(ns) + r) = f.imag();
    }
    double condition = 0.0;
    const RealVector x = scaled_solve(std::move(A), b, condition);

    PoleResidueModel model;
    model.poles = flatten(groups);
    Eigen::Index k = 0;
    for (const auto& g : groups) {
        if (!g.pair) {
            model.residues.emplace_back(x(k++), 0.0);
            continue;
        }
        const Complex c(x(k), x(k + 1));
        k += 2;
        model.residues.push_back(c);
        model.residues.push_back(std::conj(c));
    }
    model.d = x(k);
    model.h = x(k + 1);
    return model;
}

VfResult fit_vf(const SampleSet& samples, const VfOptions& options)
{
    if (options.order < 1) {
        throw Error(ErrorKind::invalid_argument, "fit_vf: order must be >= 1");
    }
    if (samples.size() < 2 * (options.order + 2)) {
        throw Error(ErrorKind::insufficient_data, "fit_vf: need at least 2 * (order + 2) samples");
    }
    if (!is_conjugate_closed(samples.samples, true)) {
        throw Error(ErrorKind::symmetry, "fit_vf: samples must be conjugate-closed with conjugate values");
    }
    const auto w = row_weights(samples, options.weights ? &*options.weights : nullptr);

    std::vector<Complex> start;
    if (options.initial_poles) {
        start = *options.initial_poles;
        if (start.size() != options.order) {
            throw Error(ErrorKind::invalid_argument, "fit_vf: initial pole count differs from order");
        }
    } else {
        double lo = std::numeric_limits<double>::infinity();
        double hi = -lo;
        for (const auto& smp : samples.samples) {
            lo = std::min(lo, smp.point.real());
            hi = std::max(hi, smp.point.real());
        }
        start = initial_poles(options.order, lo, hi);
    }
    auto groups = group_poles(start);

    VfResult result;
    const std::size_t ns = samples.size();
    const std::size_t nb = basis_size(groups);
    const auto cols = static_cast<Eigen::Index>(2 * nb + 2);
    std::vector<Complex> row(nb);
    for (std::size_t it = 0; it < options.n_iter; ++it) {
        RealMatrix A(static_cast<Eigen::Index>(2 * ns), cols);
        RealVector b(static_cast<Eigen::Index>(2 * ns));
        for (std::size_t i = 0; i < ns; ++i) {
            const Complex s = samples.samples[i].point;
            const Complex f = samples.samples[i].value;
            basis_row(groups, s, row.data());
            const auto r = static_cast<Eigen::Index>(i);
            const auto r2 = static_cast<Eigen::Index>(ns) + r;
            for (std::size_t j = 0; j < nb; ++j) {
                const Complex p = w[i] * row[j];
                const Complex q = -w[i] * f * row[j];
                const auto jj = static_cast<Eigen::Index>(j);
                A(r, jj) = p.real();
                A(r2, jj) = p.imag();
                A(r, static_cast<Eigen::Index>(nb + 2) + jj) = q.real();
                A(r2, static_cast<Eigen::Index>(nb + 2) + jj) = q.imag();
            }
            const auto jd = static_cast<Eigen::Index>(nb);
            A(r, jd) = w[i];
            A(r2, jd) = 0.0;
            A(r, jd + 1) = w[i] * s.real();
            A(r2, jd + 1) = w[i] * s.imag();
            b(r) = w[i] * f.real();
            b(r2) = w[i] * f.imag();
        }
        VfStep step;
        step.iter = it;
        const RealVector x = scaled_solve(A, b, step.condition);
        step.ill_conditioned = !(step.condition < kIllConditionedLimit);
        step.linearized_residual = (A * x - b).norm();

        // Zeros of sigma: eigenvalues of A_real - b c^T in the real block form.
        const auto n = static_cast<Eigen::Index>(nb);
        RealMatrix H = RealMatrix::Zero(n, n);
        RealVector bb = RealVector::Zero(n);
        Eigen::Index k = 0;
        for (const auto& g : groups) {
            if (!g.pair) {
                H(k, k) = g.pole.real();
                bb(k) = 1.0;
                ++k;
                continue;
            }
            H(k, k) = g.pole.real();
            H(k, k + 1) = g.pole.imag();
            H(k + 1, k) = -g.pole.imag();
            H(k + 1, k + 1) = g.pole.real();
            bb(k) = 2.0;
            k += 2;
        }
        const RealVector cbar = x.segment(static_cast<Eigen::Index>(nb + 2), n);
        H -= bb * cbar.transpose();
        Eigen::EigenSolver<RealMatrix> eig(H, false);
        if (eig.info() != Eigen::Success) {
            throw Error(ErrorKind::divergence, "fit_vf: pole relocation eigenproblem failed");
        }
        std::vector<Complex> next;
        for (Eigen::Index i = 0; i < n; ++i) {
            const Complex p = eig.eigenvalues()(i);
            if (!std::isfinite(std::abs(p)) || std::abs(p) > kDivergenceLimit) {
                std::ostringstream msg;
                msg << "fit_vf: pole magnitude " << std::abs(p) << " exceeds " << kDivergenceLimit << " at iteration "
                    << it;
                throw Error(ErrorKind::divergence, msg.str(), p);
            }
            if (p.imag() >= 0.0) {
                next.push_back(p);
                if (p.imag() > 0.0) {
                    next.push_back(std::conj(p));
                }
            }
        }
        const auto old = flatten(groups);
        groups = group_poles(next);
        bool converged = false;
        step.max_pole_move = max_move(old, flatten(groups), converged);
        result.history.push_back(step);
        if (converged) {
            result.converged = true;
            break;
        }
    }

    result.model = fit_residues(samples, flatten(groups), &w);
    return result;
}

void write_history_csv(std::ostream& os, const std::vector<VfStep>& history, std::string_view metadata)
{
    if (!metadata.empty()) {
        os << "# " << metadata << '\n';
    }
    os << "iter,max_pole_move,linearized_residual\n";
    const auto old = os.precision(17);
    for (const auto& h : history) {
        os << h.iter << ',' << h.max_pole_move << ',' << h.linearized_residual << '\n';
    }
    os.precision(old);
}

} // namespace ratapprox::vf
