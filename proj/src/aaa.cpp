#include "ratapprox/aaa.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <sstream>

#include "ratapprox/error.hpp"
#include "ratapprox/kernels.hpp"
#include "ratapprox/linalg.hpp"

namespace ratapprox::aaa {

Complex eval_barycentric(const BarycentricModel& model, Complex s)
{
    const std::size_t m = model.support.size();
    if (m == 0) {
        throw Error(ErrorKind::invalid_argument, "eval_barycentric: empty model");
    }
    Complex num(0.0, 0.0);
    Complex den(0.0, 0.0);
    for (std::size_t j = 0; j < m; ++j) {
        const Complex w = model.weights[j];
        if (s == model.support[j]) {
            if (w != Complex(0.0, 0.0)) {
                return model.values[j];
            }
            continue;
        }
        const Complex c = w / (s - model.support[j]);
        num += c * model.values[j];
        den += c;
    }
    if (den == Complex(0.0, 0.0)) {
        return {std::numeric_limits<double>::infinity(), 0.0};
    }
    return num / den;
}

namespace {

// Columns of the weight problem. A real point or an unconstrained support
// point is one column; a conjugate pair in real mode shares one complex
// weight split into two real parameters.
struct WeightLayout {
    std::vector<std::vector<std::size_t>> groups;   // positions in the support list
};

WeightLayout layout_for(const std::vector<Complex>& support, bool real_symmetric)
{
    WeightLayout layout;
    std::vector<bool> used(support.size(), false);
    for (std::size_t j = 0; j < support.size(); ++j) {
        if (used[j]) {
            continue;
        }
        used[j] = true;
        if (real_symmetric && support[j].imag() != 0.0) {
            for (std::size_t k = j + 1; k < support.size(); ++k) {
                if (!used[k] && support[k] == std::conj(support[j])) {
                    used[k] = true;
                    layout.groups.push_back({j, k});
                    break;
                }
            }
            if (layout.groups.empty() || layout.groups.back().front() != j) {
                throw Error(ErrorKind::symmetry, "AAA real mode: support point without conjugate partner",
                            support[j]);
            }
            continue;
        }
        layout.groups.push_back({j});
    }
    return layout;
}

// Loewner matrix rows over the non-support samples.
ComplexMatrix loewner_rows(const std::vector<ComplexSample>& samples, const std::vector<bool>& is_support,
                           const std::vector<Complex>& z, const std::vector<Complex>& f)
{
    std::size_t rows = 0;
    for (bool b : is_support) {
        rows += b ? 0 : 1;
    }
    ComplexMatrix A(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(z.size()));
    Eigen::Index r = 0;
    for (std::size_t i = 0; i < samples.size(); ++i) {
        if (is_support[i]) {
            continue;
        }
        for (std::size_t j = 0; j < z.size(); ++j) {
            A(r, static_cast<Eigen::Index>(j)) = (samples[i].value - f[j]) / (samples[i].point - z[j]);
        }
        ++r;
    }
    return A;
}

std::vector<Complex> weights_from(const ComplexMatrix& A, const std::vector<Complex>& z, bool real_symmetric)
{
    if (!real_symmetric) {
        const ComplexVector v = linalg::smallest_singular_vector(A);
        return {v.data(), v.data() + v.size()};
    }
    const auto layout = layout_for(z, true);
    const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
    const Complex I(0.0, 1.0);
    ComplexMatrix B(A.rows(), static_cast<Eigen::Index>(z.size()));
    Eigen::Index col = 0;
    for (const auto& g : layout.groups) {
        const auto a = static_cast<Eigen::Index>(g[0]);
        if (g.size() == 1) {
            B.col(col++) = A.col(a);
        } else {
            const auto b = static_cast<Eigen::Index>(g[1]);
            B.col(col++) = (A.col(a) + A.col(b)) * inv_sqrt2;
            B.col(col++) = I * (A.col(a) - A.col(b)) * inv_sqrt2;
        }
    }
    RealMatrix stacked(2 * B.rows(), B.cols());
    stacked << B.real(), B.imag();
    const RealVector p = linalg::smallest_singular_vector(stacked);
    std::vector<Complex> w(z.size());
    col = 0;
    for (const auto& g : layout.groups) {
        if (g.size() == 1) {
            w[g[0]] = p(col++);
        } else {
            const Complex c = Complex(p(col), p(col + 1)) * inv_sqrt2;
            col += 2;
            w[g[0]] = c;
            w[g[1]] = std::conj(c);
        }
    }
    return w;
}

std::size_t argmax_lowest(const std::vector<double>& err, const std::vector<bool>& excluded)
{
    std::size_t best = err.size();
    double best_err = -1.0;
    for (std::size_t i = 0; i < err.size(); ++i) {
        if (!excluded[i] && err[i] > best_err) {
            best_err = err[i];
            best = i;
        }
    }
    return best;
}

} // namespace

BarycentricModel solve_weights(const SampleSet& samples, const std::vector<std::size_t>& support,
                               bool real_symmetric)
{
    BarycentricModel model;
    model.real_symmetric = real_symmetric;
    std::vector<bool> is_support(samples.size(), false);
    for (std::size_t idx : support) {
        is_support.at(idx) = true;
        model.support.push_back(samples.samples[idx].point);
        model.values.push_back(samples.samples[idx].value);
    }
    if (samples.size() - support.size() < support.size()) {
        throw Error(ErrorKind::stagnation, "AAA: fewer non-support samples than support points");
    }
    const ComplexMatrix A = loewner_rows(samples.samples, is_support, model.support, model.values);
    if (support.size() == 1) {
        model.weights = {Complex(1.0, 0.0)};
    } else {
        model.weights = weights_from(A, model.support, real_symmetric);
    }
    return model;
}

AaaResult fit_aaa(const SampleSet& samples, const AaaOptions& options)
{
    const auto& s = samples.samples;
    const std::size_t n = s.size();
    if (n < 2) {
        throw Error(ErrorKind::insufficient_data, "fit_aaa: need at least two samples");
    }
    if (!(options.tol > 0.0)) {
        throw Error(ErrorKind::invalid_argument, "fit_aaa: tol must be positive");
    }
    if (options.max_order < 1) {
        throw Error(ErrorKind::invalid_argument, "fit_aaa: max_order must be >= 1");
    }
    if (options.real_mode && !is_conjugate_closed(s, true)) {
        throw Error(ErrorKind::symmetry, "fit_aaa: real mode needs conjugate-closed samples with conjugate values");
    }
    const auto partner = conjugate_partners(s);

    double fmax = 0.0;
    Complex mean(0.0, 0.0);
    for (const auto& smp : s) {
        fmax = std::max(fmax, std::abs(smp.value));
        mean += smp.value;
    }
    mean /= static_cast<double>(n);
    const double threshold = options.tol * fmax;

    std::vector<bool> is_support(n, false);
    std::vector<std::size_t> support;
    std::vector<double> err(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        err[i] = std::abs(s[i].value - mean);
    }
    std::size_t next = argmax_lowest(err, is_support);
    if (options.random_seed) {
        std::mt19937_64 rng(*options.random_seed);
        next = static_cast<std::size_t>(rng() % n);
    }

    AaaResult result;
    std::vector<Complex> points = samples.points();
    while (true) {
        const Complex chosen = s[next].point;
        is_support[next] = true;
        support.push_back(next);
        if (options.real_mode && partner[next] >= 0 && !is_support[static_cast<std::size_t>(partner[next])]) {
            const auto p = static_cast<std::size_t>(partner[next]);
            is_support[p] = true;
            support.push_back(p);
        }
        if (n - support.size() < support.size()) {
            std::ostringstream msg;
            msg << "fit_aaa: stagnated at order " << support.size() << " with " << n - support.size()
                << " remaining samples before reaching tol";
            throw Error(ErrorKind::stagnation, msg.str());
        }
        result.model = solve_weights(samples, support, options.real_mode);

        const auto& model = result.model;
        const auto values = kernels::parallel::evaluate(
            [&model](Complex z) { return eval_barycentric(model, z); }, points);
        double max_err = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            err[i] = is_support[i] ? 0.0 : std::abs(values[i] - s[i].value);
            if (!std::isfinite(err[i])) {
                err[i] = std::numeric_limits<double>::max();
            }
            max_err = std::max(max_err, err[i]);
        }
        result.history.push_back({support.size(), max_err, chosen});
        if (max_err <= threshold || support.size() >= options.max_order) {
            break;
        }
        next = argmax_lowest(err, is_support);
        if (next == n) {
            break;
        }
    }

    const auto& model = result.model;
    const auto check = kernels::parallel::evaluate([&model](Complex z) { return eval_barycentric(model, z); }, points);
    result.max_error = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        result.max_error = std::max(result.max_error, std::abs(check[i] - s[i].value));
    }
    return result;
}

PolesZeros barycentric_poles_zeros(const BarycentricModel& model)
{
    const auto m = static_cast<Eigen::Index>(model.order());
    ComplexMatrix M = ComplexMatrix::Zero(m + 1, m + 1);
    ComplexMatrix N = ComplexMatrix::Identity(m + 1, m + 1);
    N(0, 0) = 0.0;
    for (Eigen::Index j = 0; j < m; ++j) {
        M(0, j + 1) = model.weights[static_cast<std::size_t>(j)];
        M(j + 1, 0) = 1.0;
        M(j + 1, j + 1) = model.support[static_cast<std::size_t>(j)];
    }
    PolesZeros out;
    out.poles = linalg::finite_generalized_eigenvalues(M, N);
    for (Eigen::Index j = 0; j < m; ++j) {
        const auto u = static_cast<std::size_t>(j);
        M(0, j + 1) = model.weights[u] * model.values[u];
    }
    out.zeros = linalg::finite_generalized_eigenvalues(M, N);
    return out;
}

std::vector<Complex> barycentric_residues(const BarycentricModel& model, const std::vector<Complex>& poles)
{
    std::vector<Complex> out;
    out.reserve(poles.size());
    for (const Complex p : poles) {
        Complex num(0.0, 0.0);
        Complex dprime(0.0, 0.0);
        for (std::size_t j = 0; j < model.order(); ++j) {
            const Complex c = 1.0 / (p - model.support[j]);
            num += model.weights[j] * model.values[j] * c;
            dprime -= model.weights[j] * c * c;
        }
        out.push_back(num / dprime);
    }
    return out;
}

BarycentricModel cleanup(const BarycentricModel& model, const SampleSet& samples, double pair_tol)
{
    if (model.order() < 2) {
        return model;
    }
    const auto pz = barycentric_poles_zeros(model);
    const auto res = barycentric_residues(model, pz.poles);
    std::vector<double> mags;
    for (const Complex r : res) {
        mags.push_back(std::abs(r));
    }
    double median = 0.0;
    if (!mags.empty()) {
        auto sorted = mags;
        std::nth_element(sorted.begin(), sorted.begin() + static_cast<std::ptrdiff_t>(sorted.size() / 2), sorted.end());
        median = sorted[sorted.size() / 2];
    }

    std::vector<bool> remove(model.order(), false);
    bool any = false;
    for (std::size_t k = 0; k < pz.poles.size(); ++k) {
        const Complex p = pz.poles[k];
        double gap = std::numeric_limits<double>::infinity();
        for (const Complex z : pz.zeros) {
            gap = std::min(gap, std::abs(p - z));
        }
        const bool doublet = gap <= pair_tol * (1.0 + std::abs(p));
        const bool negligible = mags[k] <= pair_tol * median;
        if (!doublet && !negligible) {
            continue;
        }
        std::size_t nearest = model.order();
        double best = std::numeric_limits<double>::infinity();
        for (std::size_t j = 0; j < model.order(); ++j) {
            if (!remove[j] && std::abs(model.support[j] - p) < best) {
                best = std::abs(model.support[j] - p);
                nearest = j;
            }
        }
        if (nearest < model.order()) {
            remove[nearest] = true;
            any = true;
        }
    }
    if (!any) {
        return model;
    }

    std::vector<std::size_t> keep;
    const auto& s = samples.samples;
    for (std::size_t j = 0; j < model.order(); ++j) {
        if (remove[j]) {
            continue;
        }
        for (std::size_t i = 0; i < s.size(); ++i) {
            if (s[i].point == model.support[j]) {
                keep.push_back(i);
                break;
            }
        }
    }
    if (keep.empty()) {
        return model;
    }
    bool real = model.real_symmetric;
    if (real) {
        std::vector<ComplexSample> kept;
        for (std::size_t i : keep) {
            kept.push_back(s[i]);
        }
        real = is_conjugate_closed(kept);
    }
    return solve_weights(samples, keep, real);
}

} // namespace ratapprox::aaa
