#include "ratapprox/greedy_loewner.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>
#include <random>
#include <sstream>

#include "ratapprox/error.hpp"
#include "ratapprox/kernels.hpp"

namespace ratapprox::greedy {

namespace {

constexpr double kRankCutoff = 1e-14;
constexpr std::size_t kBlockedFactor = 4;

using Unit = std::vector<std::size_t>;

std::vector<Unit> make_units(const SampleSet& samples)
{
    const auto& s = samples.samples;
    const auto partner = conjugate_partners(s);
    std::vector<Unit> units;
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
            throw Error(ErrorKind::partition_impossible, "fit_greedy: point without conjugate partner", s[i].point);
        }
        const auto j = static_cast<std::size_t>(partner[i]);
        taken[j] = true;
        units.push_back(s[i].point.imag() > 0.0 ? Unit{i, j} : Unit{j, i});
    }
    return units;
}

struct Built {
    loewner::StateSpaceModel model;
    std::size_t order = 0;
    std::size_t rank = 0;
};

// Largest admissible order <= cap: limited by the numerical rank of the
// pencil and lowered further while E is too ill-conditioned.
Built build_model(const loewner::DataPartition& part, std::size_t cap)
{
    const auto pencil = loewner::build_pencil(part);
    const auto svd = loewner::decompose(pencil);
    const auto& sv = svd.horizontal.singular_values;
    std::size_t rank = 0;
    for (Eigen::Index i = 0; i < sv.size(); ++i) {
        if (sv(i) > kRankCutoff * sv(0)) {
            ++rank;
        }
    }
    std::size_t r = std::min({cap, rank, static_cast<std::size_t>(pencil.rows()),
                              static_cast<std::size_t>(pencil.cols())});
    while (r > 0) {
        try {
            return {loewner::truncate(pencil, svd, loewner::Truncation::by_order(r)).model, r, rank};
        } catch (const Error& e) {
            if (e.kind() != ErrorKind::ill_conditioned) {
                throw;
            }
            --r;
        }
    }
    throw Error(ErrorKind::rank_zero, "fit_greedy: Loewner pencil has numerical rank zero");
}

} // namespace

GreedyResult fit_greedy(const SampleSet& samples, const GreedyOptions& options)
{
    const auto& s = samples.samples;
    if (options.order_target < 1) {
        throw Error(ErrorKind::invalid_argument, "fit_greedy: order_target must be >= 1");
    }
    if (s.size() < 2 * options.order_target) {
        throw Error(ErrorKind::insufficient_data, "fit_greedy: need at least 2 * order_target samples");
    }
    if (!(options.improvement > 0.0 && options.improvement < 1.0)) {
        throw Error(ErrorKind::invalid_argument, "fit_greedy: improvement factor must lie in (0, 1)");
    }
    const auto units = make_units(samples);
    if (units.size() < 2) {
        throw Error(ErrorKind::insufficient_data, "fit_greedy: need at least two samples (or conjugate pairs)");
    }

    std::vector<bool> used(units.size(), false);
    loewner::DataPartition part;
    auto add = [&](std::vector<ComplexSample>& side, std::size_t u, std::vector<Complex>& chosen) {
        used[u] = true;
        for (std::size_t idx : units[u]) {
            side.push_back(s[idx]);
            chosen.push_back(s[idx].point);
        }
    };

    GreedyResult result;
    std::vector<Complex> chosen;
    {
        std::mt19937_64 rng(options.seed);
        const auto n = static_cast<std::uint64_t>(units.size());
        const auto a = static_cast<std::size_t>(rng() % n);
        auto b = static_cast<std::size_t>(rng() % (n - 1));
        if (b >= a) {
            ++b;
        }
        add(part.left, a, chosen);
        add(part.right, b, chosen);
    }

    std::vector<double> unit_error(units.size(), 0.0);
    double best_error = std::numeric_limits<double>::infinity();
    double reference = std::numeric_limits<double>::infinity();
    std::size_t stale = 0;
    std::size_t blocked = 0;
    std::size_t last_order = 0;
    bool have_target = false;

    for (std::size_t step = 0;; ++step) {
        const Built built = build_model(part, options.order_target);

        std::vector<std::size_t> open;
        std::vector<Complex> points;
        for (std::size_t u = 0; u < units.size(); ++u) {
            if (!used[u]) {
                open.push_back(u);
                points.push_back(s[units[u].front()].point);
            }
        }
        const auto& model = built.model;
        const auto values = kernels::parallel::evaluate(
            [&model](Complex z) {
                try {
                    return loewner::eval_state_space(model, z);
                } catch (const Error&) {
                    return Complex(std::numeric_limits<double>::infinity(), 0.0);
                }
            },
            points);
        double max_error = 0.0;
        for (std::size_t k = 0; k < open.size(); ++k) {
            const auto& smp = s[units[open[k]].front()];
            double e = std::abs(values[k] - smp.value);
            if (options.relative_error && smp.value != Complex(0.0, 0.0)) {
                e /= std::abs(smp.value);
            }
            if (!std::isfinite(e)) {
                e = std::numeric_limits<double>::infinity();
            }
            unit_error[open[k]] = e;
            max_error = std::max(max_error, e);
        }
        result.history.push_back({step, part.left.size(), part.right.size(), built.order, max_error, chosen});

        // Rank is there but the admissible order has stopped growing: more
        // data only makes E worse conditioned.
        if (!have_target && built.rank >= options.order_target && built.order <= last_order) {
            if (++blocked >= kBlockedFactor * options.patience) {
                std::ostringstream msg;
                msg << "fit_greedy: order " << options.order_target << " stays ill-conditioned after " << blocked
                    << " steps at sufficient rank; largest admissible order " << built.order;
                throw Error(ErrorKind::ill_conditioned, msg.str());
            }
        } else {
            blocked = 0;
        }
        last_order = built.order;

        if (built.order == options.order_target) {
            have_target = true;
            if (max_error < best_error) {
                best_error = max_error;
                result.model = built.model;
                result.partition = part;
                result.best_step = step;
            }
            if (max_error <= options.improvement * reference || !std::isfinite(reference)) {
                reference = max_error;
                stale = 0;
            } else if (++stale >= options.patience) {
                break;
            }
        }
        if (open.size() < 2) {
            break;
        }

        // Worst unit goes left, the next worst right; ties go to the lowest index.
        auto worst = [&](std::size_t skip) {
            std::size_t best = units.size();
            for (std::size_t u : open) {
                if (u != skip && (best == units.size() || unit_error[u] > unit_error[best])) {
                    best = u;
                }
            }
            return best;
        };
        chosen.clear();
        const std::size_t a = worst(units.size());
        const std::size_t b = worst(a);
        add(part.left, a, chosen);
        add(part.right, b, chosen);
    }

    if (!have_target) {
        std::ostringstream msg;
        msg << "fit_greedy: data never supported a model of order " << options.order_target;
        throw Error(ErrorKind::insufficient_data, msg.str());
    }
    return result;
}

void write_history_csv(std::ostream& os, const std::vector<GreedyStep>& history, std::string_view metadata)
{
    if (!metadata.empty()) {
        os << "# " << metadata << '\n';
    }
    os << "step,n_left,n_right,max_error,chosen_re,chosen_im\n";
    const auto old = os.precision(17);
    for (const auto& h : history) {
        for (const Complex c : h.chosen) {
            os << h.step << ',' << h.n_left << ',' << h.n_right << ',' << h.max_error << ',' << c.real() << ','
               << c.imag() << '\n';
        }
    }
    os.precision(old);
}

} // namespace ratapprox::greedy
