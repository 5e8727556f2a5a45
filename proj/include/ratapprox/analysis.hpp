#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ratapprox/model_io.hpp"
#include "ratapprox/sampling.hpp"
#include "ratapprox/types.hpp"

namespace ratapprox::analysis {

struct ErrorReport {
    Domain domain;
    std::size_t nx = 0;
    std::size_t ny = 0;
    double max_error = 0.0;
    Complex argmax;
    std::vector<double> surface;            // |H_r - H|, row j (ordinate) holds nx entries; NaN where excluded
    std::vector<Complex> excluded_points;   // oracle poles
    std::string method_tag;
    std::size_t order = 0;

    Complex point(std::size_t i, std::size_t j) const;   // abscissa index i, ordinate index j
};

/// Evaluates model and oracle on an nx x ny equispaced grid including the
/// domain corners. Points where the oracle reports a pole are excluded;
/// points where the model is singular get an infinite error.
ErrorReport error_grid(const Oracle& model, const Oracle& oracle, const Domain& domain = Domain::omega(),
                       std::size_t nx = 500, std::size_t ny = 500);
ErrorReport error_grid(const RationalModel& model, const Oracle& oracle, const Domain& domain = Domain::omega(),
                       std::size_t nx = 500, std::size_t ny = 500);

/// CSV `re_s,im_s,abs_error` over the non-excluded points.
void write_error_csv(std::ostream& os, const ErrorReport& report, std::string_view metadata = {});
/// Heatmap of log10 error, at most max_cells cells per side.
void write_error_svg(std::ostream& os, const ErrorReport& report, std::size_t max_cells = 250);

struct CancellationPair {
    Complex pole;
    Complex zero;
    double gap = 0.0;
};

inline constexpr double kDefaultCancellationTol = 1e-6;

/// Greedy matching of poles to zeros by increasing distance; a matched
/// pair is reported when |p - z| <= rel_tol (1 + |p|). The matching itself
/// does not depend on rel_tol, so a smaller tolerance never adds pairs.
std::vector<CancellationPair> detect_cancellations(const std::vector<Complex>& poles, const std::vector<Complex>& zeros,
                                                   double rel_tol = kDefaultCancellationTol);

struct ZeroMatch {
    Complex pole;
    double reference = 0.0;
    double distance = 0.0;
};

/// Nearest pole for every reference value. Empty when there are no poles.
std::vector<ZeroMatch> match_known_zeros(const std::vector<Complex>& poles, const std::vector<double>& reference);

std::size_t count_inside(const std::vector<Complex>& points, const Domain& domain);

struct CompareConfig {
    std::size_t loewner_order = 11;
    std::size_t greedy_order = 11;
    std::size_t aaa_max_order = 100;
    double aaa_tol = 1e-13;
    std::size_t vf_order = 12;
    std::size_t vf_iterations = 20;
    std::uint64_t seed = 0;
    Domain domain = Domain::omega();
    std::size_t nx = 500;
    std::size_t ny = 500;
};

struct ComparisonRow {
    std::string method;
    bool ok = false;
    std::string status;       // "ok" or the error kind
    std::string message;
    std::size_t order = 0;
    double max_error = 0.0;
    double seconds = 0.0;
    std::size_t poles_in_domain = 0;
    std::optional<RationalModel> model;
};

struct ComparisonTable {
    std::string label;
    std::size_t samples = 0;
    std::vector<ComparisonRow> rows;   // loewner, rloewner, aaa, vf
};

/// Runs all four fitters on the same samples and measures each on the dense
/// grid. A failing method gets a row with its error instead of aborting.
ComparisonTable compare_methods(const SampleSet& samples, const Oracle& oracle, const CompareConfig& config = {},
                                std::string label = {});

/// CSV `label,samples,method,status,order,max_error,seconds,poles_in_domain`.
void write_comparison_csv(std::ostream& os, const std::vector<ComparisonTable>& tables, std::string_view metadata = {});
/// Fixed-width text: one line per grid, one column per method.
void write_comparison_text(std::ostream& os, const std::vector<ComparisonTable>& tables);

} // namespace ratapprox::analysis
