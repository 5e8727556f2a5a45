#include "ratapprox/analysis.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <iomanip>
#include <limits>
#include <ostream>
#include <sstream>

#include "ratapprox/aaa.hpp"
#include "ratapprox/error.hpp"
#include "ratapprox/greedy_loewner.hpp"
#include "ratapprox/kernels.hpp"
#include "ratapprox/loewner.hpp"
#include "ratapprox/vectorfit.hpp"

namespace ratapprox::analysis {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
constexpr double kInf = std::numeric_limits<double>::infinity();

double grid_coord(double lo, double hi, std::size_t i, std::size_t n)
{
    if (i + 1 == n) {
        return hi;
    }
    return lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1);
}

} // namespace

Complex ErrorReport::point(std::size_t i, std::size_t j) const
{
    return {grid_coord(domain.x_min, domain.x_max, i, nx), grid_coord(domain.y_min, domain.y_max, j, ny)};
}

ErrorReport error_grid(const Oracle& model, const Oracle& oracle, const Domain& domain, std::size_t nx,
                       std::size_t ny)
{
    domain.validate();
    if (nx < 2 || ny < 2) {
        throw Error(ErrorKind::invalid_argument, "error_grid: nx and ny must be >= 2");
    }
    ErrorReport report;
    report.domain = domain;
    report.nx = nx;
    report.ny = ny;
    std::vector<Complex> points(nx * ny);
    for (std::size_t j = 0; j < ny; ++j) {
        for (std::size_t i = 0; i < nx; ++i) {
            points[j * nx + i] = report.point(i, j);
        }
    }
    const auto reference = kernels::parallel::evaluate(
        [&oracle](Complex s) {
            try {
                return oracle(s);
            } catch (const Error& e) {
                if (e.kind() == ErrorKind::pole) {
                    return Complex(kNaN, 0.0);
                }
                throw;
            }
        },
        points);
    const auto approx = kernels::parallel::evaluate(
        [&model](Complex s) {
            try {
                return model(s);
            } catch (const Error& e) {
                if (e.kind() == ErrorKind::singular_at_point || e.kind() == ErrorKind::pole) {
                    return Complex(kInf, 0.0);
                }
                throw;
            }
        },
        points);

    report.surface.resize(points.size());
    report.max_error = 0.0;
    report.argmax = points.front();
    for (std::size_t k = 0; k < points.size(); ++k) {
        if (std::isnan(reference[k].real())) {
            report.surface[k] = kNaN;
            report.excluded_points.push_back(points[k]);
            continue;
        }
        double e = std::abs(approx[k] - reference[k]);
        if (std::isnan(e)) {
            e = kInf;
        }
        report.surface[k] = e;
        if (e > report.max_error) {
            report.max_error = e;
            report.argmax = points[k];
        }
    }
    return report;
}

ErrorReport error_grid(const RationalModel& model, const Oracle& oracle, const Domain& domain, std::size_t nx,
                       std::size_t ny)
{
    auto report = error_grid([&model](Complex s) { return evaluate(model, s); }, oracle, domain, nx, ny);
    report.method_tag = std::string(model_type(model));
    report.order = model_order(model);
    return report;
}

void write_error_csv(std::ostream& os, const ErrorReport& report, std::string_view metadata)
{
    if (!metadata.empty()) {
        os << "# " << metadata << '\n';
    }
    os << "re_s,im_s,abs_error\n";
    const auto old = os.precision(17);
    for (std::size_t j = 0; j < report.ny; ++j) {
        for (std::size_t i = 0; i < report.nx; ++i) {
            const double e = report.surface[j * report.nx + i];
            if (std::isnan(e)) {
                continue;
            }
            const Complex s = report.point(i, j);
            os << s.real() << ',' << s.imag() << ',' << e << '\n';
        }
    }
    os.precision(old);
}

namespace {

// Blue (small) to red (large) through yellow.
std::string colour(double t)
{
    t = std::clamp(t, 0.0, 1.0);
    double r, g, b;
    if (t < 0.5) {
        const double u = t / 0.5;
        r = 40 + u * (250 - 40);
        g = 60 + u * (220 - 60);
        b = 200 - u * 150;
    } else {
        const double u = (t - 0.5) / 0.5;
        r = 250 - u * 40;
        g = 220 - u * 200;
        b = 50 - u * 30;
    }
    std::ostringstream out;
    out << '#' << std::hex << std::setfill('0') << std::setw(2) << static_cast<int>(r) << std::setw(2)
        << static_cast<int>(g) << std::setw(2) << static_cast<int>(b);
    return out.str();
}

} // namespace

void write_error_svg(std::ostream& os, const ErrorReport& report, std::size_t max_cells)
{
    const std::size_t cx = std::min(report.nx, std::max<std::size_t>(max_cells, 1));
    const std::size_t cy = std::min(report.ny, std::max<std::size_t>(max_cells, 1));
    // Each cell shows the largest error among the grid points it covers.
    std::vector<double> cells(cx * cy, kNaN);
    for (std::size_t j = 0; j < report.ny; ++j) {
        for (std::size_t i = 0; i < report.nx; ++i) {
            const double e = report.surface[j * report.nx + i];
            if (std::isnan(e)) {
                continue;
            }
            double& c = cells[(j * cy / report.ny) * cx + i * cx / report.nx];
            c = std::isnan(c) ? e : std::max(c, e);
        }
    }
    double lo = kInf;
    double hi = -kInf;
    for (double c : cells) {
        if (!std::isnan(c) && c > 0.0 && std::isfinite(c)) {
            lo = std::min(lo, std::log10(c));
            hi = std::max(hi, std::log10(c));
        }
    }
    if (!(hi > lo)) {
        hi = lo + 1.0;
    }
    const double cell = 4.0;
    const double width = cell * static_cast<double>(cx);
    const double height = cell * static_cast<double>(cy);
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width + 120 << "\" height=\"" << height + 40
       << "\">\n";
    os << "<title>log10 |H_r - H| " << report.method_tag << " order " << report.order << "</title>\n";
    for (std::size_t j = 0; j < cy; ++j) {
        for (std::size_t i = 0; i < cx; ++i) {
            const double c = cells[j * cx + i];
            std::string fill = "#808080";
            if (!std::isnan(c)) {
                fill = c > 0.0 ? colour((std::log10(c) - lo) / (hi - lo)) : colour(0.0);
            }
            // Ordinates grow upwards.
            os << "<rect x=\"" << cell * static_cast<double>(i) << "\" y=\""
               << height - cell * static_cast<double>(j + 1) << "\" width=\"" << cell << "\" height=\"" << cell
               << "\" fill=\"" << fill << "\"/>\n";
        }
    }
    for (int k = 0; k <= 4; ++k) {
        const double t = k / 4.0;
        const double y = height - t * height;
        os << "<rect x=\"" << width + 10 << "\" y=\"" << y - 10 << "\" width=\"20\" height=\"10\" fill=\""
           << colour(t) << "\"/>\n";
        os << "<text x=\"" << width + 35 << "\" y=\"" << y << "\" font-size=\"10\">" << std::setprecision(3)
           << lo + t * (hi - lo) << "</text>\n";
    }
    os << "<text x=\"0\" y=\"" << height + 20 << "\" font-size=\"12\">max " << std::scientific << std::setprecision(3)
       << report.max_error << " at " << report.argmax.real() << (report.argmax.imag() < 0 ? "" : "+")
       << report.argmax.imag() << "i</text>\n";
    os << std::defaultfloat << "</svg>\n";
}

std::vector<CancellationPair> detect_cancellations(const std::vector<Complex>& poles, const std::vector<Complex>& zeros,
                                                   double rel_tol)
{
    struct Candidate {
        double gap;
        std::size_t p;
        std::size_t z;
    };
    std::vector<Candidate> all;
    all.reserve(poles.size() * zeros.size());
    for (std::size_t p = 0; p < poles.size(); ++p) {
        for (std::size_t z = 0; z < zeros.size(); ++z) {
            all.push_back({std::abs(poles[p] - zeros[z]), p, z});
        }
    }
    std::stable_sort(all.begin(), all.end(), [](const Candidate& a, const Candidate& b) { return a.gap < b.gap; });
    std::vector<bool> pole_used(poles.size(), false);
    std::vector<bool> zero_used(zeros.size(), false);
    std::vector<CancellationPair> out;
    for (const auto& c : all) {
        if (pole_used[c.p] || zero_used[c.z]) {
            continue;
        }
        pole_used[c.p] = true;
        zero_used[c.z] = true;
        if (c.gap <= rel_tol * (1.0 + std::abs(poles[c.p]))) {
            out.push_back({poles[c.p], zeros[c.z], c.gap});
        }
    }
    return out;
}

std::vector<ZeroMatch> match_known_zeros(const std::vector<Complex>& poles, const std::vector<double>& reference)
{
    std::vector<ZeroMatch> out;
    if (poles.empty()) {
        return out;
    }
    for (const double r : reference) {
        ZeroMatch m{poles.front(), r, kInf};
        for (const Complex p : poles) {
            const double d = std::abs(p - r);
            if (d < m.distance) {
                m = {p, r, d};
            }
        }
        out.push_back(m);
    }
    return out;
}

std::size_t count_inside(const std::vector<Complex>& points, const Domain& domain)
{
    return static_cast<std::size_t>(
        std::count_if(points.begin(), points.end(), [&domain](Complex p) { return domain.contains(p); }));
}

ComparisonTable compare_methods(const SampleSet& samples, const Oracle& oracle, const CompareConfig& config,
                                std::string label)
{
    ComparisonTable table;
    table.label = std::move(label);
    table.samples = samples.size();

    auto run = [&](const std::string& method, auto&& fit) {
        ComparisonRow row;
        row.method = method;
        const auto t0 = std::chrono::steady_clock::now();
        try {
            RationalModel model = fit();
            row.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
            row.order = model_order(model);
            row.max_error = error_grid(model, oracle, config.domain, config.nx, config.ny).max_error;
            row.poles_in_domain = count_inside(poles_zeros(model).poles, config.domain);
            row.model = std::move(model);
            row.ok = true;
            row.status = "ok";
        } catch (const Error& e) {
            row.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
            row.status = std::string(to_string(e.kind()));
            row.message = e.what();
        }
        table.rows.push_back(std::move(row));
    };

    run("loewner", [&]() -> RationalModel {
        return loewner::fit(samples, loewner::Truncation::by_order(config.loewner_order)).truncation.model;
    });
    run("rloewner", [&]() -> RationalModel {
        greedy::GreedyOptions o;
        o.order_target = config.greedy_order;
        o.seed = config.seed;
        return greedy::fit_greedy(samples, o).model;
    });
    run("aaa", [&]() -> RationalModel {
        aaa::AaaOptions o;
        o.tol = config.aaa_tol;
        o.max_order = config.aaa_max_order;
        return aaa::fit_aaa(samples, o).model;
    });
    run("vf", [&]() -> RationalModel {
        vf::VfOptions o;
        o.order = config.vf_order;
        o.n_iter = config.vf_iterations;
        return vf::fit_vf(samples, o).model;
    });
    return table;
}

void write_comparison_csv(std::ostream& os, const std::vector<ComparisonTable>& tables, std::string_view metadata)
{
    if (!metadata.empty()) {
        os << "# " << metadata << '\n';
    }
    os << "label,samples,method,status,order,max_error,seconds,poles_in_domain\n";
    const auto old = os.precision(6);
    for (const auto& t : tables) {
        for (const auto& r : t.rows) {
            os << t.label << ',' << t.samples << ',' << r.method << ',' << r.status << ',' << r.order << ',';
            if (r.ok) {
                os << std::scientific << r.max_error << std::defaultfloat;
            }
            os << ',' << std::fixed << std::setprecision(3) << r.seconds << std::defaultfloat << std::setprecision(6)
               << ',' << r.poles_in_domain << '\n';
        }
    }
    os.precision(old);
}

void write_comparison_text(std::ostream& os, const std::vector<ComparisonTable>& tables)
{
    if (tables.empty()) {
        return;
    }
    os << std::left << std::setw(24) << "grid";
    for (const auto& r : tables.front().rows) {
        os << std::setw(22) << r.method;
    }
    os << '\n';
    for (const auto& t : tables) {
        std::ostringstream name;
        name << t.label << " (" << t.samples << ")";
        os << std::setw(24) << name.str();
        for (const auto& r : t.rows) {
            std::ostringstream cell;
            if (r.ok) {
                cell << std::scientific << std::setprecision(2) << r.max_error << " r=" << r.order;
            } else {
                cell << "error: " << r.status;
            }
            os << std::setw(22) << cell.str();
        }
        os << '\n';
    }
    os << std::right;
}

} // namespace ratapprox::analysis
