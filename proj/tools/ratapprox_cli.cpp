#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <omp.h>

#include <CLI11.hpp>
#include <json.hpp>

#include "ratapprox/aaa.hpp"
#include "ratapprox/analysis.hpp"
#include "ratapprox/error.hpp"
#include "ratapprox/greedy_loewner.hpp"
#include "ratapprox/loewner.hpp"
#include "ratapprox/model_io.hpp"
#include "ratapprox/sampling.hpp"
#include "ratapprox/special_fn.hpp"
#include "ratapprox/vectorfit.hpp"

namespace fs = std::filesystem;
using namespace ratapprox;
using nlohmann::json;

namespace {

std::string g_command;

std::string metadata(std::optional<std::uint64_t> seed)
{
    std::ostringstream out;
    out << "ratapprox " << RATAPPROX_VERSION << " seed=";
    if (seed) {
        out << *seed;
    } else {
        out << "none";
    }
    out << " command=\"" << g_command << '"';
    return out.str();
}

std::string meta_json(std::optional<std::uint64_t> seed, json extra = json::object())
{
    extra["version"] = RATAPPROX_VERSION;
    extra["seed"] = seed ? json(*seed) : json(nullptr);
    extra["command"] = g_command;
    return extra.dump();
}

std::ofstream open_out(const std::string& path)
{
    if (const auto dir = fs::path(path).parent_path(); !dir.empty()) {
        fs::create_directories(dir);
    }
    std::ofstream out(path);
    if (!out) {
        throw Error(ErrorKind::io, "cannot open '" + path + "' for writing");
    }
    return out;
}

SampleSet load_samples(const std::string& path)
{
    std::ifstream in(path);
    if (!in) {
        throw Error(ErrorKind::io, "cannot open '" + path + "'");
    }
    return read_samples_csv(in);
}

std::string stem_of(const std::string& out)
{
    fs::path p(out);
    if (p.extension() == ".json") {
        p.replace_extension();
    }
    return p.string();
}

std::string fmt_point(Complex c, int re_digits, int im_digits)
{
    std::ostringstream out;
    out << std::setprecision(re_digits) << c.real() << (c.imag() < 0 ? " - " : " + ") << std::setprecision(im_digits)
        << std::abs(c.imag()) << "i";
    return out.str();
}

// sample ---------------------------------------------------------------------

struct SampleArgs {
    std::string grid = "structured";
    std::size_t nx = 101;
    std::size_t ny = 21;
    std::size_t pairs = 1000;
    std::uint64_t seed = 0;
    std::string out;
};

SampleSet make_samples(const SampleArgs& a)
{
    if (a.grid == "structured") {
        return sample_oracle(structured_grid(Domain::omega(), a.nx, a.ny), special::bessel_oracle());
    }
    return sample_oracle(uniform_random_grid(Domain::omega(), a.pairs, a.seed), special::bessel_oracle());
}

void run_sample(const SampleArgs& a)
{
    const auto set = make_samples(a);
    const auto meta = metadata(a.grid == "uniform" ? std::optional<std::uint64_t>(a.seed) : std::nullopt);
    if (a.out.empty()) {
        write_samples_csv(std::cout, set, meta);
    } else {
        auto out = open_out(a.out);
        write_samples_csv(out, set, meta);
        std::cerr << "wrote " << set.size() << " samples to " << a.out << '\n';
    }
}

// fit ------------------------------------------------------------------------

struct FitArgs {
    std::string method = "loewner";
    std::string in;
    std::size_t order = 0;
    double tol = 0.0;
    std::uint64_t seed = 0;
    bool real_mode = false;
    bool seed_random = false;
    bool cleanup = false;
    bool relative = false;
    std::size_t iterations = 20;
    std::size_t max_order = 100;
    std::string scheme = "epsilon_paired";
    std::string out;
};

void run_fit(const FitArgs& a)
{
    const auto samples = load_samples(a.in);
    const std::string stem = stem_of(a.out);
    std::optional<std::uint64_t> seed;
    if (a.method == "rloewner" || (a.method == "aaa" && a.seed_random)) {
        seed = a.seed;
    }
    const auto meta = metadata(seed);
    json extra = {{"method", a.method}, {"samples", samples.size()}};
    RationalModel model;

    if (a.method == "loewner") {
        if (a.order == 0 && a.tol <= 0.0) {
            throw Error(ErrorKind::invalid_argument, "fit: loewner needs --order or --tol");
        }
        const auto mode = a.order > 0 ? loewner::Truncation::by_order(a.order) : loewner::Truncation::by_tolerance(a.tol);
        const auto fit = loewner::fit(samples, mode, loewner::parse_scheme(a.scheme));
        model = fit.truncation.model;
        auto sv = open_out(stem + ".sv.csv");
        write_singular_values_csv(sv, fit.svd.horizontal.singular_values, meta);
        extra["scheme"] = a.scheme;
        extra["e_condition"] = fit.truncation.model.e_condition;
    } else if (a.method == "rloewner") {
        greedy::GreedyOptions o;
        o.order_target = a.order > 0 ? a.order : 11;
        o.seed = a.seed;
        o.relative_error = a.relative;
        const auto r = greedy::fit_greedy(samples, o);
        model = r.model;
        auto h = open_out(stem + ".history.csv");
        greedy::write_history_csv(h, r.history, meta);
        extra["steps"] = r.history.size();
    } else if (a.method == "aaa") {
        aaa::AaaOptions o;
        o.tol = a.tol > 0.0 ? a.tol : 1e-13;
        o.max_order = a.order > 0 ? a.order : a.max_order;
        o.real_mode = a.real_mode;
        if (a.seed_random) {
            o.random_seed = a.seed;
        }
        const auto r = aaa::fit_aaa(samples, o);
        aaa::BarycentricModel m = r.model;
        if (a.cleanup) {
            m = aaa::cleanup(m, samples);
        }
        model = m;
        auto h = open_out(stem + ".history.csv");
        h << "# " << meta << "\norder,max_error,chosen_re,chosen_im\n" << std::setprecision(17);
        for (const auto& s : r.history) {
            h << s.order << ',' << s.max_error << ',' << s.chosen.real() << ',' << s.chosen.imag() << '\n';
        }
        auto sp = open_out(stem + ".support.csv");
        sp << "# " << meta << "\nre_s,im_s\n" << std::setprecision(17);
        for (const Complex z : m.support) {
            sp << z.real() << ',' << z.imag() << '\n';
        }
        extra["real_mode"] = a.real_mode;
        extra["cleanup"] = a.cleanup;
    } else if (a.method == "vf") {
        vf::VfOptions o;
        o.order = a.order > 0 ? a.order : 12;
        o.n_iter = a.iterations;
        const auto r = vf::fit_vf(samples, o);
        model = r.model;
        auto h = open_out(stem + ".history.csv");
        vf::write_history_csv(h, r.history, meta);
        extra["converged"] = r.converged;
    } else {
        throw Error(ErrorKind::invalid_argument, "fit: unknown method '" + a.method + "'");
    }
    write_model(a.out, model, meta_json(seed, extra));
    std::cout << a.method << ": order " << model_order(model) << " model written to " << a.out << '\n';
}

// eval -----------------------------------------------------------------------

struct EvalArgs {
    std::string model;
    std::size_t nx = 500;
    std::size_t ny = 500;
    std::string prefix = "error";
};

void run_eval(const EvalArgs& a)
{
    const auto model = read_model(a.model);
    const auto report = analysis::error_grid(model, special::bessel_oracle(), Domain::omega(), a.nx, a.ny);
    const auto meta = metadata(std::nullopt);
    {
        auto csv = open_out(a.prefix + ".csv");
        analysis::write_error_csv(csv, report, meta);
    }
    {
        auto svg = open_out(a.prefix + ".svg");
        analysis::write_error_svg(svg, report);
    }
    json summary = {{"max_error", report.max_error},
                    {"argmax", {report.argmax.real(), report.argmax.imag()}},
                    {"nx", a.nx},
                    {"ny", a.ny},
                    {"excluded", report.excluded_points.size()},
                    {"type", report.method_tag},
                    {"order", report.order},
                    {"meta", json::parse(meta_json(std::nullopt))}};
    auto js = open_out(a.prefix + ".json");
    js << summary.dump(1) << '\n';
    std::cout << "max error " << std::scientific << std::setprecision(3) << report.max_error << " at "
              << fmt_point(report.argmax, 6, 6) << '\n';
}

// poles ----------------------------------------------------------------------

struct PolesArgs {
    std::string model;
    bool match_bessel = false;
    double cancel_tol = analysis::kDefaultCancellationTol;
};

void run_poles(const PolesArgs& a)
{
    const auto model = read_model(a.model);
    const auto pz = poles_zeros(model);
    std::cout << "# " << metadata(std::nullopt) << '\n';
    std::cout << model_type(model) << " model of order " << model_order(model) << '\n';
    std::cout << "Poles (" << pz.poles.size() << "):\n";
    for (const Complex p : pz.poles) {
        std::cout << "  " << fmt_point(p, 15, 5) << '\n';
    }
    std::cout << "Zeros (" << pz.zeros.size() << "):\n";
    for (const Complex z : pz.zeros) {
        std::cout << "  " << fmt_point(z, 15, 5) << '\n';
    }
    const auto pairs = analysis::detect_cancellations(pz.poles, pz.zeros, a.cancel_tol);
    std::cout << "Cancellation pairs (rel tol " << a.cancel_tol << "): " << pairs.size() << '\n';
    for (const auto& c : pairs) {
        std::cout << "  pole " << fmt_point(c.pole, 15, 5) << "  zero " << fmt_point(c.zero, 15, 5) << "  gap "
                  << std::scientific << std::setprecision(3) << c.gap << std::defaultfloat << '\n';
    }
    if (a.match_bessel) {
        const std::vector<double> ref(special::kBesselJ0Zeros.begin(), special::kBesselJ0Zeros.end());
        std::cout << "Bessel zero matches:\n";
        for (const auto& m : analysis::match_known_zeros(pz.poles, ref)) {
            std::cout << "  " << std::setprecision(15) << m.reference << "  pole " << fmt_point(m.pole, 15, 5)
                      << "  distance " << std::scientific << std::setprecision(3) << m.distance << std::defaultfloat
                      << '\n';
        }
    }
}

// project --------------------------------------------------------------------

struct ProjectArgs {
    std::string in;
    std::size_t order = 11;
    std::string scheme = "epsilon_paired";
    std::string out;
};

void run_project(const ProjectArgs& a)
{
    const auto samples = load_samples(a.in);
    const auto fit = loewner::fit(samples, loewner::Truncation::by_order(a.order), loewner::parse_scheme(a.scheme));
    const auto pts = loewner::projected_points(fit.pencil, fit.truncation.Y, fit.truncation.X);
    std::cout << "# " << metadata(std::nullopt) << '\n';
    std::cout << "Right projected points (" << pts.lambda_hat.size() << "):\n";
    for (const Complex p : pts.lambda_hat) {
        std::cout << "  " << fmt_point(p, 5, 5) << '\n';
    }
    std::cout << "Left projected points (" << pts.mu_hat.size() << "):\n";
    for (const Complex p : pts.mu_hat) {
        std::cout << "  " << fmt_point(p, 5, 5) << '\n';
    }
    if (!a.out.empty()) {
        auto out = open_out(a.out);
        out << "# " << metadata(std::nullopt) << "\nside,re,im\n";
        out << std::setprecision(17);
        for (const Complex p : pts.lambda_hat) {
            out << "right," << p.real() << ',' << p.imag() << '\n';
        }
        for (const Complex p : pts.mu_hat) {
            out << "left," << p.real() << ',' << p.imag() << '\n';
        }
    }
    std::cout << "compression: " << samples.size() << " \xe2\x86\x92 " << pts.lambda_hat.size() + pts.mu_hat.size()
              << " interpolation points\n";
}

// trajectories -----------------------------------------------------------------

struct TrajectoryArgs {
    std::size_t a = 10;
    std::size_t steps = 5;
    std::size_t order = 11;
    std::string scheme = "epsilon_paired";
    std::string out;
};

void run_trajectories(const TrajectoryArgs& a)
{
    const auto steps = loewner::trajectory_study(special::bessel_oracle(), Domain::omega(), a.a, a.steps, a.order,
                                                 loewner::parse_scheme(a.scheme));
    std::ostringstream body;
    body << "# " << metadata(std::nullopt) << "\nstep,nx,ny,side,re,im\n" << std::setprecision(17);
    std::size_t outside = 0;
    for (std::size_t k = 0; k < steps.size(); ++k) {
        const auto& st = steps[k];
        for (const auto& [side, pts] : {std::pair{"right", &st.points.lambda_hat}, std::pair{"left", &st.points.mu_hat}}) {
            for (const Complex p : *pts) {
                body << k + 1 << ',' << st.nx << ',' << st.ny << ',' << side << ',' << p.real() << ',' << p.imag()
                     << '\n';
                outside += Domain::omega().contains(p) ? 0 : 1;
            }
        }
        std::cerr << "step " << k + 1 << ": grid " << st.nx << "x" << st.ny << ", max matched gap "
                  << std::scientific << std::setprecision(3) << loewner::max_matched_gap(st.points)
                  << std::defaultfloat << '\n';
    }
    if (a.out.empty()) {
        std::cout << body.str();
    } else {
        auto out = open_out(a.out);
        out << body.str();
    }
    std::cerr << "points outside the domain: " << outside << '\n';
}

// compare / repro ----------------------------------------------------------------

std::vector<std::size_t> parse_orders(const std::string& text)
{
    std::vector<std::size_t> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            out.push_back(static_cast<std::size_t>(std::stoul(item)));
        } catch (const std::exception&) {
            throw Error(ErrorKind::invalid_argument, "--orders: '" + item + "' is not a count");
        }
    }
    if (out.size() != 4) {
        throw Error(ErrorKind::invalid_argument, "--orders expects four values: loewner,rloewner,aaa,vf");
    }
    return out;
}

analysis::CompareConfig compare_config(const std::string& orders, std::uint64_t seed, std::size_t nx, std::size_t ny)
{
    analysis::CompareConfig c;
    if (!orders.empty()) {
        const auto o = parse_orders(orders);
        c.loewner_order = o[0];
        c.greedy_order = o[1];
        c.aaa_max_order = o[2];
        c.vf_order = o[3];
    }
    c.seed = seed;
    c.nx = nx;
    c.ny = ny;
    return c;
}

struct CompareArgs {
    std::string in;
    std::string orders;
    std::uint64_t seed = 0;
    std::size_t nx = 500;
    std::size_t ny = 500;
    std::string out;
};

void emit_tables(const std::vector<analysis::ComparisonTable>& tables, const std::string& out,
                 std::optional<std::uint64_t> seed)
{
    analysis::write_comparison_text(std::cout, tables);
    for (const auto& t : tables) {
        for (const auto& r : t.rows) {
            if (!r.ok) {
                std::cout << t.label << " " << r.method << ": " << r.message << '\n';
            }
        }
    }
    if (!out.empty()) {
        auto csv = open_out(out);
        analysis::write_comparison_csv(csv, tables, metadata(seed));
    }
}

void run_compare(const CompareArgs& a)
{
    const auto samples = load_samples(a.in);
    const auto table = analysis::compare_methods(samples, special::bessel_oracle(),
                                                 compare_config(a.orders, a.seed, a.nx, a.ny),
                                                 fs::path(a.in).stem().string());
    emit_tables({table}, a.out, a.seed);
}

struct ReproArgs {
    std::string out_dir = "repro";
    std::uint64_t seed = 0;
    std::size_t nx = 500;
    std::size_t ny = 500;
};

void run_repro(const ReproArgs& a)
{
    fs::create_directories(a.out_dir);
    const auto meta = metadata(a.seed);
    std::vector<analysis::ComparisonTable> tables;

    const auto structured = sample_oracle(structured_grid(Domain::omega(), 101, 21), special::bessel_oracle());
    const auto uniform = sample_oracle(uniform_random_grid(Domain::omega(), 1000, a.seed), special::bessel_oracle());
    for (const auto& [label, set, greedy_order, vf_order, loewner_order] :
         {std::tuple{"structured", &structured, 11u, 12u, 11u}, std::tuple{"uniform", &uniform, 11u, 12u, 11u}}) {
        {
            auto out = open_out(a.out_dir + "/" + label + "_samples.csv");
            write_samples_csv(out, *set, meta);
        }
        analysis::CompareConfig c = compare_config({}, a.seed, a.nx, a.ny);
        c.loewner_order = loewner_order;
        c.greedy_order = greedy_order;
        c.vf_order = vf_order;
        std::cerr << "fitting " << label << " grid (" << set->size() << " samples)\n";
        tables.push_back(analysis::compare_methods(*set, special::bessel_oracle(), c, label));
        for (const auto& r : tables.back().rows) {
            if (r.model) {
                write_model(a.out_dir + "/" + label + "_" + r.method + ".json", *r.model,
                            meta_json(a.seed, {{"method", r.method}, {"grid", label}}));
            }
        }
    }
    emit_tables(tables, a.out_dir + "/comparison.csv", a.seed);
    std::ofstream txt(a.out_dir + "/comparison.txt");
    analysis::write_comparison_text(txt, tables);
}

void print_error_json(const Error& e)
{
    json j = {{"error", std::string(to_string(e.kind()))}, {"message", e.what()}};
    if (e.point()) {
        j["point"] = {e.point()->real(), e.point()->imag()};
    }
    std::cerr << j.dump() << '\n';
}

} // namespace

int main(int argc, char** argv)
{
    for (int i = 0; i < argc; ++i) {
        g_command += (i ? " " : "") + std::string(i == 0 ? "ratapprox" : argv[i]);
    }
    if (const char* threads = std::getenv("RATAPPROX_THREADS")) {
        try {
            const int n = std::stoi(threads);
            if (n > 0) {
                omp_set_num_threads(n);
            }
        } catch (const std::exception&) {
            print_error_json(Error(ErrorKind::invalid_argument, "RATAPPROX_THREADS must be a positive integer"));
            return 2;
        }
    }

    CLI::App app{"Rational approximation of 1/J0 over a complex rectangle"};
    app.set_version_flag("--version", std::string(RATAPPROX_VERSION));
    app.require_subcommand(1);

    SampleArgs sa;
    auto* sample = app.add_subcommand("sample", "Sample the Bessel oracle on a grid");
    sample->add_option("--grid", sa.grid, "structured or uniform")->check(CLI::IsMember({"structured", "uniform"}));
    sample->add_option("--nx", sa.nx, "abscissae (structured)");
    sample->add_option("--ny", sa.ny, "ordinates, odd (structured)");
    sample->add_option("--pairs", sa.pairs, "conjugate pairs (uniform)");
    sample->add_option("--seed", sa.seed, "RNG seed (uniform)");
    sample->add_option("--out", sa.out, "output CSV (stdout if absent)");

    FitArgs fa;
    auto* fit = app.add_subcommand("fit", "Fit a rational model to samples");
    fit->add_option("--method", fa.method, "loewner, rloewner, aaa or vf")
        ->check(CLI::IsMember({"loewner", "rloewner", "aaa", "vf"}));
    fit->add_option("--in", fa.in, "sample CSV")->required();
    fit->add_option("--order", fa.order, "model order (AAA: maximum order)");
    fit->add_option("--tol", fa.tol, "loewner: singular value cutoff; aaa: relative tolerance");
    fit->add_option("--seed", fa.seed, "RNG seed");
    fit->add_flag("--real-mode", fa.real_mode, "aaa: conjugate-symmetric support and weights");
    fit->add_flag("--seed-random", fa.seed_random, "aaa: random first support point from --seed");
    fit->add_flag("--cleanup", fa.cleanup, "aaa: remove Froissart doublets");
    fit->add_flag("--relative-error", fa.relative, "rloewner: select by relative error");
    fit->add_option("--iterations", fa.iterations, "vf: iteration count");
    fit->add_option("--max-order", fa.max_order, "aaa: order cap when --order is absent");
    fit->add_option("--scheme", fa.scheme, "loewner partition scheme")
        ->check(CLI::IsMember({"alternating", "half_split", "epsilon_paired"}));
    fit->add_option("--out", fa.out, "model JSON")->required();

    EvalArgs ea;
    auto* eval = app.add_subcommand("eval", "Dense-grid error of a model against the oracle");
    eval->add_option("--model", ea.model, "model JSON")->required();
    eval->add_option("--nx", ea.nx);
    eval->add_option("--ny", ea.ny);
    eval->add_option("--out-prefix", ea.prefix, "writes P.csv, P.svg, P.json");

    PolesArgs pa;
    auto* poles = app.add_subcommand("poles", "Poles, zeros and cancellations of a model");
    poles->add_option("--model", pa.model, "model JSON")->required();
    poles->add_flag("--match-bessel", pa.match_bessel, "distance of the nearest pole to each tabulated J0 zero");
    poles->add_option("--cancel-tol", pa.cancel_tol, "relative pole/zero gap for cancellation");

    ProjectArgs pr;
    auto* project = app.add_subcommand("project", "Projected interpolation points of a Loewner fit");
    project->add_option("--in", pr.in, "sample CSV")->required();
    project->add_option("--order", pr.order);
    project->add_option("--scheme", pr.scheme)->check(CLI::IsMember({"alternating", "half_split", "epsilon_paired"}));
    project->add_option("--out", pr.out, "CSV of the points");

    TrajectoryArgs ta;
    auto* traj = app.add_subcommand("trajectories", "Projected points under grid densification");
    traj->add_option("--a", ta.a, "base grid size");
    traj->add_option("--steps", ta.steps);
    traj->add_option("--order", ta.order);
    traj->add_option("--scheme", ta.scheme)->check(CLI::IsMember({"alternating", "half_split", "epsilon_paired"}));
    traj->add_option("--out", ta.out, "CSV (stdout if absent)");

    CompareArgs ca;
    auto* compare = app.add_subcommand("compare", "Error table of all four methods on one sample set");
    compare->add_option("--in", ca.in, "sample CSV")->required();
    compare->add_option("--orders", ca.orders, "loewner,rloewner,aaa-max,vf");
    compare->add_option("--seed", ca.seed, "rloewner seed");
    compare->add_option("--nx", ca.nx);
    compare->add_option("--ny", ca.ny);
    compare->add_option("--out", ca.out, "table CSV");

    ReproArgs ra;
    auto* repro = app.add_subcommand("repro", "Both grids, all four methods, comparison table");
    repro->add_option("--out-dir", ra.out_dir);
    repro->add_option("--seed", ra.seed, "uniform grid and rloewner seed");
    repro->add_option("--nx", ra.nx);
    repro->add_option("--ny", ra.ny);

    try {
        app.parse(argc, argv);
    } catch (const CLI::Success& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        print_error_json(Error(ErrorKind::invalid_argument, e.what()));
        return 2;
    }

    try {
        if (*sample) {
            run_sample(sa);
        } else if (*fit) {
            run_fit(fa);
        } else if (*eval) {
            run_eval(ea);
        } else if (*poles) {
            run_poles(pa);
        } else if (*project) {
            run_project(pr);
        } else if (*traj) {
            run_trajectories(ta);
        } else if (*compare) {
            run_compare(ca);
        } else if (*repro) {
            run_repro(ra);
        }
    } catch (const Error& e) {
        print_error_json(e);
        return 1;
    } catch (const std::exception& e) {
        print_error_json(Error(ErrorKind::io, e.what()));
        return 1;
    }
    return 0;
}
