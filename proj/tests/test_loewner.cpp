#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <random>
#include <set>

#include "ratapprox/error.hpp"
#include "ratapprox/loewner.hpp"
#include "ratapprox/special_fn.hpp"
#include "support.hpp"

using namespace ratapprox;

namespace {

SampleSet reals(std::initializer_list<double> xs, const Oracle& f)
{
    SampleSet set;
    for (const double x : xs) {
        set.samples.push_back({Complex(x, 0.0), f({x, 0.0})});
    }
    set.conjugate_closed = true;
    return set;
}

SampleSet small_rational_grid(const testing::RandomRational& f)
{
    return testing::sample_function(structured_grid(Domain::omega(), 21, 5), f);
}

// The full benchmark fit is shared by the paper-scale checks below.
const loewner::LoewnerFit& bessel_fit()
{
    static const auto fit = loewner::fit(sample_oracle(structured_grid(Domain::omega(), 101, 21), special::bessel_oracle()),
                                         loewner::Truncation::by_order(11));
    return fit;
}

bool contains_within(const std::vector<Complex>& values, Complex target, double tol)
{
    return std::any_of(values.begin(), values.end(), [&](Complex v) { return std::abs(v - target) <= tol; });
}

} // namespace

TEST_CASE("alternating partition of four real points")
{
    const auto p = loewner::partition(reals({1, 2, 3, 4}, [](Complex s) { return s; }), loewner::PartitionScheme::alternating);
    REQUIRE(p.left.size() == 2);
    REQUIRE(p.right.size() == 2);
    CHECK(p.left[0].point == Complex(1, 0));
    CHECK(p.left[1].point == Complex(3, 0));
    CHECK(p.right[0].point == Complex(2, 0));
    CHECK(p.right[1].point == Complex(4, 0));
}

TEST_CASE("a conjugate pair is never split")
{
    for (const auto scheme : {loewner::PartitionScheme::alternating, loewner::PartitionScheme::half_split,
                              loewner::PartitionScheme::epsilon_paired}) {
        SampleSet set;
        set.samples = {{Complex(1, 1), Complex(1, 1)}, {Complex(1, -1), Complex(1, -1)}, {Complex(2, 0), 2.0}, {Complex(3, 0), 3.0}};
        set.conjugate_closed = true;
        const auto p = loewner::partition(set, scheme);
        CHECK(is_conjugate_closed(p.left));
        CHECK(is_conjugate_closed(p.right));
        CHECK(p.left.size() + p.right.size() == 4);
    }
}

TEST_CASE("partitions of the benchmark grid are disjoint covers with closed sides")
{
    const auto grid = sample_oracle(structured_grid(Domain::omega(), 101, 21), special::bessel_oracle());
    for (const auto scheme : {loewner::PartitionScheme::alternating, loewner::PartitionScheme::half_split,
                              loewner::PartitionScheme::epsilon_paired}) {
        const auto p = loewner::partition(grid, scheme);
        CHECK(p.left.size() + p.right.size() == 2121);
        std::set<std::pair<double, double>> seen;
        for (const auto& side : {p.left, p.right}) {
            for (const auto& s : side) {
                seen.insert({s.point.real(), s.point.imag()});
            }
        }
        CHECK(seen.size() == 2121);
        CHECK(is_conjugate_closed(p.left, true));
        CHECK(is_conjugate_closed(p.right, true));
    }
}

TEST_CASE("partition errors")
{
    SampleSet stray;
    stray.samples = {{Complex(1, 1), 1.0}, {Complex(2, 0), 2.0}, {Complex(3, 0), 3.0}};
    stray.conjugate_closed = true;
    try {
        loewner::partition(stray);
        FAIL("expected partition_impossible");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::partition_impossible);
    }
    SampleSet one;
    one.samples = {{Complex(1, 0), 1.0}};
    CHECK_THROWS_AS(loewner::partition(one), Error);
    CHECK_THROWS_AS(loewner::parse_scheme("zigzag"), Error);
    CHECK(loewner::parse_scheme("half_split") == loewner::PartitionScheme::half_split);
}

TEST_CASE("pencil entries follow the divided differences")
{
    loewner::DataPartition p;
    p.left = {{Complex(2, 0), Complex(3, 0)}};
    p.right = {{Complex(0, 0), Complex(1, 0)}};
    const auto pencil = loewner::build_pencil(p);
    CHECK(pencil.L(0, 0) == Complex(1, 0));
    CHECK(pencil.Ls(0, 0) == Complex(3, 0));

    loewner::DataPartition b;
    const Complex h1 = special::h_of_s(1.0);
    const Complex h2 = special::h_of_s(2.0);
    b.left = {{Complex(1, 0), h1}};
    b.right = {{Complex(2, 0), h2}};
    const auto pb = loewner::build_pencil(b);
    CHECK(std::abs(pb.L(0, 0) - (h1 - h2) / (1.0 - 2.0)) <= 1e-15 * std::abs(pb.L(0, 0)));
    CHECK(std::abs(pb.Ls(0, 0) - (1.0 * h1 - 2.0 * h2) / (1.0 - 2.0)) <= 1e-15 * std::abs(pb.Ls(0, 0)));
}

TEST_CASE("coincident left and right points are rejected")
{
    loewner::DataPartition p;
    p.left = {{Complex(1, 0), 1.0}, {Complex(2, 0), 2.0}};
    p.right = {{Complex(2, 0), 2.0}};
    try {
        loewner::build_pencil(p);
        FAIL("expected coincident_points");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::coincident_points);
    }
}

TEST_CASE("cross-ratio identities hold entrywise")
{
    const auto f = testing::random_rational(6, 99);
    const auto pencil = loewner::build_pencil(loewner::partition(small_rational_grid(f)));
    std::mt19937_64 rng(1);
    std::uniform_int_distribution<Eigen::Index> ri(0, pencil.rows() - 1);
    std::uniform_int_distribution<Eigen::Index> ci(0, pencil.cols() - 1);
    for (int k = 0; k < 1000; ++k) {
        const auto j = ri(rng);
        const auto i = ci(rng);
        const Complex d = pencil.mu(j) - pencil.lambda(i);
        const Complex lhs = pencil.L(j, i) * d;
        const Complex rhs = pencil.V(j) - pencil.W(i);
        CHECK(std::abs(lhs - rhs) <= 1e-14 * (std::abs(pencil.V(j)) + std::abs(pencil.W(i))));
        const Complex lhs_s = pencil.Ls(j, i) * d;
        const Complex rhs_s = pencil.mu(j) * pencil.V(j) - pencil.lambda(i) * pencil.W(i);
        CHECK(std::abs(lhs_s - rhs_s)
              <= 1e-14 * (std::abs(pencil.mu(j) * pencil.V(j)) + std::abs(pencil.lambda(i) * pencil.W(i))));
    }
}

TEST_CASE("Sylvester residuals vanish for every constructed pencil")
{
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        const auto f = testing::random_rational(1 + seed % 8, seed);
        for (const auto scheme : {loewner::PartitionScheme::alternating, loewner::PartitionScheme::half_split,
                                  loewner::PartitionScheme::epsilon_paired}) {
            const auto [a, b] = loewner::sylvester_residual(loewner::build_pencil(loewner::partition(small_rational_grid(f), scheme)));
            CHECK(a <= 1e-10);
            CHECK(b <= 1e-10);
        }
    }
    const auto [a, b] = loewner::sylvester_residual(bessel_fit().pencil);
    CHECK(a <= 1e-10);
    CHECK(b <= 1e-10);
}

TEST_CASE("order one recovers 1/(s+1) from four samples")
{
    auto f = [](Complex s) { return 1.0 / (s + 1.0); };
    const auto fit = loewner::fit(reals({0.5, 1.0, 2.0, 3.0}, f), loewner::Truncation::by_order(1),
                                  loewner::PartitionScheme::alternating);
    for (const Complex s : testing::fresh_points(20, 3)) {
        CHECK(std::abs(loewner::eval_state_space(fit.truncation.model, s) - f(s)) <= 1e-12 * std::abs(f(s)));
    }
    const auto p = loewner::poles(fit.truncation.model);
    REQUIRE(p.size() == 1);
    CHECK(std::abs(p[0] + 1.0) <= 1e-12);
    CHECK(loewner::zeros(fit.truncation.model).empty());
}

TEST_CASE("a proper model keeps its finite zero through the descriptor pencil")
{
    auto f = [](Complex s) { return (s + 2.0) / (s + 1.0); };
    const auto set = reals({0.5, 1.0, 2.0, 3.0}, f);
    const auto pencil = loewner::build_pencil(loewner::partition(set, loewner::PartitionScheme::alternating));
    const auto tr = loewner::truncate(pencil, loewner::Truncation::by_order(2), false);
    const auto z = loewner::zeros(tr.model);
    REQUIRE(z.size() == 1);
    CHECK(std::abs(z[0] + 2.0) <= 1e-10);
    const auto p = loewner::poles(tr.model);
    REQUIRE(p.size() == 1);
    CHECK(std::abs(p[0] + 1.0) <= 1e-10);
    CHECK(std::abs(loewner::eval_state_space(tr.model, Complex(4.0, 1.0)) - f(Complex(4.0, 1.0))) <= 1e-10);
}

TEST_CASE("random rationals of degree up to 8 are recovered exactly")
{
    for (std::uint64_t seed = 1; seed <= 24; ++seed) {
        const std::size_t d = 1 + seed % 8;
        const auto f = testing::random_rational(d, seed * 7919, false);
        const auto fit = loewner::fit(small_rational_grid(f), loewner::Truncation::by_order(d));
        const auto& m = fit.truncation.model;
        double worst = 0.0;
        for (const Complex s : testing::fresh_points(100, seed)) {
            worst = std::max(worst, std::abs(loewner::eval_state_space(m, s) - f(s)) / std::abs(f(s)));
        }
        CAPTURE(seed);
        CAPTURE(d);
        CHECK(worst <= 1e-9);
        CHECK(testing::matched_distance(loewner::poles(m), f.poles) <= 1e-8);
    }
}

TEST_CASE("minimal models interpolate the data and respect real symmetry")
{
    for (std::uint64_t seed = 1; seed <= 8; ++seed) {
        const auto f = testing::random_rational(seed, seed + 100, false);
        const auto fit = loewner::fit(small_rational_grid(f), loewner::Truncation::by_order(seed));
        const auto& sv = fit.svd.horizontal.singular_values;
        REQUIRE(sv(static_cast<Eigen::Index>(seed)) / sv(0) <= 1e-13);
        const auto& m = fit.truncation.model;
        double wmax = 0.0;
        for (const auto& side : {fit.partition.left, fit.partition.right}) {
            for (const auto& s : side) {
                wmax = std::max(wmax, std::abs(s.value));
            }
        }
        for (const auto& side : {fit.partition.left, fit.partition.right}) {
            for (const auto& s : side) {
                CHECK(std::abs(loewner::eval_state_space(m, s.point) - s.value) <= 1e-8 * wmax);
            }
        }
        CHECK(testing::conjugate_closed_within(loewner::poles(m), 1e-8));
        CHECK(testing::conjugate_closed_within(loewner::zeros(m), 1e-8));
        for (const double x : {0.3, 4.1, 9.7}) {
            const Complex v = loewner::eval_state_space(m, x);
            CHECK(std::abs(v.imag()) <= 1e-8 * std::abs(v));
        }
    }
}

TEST_CASE("truncation errors")
{
    loewner::DataPartition zero;
    zero.left = {{Complex(1, 0), 0.0}, {Complex(3, 0), 0.0}};
    zero.right = {{Complex(2, 0), 0.0}, {Complex(4, 0), 0.0}};
    try {
        loewner::truncate(loewner::build_pencil(zero), loewner::Truncation::by_order(1));
        FAIL("expected rank_zero");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::rank_zero);
    }
    const auto f = testing::random_rational(3, 5);
    const auto pencil = loewner::build_pencil(loewner::partition(small_rational_grid(f)));
    CHECK_THROWS_AS(loewner::truncate(pencil, loewner::Truncation::by_order(1000)), Error);
    try {
        loewner::truncate(pencil, loewner::Truncation::by_order(10));
        FAIL("expected ill_conditioned for an order above the rank");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::ill_conditioned);
    }
}

TEST_CASE("evaluation at a model pole is an error")
{
    loewner::StateSpaceModel m;
    m.E = ComplexMatrix::Identity(1, 1);
    m.A = ComplexMatrix::Constant(1, 1, -1.0);
    m.B = ComplexVector::Ones(1);
    m.C = ComplexRowVector::Ones(1);
    CHECK(loewner::eval_state_space(m, 1.0) == Complex(0.5, 0.0));
    try {
        loewner::eval_state_space(m, -1.0);
        FAIL("expected singular_at_point");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::singular_at_point);
    }
}

TEST_CASE("projected points of a small exact problem")
{
    const auto f = testing::random_rational(4, 77, false);
    const auto fit = loewner::fit(small_rational_grid(f), loewner::Truncation::by_order(4));
    const auto pts = loewner::projected_points(fit.pencil, fit.truncation.Y, fit.truncation.X);
    CHECK(pts.lambda_hat.size() == 4);
    CHECK(pts.mu_hat.size() == 4);
    CHECK(testing::conjugate_closed_within(pts.lambda_hat, 1e-8));
    CHECK(testing::conjugate_closed_within(pts.mu_hat, 1e-8));
}

TEST_CASE("benchmark grid: singular value decay, poles, zeros and projected points")
{
    const auto& fit = bessel_fit();
    const auto& sv = fit.truncation.singular_values;
    REQUIRE(sv.size() >= 12);
    CHECK(sv[0] == 1.0);
    CHECK(sv[11] <= 1e-11);

    const auto poles = loewner::poles(fit.truncation.model);
    CHECK(poles.size() == 11);
    for (int k = 0; k < 3; ++k) {
        CHECK(contains_within(poles, special::kBesselJ0Zeros[static_cast<std::size_t>(k)], 1e-9));
    }
    CHECK(contains_within(poles, 11.7915344390142, 1e-3));

    const auto zeros = loewner::zeros(fit.truncation.model);
    CHECK(zeros.size() == 10);
    // Zeros column of the reference table, 5 significant digits.
    const std::vector<Complex> paper_zeros = {{-4.8491, -10.766}, {0.12013, -12.537}, {4.785, 13.066},
                                              {9.4384, 12.591},   {14.367, 10.868}};
    for (const Complex z : paper_zeros) {
        CHECK(contains_within(zeros, z, 1e-3));
        CHECK(contains_within(zeros, std::conj(z), 1e-3));
    }
    // Far from the data the conjugate pairing degrades to ~1e-8 relative.
    CHECK(testing::conjugate_closed_within(zeros, 1e-6));
    CHECK(testing::conjugate_closed_within(poles, 1e-6));

    const auto pts = loewner::projected_points(fit.pencil, fit.truncation.Y, fit.truncation.X);
    CHECK(pts.lambda_hat.size() == 11);
    CHECK(pts.mu_hat.size() == 11);
    CHECK(contains_within(pts.lambda_hat, 1.5504, 1e-2));
    CHECK(contains_within(pts.mu_hat, 1.5491, 1e-2));
    for (const auto& list : {pts.lambda_hat, pts.mu_hat}) {
        for (const Complex p : list) {
            CHECK(Domain::omega().contains(p, 0.1));
        }
        CHECK(testing::conjugate_closed_within(list, 1e-5));
    }
}

TEST_CASE("tolerance truncation of the benchmark picks order 11 to 13")
{
    const auto& fit = bessel_fit();
    const auto tr = loewner::truncate(fit.pencil, fit.svd, loewner::Truncation::by_tolerance(1e-12));
    CHECK(tr.model.order() >= 11);
    CHECK(tr.model.order() <= 13);
}

TEST_CASE("trajectory study: first step equals a direct fit")
{
    const auto steps = loewner::trajectory_study(special::bessel_oracle(), Domain::omega(), 10, 1, 11);
    REQUIRE(steps.size() == 1);
    CHECK(steps[0].nx == 10);
    CHECK(steps[0].ny == 11);
    const auto fit = loewner::fit(sample_oracle(structured_grid(Domain::omega(), 10, 11), special::bessel_oracle()),
                                  loewner::Truncation::by_order(11));
    const auto direct = loewner::projected_points(fit.pencil, fit.truncation.Y, fit.truncation.X);
    CHECK(testing::matched_distance(steps[0].points.lambda_hat, direct.lambda_hat) == 0.0);
    CHECK(testing::matched_distance(steps[0].points.mu_hat, direct.mu_hat) == 0.0);
}
