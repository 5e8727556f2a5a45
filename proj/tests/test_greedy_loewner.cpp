#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <set>
#include <sstream>

#include "ratapprox/error.hpp"
#include "ratapprox/greedy_loewner.hpp"
#include "ratapprox/special_fn.hpp"
#include "support.hpp"

using namespace ratapprox;

namespace {

const SampleSet& bessel_grid()
{
    static const auto g = sample_oracle(structured_grid(Domain::omega(), 101, 21), special::bessel_oracle());
    return g;
}

const greedy::GreedyResult& bessel_greedy()
{
    static const auto r = [] {
        greedy::GreedyOptions o;
        o.order_target = 11;
        o.seed = 1;
        return greedy::fit_greedy(bessel_grid(), o);
    }();
    return r;
}

} // namespace

TEST_CASE("degree-2 rational data is interpolated at order 2")
{
    const auto f = testing::random_rational(2, 31, false);
    const auto data = testing::sample_function(structured_grid(Domain::omega(), 21, 5), f);
    greedy::GreedyOptions o;
    o.order_target = 2;
    o.seed = 4;
    const auto r = greedy::fit_greedy(data, o);
    CHECK(r.model.order() == 2);
    double worst = 0.0;
    for (const auto& s : data.samples) {
        worst = std::max(worst, std::abs(loewner::eval_state_space(r.model, s.point) - s.value));
    }
    CHECK(worst <= 1e-9);
}

TEST_CASE("a feedthrough term would need a singular E and is refused")
{
    const auto f = testing::random_rational(2, 31, true);
    const auto data = testing::sample_function(structured_grid(Domain::omega(), 21, 5), f);
    greedy::GreedyOptions o;
    o.order_target = 3;
    CHECK_THROWS_AS(greedy::fit_greedy(data, o), Error);
}

TEST_CASE("exact rationals are recovered at their degree")
{
    for (std::uint64_t seed = 1; seed <= 6; ++seed) {
        const std::size_t d = 2 + seed % 5;
        const auto f = testing::random_rational(d, seed * 13, false);
        const auto data = testing::sample_function(structured_grid(Domain::omega(), 21, 5), f);
        greedy::GreedyOptions o;
        o.order_target = d;
        o.seed = seed;
        const auto r = greedy::fit_greedy(data, o);
        CHECK(r.model.order() == d);
        double worst = 0.0;
        for (const Complex s : testing::fresh_points(100, seed)) {
            worst = std::max(worst, std::abs(loewner::eval_state_space(r.model, s) - f(s)) / std::abs(f(s)));
        }
        CAPTURE(seed);
        CHECK(worst <= 1e-9);
    }
}

TEST_CASE("chosen points come from the data and the sides stay disjoint and closed")
{
    const auto& r = bessel_greedy();
    std::set<std::pair<double, double>> data;
    for (const auto& s : bessel_grid().samples) {
        data.insert({s.point.real(), s.point.imag()});
    }
    std::set<std::pair<double, double>> left, right;
    for (const auto& s : r.partition.left) {
        left.insert({s.point.real(), s.point.imag()});
    }
    for (const auto& s : r.partition.right) {
        right.insert({s.point.real(), s.point.imag()});
    }
    for (const auto& p : left) {
        CHECK(data.count(p) == 1);
        CHECK(right.count(p) == 0);
    }
    for (const auto& p : right) {
        CHECK(data.count(p) == 1);
    }
    CHECK(is_conjugate_closed(r.partition.left, true));
    CHECK(is_conjugate_closed(r.partition.right, true));
    for (const auto& step : r.history) {
        for (const Complex c : step.chosen) {
            CHECK(data.count({c.real(), c.imag()}) == 1);
        }
    }
}

TEST_CASE("benchmark: final order, accuracy at the samples and error history")
{
    const auto& r = bessel_greedy();
    CHECK(r.model.order() == 11);
    REQUIRE(r.history.size() >= 2);
    std::size_t down = 0;
    for (std::size_t k = 1; k < r.history.size(); ++k) {
        down += r.history[k].max_error <= r.history[k - 1].max_error ? 1 : 0;
    }
    const double share = static_cast<double>(down) / static_cast<double>(r.history.size() - 1);
    MESSAGE("non-increasing share " << share << " over " << r.history.size() - 1 << " steps");
    CHECK(share >= 0.8);
    CHECK(r.history[r.best_step].max_error <= 1e-8);
}

TEST_CASE("fixed seed gives identical histories, other seeds other starts")
{
    greedy::GreedyOptions o;
    o.order_target = 4;
    o.seed = 12;
    const auto f = testing::random_rational(4, 8);
    const auto data = testing::sample_function(structured_grid(Domain::omega(), 21, 5), f);
    const auto a = greedy::fit_greedy(data, o);
    const auto b = greedy::fit_greedy(data, o);
    std::ostringstream ha, hb;
    greedy::write_history_csv(ha, a.history, "seed=12");
    greedy::write_history_csv(hb, b.history, "seed=12");
    CHECK(ha.str() == hb.str());
    CHECK(ha.str().find("step,n_left,n_right,max_error,chosen_re,chosen_im\n") != std::string::npos);
    o.seed = 13;
    const auto c = greedy::fit_greedy(data, o);
    CHECK(c.history.front().chosen != a.history.front().chosen);
}

TEST_CASE("greedy argument errors")
{
    const auto data = testing::sample_function(structured_grid(Domain::omega(), 3, 3), testing::random_rational(2, 1));
    greedy::GreedyOptions o;
    o.order_target = 6;
    try {
        greedy::fit_greedy(data, o);
        FAIL("expected insufficient_data");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::insufficient_data);
    }
    o.order_target = 0;
    CHECK_THROWS_AS(greedy::fit_greedy(data, o), Error);
}

TEST_CASE("an order blocked by conditioning is reported instead of exhausting the data")
{
    const auto data = sample_oracle(uniform_random_grid(Domain::omega(), 1000, 0), special::bessel_oracle());
    greedy::GreedyOptions o;
    o.order_target = 12;
    try {
        greedy::fit_greedy(data, o);
        FAIL("expected ill_conditioned");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::ill_conditioned);
    }
}
