#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <set>
#include <sstream>

#include "ratapprox/error.hpp"
#include "ratapprox/sampling.hpp"
#include "ratapprox/special_fn.hpp"

using namespace ratapprox;

TEST_CASE("structured grid: size, order, corners and exact conjugate closure")
{
    const auto g = structured_grid(Domain::omega(), 101, 21);
    REQUIRE(g.size() == 2121);
    CHECK(g.conjugate_closed);
    CHECK(g.samples.front().point == Complex(0.0, -1.0));
    CHECK(g.samples.back().point == Complex(10.0, 1.0));
    // x-major: the second sample shares the abscissa of the first.
    CHECK(g.samples[1].point.real() == 0.0);
    CHECK(g.samples[21].point.real() == 0.1);
    CHECK(is_conjugate_closed(g.samples));
    std::set<std::pair<double, double>> distinct;
    for (const auto& s : g.samples) {
        distinct.insert({s.point.real(), s.point.imag()});
    }
    CHECK(distinct.size() == g.size());
}

TEST_CASE("structured grid rejects even ny when closure is requested")
{
    CHECK_THROWS_AS(structured_grid(Domain::omega(), 10, 10), Error);
    CHECK_NOTHROW(structured_grid(Domain::omega(), 10, 10, false));
    CHECK_THROWS_AS(structured_grid(Domain::omega(), 1, 21), Error);
    CHECK_THROWS_AS(structured_grid(Domain{0, 1, -1, 2}, 5, 5), Error);
}

TEST_CASE("uniform grid: pairs, bounds and determinism")
{
    const auto a = uniform_random_grid(Domain::omega(), 1000, 42);
    const auto b = uniform_random_grid(Domain::omega(), 1000, 42);
    const auto c = uniform_random_grid(Domain::omega(), 1000, 43);
    REQUIRE(a.size() == 2000);
    CHECK(a.seed == std::optional<std::uint64_t>(42));
    CHECK(is_conjugate_closed(a.samples));
    bool same = true;
    bool differs = false;
    for (std::size_t i = 0; i < a.size(); ++i) {
        same = same && a.samples[i].point == b.samples[i].point;
        differs = differs || a.samples[i].point != c.samples[i].point;
        CHECK(Domain::omega().contains(a.samples[i].point));
        CHECK(a.samples[i].point.imag() != 0.0);
    }
    CHECK(same);
    CHECK(differs);
    CHECK(a.samples[1].point == std::conj(a.samples[0].point));
}

TEST_CASE("sample_oracle fills conjugate values exactly")
{
    const auto g = sample_oracle(structured_grid(Domain::omega(), 11, 5), special::bessel_oracle());
    CHECK(is_conjugate_closed(g.samples, true));
    for (const auto& s : g.samples) {
        CHECK(std::abs(s.value - special::h_of_s(s.point)) <= 1e-15 * std::abs(s.value));
    }
}

TEST_CASE("sample_oracle reports the pole it hit")
{
    SampleSet set;
    set.samples = {{Complex(1.0, 0.0), {}}, {Complex(special::kBesselJ0Zeros[0], 0.0), {}}, {Complex(3.0, 0.0), {}}};
    try {
        sample_oracle(set, special::bessel_oracle());
        FAIL("expected a pole error");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::pole);
        CHECK(e.point()->real() == special::kBesselJ0Zeros[0]);
    }
}

TEST_CASE("conjugate partners are bit-exact")
{
    std::vector<ComplexSample> s = {{Complex(1, 2), {}}, {Complex(3, 0), {}}, {Complex(1, -2), {}},
                                    {Complex(4, 1), {}}, {Complex(4, -1 - 1e-15), {}}, {Complex(5, -0.0), {}}};
    const auto p = conjugate_partners(s);
    CHECK(p[0] == 2);
    CHECK(p[2] == 0);
    CHECK(p[1] == -1);
    CHECK(p[3] == -1);
    CHECK(p[5] == -1);
    CHECK_FALSE(is_conjugate_closed(s));
    s.erase(s.begin() + 3, s.begin() + 5);
    CHECK(is_conjugate_closed(s));
}

TEST_CASE("sample CSV round trip is lossless and byte-identical")
{
    const auto g = sample_oracle(uniform_random_grid(Domain::omega(), 50, 9), special::bessel_oracle());
    std::ostringstream first;
    write_samples_csv(first, g, "ratapprox test seed=9");
    std::istringstream in(first.str());
    const auto back = read_samples_csv(in);
    REQUIRE(back.size() == g.size());
    CHECK(back.seed == std::optional<std::uint64_t>(9));
    CHECK(back.conjugate_closed);
    for (std::size_t i = 0; i < g.size(); ++i) {
        CHECK(back.samples[i].point == g.samples[i].point);
        CHECK(back.samples[i].value == g.samples[i].value);
    }
    std::ostringstream second;
    write_samples_csv(second, back, "ratapprox test seed=9");
    CHECK(first.str() == second.str());

    const auto again = sample_oracle(uniform_random_grid(Domain::omega(), 50, 9), special::bessel_oracle());
    std::ostringstream third;
    write_samples_csv(third, again, "ratapprox test seed=9");
    CHECK(first.str() == third.str());
}

TEST_CASE("malformed sample CSV is an io error")
{
    std::istringstream bad("re_s,im_s,re_f,im_f\n1,2,3\n");
    CHECK_THROWS_AS(read_samples_csv(bad), Error);
    std::istringstream junk("re_s,im_s,re_f,im_f\n1,x,3,4\n");
    CHECK_THROWS_AS(read_samples_csv(junk), Error);
}
