#include "ratapprox/sampling.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <istream>
#include <map>
#include <ostream>
#include <random>
#include <sstream>

#include "ratapprox/error.hpp"

namespace ratapprox {

void Domain::validate() const
{
    if (!(x_min < x_max) || !(y_min < y_max)) {
        throw Error(ErrorKind::invalid_argument, "domain bounds must satisfy x_min < x_max and y_min < y_max");
    }
}

bool Domain::contains(Complex s, double margin) const
{
    return s.real() >= x_min - margin && s.real() <= x_max + margin && s.imag() >= y_min - margin
        && s.imag() <= y_max + margin;
}

std::vector<Complex> SampleSet::points() const
{
    std::vector<Complex> out;
    out.reserve(samples.size());
    for (const auto& s : samples) {
        out.push_back(s.point);
    }
    return out;
}

std::vector<Complex> SampleSet::values() const
{
    std::vector<Complex> out;
    out.reserve(samples.size());
    for (const auto& s : samples) {
        out.push_back(s.value);
    }
    return out;
}

SampleSet structured_grid(const Domain& domain, std::size_t nx, std::size_t ny, bool conjugate_closed)
{
    domain.validate();
    if (nx < 2 || ny < 2) {
        throw Error(ErrorKind::invalid_argument, "structured_grid: nx and ny must be >= 2");
    }
    std::vector<double> ys(ny);
    if (conjugate_closed) {
        if (!domain.y_symmetric()) {
            throw Error(ErrorKind::symmetry, "structured_grid: conjugate closure needs y_min == -y_max");
        }
        if (ny % 2 == 0) {
            throw Error(ErrorKind::symmetry, "structured_grid: conjugate closure needs odd ny so y = 0 is on the grid");
        }
        const std::size_t half = (ny - 1) / 2;
        for (std::size_t j = 0; j <= half; ++j) {
            const double y = domain.y_max * static_cast<double>(j) / static_cast<double>(half);
            ys[half + j] = y;
            ys[half - j] = -y;
        }
        ys[half] = 0.0;
    } else {
        const double dy = (domain.y_max - domain.y_min) / static_cast<double>(ny - 1);
        for (std::size_t j = 0; j < ny; ++j) {
            ys[j] = domain.y_min + dy * static_cast<double>(j);
        }
        ys.back() = domain.y_max;
    }

    SampleSet set;
    set.conjugate_closed = conjugate_closed;
    set.samples.reserve(nx * ny);
    const double dx = (domain.x_max - domain.x_min) / static_cast<double>(nx - 1);
    for (std::size_t i = 0; i < nx; ++i) {
        const double x = (i + 1 == nx) ? domain.x_max : domain.x_min + dx * static_cast<double>(i);
        for (double y : ys) {
            set.samples.push_back({Complex(x, y), Complex(0.0, 0.0)});
        }
    }
    return set;
}

namespace {

// Portable uniform draw in [0, 1): the top 53 bits of the generator output.
double unit_draw(std::mt19937_64& rng)
{
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

} // namespace

SampleSet uniform_random_grid(const Domain& domain, std::size_t n_pairs, std::uint64_t seed)
{
    domain.validate();
    if (n_pairs < 1) {
        throw Error(ErrorKind::invalid_argument, "uniform_random_grid: n_pairs must be >= 1");
    }
    if (!domain.y_symmetric()) {
        throw Error(ErrorKind::symmetry, "uniform_random_grid: conjugate pairs need y_min == -y_max");
    }
    std::mt19937_64 rng(seed);
    SampleSet set;
    set.conjugate_closed = true;
    set.seed = seed;
    set.samples.reserve(2 * n_pairs);
    const double width = domain.x_max - domain.x_min;
    for (std::size_t k = 0; k < n_pairs; ++k) {
        const double x = domain.x_min + width * unit_draw(rng);
        // 1 - u lies in (0, 1], so y is never exactly on the real axis.
        const double y = domain.y_max * (1.0 - unit_draw(rng));
        set.samples.push_back({Complex(x, y), Complex(0.0, 0.0)});
        set.samples.push_back({Complex(x, -y), Complex(0.0, 0.0)});
    }
    return set;
}

std::vector<std::ptrdiff_t> conjugate_partners(std::span<const ComplexSample> samples)
{
    using Key = std::pair<std::uint64_t, std::uint64_t>;
    auto key = [](Complex z) {
        // +0.0 and -0.0 compare equal as points.
        const double re = z.real() == 0.0 ? 0.0 : z.real();
        const double im = z.imag() == 0.0 ? 0.0 : z.imag();
        return Key{std::bit_cast<std::uint64_t>(re), std::bit_cast<std::uint64_t>(im)};
    };
    std::map<Key, std::ptrdiff_t> index;
    for (std::size_t i = 0; i < samples.size(); ++i) {
        index.emplace(key(samples[i].point), static_cast<std::ptrdiff_t>(i));
    }
    std::vector<std::ptrdiff_t> partner(samples.size(), -1);
    for (std::size_t i = 0; i < samples.size(); ++i) {
        const Complex p = samples[i].point;
        if (p.imag() == 0.0) {
            continue;
        }
        const auto it = index.find(key(std::conj(p)));
        if (it != index.end()) {
            partner[i] = it->second;
        }
    }
    return partner;
}

bool is_conjugate_closed(std::span<const ComplexSample> samples, bool check_values)
{
    const auto partner = conjugate_partners(samples);
    for (std::size_t i = 0; i < samples.size(); ++i) {
        if (samples[i].point.imag() == 0.0) {
            continue;
        }
        if (partner[i] < 0) {
            return false;
        }
        if (check_values && samples[static_cast<std::size_t>(partner[i])].value != std::conj(samples[i].value)) {
            return false;
        }
    }
    return true;
}

SampleSet sample_oracle(SampleSet points, const Oracle& oracle)
{
    auto& samples = points.samples;
    const std::size_t n = samples.size();
    std::vector<std::ptrdiff_t> partner;
    if (points.conjugate_closed) {
        partner = conjugate_partners(samples);
    } else {
        partner.assign(n, -1);
    }
    // Lower members of a pair copy their partner; everything else calls the oracle.
    auto is_mirror = [&](std::size_t i) { return partner[i] >= 0 && samples[i].point.imag() < 0.0; };

    std::vector<std::optional<Error>> errors(n);
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(n); ++i) {
        const auto u = static_cast<std::size_t>(i);
        if (is_mirror(u)) {
            continue;
        }
        try {
            samples[u].value = oracle(samples[u].point);
        } catch (const Error& e) {
            errors[u] = e;
        } catch (const std::exception& e) {
            errors[u] = Error(ErrorKind::invalid_argument, e.what(), samples[u].point);
        }
    }
    for (std::size_t i = 0; i < n; ++i) {
        if (errors[i]) {
            std::ostringstream msg;
            msg << "sample_oracle: oracle failed at sample " << i << " s = " << samples[i].point << ": "
                << errors[i]->what();
            throw Error(errors[i]->kind(), msg.str(), samples[i].point);
        }
    }
    for (std::size_t i = 0; i < n; ++i) {
        if (is_mirror(i)) {
            samples[i].value = std::conj(samples[static_cast<std::size_t>(partner[i])].value);
        }
    }
    return points;
}

void write_samples_csv(std::ostream& os, const SampleSet& set, std::string_view metadata)
{
    if (!metadata.empty()) {
        os << "# " << metadata << '\n';
    }
    os << "re_s,im_s,re_f,im_f\n";
    std::ostringstream line;
    line.precision(17);
    for (const auto& s : set.samples) {
        line.str({});
        line << s.point.real() << ',' << s.point.imag() << ',' << s.value.real() << ',' << s.value.imag() << '\n';
        os << line.str();
    }
}

SampleSet read_samples_csv(std::istream& is)
{
    SampleSet set;
    std::string line;
    bool header_seen = false;
    std::size_t lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        if (line.empty() || line[0] == '#') {
            if (line.rfind("# ", 0) == 0) {
                const auto pos = line.find("seed=");
                if (pos != std::string::npos && line.compare(pos + 5, 4, "none") != 0) {
                    set.seed = std::stoull(line.substr(pos + 5));
                }
            }
            continue;
        }
        if (!header_seen) {
            if (line.rfind("re_s,im_s,re_f,im_f", 0) != 0) {
                throw Error(ErrorKind::io, "sample CSV: expected header re_s,im_s,re_f,im_f");
            }
            header_seen = true;
            continue;
        }
        std::array<double, 4> v{};
        std::istringstream fields(line);
        std::string field;
        for (std::size_t k = 0; k < 4; ++k) {
            if (!std::getline(fields, field, ',')) {
                throw Error(ErrorKind::io, "sample CSV: too few columns on line " + std::to_string(lineno));
            }
            try {
                v[k] = std::stod(field);
            } catch (const std::exception&) {
                throw Error(ErrorKind::io, "sample CSV: bad number '" + field + "' on line " + std::to_string(lineno));
            }
        }
        set.samples.push_back({Complex(v[0], v[1]), Complex(v[2], v[3])});
    }
    if (!header_seen) {
        throw Error(ErrorKind::io, "sample CSV: missing header");
    }
    set.conjugate_closed = is_conjugate_closed(set.samples, true);
    return set;
}

} // namespace ratapprox
