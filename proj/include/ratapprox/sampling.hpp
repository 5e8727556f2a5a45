#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "ratapprox/types.hpp"

namespace ratapprox {

// Axis-aligned rectangle in the complex plane.
struct Domain {
    double x_min = 0.0;
    double x_max = 10.0;
    double y_min = -1.0;
    double y_max = 1.0;

    static Domain omega() { return {}; }

    void validate() const;
    bool contains(Complex s, double margin = 0.0) const;
    bool y_symmetric() const { return y_min == -y_max; }
};

struct ComplexSample {
    Complex point;
    Complex value;
};

struct SampleSet {
    std::vector<ComplexSample> samples;
    bool conjugate_closed = false;
    std::optional<std::uint64_t> seed;

    std::size_t size() const { return samples.size(); }
    bool empty() const { return samples.empty(); }
    std::vector<Complex> points() const;
    std::vector<Complex> values() const;
};

/// nx * ny points on the Cartesian product of equispaced abscissae and
/// ordinates, x-major. With conjugate_closed the ordinates are built as
/// exact negatives of each other, which needs a y-symmetric domain and odd ny.
SampleSet structured_grid(const Domain& domain, std::size_t nx, std::size_t ny, bool conjugate_closed = true);

/// n_pairs points uniform over x in [x_min, x_max], y in (0, y_max], each
/// followed by its conjugate. Pure function of (domain, n_pairs, seed).
SampleSet uniform_random_grid(const Domain& domain, std::size_t n_pairs, std::uint64_t seed);

/// Fills in values. For conjugate-closed sets the oracle is evaluated at the
/// upper member of each pair and the lower member receives the conjugate.
/// A pole error from the oracle is rethrown naming the offending point.
SampleSet sample_oracle(SampleSet points, const Oracle& oracle);

/// For every sample, the index of the sample at its conjugate point, or -1
/// for real points and unpaired points. Matching is bit-exact.
std::vector<std::ptrdiff_t> conjugate_partners(std::span<const ComplexSample> samples);

/// True when every non-real point has a partner at its exact conjugate.
/// With check_values, partner values must also be exact conjugates.
bool is_conjugate_closed(std::span<const ComplexSample> samples, bool check_values = false);

// CSV with header `re_s,im_s,re_f,im_f`, 17 significant digits. Lines
// starting with '#' are metadata comments.
void write_samples_csv(std::ostream& os, const SampleSet& set, std::string_view metadata = {});
SampleSet read_samples_csv(std::istream& is);

} // namespace ratapprox
