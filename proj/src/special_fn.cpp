#include "ratapprox/special_fn.hpp"

#include <cmath>
#include <sstream>

#include "ratapprox/error.hpp"

namespace ratapprox::special {

namespace {

constexpr int kMaxTerms = 60;
constexpr long double kRelativeCutoff = 1e-18L;

template <typename T>
T series_j0(T half)
{
    const T q = -(half * half);
    T term = T(1);
    T sum = T(1);
    long double largest = 1.0L;
    for (int k = 1; k < kMaxTerms; ++k) {
        term = term * q;
        term = term / static_cast<long double>(k * k);
        sum += term;
        const long double mag = std::abs(term);
        largest = std::max(largest, mag);
        if (mag < kRelativeCutoff * largest) {
            break;
        }
    }
    return sum;
}

} // namespace

Complex bessel_j0(Complex s)
{
    if (!std::isfinite(s.real()) || !std::isfinite(s.imag()) || std::abs(s) > kBesselValidityRadius) {
        std::ostringstream msg;
        msg << "bessel_j0: |s| = " << std::abs(s) << " outside validity radius " << kBesselValidityRadius;
        throw Error(ErrorKind::domain, msg.str(), s);
    }
    if (s.imag() == 0.0) {
        const long double x = static_cast<long double>(s.real()) / 2.0L;
        return {static_cast<double>(series_j0(x)), 0.0};
    }
    const std::complex<long double> half(static_cast<long double>(s.real()) / 2.0L,
                                         static_cast<long double>(s.imag()) / 2.0L);
    const auto sum = series_j0(half);
    return {static_cast<double>(sum.real()), static_cast<double>(sum.imag())};
}

Complex h_of_s(Complex s)
{
    const Complex j0 = bessel_j0(s);
    if (std::abs(j0) < kPoleThreshold) {
        std::ostringstream msg;
        msg << "h_of_s: |J0(s)| = " << std::abs(j0) << " at s = " << s << " (pole of 1/J0)";
        throw Error(ErrorKind::pole, msg.str(), s);
    }
    return 1.0 / j0;
}

Oracle bessel_oracle()
{
    return [](Complex s) { return h_of_s(s); };
}

} // namespace ratapprox::special
