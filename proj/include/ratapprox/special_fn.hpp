#pragma once

#include <array>

#include "ratapprox/types.hpp"

namespace ratapprox::special {

// Largest |s| accepted by bessel_j0. The 60-term ascending series stops
// converging shortly beyond this radius.
inline constexpr double kBesselValidityRadius = 25.0;

// |J0(s)| below this is treated as sampling exactly on a pole of 1/J0.
inline constexpr double kPoleThreshold = 1e-13;

// First six positive zeros of J0, 15 significant digits.
inline constexpr std::array<double, 6> kBesselJ0Zeros = {
    2.40482555769577, 5.52007811028631, 8.65372791291101,
    11.7915344390142, 14.9309177084877, 18.0710639679109,
};

/// Bessel function of the first kind, order zero, for complex argument.
///
/// Ascending power series sum_k (-1)^k (s/2)^{2k} / (k!)^2 accumulated in
/// extended precision, truncated once a term drops below 1e-18 of the
/// largest term seen (at most 60 terms). Accurate to ~1e-13 absolute for
/// |s| <= 12; real arguments give real results and the evaluation is
/// exactly conjugate symmetric.
///
/// Throws Error(ErrorKind::domain) when |s| > kBesselValidityRadius.
Complex bessel_j0(Complex s);

/// H(s) = 1 / J0(s). Throws Error(ErrorKind::pole) when |J0(s)| < kPoleThreshold.
Complex h_of_s(Complex s);

/// h_of_s as an Oracle.
Oracle bessel_oracle();

} // namespace ratapprox::special
