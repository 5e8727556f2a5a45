#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

#include "ratapprox/types.hpp"

namespace ratapprox {

enum class ErrorKind {
    invalid_argument,
    domain,               // argument outside the validity region of an evaluator
    pole,                 // function evaluated at (or numerically on) a pole
    symmetry,             // conjugate closure requested but not achievable
    partition_impossible,
    coincident_points,    // a left point equals a right point
    rank_zero,
    ill_conditioned,
    singular_at_point,    // sE - A singular at the requested s
    pencil_singular,      // det(M - lambda N) vanishes identically
    svd_failure,
    stagnation,
    divergence,
    insufficient_data,
    io,
};

std::string_view to_string(ErrorKind kind);

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what, std::optional<Complex> point = std::nullopt);

    ErrorKind kind() const noexcept { return kind_; }
    // The offending sample point, when the failure is tied to one.
    const std::optional<Complex>& point() const noexcept { return point_; }

private:
    ErrorKind kind_;
    std::optional<Complex> point_;
};

} // namespace ratapprox
