#include "ratapprox/error.hpp"

namespace ratapprox {

std::string_view to_string(ErrorKind kind)
{
    switch (kind) {
    case ErrorKind::invalid_argument: return "invalid_argument";
    case ErrorKind::domain: return "domain";
    case ErrorKind::pole: return "pole";
    case ErrorKind::symmetry: return "symmetry";
    case ErrorKind::partition_impossible: return "partition_impossible";
    case ErrorKind::coincident_points: return "coincident_points";
    case ErrorKind::rank_zero: return "rank_zero";
    case ErrorKind::ill_conditioned: return "ill_conditioned";
    case ErrorKind::singular_at_point: return "singular_at_point";
    case ErrorKind::pencil_singular: return "pencil_singular";
    case ErrorKind::svd_failure: return "svd_failure";
    case ErrorKind::stagnation: return "stagnation";
    case ErrorKind::divergence: return "divergence";
    case ErrorKind::insufficient_data: return "insufficient_data";
    case ErrorKind::io: return "io";
    }
    return "unknown";
}

Error::Error(ErrorKind kind, const std::string& what, std::optional<Complex> point)
    : std::runtime_error(what), kind_(kind), point_(point)
{
}

} // namespace ratapprox
