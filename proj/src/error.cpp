#include "larscp/error.hpp"

namespace larscp {

std::string_view to_string(ErrorKind kind) noexcept {
    switch (kind) {
        case ErrorKind::invalid_argument: return "invalid_argument";
        case ErrorKind::dimension_mismatch: return "dimension_mismatch";
        case ErrorKind::non_finite: return "non_finite";
        case ErrorKind::rank_deficient: return "rank_deficient";
        case ErrorKind::singular: return "singular";
        case ErrorKind::parse: return "parse";
        case ErrorKind::io: return "io";
        case ErrorKind::no_solution: return "no_solution";
    }
    return "unknown";
}

}  // namespace larscp
