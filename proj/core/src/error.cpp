#include "mflab/error.hpp"

namespace mflab {

std::string_view to_string(ErrorKind kind) noexcept {
    switch (kind) {
        case ErrorKind::Domain: return "domain";
        case ErrorKind::EmptyRange: return "empty-range";
        case ErrorKind::Capacity: return "capacity";
        case ErrorKind::Coverage: return "coverage";
        case ErrorKind::Singular: return "singular-factor";
        case ErrorKind::Usage: return "usage";
        case ErrorKind::Verification: return "verification";
    }
    return "unknown";
}

void fail(ErrorKind kind, const std::string& message) {
    throw Error(kind, message);
}

}  // namespace mflab
