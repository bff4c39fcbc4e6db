#include "pfcycle/errors.hpp"

namespace pfcycle {

const char* to_string(ErrorKind kind) noexcept {
    switch (kind) {
        case ErrorKind::Domain: return "domain";
        case ErrorKind::Range: return "range";
        case ErrorKind::Certification: return "certification";
        case ErrorKind::Design: return "design";
        case ErrorKind::NoiseBound: return "noise-bound";
        case ErrorKind::Parameter: return "parameter";
        case ErrorKind::Numeric: return "numeric";
        case ErrorKind::Usage: return "usage";
        case ErrorKind::Config: return "config";
    }
    return "?";
}

}  // namespace pfcycle
