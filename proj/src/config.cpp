#include "lzopt/config.hpp"

#include <cmath>
#include <cstdlib>
#include <string>

namespace lzopt {

namespace {

Tolerances load_defaults() {
    Tolerances tol;
    if (const char* env = std::getenv("QOC_LZ_TOL")) {
        char* end = nullptr;
        const double value = std::strtod(env, &end);
        if (end != env && std::isfinite(value) && value > 0.0) {
            tol.integration_abs = value;
            tol.integration_rel = value;
        }
    }
    return tol;
}

}  // namespace

const Tolerances& default_tolerances() {
    static const Tolerances tol = load_defaults();
    return tol;
}

void require_finite(double value, const std::string& what) {
    if (!std::isfinite(value)) {
        throw DomainError(what + " must be finite");
    }
}

void require_positive(double value, const std::string& what) {
    require_finite(value, what);
    if (!(value > 0.0)) {
        throw DomainError(what + " must be > 0");
    }
}

}  // namespace lzopt
