#include "lzopt/states.hpp"

#include "lzopt/config.hpp"

#include <cmath>
#include <numbers>

namespace lzopt {

QubitState::QubitState(cplx c0, cplx c1) {
    require_finite(c0.real(), "amplitude c0");
    require_finite(c0.imag(), "amplitude c0");
    require_finite(c1.real(), "amplitude c1");
    require_finite(c1.imag(), "amplitude c1");
    const double norm = std::hypot(std::abs(c0), std::abs(c1));
    if (norm == 0.0) {
        throw DomainError("state vector is zero");
    }
    amp_ = {c0 / norm, c1 / norm};
}

bool is_normalized(cplx c0, cplx c1, double tol) {
    return std::abs(std::norm(c0) + std::norm(c1) - 1.0) <= tol;
}

void LzParams::validate() const {
    require_finite(gamma, "gamma");
    require_positive(omega, "omega");
    if (c) {
        require_positive(*c, "c");
    }
    if (omega_max) {
        require_positive(*omega_max, "omega_max");
    }
}

QubitState lz_eigenstate(double gamma, double omega, Level level) {
    require_finite(gamma, "gamma");
    require_positive(omega, "omega");
    const double s = std::hypot(gamma, omega);
    // Both forms are the same ray (omega, lambda - gamma); pick the one that
    // avoids cancellation in lambda - gamma.
    if (level == Level::ground) {
        if (gamma <= 0.0) {
            return {s - gamma, -omega};
        }
        return {omega, -(s + gamma)};
    }
    if (gamma >= 0.0) {
        return {s + gamma, omega};
    }
    return {omega, s - gamma};
}

cplx overlap(const QubitState& a, const QubitState& b) {
    return std::conj(a.c0()) * b.c0() + std::conj(a.c1()) * b.c1();
}

double fidelity(const QubitState& achieved, const QubitState& target, bool squared) {
    const double f = std::min(1.0, std::abs(overlap(target, achieved)));
    return squared ? f * f : f;
}

double infidelity(const QubitState& achieved, const QubitState& target, bool squared) {
    // Orthogonal complement of the target: (-conj(t1), conj(t0)).
    const cplx perp = -target.c1() * achieved.c0() + target.c0() * achieved.c1();
    const double p = std::min(1.0, std::norm(perp));
    if (squared) {
        return p;
    }
    return p / (1.0 + std::sqrt(1.0 - p));
}

QubitState to_sigma1_basis(const QubitState& s) {
    constexpr double r = std::numbers::sqrt2 / 2.0;
    return {r * (s.c0() + s.c1()), r * (s.c0() - s.c1())};
}

QubitState apply(const Unitary2& u, const QubitState& s) {
    const Spinor v = u.apply(s.amplitudes());
    return {v[0], v[1]};
}

}  // namespace lzopt
