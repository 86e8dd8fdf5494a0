#include "lzopt/analytic.hpp"

#include "lzopt/config.hpp"

#include <boost/math/tools/minima.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

namespace lzopt {

namespace {

constexpr double pi = std::numbers::pi;

// Angle in [0, pi/2] between two rays given |<u|v>| and |<u_perp|v>|.
double ray_angle(double along, double across) { return std::atan2(std::abs(across), std::abs(along)); }

// Map an angle defined modulo pi into (-pi/2, pi/2].
double wrap_half_turn(double a) {
    double r = std::remainder(a, pi);
    if (r <= -pi / 2.0) {
        r += pi;
    }
    return r;
}

double checked_asin_sqrt(double arg, const char* what) {
    const double clamp = default_tolerances().clamp;
    if (!(arg >= -clamp && arg <= 1.0 + clamp)) {
        throw DomainError(std::string(what) + ": arcsin argument outside [0, 1]");
    }
    return std::asin(std::sqrt(std::clamp(arg, 0.0, 1.0)));
}

struct ComposedOverlap {
    double fidelity;
    double alpha_f;
};

// Best final pulse for a given initial pulse. The overlap after the final pulse is
// A e^{-i alpha_f} + B e^{i alpha_f}, whose modulus peaks at |A| + |B|.
ComposedOverlap best_final_pulse(const QubitState& initial, const QubitState& final_state,
                                 const Unitary2& free, double alpha_in) {
    const Spinor v = (free * expm_axis(Pauli::z, alpha_in)).apply(initial.amplitudes());
    const cplx a = std::conj(final_state.c0()) * v[0];
    const cplx b = std::conj(final_state.c1()) * v[1];
    const double alpha_f = (std::arg(a) - std::arg(b)) / 2.0;
    return {std::abs(a) + std::abs(b), alpha_f};
}

}  // namespace

std::string_view to_string(Regime r) {
    switch (r) {
        case Regime::unconstrained:
            return "unconstrained";
        case Regime::bang_off_bang:
            return "bang_off_bang";
        case Regime::bang_bang:
            return "bang_bang";
    }
    return "unknown";
}

Regime regime_from_string(std::string_view s) {
    if (s == "unconstrained") return Regime::unconstrained;
    if (s == "bang_off_bang") return Regime::bang_off_bang;
    if (s == "bang_bang") return Regime::bang_bang;
    throw DomainError("unknown regime '" + std::string(s) + "'");
}

double tmin_general(const QubitState& initial, const QubitState& final_state, double omega) {
    require_positive(omega, "omega");
    const double i0 = std::abs(initial.c0());
    const double i1 = std::abs(initial.c1());
    const double f0 = std::abs(final_state.c0());
    const double f1 = std::abs(final_state.c1());
    // Angle between the real unit vectors (|i0|, |i1|) and (|f0|, |f1|); its cosine is
    // |f0 i0| + |f1 i1| and it vanishes exactly when |f1||i0| = |f0||i1|.
    return ray_angle(f0 * i0 + f1 * i1, f1 * i0 - f0 * i1) / omega;
}

double tmin_general(const QubitState& initial, const QubitState& final_state, const LzParams& params) {
    params.validate();
    return tmin_general(initial, final_state, params.effective_omega());
}

double tmin_optical(const QubitState& initial, const QubitState& final_state, double detuning) {
    require_finite(detuning, "detuning");
    return tmin_general(to_sigma1_basis(initial), to_sigma1_basis(final_state), std::abs(detuning));
}

double tmin_ground_to_ground(double gamma, double omega) {
    require_positive(gamma, "gamma");
    require_positive(omega, "omega");
    return std::atan2(gamma, omega) / omega;
}

PulseAreas pulse_areas(const QubitState& initial, const QubitState& final_state, double omega) {
    const double t_min = tmin_general(initial, final_state, omega);
    const Unitary2 free = expm_pauli(0.0, omega, t_min);

    // alpha and alpha + pi differ by a global phase, so a half turn suffices.
    constexpr int seeds = 64;
    constexpr double step = pi / seeds;
    double best_alpha = 0.0;
    double best_fid = -1.0;
    for (int k = 0; k < seeds; ++k) {
        const double alpha = -pi / 2.0 + step * k;
        const double fid = best_final_pulse(initial, final_state, free, alpha).fidelity;
        const bool better = fid > best_fid + 1e-15 ||
                            (std::abs(fid - best_fid) <= 1e-15 && std::abs(alpha) < std::abs(best_alpha));
        if (better) {
            best_fid = fid;
            best_alpha = alpha;
        }
    }

    if (best_fid < 1.0 - 1e-15) {
        auto deficit = [&](double alpha) {
            return 1.0 - best_final_pulse(initial, final_state, free, alpha).fidelity;
        };
        const auto [x, fx] = boost::math::tools::brent_find_minima(
            deficit, best_alpha - step, best_alpha + step, std::numeric_limits<double>::digits);
        if (1.0 - fx >= best_fid) {
            best_alpha = x;
        }
    }

    const ComposedOverlap sol = best_final_pulse(initial, final_state, free, best_alpha);
    if (sol.fidelity < 1.0 - 1e-9) {
        throw ConsistencyError("pulse_areas: no pulse pair reaches the target at t_min (fidelity " +
                               std::to_string(sol.fidelity) + ")");
    }
    return {wrap_half_turn(best_alpha), wrap_half_turn(sol.alpha_f), t_min, std::min(1.0, sol.fidelity)};
}

TminResult solve_unconstrained(const QubitState& initial, const QubitState& final_state,
                               double omega) {
    const PulseAreas areas = pulse_areas(initial, final_state, omega);
    TminResult r;
    r.t_min = areas.t_min;
    r.regime = Regime::unconstrained;
    r.alpha_in = areas.alpha_in;
    r.alpha_f = areas.alpha_f;
    return r;
}

Regime regime(double gamma, double omega, std::optional<double> c) {
    require_positive(gamma, "gamma");
    require_positive(omega, "omega");
    if (!c) {
        return Regime::unconstrained;
    }
    require_positive(*c, "c");
    return *c <= omega * omega / gamma ? Regime::bang_bang : Regime::bang_off_bang;
}

TminResult tmin_constrained(double gamma, double omega, double c) {
    TminResult r;
    r.regime = regime(gamma, omega, c);
    const double rabi = std::hypot(c, omega);
    if (r.regime == Regime::bang_off_bang) {
        const double arg = (c * c + omega * omega) / (2.0 * c * (c + gamma));
        r.t_c = checked_asin_sqrt(arg, "bang duration") / rabi;
        const double num = c * gamma - omega * omega;
        const double den = omega * std::sqrt(c * c + 2.0 * c * gamma - omega * omega);
        r.t_off = std::atan2(num, den) / omega;
    } else {
        const double arg = gamma * (c * c + omega * omega) / (2.0 * omega * omega * (c + gamma));
        r.t_c = checked_asin_sqrt(arg, "bang duration") / rabi;
        r.t_off = 0.0;
    }
    r.t_min = 2.0 * *r.t_c + *r.t_off;
    return r;
}

double energy_spread(const QubitState& s, double a, double b) {
    // |h x n| with h = (b, 0, a) and n the Bloch vector; unlike |h|^2 - (h.n)^2
    // this vanishes exactly for eigenstates.
    const cplx cross = std::conj(s.c0()) * s.c1();
    const double x = 2.0 * cross.real();
    const double y = 2.0 * cross.imag();
    const double z = std::norm(s.c0()) - std::norm(s.c1());
    return std::sqrt(a * a * y * y + (a * x - b * z) * (a * x - b * z) + b * b * y * y);
}

QslReport qsl_times(const QubitState& initial, const QubitState& final_state, double omega,
                    double fleming_gamma) {
    require_positive(omega, "omega");
    require_finite(fleming_gamma, "fleming_gamma");

    const cplx along = overlap(final_state, initial);
    const cplx across = -final_state.c1() * initial.c0() + final_state.c0() * initial.c1();
    const double angle = ray_angle(std::abs(along), std::abs(across));

    QslReport q;
    q.t_min = tmin_general(initial, final_state, omega);
    q.t_qsl_overlap = angle / omega;
    q.energy_spread = energy_spread(initial, 0.0, omega);
    constexpr double inf = std::numeric_limits<double>::infinity();
    if (angle == 0.0) {
        q.t_qsl_variance = 0.0;
    } else if (q.energy_spread > 0.0) {
        q.t_qsl_variance = angle / q.energy_spread;
    } else {
        q.t_qsl_variance = inf;
        q.variance_defined = false;
    }
    const double spread_h = energy_spread(initial, fleming_gamma, omega);
    q.t_fleming = angle == 0.0 ? 0.0 : (spread_h > 0.0 ? angle / spread_h : inf);
    return q;
}

}  // namespace lzopt
