#pragma once

#include "lzopt/states.hpp"

#include <optional>
#include <string_view>

namespace lzopt {

enum class Regime { unconstrained, bang_off_bang, bang_bang };

std::string_view to_string(Regime r);
Regime regime_from_string(std::string_view s);

/// Minimal time and the parameters of the protocol that realizes it.
struct TminResult {
    double t_min = 0.0;
    Regime regime = Regime::unconstrained;
    std::optional<double> alpha_in;  // unconstrained only
    std::optional<double> alpha_f;
    std::optional<double> t_c;       // constrained only; duration of each bang
    std::optional<double> t_off;
};

/// Speed-limit times for a state pair.
struct QslReport {
    double t_min = 0.0;
    double t_qsl_overlap = 0.0;   // cos(omega T) = |<f|i>|
    double t_qsl_variance = 0.0;  // omega replaced by the energy spread of |i> under omega sigma1
    bool variance_defined = true; // false when that spread is zero (t_qsl_variance = +inf)
    double t_fleming = 0.0;       // arccos|<f|i>| / dE for the stated constant Hamiltonian
    double energy_spread = 0.0;   // dE of |i> under omega sigma1 (hbar = 1)
};

/// Minimal time with Gamma(t) unbounded and omega fixed:
/// cos(omega T) = |f0 i0| + |f1 i1|. Symmetric in (initial, final).
double tmin_general(const QubitState& initial, const QubitState& final_state, double omega);

/// Same, with omega(t) also a control bounded by omega_max when present.
double tmin_general(const QubitState& initial, const QubitState& final_state, const LzParams& params);

/// Optical driving with fixed detuning and unconstrained Rabi frequency: components
/// are taken in the sigma1 eigenbasis and omega is replaced by |detuning|.
double tmin_optical(const QubitState& initial, const QubitState& final_state, double detuning);

/// Ground of H_{-gamma} to ground of H_{+gamma}: tan(omega T) = gamma / omega.
double tmin_ground_to_ground(double gamma, double omega);

struct PulseAreas {
    double alpha_in = 0.0;
    double alpha_f = 0.0;
    double t_min = 0.0;
    double fidelity = 1.0;
};

/// Areas of the instantaneous sigma3 pulses e^{-i alpha sigma3} that, around a
/// free sigma1 evolution of length t_min, map initial onto final up to phase.
/// Both angles are reported in (-pi/2, pi/2].
/// Throws ConsistencyError if no solution reaches fidelity 1 - 1e-9.
PulseAreas pulse_areas(const QubitState& initial, const QubitState& final_state, double omega);

/// Full unconstrained solution (t_min plus pulse areas).
TminResult solve_unconstrained(const QubitState& initial, const QubitState& final_state,
                               double omega);

/// bang_bang iff c <= omega^2 / gamma.
Regime regime(double gamma, double omega, std::optional<double> c);

/// Bounded |Gamma(t)| <= c between the grounds of H_{-gamma} and H_{+gamma}.
TminResult tmin_constrained(double gamma, double omega, double c);

/// sqrt(<H^2> - <H>^2) for H = a sigma3 + b sigma1 (hbar = 1).
double energy_spread(const QubitState& s, double a, double b);

/// t_fleming uses the constant Hamiltonian fleming_gamma sigma3 + omega sigma1.
QslReport qsl_times(const QubitState& initial, const QubitState& final_state, double omega,
                    double fleming_gamma = 0.0);

}  // namespace lzopt
