#pragma once

#include "lzopt/protocol.hpp"
#include "lzopt/states.hpp"
#include "lzopt/su2.hpp"

#include <functional>
#include <optional>
#include <vector>

namespace lzopt {

/// Time-dependent H(t) = gamma(t) sigma3 + omega(t) sigma1 on [0, horizon].
/// Breakpoints are interior times where the drive may jump; integrators restart there.
struct DriveFunction {
    std::function<double(double)> gamma;
    std::function<double(double)> omega;
    double horizon = 0.0;
    std::vector<double> breakpoints;

    static DriveFunction constant(double gamma, double omega, double horizon);
};

/// Piecewise drive equivalent to a protocol without delta pulses.
/// Throws DomainError if the protocol contains a DeltaPulse.
DriveFunction drive_from_protocol(const Protocol& p);

/// Exact propagator of a protocol: closed-form exponentials for constant segments
/// and pulses; ramps use a midpoint product of `ramp_substeps` exponentials.
Unitary2 protocol_propagator(const Protocol& p);

QubitState propagate_protocol(const Protocol& p, const QubitState& initial);

struct IntegrationOptions {
    double abs_tol = 1e-10;
    double rel_tol = 1e-10;

    static IntegrationOptions defaults();
    static IntegrationOptions uniform(double tol) { return {tol, tol}; }
};

struct SchrodingerResult {
    Spinor state{};
    double norm_drift = 0.0;  // largest per-step renormalization | ||psi|| - 1 |
    std::size_t steps = 0;
};

/// Adaptive Dormand-Prince integration of i d/dt psi = H(t) psi (hbar = 1).
/// The state is projected back to unit norm after every accepted step.
/// Throws IntegrationError on step-size underflow.
SchrodingerResult integrate_schrodinger(const DriveFunction& d, const QubitState& initial,
                                        const IntegrationOptions& opts = IntegrationOptions::defaults());

/// Both columns of U(horizon, 0), integrated the same way.
Unitary2 integrate_propagator(const DriveFunction& d,
                              const IntegrationOptions& opts = IntegrationOptions::defaults());

struct EulerTrajectory {
    std::vector<double> times;
    std::vector<double> tau1;
    std::vector<double> tau2;
    std::vector<double> tau3;

    EulerAngles at(std::size_t k) const { return {tau3[k], tau1[k], tau2[k]}; }
    EulerAngles back() const { return at(times.size() - 1); }
};

/// Integrates
///   tau1' = 2 omega cos tau3
///   tau2' = -2 omega sin tau3 / cos tau1
///   tau3' = 2 gamma + 2 omega sin tau3 tan tau1
/// from (0, 0, 0), recording every accepted step. Throws SingularityError as soon
/// as |cos tau1| drops below the singularity tolerance.
EulerTrajectory integrate_euler_angles(const DriveFunction& d,
                                       const IntegrationOptions& opts = IntegrationOptions::defaults());

/// Gamma(t) that makes the Euler angle tau3 follow a prescribed curve at fixed omega.
/// tau3(0) must vanish. tau1 comes from tau1' = 2 omega cos tau3 and
/// Gamma = tau3'/2 - omega sin tau3 tan tau1.
DriveFunction inverse_engineer(std::function<double(double)> tau3, double omega, double horizon,
                               std::size_t samples = 4096);

struct TrajectoryRow {
    double t = 0.0;
    Spinor psi{};
    std::optional<EulerAngles> angles;
};

/// State (and Euler angles while the chart is valid) at n+1 uniform times.
std::vector<TrajectoryRow> sample_trajectory(const DriveFunction& d, const QubitState& initial,
                                             std::size_t n,
                                             const IntegrationOptions& opts = IntegrationOptions::defaults());

}  // namespace lzopt
