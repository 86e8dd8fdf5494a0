#include "lzopt/dynamics.hpp"

#include "lzopt/config.hpp"

#include <boost/math/interpolators/cubic_hermite.hpp>
#include <boost/numeric/odeint.hpp>

#include <algorithm>
#include <array>
#include <cmath>
#include <memory>
#include <string>

namespace lzopt {

namespace odeint = boost::numeric::odeint;

namespace {

// Times at which integration restarts: breakpoints plus extra stops, sorted, in (0, horizon].
std::vector<double> stop_times(const DriveFunction& d, const std::vector<double>& extra) {
    std::vector<double> stops;
    for (double t : d.breakpoints) {
        if (t > 0.0 && t < d.horizon) stops.push_back(t);
    }
    for (double t : extra) {
        if (t > 0.0 && t < d.horizon) stops.push_back(t);
    }
    stops.push_back(d.horizon);
    std::sort(stops.begin(), stops.end());
    stops.erase(std::unique(stops.begin(), stops.end()), stops.end());
    return stops;
}

// Interval of smoothness that contains [a, b].
std::pair<double, double> smooth_piece(const DriveFunction& d, double a, double b) {
    double lo = 0.0;
    double hi = d.horizon;
    for (double t : d.breakpoints) {
        if (t <= a) lo = std::max(lo, t);
        if (t >= b) hi = std::min(hi, t);
    }
    return {lo, hi};
}

// Drive evaluation time kept strictly inside a smooth piece, so that a
// right-continuous piecewise drive is sampled on the correct side of a jump.
double inside(double t, double lo, double hi) {
    if (t >= hi) return std::nextafter(hi, lo);
    if (t < lo) return lo;
    return t;
}

// Controlled Dormand-Prince stepping through the stop times. After every accepted
// step `project` may map the state back onto its manifold; `on_step` sees the
// projected state.
template <std::size_t N, class Rhs, class Project, class OnStep, class OnStop>
void integrate_stops(const DriveFunction& d, std::array<double, N>& x, const std::vector<double>& stops,
                     const IntegrationOptions& opts, Rhs rhs, Project project, OnStep on_step, OnStop on_stop) {
    using State = std::array<double, N>;
    require_positive(opts.abs_tol, "absolute tolerance");
    require_positive(opts.rel_tol, "relative tolerance");
    constexpr int max_rejects = 200;
    double t0 = 0.0;
    try {
        for (double t1 : stops) {
            if (t1 > t0) {
                const auto [lo, hi] = smooth_piece(d, t0, t1);
                auto sys = [&, lo = lo, hi = hi](const State& s, State& ds, double t) {
                    rhs(inside(t, lo, hi), s, ds);
                };
                auto stepper = odeint::make_controlled(opts.abs_tol, opts.rel_tol,
                                                       odeint::runge_kutta_dopri5<State>());
                const double min_dt = 1e-14 * std::max(1.0, std::abs(t1));
                double t = t0;
                double dt = (t1 - t0) / 64.0;
                while (t1 - t > min_dt) {
                    const bool last = dt >= t1 - t;
                    if (last) dt = t1 - t;
                    int rejects = 0;
                    while (stepper.try_step(sys, x, t, dt) == odeint::fail) {
                        if (++rejects > max_rejects || dt < min_dt) {
                            throw IntegrationError("step size underflow near t = " + std::to_string(t) +
                                                   " (dt = " + std::to_string(dt) + ")");
                        }
                    }
                    if (last && dt > 0.0 && std::abs(t - t1) <= min_dt) t = t1;
                    project(x);
                    on_step(t, x);
                }
            }
            on_stop(t1, x);
            t0 = t1;
        }
    } catch (const IntegrationError&) {
        throw;
    } catch (const std::runtime_error& e) {
        throw IntegrationError(std::string("integration failed near t = ") + std::to_string(t0) + ": " +
                               e.what());
    }
}

// Rescales each 4-component spinor block to unit norm and returns the largest
// correction applied.
template <std::size_t N>
double renormalize(std::array<double, N>& x) {
    double drift = 0.0;
    for (std::size_t k = 0; k < N; k += 4) {
        const double norm = std::sqrt(x[k] * x[k] + x[k + 1] * x[k + 1] + x[k + 2] * x[k + 2] + x[k + 3] * x[k + 3]);
        drift = std::max(drift, std::abs(norm - 1.0));
        for (std::size_t j = k; j < k + 4; ++j) x[j] /= norm;
    }
    return drift;
}

auto no_projection = [](auto&) {};

void schrodinger_rhs(const DriveFunction& d, double t, const double* x, double* dx) {
    const double g = d.gamma(t);
    const double w = d.omega(t);
    // -i H psi with H = [[g, w], [w, -g]], psi = (x0 + i x1, x2 + i x3)
    const double h0r = g * x[0] + w * x[2];
    const double h0i = g * x[1] + w * x[3];
    const double h1r = w * x[0] - g * x[2];
    const double h1i = w * x[1] - g * x[3];
    dx[0] = h0i;
    dx[1] = -h0r;
    dx[2] = h1i;
    dx[3] = -h1r;
}

void check_drive(const DriveFunction& d) {
    require_finite(d.horizon, "horizon");
    if (d.horizon < 0.0) {
        throw DomainError("drive horizon must be >= 0");
    }
    if (!d.gamma || !d.omega) {
        throw DomainError("drive functions are not set");
    }
}

Unitary2 ramp_propagator(const RampSegment& r) {
    const int n = default_tolerances().ramp_substeps;
    const double h = r.duration / n;
    Unitary2 u = Unitary2::identity();
    for (int k = 0; k < n; ++k) {
        u = expm_pauli(r.gamma_at((k + 0.5) * h), r.omega, h) * u;
    }
    return u;
}

}  // namespace

DriveFunction DriveFunction::constant(double gamma, double omega, double horizon) {
    return {[gamma](double) { return gamma; }, [omega](double) { return omega; }, horizon, {}};
}

DriveFunction drive_from_protocol(const Protocol& p) {
    struct Piece {
        double start;
        Segment seg;
    };
    auto pieces = std::make_shared<std::vector<Piece>>();
    double t = 0.0;
    std::vector<double> breaks;
    for (const auto& s : p.segments) {
        if (std::holds_alternative<DeltaPulse>(s)) {
            throw DomainError("a delta pulse has no finite-duration drive");
        }
        const double dur = duration_of(s);
        if (dur <= 0.0) continue;
        if (!pieces->empty()) breaks.push_back(t);
        pieces->push_back({t, s});
        t += dur;
    }

    auto locate = [pieces](double time) -> const Piece* {
        if (pieces->empty()) return nullptr;
        auto it = std::upper_bound(pieces->begin(), pieces->end(), time,
                                   [](double v, const Piece& pc) { return v < pc.start; });
        return it == pieces->begin() ? &*it : &*std::prev(it);
    };
    auto gamma = [locate](double time) {
        const Piece* pc = locate(time);
        if (pc == nullptr) return 0.0;
        if (const auto* c = std::get_if<ConstantSegment>(&pc->seg)) return c->gamma;
        return std::get<RampSegment>(pc->seg).gamma_at(time - pc->start);
    };
    auto omega = [locate](double time) {
        const Piece* pc = locate(time);
        if (pc == nullptr) return 0.0;
        if (const auto* c = std::get_if<ConstantSegment>(&pc->seg)) return c->omega;
        return std::get<RampSegment>(pc->seg).omega;
    };
    return {gamma, omega, t, breaks};
}

Unitary2 protocol_propagator(const Protocol& p) {
    Unitary2 u = Unitary2::identity();
    for (const auto& s : p.segments) {
        Unitary2 step;
        if (const auto* pulse = std::get_if<DeltaPulse>(&s)) {
            step = expm_axis(Pauli::z, pulse->area);
        } else if (const auto* c = std::get_if<ConstantSegment>(&s)) {
            if (c->duration < 0.0) throw DomainError("segment duration must be >= 0");
            step = expm_pauli(c->gamma, c->omega, c->duration);
        } else {
            const auto& r = std::get<RampSegment>(s);
            if (r.duration < 0.0) throw DomainError("ramp duration must be >= 0");
            step = ramp_propagator(r);
        }
        u = step * u;
    }
    return u;
}

QubitState propagate_protocol(const Protocol& p, const QubitState& initial) {
    return apply(protocol_propagator(p), initial);
}

IntegrationOptions IntegrationOptions::defaults() {
    const Tolerances& tol = default_tolerances();
    return {tol.integration_abs, tol.integration_rel};
}

SchrodingerResult integrate_schrodinger(const DriveFunction& d, const QubitState& initial,
                                        const IntegrationOptions& opts) {
    check_drive(d);
    std::array<double, 4> x{initial.c0().real(), initial.c0().imag(), initial.c1().real(),
                            initial.c1().imag()};
    SchrodingerResult result;
    auto rhs = [&d](double t, const std::array<double, 4>& s, std::array<double, 4>& ds) {
        schrodinger_rhs(d, t, s.data(), ds.data());
    };
    auto project = [&result](std::array<double, 4>& s) {
        result.norm_drift = std::max(result.norm_drift, renormalize(s));
    };
    auto on_step = [&result](double, const std::array<double, 4>&) { ++result.steps; };
    integrate_stops(d, x, stop_times(d, {}), opts, rhs, project, on_step, [](double, const auto&) {});
    result.state = {cplx{x[0], x[1]}, cplx{x[2], x[3]}};
    return result;
}

Unitary2 integrate_propagator(const DriveFunction& d, const IntegrationOptions& opts) {
    check_drive(d);
    // Columns U|0> and U|1>, packed as two spinors.
    std::array<double, 8> x{1.0, 0.0, 0.0, 0.0, 0.0, 0.0, 1.0, 0.0};
    auto rhs = [&d](double t, const std::array<double, 8>& s, std::array<double, 8>& ds) {
        schrodinger_rhs(d, t, s.data(), ds.data());
        schrodinger_rhs(d, t, s.data() + 4, ds.data() + 4);
    };
    integrate_stops(d, x, stop_times(d, {}), opts, rhs, [](auto& s) { renormalize(s); },
                    [](double, const auto&) {}, [](double, const auto&) {});
    return {cplx{x[0], x[1]}, cplx{x[4], x[5]}, cplx{x[2], x[3]}, cplx{x[6], x[7]}};
}

namespace {

[[noreturn]] void singular(double t) {
    throw SingularityError("Euler-angle chart singular: |cos tau1| < " +
                           std::to_string(default_tolerances().singularity) + " near t = " + std::to_string(t));
}

// Fills traj as it goes so that a caller can keep the part before a singularity.
void run_euler(const DriveFunction& d, const IntegrationOptions& opts, const std::vector<double>& extra,
               EulerTrajectory& traj) {
    const double guard = default_tolerances().singularity;
    // Order: tau1, tau2, tau3.
    std::array<double, 3> x{0.0, 0.0, 0.0};
    auto rhs = [&d, guard](double t, const std::array<double, 3>& s, std::array<double, 3>& ds) {
        // tau1 starts at 0 and moves continuously, so the chart is left as soon as
        // cos(tau1) drops below the guard; the one-sided test also catches stages
        // that overshoot pi/2.
        const double c1 = std::cos(s[0]);
        if (c1 < guard) singular(t);
        const double g = d.gamma(t);
        const double w = d.omega(t);
        const double s3 = std::sin(s[2]);
        ds[0] = 2.0 * w * std::cos(s[2]);
        ds[1] = -2.0 * w * s3 / c1;
        ds[2] = 2.0 * g + 2.0 * w * s3 * std::sin(s[0]) / c1;
    };
    auto on_step = [&traj, guard](double t, const std::array<double, 3>& s) {
        if (std::cos(s[0]) < guard) singular(t);
        if (!traj.times.empty() && t <= traj.times.back()) return;
        traj.times.push_back(t);
        traj.tau1.push_back(s[0]);
        traj.tau2.push_back(s[1]);
        traj.tau3.push_back(s[2]);
    };
    on_step(0.0, x);
    integrate_stops(d, x, stop_times(d, extra), opts, rhs, no_projection, on_step, on_step);
}

}  // namespace

EulerTrajectory integrate_euler_angles(const DriveFunction& d, const IntegrationOptions& opts) {
    check_drive(d);
    EulerTrajectory traj;
    run_euler(d, opts, {}, traj);
    return traj;
}

DriveFunction inverse_engineer(std::function<double(double)> tau3, double omega, double horizon,
                               std::size_t samples) {
    require_positive(omega, "omega");
    require_positive(horizon, "horizon");
    if (!tau3) throw DomainError("tau3 is not set");
    if (samples < 4) throw DomainError("inverse_engineer needs at least 4 samples");
    if (std::abs(tau3(0.0)) > default_tolerances().clamp) {
        throw DomainError("tau3(0) must vanish: the propagator starts at the identity");
    }

    const double h = horizon * 1e-6;
    auto tau3_dot = [tau3, h](double t) {
        const double v = (tau3(t + h) - tau3(t - h)) / (2.0 * h);
        if (!std::isfinite(v)) {
            throw DomainError("tau3 derivative is not finite at t = " + std::to_string(t));
        }
        return v;
    };

    // tau1 on a uniform grid; the ODE right-hand side doubles as the exact slope
    // for Hermite interpolation.
    std::vector<double> ts(samples + 1);
    std::vector<double> tau1(samples + 1);
    std::vector<double> slope(samples + 1);
    for (std::size_t k = 0; k <= samples; ++k) {
        ts[k] = horizon * static_cast<double>(k) / static_cast<double>(samples);
        const double v = tau3(ts[k]);
        if (!std::isfinite(v)) throw DomainError("tau3 is not finite at t = " + std::to_string(ts[k]));
        tau3_dot(ts[k]);  // validates the derivative on the whole grid
        slope[k] = 2.0 * omega * std::cos(v);
    }
    std::array<double, 1> x{0.0};
    auto sys = [&](const std::array<double, 1>&, std::array<double, 1>& dx, double t) {
        dx[0] = 2.0 * omega * std::cos(tau3(t));
    };
    std::size_t idx = 0;
    const double guard = default_tolerances().singularity;
    auto stepper = odeint::make_controlled(1e-13, 1e-13, odeint::runge_kutta_dopri5<std::array<double, 1>>());
    odeint::integrate_times(stepper, sys, x, ts.begin(), ts.end(), horizon / samples,
                            [&](const std::array<double, 1>& s, double) {
                                const double c1 = std::cos(s[0]);
                                const bool crossed = idx > 0 && c1 * std::cos(tau1[idx - 1]) <= 0.0;
                                if (std::abs(c1) < guard || crossed) {
                                    throw SingularityError("tau1 reaches the chart singularity cos(tau1) = 0");
                                }
                                tau1[idx++] = s[0];
                            });

    auto spline = std::make_shared<boost::math::interpolators::cubic_hermite<std::vector<double>>>(
        std::move(ts), std::move(tau1), std::move(slope));
    auto gamma = [spline, tau3, tau3_dot, omega, horizon](double t) {
        const double tc = std::clamp(t, 0.0, horizon);
        const double t1 = (*spline)(tc);
        const double t3 = tau3(tc);
        return 0.5 * tau3_dot(tc) - omega * std::sin(t3) * std::tan(t1);
    };
    return {gamma, [omega](double) { return omega; }, horizon, {}};
}

std::vector<TrajectoryRow> sample_trajectory(const DriveFunction& d, const QubitState& initial,
                                             std::size_t n, const IntegrationOptions& opts) {
    check_drive(d);
    if (n == 0) n = 1;
    std::vector<double> times(n + 1);
    for (std::size_t k = 0; k <= n; ++k) {
        times[k] = d.horizon * static_cast<double>(k) / static_cast<double>(n);
    }
    std::vector<TrajectoryRow> rows(n + 1);
    for (std::size_t k = 0; k <= n; ++k) rows[k].t = times[k];

    auto row_index = [&](double t) {
        auto it = std::lower_bound(times.begin(), times.end(), t);
        return it != times.end() && *it == t ? std::optional<std::size_t>(it - times.begin()) : std::nullopt;
    };

    std::array<double, 4> x{initial.c0().real(), initial.c0().imag(), initial.c1().real(),
                            initial.c1().imag()};
    rows[0].psi = initial.amplitudes();
    auto rhs = [&d](double t, const std::array<double, 4>& s, std::array<double, 4>& ds) {
        schrodinger_rhs(d, t, s.data(), ds.data());
    };
    const auto stops = stop_times(d, times);
    integrate_stops(d, x, stops, opts, rhs, [](auto& s) { renormalize(s); }, [](double, const auto&) {},
                    [&](double t, const std::array<double, 4>& s) {
                        if (auto k = row_index(t)) rows[*k].psi = {cplx{s[0], s[1]}, cplx{s[2], s[3]}};
                    });

    EulerTrajectory traj;
    try {
        run_euler(d, opts, times, traj);
    } catch (const SingularityError&) {
        // Angles stay empty past the chart singularity.
    }
    for (std::size_t k = 0; k < traj.times.size(); ++k) {
        if (auto r = row_index(traj.times[k])) rows[*r].angles = traj.at(k);
    }
    return rows;
}

}  // namespace lzopt
