// lzopt: command-line front end for time-optimal Landau-Zener control.
//
// Exit codes: 0 success, 1 domain error, 2 usage error, 3 verification failure.

#include "lzopt/analytic.hpp"
#include "lzopt/config.hpp"
#include "lzopt/dynamics.hpp"
#include "lzopt/io.hpp"
#include "lzopt/oracle.hpp"
#include "lzopt/protocol.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <numbers>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace {

using namespace lzopt;
using io::json;

enum Exit { ok = 0, domain_failure = 1, usage_failure = 2, verify_failure = 3 };

/// Bad command-line input that CLI11 cannot detect (state literals, files, flag combinations).
struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// ---------------------------------------------------------------------------
// State specification: either ordered eigenstate shorthands or explicit literals.

struct StateFlags {
    std::vector<double> ground;
    std::vector<double> excited;
    std::string in;
    std::string out;
    CLI::Option* ground_opt = nullptr;
    CLI::Option* excited_opt = nullptr;
    CLI::Option* in_opt = nullptr;
    CLI::Option* out_opt = nullptr;
};

void add_state_flags(CLI::App* cmd, StateFlags& s, bool need_final = true) {
    s.ground_opt = cmd->add_option("--ground", s.ground,
                                   "Ground state of gamma sigma3 + omega sigma1, given as gamma/omega "
                                   "(repeatable; first occurrence is the initial state)");
    s.excited_opt = cmd->add_option("--excited", s.excited, "Excited state, given as gamma/omega (repeatable)");
    s.in_opt = cmd->add_option("--in", s.in, "Initial amplitudes \"c0,c1\", e.g. \"1,0\" or \"0.6,0.8i\"");
    s.out_opt = need_final ? cmd->add_option("--out", s.out, "Final amplitudes \"c0,c1\"") : nullptr;
    s.ground_opt->excludes(s.in_opt);
    s.excited_opt->excludes(s.in_opt);
    if (s.out_opt) {
        s.ground_opt->excludes(s.out_opt);
        s.excited_opt->excludes(s.out_opt);
    }
    for (CLI::Option* o : {s.ground_opt, s.excited_opt}) {
        o->allow_extra_args(false)->multi_option_policy(CLI::MultiOptionPolicy::TakeAll);
    }
}

QubitState literal_state(const std::string& text, const char* flag) {
    std::pair<cplx, cplx> amps;
    try {
        amps = io::parse_amplitudes(text);
    } catch (const DomainError& e) {
        throw UsageError(std::string(flag) + ": " + e.what());
    }
    const double norm = std::sqrt(std::norm(amps.first) + std::norm(amps.second));
    if (!(norm > 0.0)) throw DomainError(std::string(flag) + ": the zero vector is not a state");
    if (std::abs(norm - 1.0) > default_tolerances().normalization) {
        std::fprintf(stderr, "warning: %s amplitudes have norm %.17g; normalizing\n", flag, norm);
    }
    return {amps.first, amps.second};
}

struct StatePair {
    QubitState initial;
    std::optional<QubitState> final_state;
    // Set when both states are given as eigenstates: (gamma/omega, level) per state.
    std::vector<std::pair<double, Level>> shorthand;
};

/// Resolves the flags into states. `omega` scales the gamma/omega shorthand.
StatePair resolve_states(CLI::App* cmd, const StateFlags& s, double omega, bool need_final) {
    std::vector<std::pair<double, Level>> eig;
    std::size_t gi = 0;
    std::size_t ei = 0;
    for (const CLI::Option* o : cmd->parse_order()) {
        if (o == s.ground_opt) eig.emplace_back(s.ground.at(gi++), Level::ground);
        if (o == s.excited_opt) eig.emplace_back(s.excited.at(ei++), Level::excited);
    }
    const std::size_t wanted = need_final ? 2 : 1;
    if (!eig.empty()) {
        if (eig.size() != wanted) {
            throw UsageError("--ground/--excited: expected " + std::to_string(wanted) + " state(s), got " +
                             std::to_string(eig.size()));
        }
        StatePair p{lz_eigenstate(eig[0].first * omega, omega, eig[0].second), std::nullopt, eig};
        if (need_final) p.final_state = lz_eigenstate(eig[1].first * omega, omega, eig[1].second);
        return p;
    }
    if (s.in_opt->count() == 0) throw UsageError("--in: initial state required (or use --ground/--excited)");
    StatePair p{literal_state(s.in, "--in"), std::nullopt, {}};
    if (need_final) {
        if (s.out_opt->count() == 0) throw UsageError("--out: final state required");
        p.final_state = literal_state(s.out, "--out");
    }
    return p;
}

// ---------------------------------------------------------------------------
// Output.

struct Output {
    std::string path;
    std::string format;
};

void add_output_flags(CLI::App* cmd, Output& out, const std::string& default_format,
                      const std::vector<std::string>& formats) {
    out.format = default_format;
    cmd->add_option("-o,--output", out.path, "Write to this file instead of stdout");
    cmd->add_option("--format", out.format, "Output format")->check(CLI::IsMember(formats));
}

void emit(const Output& out, const std::string& text) {
    if (out.path.empty() || out.path == "-") {
        std::cout << text;
        std::cout.flush();
        return;
    }
    std::ofstream f(out.path, std::ios::binary);
    if (!f) throw UsageError("--output: cannot open '" + out.path + "' for writing");
    f << text;
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

json spinor_json(const Spinor& s) {
    return json::array({json::array({s[0].real(), s[0].imag()}), json::array({s[1].real(), s[1].imag()})});
}

// ---------------------------------------------------------------------------
// Subcommands.

struct TminFlags {
    StateFlags states;
    double omega = 0.0;
    std::optional<double> omega_max;
    std::optional<double> bound;
    bool optical = false;
    Output out;
};

int run_tmin(CLI::App* cmd, const TminFlags& f) {
    if (f.optical) {
        require_finite(f.omega, "--omega");
        if (f.omega == 0.0) throw DomainError("--omega: the detuning must be nonzero");
    } else {
        require_positive(f.omega, "--omega");
    }
    if (f.omega_max) require_positive(*f.omega_max, "--omega-max");
    if (f.bound) require_positive(*f.bound, "--bound");
    const StatePair s = resolve_states(cmd, f.states, f.omega, true);
    const QubitState& i = s.initial;
    const QubitState& o = *s.final_state;
    if (f.bound) {
        // The bounded problem is solved for the ground-state pair of H_{-gamma}, H_{+gamma}.
        const bool pair = s.shorthand.size() == 2 && s.shorthand[0].second == Level::ground &&
                          s.shorthand[1].second == Level::ground && s.shorthand[0].first < 0.0 &&
                          s.shorthand[1].first == -s.shorthand[0].first;
        if (!pair) {
            throw DomainError("--bound: bounded control needs the pair --ground -g --ground g with g > 0");
        }
        const TminResult r = tmin_constrained(s.shorthand[1].first * f.omega, f.omega, *f.bound);
        emit(f.out, dump(io::to_json(r)));
        return ok;
    }
    if (f.optical) {
        const QubitState a = to_sigma1_basis(i);
        const QubitState b = to_sigma1_basis(o);
        emit(f.out, dump(io::to_json(solve_unconstrained(a, b, std::abs(f.omega)), qsl_times(a, b, std::abs(f.omega)))));
        return ok;
    }
    LzParams params{0.0, f.omega, std::nullopt, f.omega_max};
    params.validate();
    const double w = params.effective_omega();
    emit(f.out, dump(io::to_json(solve_unconstrained(i, o, w), qsl_times(i, o, w))));
    return ok;
}

struct ProtocolFlags {
    double gamma = 0.0;
    double omega = 1.0;
    std::optional<double> bound;
    double epsilon = 0.0;
    bool corrected = false;
    std::string shape = "linear";
    Output out;
};

int run_protocol(const ProtocolFlags& f) {
    require_positive(f.gamma, "--gamma");
    require_positive(f.omega, "--omega");
    if (f.bound) require_positive(*f.bound, "--bound");
    require_finite(f.epsilon, "--epsilon");
    if (f.epsilon < 0.0) throw DomainError("--epsilon: must be >= 0");
    const QubitState in = lz_eigenstate(-f.gamma, f.omega, Level::ground);
    const QubitState target = lz_eigenstate(f.gamma, f.omega, Level::ground);
    Protocol p;
    if (f.bound) {
        p = build_constrained(f.gamma, f.omega, *f.bound);
        if (f.epsilon != 0.0) p = apply_switching(p, f.epsilon, f.corrected, ramp_shape_from_string(f.shape));
    } else {
        if (f.epsilon != 0.0) throw DomainError("--epsilon: switching ramps need a bounded protocol (--bound)");
        p = build_optimal_composite(in, target, f.omega);
        p.regime = Regime::unconstrained;
        p.params = LzParams{f.gamma, f.omega, std::nullopt, std::nullopt};
    }
    json j = io::to_json(p);
    j["fidelity"] = fidelity(propagate_protocol(p, in), target);
    emit(f.out, dump(j));
    return ok;
}

struct SimulateFlags {
    StateFlags states;
    std::string protocol_path;
    double omega = 1.0;
    bool ode = false;
    std::optional<double> tol;
    std::size_t samples = 100;
    Output out;
};

Protocol read_protocol(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw UsageError("--protocol: cannot read '" + path + "'");
    json j;
    try {
        j = json::parse(f);
    } catch (const json::exception& e) {
        throw UsageError("--protocol: invalid JSON in '" + path + "': " + e.what());
    }
    try {
        return io::protocol_from_json(j);
    } catch (const json::exception& e) {
        throw DomainError("--protocol: malformed protocol: " + std::string(e.what()));
    }
}

int run_simulate(CLI::App* cmd, const SimulateFlags& f) {
    const Protocol p = read_protocol(f.protocol_path);
    // The eigenstate shorthand scales with the protocol's own omega unless --omega is given.
    double omega = f.omega;
    if (cmd->get_option("--omega")->count() == 0 && p.params) omega = p.params->omega;
    require_positive(omega, "--omega");
    const StatePair s = resolve_states(cmd, f.states, omega, true);
    IntegrationOptions opts = IntegrationOptions::defaults();
    if (f.tol) {
        require_positive(*f.tol, "--tol");
        opts = IntegrationOptions::uniform(*f.tol);
    }
    if (f.out.format == "csv") {
        std::ostringstream os;
        io::write_trajectory_csv(os, sample_trajectory(drive_from_protocol(p), s.initial, f.samples, opts));
        emit(f.out, os.str());
        return ok;
    }
    Spinor final_state = propagate_protocol(p, s.initial).amplitudes();
    if (f.ode) final_state = integrate_schrodinger(drive_from_protocol(p), s.initial, opts).state;
    const QubitState achieved(final_state[0], final_state[1]);
    json j{{"method", f.ode ? "ode" : "exact"},
           {"duration", p.total_duration()},
           {"fidelity", fidelity(achieved, *s.final_state)},
           {"fidelity_squared", fidelity(achieved, *s.final_state, true)},
           {"final_state", spinor_json(final_state)}};
    emit(f.out, dump(j));
    return ok;
}

struct SweepFlags {
    double gamma_over_omega = 2.0;
    double c_min = 0.05;
    double c_max = 20.0;
    int points = 100;
    std::vector<double> values;
    Output out;
};

int run_sweep(const SweepFlags& f) {
    std::vector<double> grid = f.values;
    if (grid.empty()) {
        require_positive(f.c_min, "--c-min");
        require_positive(f.c_max, "--c-max");
        if (f.points < 2) throw UsageError("--points: need at least 2");
        for (int k = 0; k < f.points; ++k) {
            grid.push_back(f.c_min * std::pow(f.c_max / f.c_min, k / double(f.points - 1)));
        }
    }
    const Sweep s = sweep_fig1(f.gamma_over_omega, grid);
    if (!s.monotone) std::fprintf(stderr, "warning: omega*T_min is not monotone in c over this grid\n");
    if (f.out.format == "csv") {
        std::ostringstream os;
        io::write_sweep_csv(os, s);
        emit(f.out, os.str());
        return ok;
    }
    json rows = json::array();
    for (const SweepRow& r : s.rows) {
        rows.push_back({{"c_over_omega", r.c_over_omega},
                        {"wTmin", r.w_tmin},
                        {"wToff", r.w_toff},
                        {"two_wTc", r.two_w_tc},
                        {"regime", std::string(to_string(r.regime))}});
    }
    emit(f.out, dump({{"gamma_over_omega", f.gamma_over_omega}, {"monotone", s.monotone}, {"rows", rows}}));
    return ok;
}

struct VerifyFlags {
    double gamma = 2.0;
    double omega = 1.0;
    std::optional<double> bound;
    double tol = 1e-3;
    SearchSpec spec;
    Output out;
};

int run_verify(const VerifyFlags& f) {
    const auto checks = verify_against_analytic(f.gamma, f.omega, f.bound, f.tol, f.spec);
    const DeltaLimitReport delta = verify_delta_limit(std::numbers::pi / 4.0, f.omega, {1e2, 1e3, 1e4});
    bool all = delta.decreasing;
    for (const VerifyCheck& c : checks) all = all && c.pass;

    if (f.out.format == "json") {
        json list = json::array();
        for (const VerifyCheck& c : checks) list.push_back(io::to_json(c));
        emit(f.out, dump({{"pass", all},
                          {"checks", list},
                          {"delta_limit", {{"gammas", delta.gammas},
                                           {"errors", delta.errors},
                                           {"decreasing", delta.decreasing}}}}));
    } else {
        std::ostringstream os;
        char line[256];
        std::snprintf(line, sizeof line, "%-32s %-24s %-24s %-10s %s\n", "check", "expected", "found", "tolerance",
                      "result");
        os << line;
        for (const VerifyCheck& c : checks) {
            std::snprintf(line, sizeof line, "%-32s %-24s %-24s %-10.3g %s\n", c.name.c_str(),
                          io::format_number(c.expected).c_str(), io::format_number(c.found).c_str(), c.tolerance,
                          c.pass ? "PASS" : "FAIL");
            os << line;
        }
        std::snprintf(line, sizeof line, "%-32s %-24s %-24s %-10s %s\n", "delta-limit convergence", "decreasing",
                      delta.decreasing ? "decreasing" : "not decreasing", "-", delta.decreasing ? "PASS" : "FAIL");
        os << line;
        emit(f.out, os.str());
    }
    return all ? ok : verify_failure;
}

struct QslFlags {
    StateFlags states;
    double omega = 0.0;
    double fleming_gamma = 0.0;
    Output out;
};

int run_qsl(CLI::App* cmd, const QslFlags& f) {
    require_positive(f.omega, "--omega");
    require_finite(f.fleming_gamma, "--fleming-gamma");
    const StatePair s = resolve_states(cmd, f.states, f.omega, true);
    emit(f.out, dump(io::to_json(qsl_times(s.initial, *s.final_state, f.omega, f.fleming_gamma))));
    return ok;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Time-optimal control of a driven two-level (Landau-Zener) system"};
    app.require_subcommand(1);
    app.set_version_flag("--version", "lzopt 0.1.0");

    TminFlags tmin;
    CLI::App* tmin_cmd = app.add_subcommand("tmin", "Minimal transfer time between two states");
    add_state_flags(tmin_cmd, tmin.states);
    tmin_cmd->add_option("--omega", tmin.omega, "Coupling omega (or detuning with --optical)")->required();
    tmin_cmd->add_option("--omega-max", tmin.omega_max, "Bound on |omega(t)| when omega is also a control");
    tmin_cmd->add_option("-c,--bound", tmin.bound, "Bound c on |Gamma(t)|");
    tmin_cmd->add_flag("--optical", tmin.optical, "Optical driving: fixed detuning, unbounded Rabi frequency");
    add_output_flags(tmin_cmd, tmin.out, "json", {"json"});

    ProtocolFlags proto;
    CLI::App* proto_cmd = app.add_subcommand("protocol", "Optimal protocol between the grounds of H_-gamma, H_+gamma");
    proto_cmd->add_option("--gamma", proto.gamma, "Asymmetry gamma of the end-point Hamiltonians")->required();
    proto_cmd->add_option("--omega", proto.omega, "Coupling omega");
    proto_cmd->add_option("-c,--bound", proto.bound, "Bound c on |Gamma(t)|");
    proto_cmd->add_option("--epsilon", proto.epsilon, "Switching ramp duration");
    proto_cmd->add_flag("--corrected", proto.corrected, "Shorten segments to compensate the ramps");
    proto_cmd->add_option("--shape", proto.shape, "Ramp shape")->check(CLI::IsMember({"linear", "cosine", "smoothstep"}));
    add_output_flags(proto_cmd, proto.out, "json", {"json"});

    SimulateFlags sim;
    CLI::App* sim_cmd = app.add_subcommand("simulate", "Propagate a protocol file and report the fidelity");
    sim_cmd->add_option("--protocol", sim.protocol_path, "Protocol JSON file")->required();
    add_state_flags(sim_cmd, sim.states);
    sim_cmd->add_option("--omega", sim.omega,
                        "omega for the --ground/--excited shorthand (default: the protocol's omega, else 1)");
    sim_cmd->add_flag("--ode", sim.ode, "Integrate the Schroedinger equation instead of exact propagation");
    sim_cmd->add_option("--tol", sim.tol, "Integration tolerance (absolute and relative)");
    sim_cmd->add_option("--samples", sim.samples, "Trajectory intervals for --format csv");
    add_output_flags(sim_cmd, sim.out, "json", {"json", "csv"});

    SweepFlags sweep;
    CLI::App* sweep_cmd = app.add_subcommand("sweep", "Constrained minimal time against c/omega");
    sweep_cmd->add_option("--gamma-over-omega", sweep.gamma_over_omega, "gamma/omega");
    sweep_cmd->add_option("--c-min", sweep.c_min, "Smallest c/omega of the log grid");
    sweep_cmd->add_option("--c-max", sweep.c_max, "Largest c/omega of the log grid");
    sweep_cmd->add_option("--points", sweep.points, "Number of log-spaced grid points");
    sweep_cmd->add_option("--c", sweep.values, "Explicit c/omega values (replaces the log grid)")->delimiter(',');
    add_output_flags(sweep_cmd, sweep.out, "csv", {"csv", "json"});

    VerifyFlags verify;
    verify.spec.threshold = 1.0 - 1e-9;
    CLI::App* verify_cmd = app.add_subcommand("verify", "Brute-force oracle against the analytic results");
    verify_cmd->add_option("--gamma", verify.gamma, "gamma");
    verify_cmd->add_option("--omega", verify.omega, "omega");
    verify_cmd->add_option("-c,--bound", verify.bound, "Bound c on |Gamma(t)|; adds three-segment checks");
    verify_cmd->add_option("--tol", verify.tol, "Agreement tolerance");
    verify_cmd->add_option("--grid", verify.spec.grid, "Grid points per coordinate");
    verify_cmd->add_option("--time-grid", verify.spec.time_grid, "Grid points on the total time");
    verify_cmd->add_option("--threshold", verify.spec.threshold, "Fidelity threshold of the search");
    add_output_flags(verify_cmd, verify.out, "table", {"table", "json"});

    QslFlags qsl;
    CLI::App* qsl_cmd = app.add_subcommand("qsl", "Quantum speed limit times for a state pair");
    add_state_flags(qsl_cmd, qsl.states);
    qsl_cmd->add_option("--omega", qsl.omega, "Coupling omega")->required();
    qsl_cmd->add_option("--fleming-gamma", qsl.fleming_gamma, "gamma of the constant Hamiltonian for t_fleming");
    add_output_flags(qsl_cmd, qsl.out, "json", {"json"});

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return usage_failure;
    }

    try {
        if (*tmin_cmd) return run_tmin(tmin_cmd, tmin);
        if (*proto_cmd) return run_protocol(proto);
        if (*sim_cmd) return run_simulate(sim_cmd, sim);
        if (*sweep_cmd) return run_sweep(sweep);
        if (*verify_cmd) return run_verify(verify);
        if (*qsl_cmd) return run_qsl(qsl_cmd, qsl);
    } catch (const UsageError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return usage_failure;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return domain_failure;
    }
    return usage_failure;
}
