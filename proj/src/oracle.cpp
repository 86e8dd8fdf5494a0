#include "lzopt/oracle.hpp"

#include "lzopt/config.hpp"
#include "lzopt/dynamics.hpp"

#include <boost/math/tools/minima.hpp>

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>

namespace lzopt {

namespace {

constexpr double pi = std::numbers::pi;
constexpr double tie_eps = 1e-15;
constexpr int brent_bits = std::numeric_limits<double>::digits / 2 + 4;

// Best point of the fixed-time inner problem.
struct Candidate {
    double fidelity = -1.0;
    std::array<double, 2> x{0.0, 0.0};
    int sequence = 0;  // piecewise_constant only
};

// 1-D Brent maximization of f over [lo, hi]; returns (argmax, max).
std::pair<double, double> maximize_1d(const std::function<double(double)>& f, double lo, double hi) {
    if (!(hi > lo)) {
        return {lo, f(lo)};
    }
    auto [x, fx] = boost::math::tools::brent_find_minima([&](double t) { return -f(t); }, lo, hi, brent_bits);
    return {x, -fx};
}

bool better(double fid, double key, const Candidate& best, double best_key) {
    return fid > best.fidelity + tie_eps || (std::abs(fid - best.fidelity) <= tie_eps && key < best_key);
}

class Searcher {
public:
    Searcher(const SearchSpec& spec, const QubitState& initial, const QubitState& final_state,
             const LzParams& params)
        : spec_(spec), in_(initial), out_(final_state), params_(params) {}

    Candidate best_at(double total) const {
        switch (spec_.family) {
            case SearchFamily::composite:
                return composite_best(total);
            case SearchFamily::three_segment:
                return spec_.symmetric ? symmetric_best(total) : asymmetric_best(total);
            case SearchFamily::piecewise_constant:
                return piecewise_best(total);
        }
        return {};
    }

    SearchResult finish(double total, const Candidate& c, bool reached) const {
        SearchResult r;
        r.reached = reached;
        r.duration = total;
        r.fidelity = std::min(1.0, c.fidelity);
        const double w = params_.omega;
        switch (spec_.family) {
            case SearchFamily::composite:
                r.alpha_in = c.x[0];
                r.alpha_f = c.x[1];
                r.protocol = build_composite(c.x[0], c.x[1], w, total);
                break;
            case SearchFamily::three_segment: {
                r.t_c = c.x[0];
                r.t_minus_c = spec_.symmetric ? c.x[0] : c.x[1];
                r.t_off = std::max(0.0, total - r.t_c - r.t_minus_c);
                const double bound = *params_.c;
                r.protocol.segments = {ConstantSegment{bound, w, r.t_c}, ConstantSegment{0.0, w, r.t_off},
                                       ConstantSegment{-bound, w, r.t_minus_c}};
                r.protocol.params = params_;
                break;
            }
            case SearchFamily::piecewise_constant: {
                const double dt = total / spec_.segments;
                int code = c.sequence;
                for (int k = 0; k < spec_.segments; ++k) {
                    r.protocol.segments.emplace_back(ConstantSegment{level(code % 3), w, dt});
                    code /= 3;
                }
                r.protocol.params = params_;
                break;
            }
        }
        return r;
    }

private:
    double fid(const Unitary2& u) const { return fidelity(apply(u, in_), out_); }

    double level(int digit) const { return (digit - 1) * *params_.c; }

    // Best final pulse for a given initial pulse. With v = U_free e^{-i ai s3}|i>,
    // A = f0* v0 and B = f1* v1, the overlap |e^{-i af} A + e^{i af} B| peaks at
    // |A| + |B| for af = (arg A - arg B) / 2 (mod pi).
    std::pair<double, double> composite_profile(const Unitary2& free, double ai) const {
        const cplx ein = std::polar(1.0, -ai);
        const Spinor v = free.apply({ein * in_.c0(), std::conj(ein) * in_.c1()});
        const cplx a = std::conj(out_.c0()) * v[0];
        const cplx b = std::conj(out_.c1()) * v[1];
        double af = 0.0;
        if (std::abs(a) > 0.0 && std::abs(b) > 0.0) {
            af = 0.5 * (std::arg(a) - std::arg(b));
            af -= pi * std::ceil(af / pi - 0.5);  // wrap to (-pi/2, pi/2]
        }
        return {af, std::abs(a) + std::abs(b)};
    }

    Candidate composite_best(double total) const {
        const Unitary2 free = expm_pauli(0.0, params_.omega, total);
        const int n = spec_.grid;
        const double step = pi / n;
        Candidate best;
        double best_key = std::numeric_limits<double>::infinity();
        for (int i = 0; i < n; ++i) {
            const double ai = -pi / 2.0 + step * (i + 1);  // grid on (-pi/2, pi/2]
            const auto [af, f] = composite_profile(free, ai);
            const double key = std::hypot(ai, af);
            if (better(f, key, best, best_key)) {
                best.fidelity = f;
                best.x = {ai, af};
                best_key = key;
            }
        }
        if (best.fidelity >= 1.0 - tie_eps) return best;
        auto [ai, f] = maximize_1d([&](double a) { return composite_profile(free, a).second; },
                                   best.x[0] - step, best.x[0] + step);
        if (f > best.fidelity) {
            ai -= pi * std::ceil(ai / pi - 0.5);
            best.fidelity = f;
            best.x = {ai, composite_profile(free, ai).first};
        }
        return best;
    }

    double three_eval(double total, double tc, double tmc) const {
        const double c = *params_.c;
        const double w = params_.omega;
        const double toff = std::max(0.0, total - tc - tmc);
        return fid(expm_pauli(-c, w, tmc) * expm_pauli(0.0, w, toff) * expm_pauli(c, w, tc));
    }

    Candidate symmetric_best(double total) const {
        const int n = spec_.grid;
        const double half = total / 2.0;
        const double step = half / n;
        Candidate best;
        double best_key = std::numeric_limits<double>::infinity();
        for (int i = 0; i <= n; ++i) {
            const double tc = step * i;
            const double f = three_eval(total, tc, tc);
            if (better(f, tc, best, best_key)) {
                best.fidelity = f;
                best.x = {tc, tc};
                best_key = tc;
            }
        }
        if (best.fidelity >= 1.0 - tie_eps || step == 0.0) return best;
        auto [tc, f] = maximize_1d([&](double t) { return three_eval(total, t, t); },
                                   std::max(0.0, best.x[0] - step), std::min(half, best.x[0] + step));
        if (f > best.fidelity) {
            best.fidelity = f;
            best.x = {tc, tc};
        }
        return best;
    }

    Candidate asymmetric_best(double total) const {
        const int n = spec_.grid;
        const double step = total / n;
        Candidate best;
        double best_key = std::numeric_limits<double>::infinity();
        for (int i = 0; i <= n; ++i) {
            for (int j = 0; i + j <= n; ++j) {
                const double tc = step * i;
                const double tmc = step * j;
                const double f = three_eval(total, tc, tmc);
                if (better(f, tc, best, best_key)) {
                    best.fidelity = f;
                    best.x = {tc, tmc};
                    best_key = tc;
                }
            }
        }
        if (best.fidelity >= 1.0 - tie_eps || step == 0.0) return best;
        // Nested refinement: for each T_c the best T_-c near the seed, then the best T_c.
        const double seed_tmc = best.x[1];
        auto inner = [&](double tc) {
            const double lo = std::max(0.0, seed_tmc - 3.0 * step);
            const double hi = std::max(lo, std::min(total - tc, seed_tmc + 3.0 * step));
            return maximize_1d([&](double t) { return three_eval(total, tc, t); }, lo, hi);
        };
        auto [tc, f] = maximize_1d([&](double t) { return inner(t).second; }, std::max(0.0, best.x[0] - step),
                                   std::min(total, best.x[0] + step));
        if (f > best.fidelity) {
            const auto [tmc, g] = inner(tc);
            best.fidelity = g;
            best.x = {tc, tmc};
        }
        return best;
    }

    Candidate piecewise_best(double total) const {
        const int n = spec_.segments;
        const double dt = total / n;
        std::array<Unitary2, 3> pieces;
        for (int d = 0; d < 3; ++d) {
            pieces[d] = expm_pauli(level(d), params_.omega, dt);
        }
        int combos = 1;
        for (int k = 0; k < n; ++k) combos *= 3;
        Candidate best;
        double best_key = std::numeric_limits<double>::infinity();
        for (int code = 0; code < combos; ++code) {
            Unitary2 u = Unitary2::identity();
            int rest = code;
            int active = 0;
            for (int k = 0; k < n; ++k) {
                const int d = rest % 3;
                active += d != 1;
                u = pieces[d] * u;
                rest /= 3;
            }
            const double f = fid(u);
            // Prefer fewer switched-on segments, then the lower code.
            const double key = active * 1e4 + code;
            if (better(f, key, best, best_key)) {
                best.fidelity = f;
                best.sequence = code;
                best_key = key;
            }
        }
        return best;
    }

    const SearchSpec& spec_;
    QubitState in_;
    QubitState out_;
    LzParams params_;
};

}  // namespace

std::string_view to_string(SearchFamily f) {
    switch (f) {
        case SearchFamily::composite:
            return "composite";
        case SearchFamily::three_segment:
            return "three_segment";
        case SearchFamily::piecewise_constant:
            return "piecewise_constant";
    }
    return "composite";
}

void SearchSpec::validate() const {
    if (grid <= 0 || time_grid <= 0) throw DomainError("search grid resolutions must be > 0");
    if (!(threshold > 0.0 && threshold < 1.0)) throw DomainError("fidelity threshold must lie in (0, 1)");
    if (!(time_tol > 0.0)) throw DomainError("time tolerance must be > 0");
    if (t_max < 0.0 || !std::isfinite(t_max)) throw DomainError("t_max must be finite and >= 0");
    if (family == SearchFamily::piecewise_constant && (segments < 1 || segments > 8)) {
        throw DomainError("piecewise_constant search supports 1 to 8 segments");
    }
}

SearchResult search_min_time(const SearchSpec& spec, const QubitState& initial,
                             const QubitState& final_state, const LzParams& params) {
    spec.validate();
    params.validate();
    if (spec.family != SearchFamily::composite && !params.c) {
        throw DomainError("bounded-control search families need the bound c");
    }
    const Searcher searcher(spec, initial, final_state, params);

    const Candidate at_zero = searcher.best_at(0.0);
    if (at_zero.fidelity >= spec.threshold) {
        return searcher.finish(0.0, at_zero, true);
    }

    const double t_max = spec.t_max > 0.0 ? spec.t_max : pi / params.omega;
    const double dt = t_max / spec.time_grid;
    Candidate best_seen = at_zero;
    double best_time = 0.0;
    for (int k = 1; k <= spec.time_grid; ++k) {
        const double t = dt * k;
        const Candidate cand = searcher.best_at(t);
        if (cand.fidelity > best_seen.fidelity) {
            best_seen = cand;
            best_time = t;
        }
        if (cand.fidelity < spec.threshold) continue;

        double lo = t - dt;
        double hi = t;
        Candidate hi_cand = cand;
        while (hi - lo > spec.time_tol) {
            const double mid = 0.5 * (lo + hi);
            const Candidate m = searcher.best_at(mid);
            if (m.fidelity >= spec.threshold) {
                hi = mid;
                hi_cand = m;
            } else {
                lo = mid;
            }
        }
        return searcher.finish(hi, hi_cand, true);
    }
    return searcher.finish(best_time, best_seen, false);
}

Sweep sweep_fig1(double gamma_over_omega, const std::vector<double>& c_grid) {
    require_positive(gamma_over_omega, "gamma/omega");
    Sweep sweep;
    std::vector<double> grid = c_grid;
    for (double c : grid) require_positive(c, "c/omega");
    for (double c : grid) {
        const TminResult r = tmin_constrained(gamma_over_omega, 1.0, c);
        sweep.rows.push_back({c, r.t_min, *r.t_off, 2.0 * *r.t_c, r.regime});
    }
    // Monotonicity is judged along increasing c, whatever the input order.
    std::vector<SweepRow> sorted = sweep.rows;
    std::stable_sort(sorted.begin(), sorted.end(),
                     [](const SweepRow& a, const SweepRow& b) { return a.c_over_omega < b.c_over_omega; });
    for (std::size_t k = 1; k < sorted.size(); ++k) {
        if (sorted[k].w_tmin > sorted[k - 1].w_tmin) sweep.monotone = false;
    }
    return sweep;
}

DeltaLimitReport verify_delta_limit(double alpha, double omega, const std::vector<double>& gamma_grid) {
    require_finite(alpha, "alpha");
    require_positive(omega, "omega");
    DeltaLimitReport report;
    const Unitary2 ideal = expm_axis(Pauli::z, alpha);
    for (double g : gamma_grid) {
        require_positive(g, "Gamma");
        // Keep the duration non-negative: the sign of Gamma follows the area.
        const double signed_g = alpha < 0.0 ? -g : g;
        const double t = alpha / signed_g;
        const double err = operator_norm(expm_pauli(signed_g, omega, t) - ideal);
        if (!report.errors.empty() && !(err < report.errors.back()) && report.errors.back() > 0.0) {
            report.decreasing = false;
        }
        report.gammas.push_back(g);
        report.errors.push_back(err);
    }
    return report;
}

std::vector<VerifyCheck> verify_against_analytic(double gamma, double omega, std::optional<double> c,
                                                 double tolerance, const SearchSpec& base) {
    require_positive(gamma, "gamma");
    require_positive(omega, "omega");
    const QubitState in = lz_eigenstate(-gamma, omega, Level::ground);
    const QubitState out = lz_eigenstate(gamma, omega, Level::ground);
    std::vector<VerifyCheck> checks;

    SearchSpec spec = base;
    spec.family = SearchFamily::composite;
    const SearchResult comp = search_min_time(spec, in, out, LzParams{gamma, omega, std::nullopt, std::nullopt});
    const double expected = omega * tmin_ground_to_ground(gamma, omega);
    const double found = omega * comp.duration;
    checks.push_back({"composite omega*T_min", expected, found, tolerance, false,
                      comp.reached && std::abs(found - expected) <= tolerance});
    checks.push_back({"composite alpha_in", pi / 4.0, comp.alpha_in, 1e-2, false,
                      std::abs(comp.alpha_in - pi / 4.0) <= 1e-2});
    checks.push_back({"composite alpha_f", -pi / 4.0, comp.alpha_f, 1e-2, false,
                      std::abs(comp.alpha_f + pi / 4.0) <= 1e-2});

    if (c) {
        const LzParams p{gamma, omega, *c, std::nullopt};
        const TminResult r = tmin_constrained(gamma, omega, *c);
        spec.family = SearchFamily::three_segment;
        spec.symmetric = true;
        const SearchResult sym = search_min_time(spec, in, out, p);
        const double rel = std::abs(sym.duration - r.t_min) / r.t_min;
        checks.push_back({"three_segment T_min (relative)", r.t_min, sym.duration, tolerance, true,
                          sym.reached && rel <= tolerance});
        checks.push_back({"three_segment T_off", *r.t_off, sym.t_off, tolerance * r.t_min, false,
                          std::abs(sym.t_off - *r.t_off) <= tolerance * r.t_min});
    }
    return checks;
}

}  // namespace lzopt
