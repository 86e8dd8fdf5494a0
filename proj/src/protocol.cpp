#include "lzopt/protocol.hpp"

#include "lzopt/config.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>
#include <type_traits>

namespace lzopt {

namespace {

Protocol constrained_protocol(double gamma, double omega, double c, const TminResult& r) {
    Protocol p;
    p.regime = r.regime;
    p.params = LzParams{gamma, omega, c, std::nullopt};
    p.segments.emplace_back(ConstantSegment{c, omega, *r.t_c});
    if (r.regime == Regime::bang_off_bang) {
        p.segments.emplace_back(ConstantSegment{0.0, omega, *r.t_off});
    }
    p.segments.emplace_back(ConstantSegment{-c, omega, *r.t_c});
    return p;
}

}  // namespace

std::string_view to_string(RampShape shape) {
    switch (shape) {
        case RampShape::linear:
            return "linear";
        case RampShape::cosine:
            return "cosine";
        case RampShape::smoothstep:
            return "smoothstep";
    }
    return "linear";
}

RampShape ramp_shape_from_string(std::string_view s) {
    if (s == "linear") return RampShape::linear;
    if (s == "cosine") return RampShape::cosine;
    if (s == "smoothstep") return RampShape::smoothstep;
    throw DomainError("unknown ramp shape '" + std::string(s) + "'");
}

double ramp_profile(RampShape shape, double s) {
    switch (shape) {
        case RampShape::linear:
            return s;
        case RampShape::cosine:
            return 0.5 * (1.0 - std::cos(std::numbers::pi * s));
        case RampShape::smoothstep:
            return s * s * (3.0 - 2.0 * s);
    }
    return s;
}

double RampSegment::gamma_at(double t) const {
    const double s = duration > 0.0 ? std::clamp(t / duration, 0.0, 1.0) : 1.0;
    return gamma_start + (gamma_end - gamma_start) * ramp_profile(shape, s);
}

double duration_of(const Segment& s) {
    return std::visit(
        [](const auto& seg) -> double {
            if constexpr (std::is_same_v<std::decay_t<decltype(seg)>, DeltaPulse>) {
                return 0.0;
            } else {
                return seg.duration;
            }
        },
        s);
}

double Protocol::total_duration() const {
    double total = 0.0;
    for (const auto& s : segments) {
        total += duration_of(s);
    }
    return total;
}

Protocol build_composite(double alpha_in, double alpha_f, double omega, double t) {
    require_finite(alpha_in, "alpha_in");
    require_finite(alpha_f, "alpha_f");
    require_positive(omega, "omega");
    require_finite(t, "t");
    if (t < 0.0) {
        throw DomainError("composite duration must be >= 0");
    }
    Protocol p;
    p.regime = Regime::unconstrained;
    p.params = LzParams{0.0, omega, std::nullopt, std::nullopt};
    p.segments = {DeltaPulse{alpha_in}, ConstantSegment{0.0, omega, t}, DeltaPulse{alpha_f}};
    return p;
}

Protocol build_optimal_composite(const QubitState& initial, const QubitState& final_state, double omega) {
    const PulseAreas areas = pulse_areas(initial, final_state, omega);
    return build_composite(areas.alpha_in, areas.alpha_f, omega, areas.t_min);
}

Protocol build_bang_off_bang(double gamma, double omega, double c) {
    const TminResult r = tmin_constrained(gamma, omega, c);
    if (r.regime != Regime::bang_off_bang) {
        throw RegimeError("c <= omega^2/gamma: the optimal protocol is bang-bang, use build_bang_bang");
    }
    return constrained_protocol(gamma, omega, c, r);
}

Protocol build_bang_bang(double gamma, double omega, double c) {
    const TminResult r = tmin_constrained(gamma, omega, c);
    if (r.regime != Regime::bang_bang) {
        throw RegimeError("c > omega^2/gamma: the optimal protocol is bang-off-bang, use build_bang_off_bang");
    }
    return constrained_protocol(gamma, omega, c, r);
}

Protocol build_constrained(double gamma, double omega, double c) {
    return constrained_protocol(gamma, omega, c, tmin_constrained(gamma, omega, c));
}

Protocol apply_switching(const Protocol& p, double epsilon, bool corrected, RampShape shape) {
    require_finite(epsilon, "epsilon");
    if (epsilon < 0.0) {
        throw DomainError("switching time epsilon must be >= 0");
    }
    if (epsilon == 0.0) {
        return p;
    }

    std::vector<ConstantSegment> bangs;
    for (const auto& s : p.segments) {
        const auto* cs = std::get_if<ConstantSegment>(&s);
        if (cs == nullptr) {
            throw DomainError("apply_switching expects a protocol made of constant segments");
        }
        bangs.push_back(*cs);
    }

    std::vector<bool> jump_after(bangs.size(), false);
    for (std::size_t k = 0; k + 1 < bangs.size(); ++k) {
        jump_after[k] = bangs[k].gamma != bangs[k + 1].gamma;
    }
    if (corrected) {
        for (std::size_t k = 0; k < bangs.size(); ++k) {
            int ramps = jump_after[k] ? 1 : 0;
            if (k > 0 && jump_after[k - 1]) {
                ++ramps;
            }
            bangs[k].duration -= 0.5 * epsilon * ramps;
            if (bangs[k].duration < 0.0) {
                throw DomainError("switching correction makes segment " + std::to_string(k) +
                                  " negative; epsilon too large");
            }
        }
    }

    Protocol out;
    out.regime = p.regime;
    out.params = p.params;
    for (std::size_t k = 0; k < bangs.size(); ++k) {
        out.segments.emplace_back(bangs[k]);
        if (jump_after[k]) {
            out.segments.emplace_back(
                RampSegment{bangs[k].gamma, bangs[k + 1].gamma, bangs[k].omega, epsilon, shape});
        }
    }
    return out;
}

}  // namespace lzopt
