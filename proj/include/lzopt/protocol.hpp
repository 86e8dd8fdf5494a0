#pragma once

#include "lzopt/analytic.hpp"
#include "lzopt/states.hpp"

#include <optional>
#include <string_view>
#include <variant>
#include <vector>

namespace lzopt {

/// Instantaneous e^{-i area sigma3}. Zero duration.
struct DeltaPulse {
    double area = 0.0;
};

/// Gamma sigma3 + omega sigma1 held for `duration`.
struct ConstantSegment {
    double gamma = 0.0;
    double omega = 0.0;
    double duration = 0.0;
};

/// Normalized switching profile on [0, 1], from 0 to 1.
enum class RampShape { linear, cosine, smoothstep };

std::string_view to_string(RampShape shape);
RampShape ramp_shape_from_string(std::string_view s);
double ramp_profile(RampShape shape, double s);

/// Gamma moves from gamma_start to gamma_end along `shape` over `duration`.
struct RampSegment {
    double gamma_start = 0.0;
    double gamma_end = 0.0;
    double omega = 0.0;
    double duration = 0.0;
    RampShape shape = RampShape::linear;

    double gamma_at(double t) const;
};

using Segment = std::variant<DeltaPulse, ConstantSegment, RampSegment>;

double duration_of(const Segment& s);

/// Time-ordered list of segments (first element acts first).
struct Protocol {
    std::vector<Segment> segments;
    std::optional<Regime> regime;
    std::optional<LzParams> params;

    double total_duration() const;
};

/// delta(alpha_in), free evolution under omega sigma1 for t, delta(alpha_f).
Protocol build_composite(double alpha_in, double alpha_f, double omega, double t);

/// Composite protocol at the minimal time for an arbitrary state pair.
Protocol build_optimal_composite(const QubitState& initial, const QubitState& final_state, double omega);

/// +c for T_c, 0 for T_off, -c for T_c. Throws RegimeError for c <= omega^2/gamma.
Protocol build_bang_off_bang(double gamma, double omega, double c);

/// +c for T_c, -c for T_c. Throws RegimeError for c > omega^2/gamma.
Protocol build_bang_bang(double gamma, double omega, double c);

/// Whichever of the two above matches regime(gamma, omega, c).
Protocol build_constrained(double gamma, double omega, double c);

/// Inserts a ramp of length epsilon at every jump of Gamma between consecutive
/// constant segments. With `corrected`, each constant segment is shortened by
/// epsilon/2 per adjacent ramp, which restores the first-order action of the
/// ideal protocol (T_c - eps/2 for bangs, T_off - eps for the off period).
/// Throws DomainError if a shortened duration would become negative or the
/// protocol contains pulses or ramps.
Protocol apply_switching(const Protocol& p, double epsilon, bool corrected,
                         RampShape shape = RampShape::linear);

}  // namespace lzopt
