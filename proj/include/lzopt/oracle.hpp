#pragma once

#include "lzopt/analytic.hpp"
#include "lzopt/protocol.hpp"
#include "lzopt/states.hpp"

#include <string>
#include <vector>

namespace lzopt {

enum class SearchFamily {
    composite,           // delta(alpha_in), free omega sigma1 for T, delta(alpha_f)
    three_segment,       // +c for T_c, 0 for T_off, -c for T_-c
    piecewise_constant,  // n equal segments, Gamma in {-c, 0, +c}
};

std::string_view to_string(SearchFamily f);

struct SearchSpec {
    SearchFamily family = SearchFamily::composite;
    int grid = 200;              // points per continuous coordinate at fixed total time
    int time_grid = 200;         // points on the total-time axis
    double t_max = 0.0;          // 0 selects pi/omega
    double time_tol = 1e-6;      // bisection width on the total time
    double threshold = 1.0 - 1e-6;
    bool symmetric = true;       // three_segment: enforce T_-c = T_c
    int segments = 4;            // piecewise_constant, at most 8

    void validate() const;
};

struct SearchResult {
    bool reached = false;
    double duration = 0.0;  // shortest total time found (or time of the best fidelity)
    double fidelity = 0.0;
    Protocol protocol;
    // Family coordinates of the returned protocol.
    double alpha_in = 0.0;
    double alpha_f = 0.0;
    double t_c = 0.0;
    double t_off = 0.0;
    double t_minus_c = 0.0;
};

/// Brute-force minimal-time search: scan the total time, at each time maximize the
/// fidelity over the family's remaining coordinates (grid, then Brent refinement
/// in the best cell), and bisect the first crossing of spec.threshold. In the
/// composite family the final pulse area is optimized in closed form for every
/// initial area; the asymmetric three-segment family nests a T_-c search inside
/// the T_c search.
/// An unreached threshold is reported, not thrown.
SearchResult search_min_time(const SearchSpec& spec, const QubitState& initial,
                             const QubitState& final_state, const LzParams& params);

struct SweepRow {
    double c_over_omega = 0.0;
    double w_tmin = 0.0;
    double w_toff = 0.0;
    double two_w_tc = 0.0;
    Regime regime = Regime::bang_bang;
};

struct Sweep {
    std::vector<SweepRow> rows;
    bool monotone = true;  // w_tmin non-increasing along increasing c
};

/// Constrained minimal time against c/omega at fixed gamma/omega (omega = 1).
Sweep sweep_fig1(double gamma_over_omega, const std::vector<double>& c_grid);

struct DeltaLimitReport {
    std::vector<double> gammas;
    std::vector<double> errors;  // || e^{-i(G s3 + w s1) alpha/G} - e^{-i alpha s3} ||_2
    bool decreasing = true;
};

/// Compares a short strong sigma3 segment of area alpha against the ideal pulse.
DeltaLimitReport verify_delta_limit(double alpha, double omega, const std::vector<double>& gamma_grid);

struct VerifyCheck {
    std::string name;
    double expected = 0.0;
    double found = 0.0;
    double tolerance = 0.0;
    bool relative = false;
    bool pass = false;
};

/// Oracle-vs-formula checks for the ground-state pair of H_{-gamma}, H_{+gamma}.
std::vector<VerifyCheck> verify_against_analytic(double gamma, double omega, std::optional<double> c,
                                                 double tolerance, const SearchSpec& base);

}  // namespace lzopt
