#include "catch2/catch_amalgamated.hpp"

#include "lzopt/analytic.hpp"
#include "lzopt/config.hpp"
#include "lzopt/dynamics.hpp"
#include "lzopt/protocol.hpp"
#include "test_helpers.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <random>

using namespace lzopt;
using Catch::Approx;

namespace {

constexpr double pi = std::numbers::pi;

QubitState ground(double gamma, double omega) { return lz_eigenstate(gamma, omega, Level::ground); }

// State with prescribed magnitudes and phases.
QubitState polar_state(double theta, double phi0, double phi1) {
    return {std::polar(std::cos(theta), phi0), std::polar(std::sin(theta), phi1)};
}

}  // namespace

TEST_CASE("tmin_general examples", "[analytic]") {
    CHECK(tmin_general(QubitState::zero(), QubitState::zero(), 1.0) == 0.0);
    CHECK(tmin_general(ground(-2.0, 1.0), ground(2.0, 1.0), 1.0) == Approx(std::atan(2.0)).epsilon(1e-12));
    CHECK(tmin_general(ground(-2.0, 1.0), ground(2.0, 1.0), 1.0) == Approx(1.1071487177940904).epsilon(1e-12));
    CHECK(tmin_general(QubitState::zero(), QubitState(1.0, 1.0), 1.0) == Approx(pi / 4.0).epsilon(1e-14));
    CHECK(tmin_general(QubitState::zero(), QubitState(1.0, 1.0), 2.0) == Approx(pi / 8.0).epsilon(1e-14));
    CHECK_THROWS_AS(tmin_general(QubitState::zero(), QubitState::one(), 0.0), DomainError);
}

TEST_CASE("tmin_general is symmetric under swapping the states", "[analytic][property]") {
    std::mt19937_64 rng(41);
    for (int k = 0; k < 1000; ++k) {
        const QubitState a = testing::random_state(rng);
        const QubitState b = testing::random_state(rng);
        CHECK(tmin_general(a, b, 1.3) == tmin_general(b, a, 1.3));
        const double t = tmin_general(a, b, 1.0);
        CHECK(t >= 0.0);
        CHECK(t <= pi / 2.0);
    }
}

TEST_CASE("tmin_general vanishes exactly for proportional magnitudes", "[analytic][property]") {
    std::mt19937_64 rng(43);
    std::uniform_real_distribution<double> u(0.0, pi / 2.0);
    std::uniform_real_distribution<double> ph(-pi, pi);
    for (int k = 0; k < 200; ++k) {
        const double theta = u(rng);
        // |f_j| = |i_j| (mu = 1 for normalized states), arbitrary phases.
        const QubitState i = polar_state(theta, ph(rng), ph(rng));
        const QubitState f = polar_state(theta, ph(rng), ph(rng));
        const double ci0 = std::abs(i.c0()), ci1 = std::abs(i.c1());
        const double cf0 = std::abs(f.c0()), cf1 = std::abs(f.c1());
        const bool proportional = cf1 * ci0 == cf0 * ci1;
        CHECK((tmin_general(i, f, 1.0) == 0.0) == proportional);
        CHECK(tmin_general(i, f, 1.0) < 1e-15);

        const QubitState g = polar_state(theta + 0.1 + 0.3 * u(rng) / pi, ph(rng), ph(rng));
        CHECK(tmin_general(i, g, 1.0) > 0.0);
    }
    // Unnormalized-magnitude proportionality through a common factor.
    CHECK(tmin_general(QubitState(1.0, 2.0), QubitState(cplx{0.0, 3.0}, -6.0), 1.0) == 0.0);
}

TEST_CASE("omega(t) as a control: omega is replaced by omega_max", "[analytic]") {
    std::mt19937_64 rng(47);
    for (int k = 0; k < 50; ++k) {
        const QubitState a = testing::random_state(rng);
        const QubitState b = testing::random_state(rng);
        const LzParams fixed{0.0, 1.0, std::nullopt, std::nullopt};
        const LzParams ctrl{0.0, 1.0, std::nullopt, 3.0};
        CHECK(tmin_general(a, b, fixed) == tmin_general(a, b, 1.0));
        CHECK(tmin_general(a, b, ctrl) == tmin_general(a, b, 3.0));
        CHECK(tmin_general(a, b, ctrl) == Approx(tmin_general(a, b, 1.0) / 3.0).epsilon(1e-14));
    }
}

TEST_CASE("optical driving uses the sigma1 eigenbasis and the detuning", "[analytic]") {
    // Original frame: H = -Delta sigma3 + Omega(t) sigma1. The Hadamard W swaps sigma1 and
    // sigma3, so in the rotated frame Omega acts as the unconstrained sigma3 control.
    const Unitary2 w{std::numbers::sqrt2 / 2.0, std::numbers::sqrt2 / 2.0, std::numbers::sqrt2 / 2.0,
                     -std::numbers::sqrt2 / 2.0};
    std::mt19937_64 rng(53);
    const double delta = -1.3;
    for (int k = 0; k < 20; ++k) {
        const QubitState i = testing::random_state(rng);
        const QubitState f = testing::random_state(rng);
        const double t = tmin_optical(i, f, delta);
        CHECK(t == tmin_general(to_sigma1_basis(i), to_sigma1_basis(f), 1.3));
        const PulseAreas areas = pulse_areas(to_sigma1_basis(i), to_sigma1_basis(f), 1.3);
        CHECK(areas.t_min == Approx(t).epsilon(1e-14));
        const Unitary2 rotated = expm_axis(Pauli::z, areas.alpha_f) * expm_pauli(0.0, -delta, t) *
                                 expm_axis(Pauli::z, areas.alpha_in);
        CHECK(fidelity(apply(w * rotated * w, i), f) >= 1.0 - 1e-9);
    }
    CHECK(tmin_optical(QubitState::zero(), QubitState::one(), 2.0) == 0.0);
}

TEST_CASE("tmin_ground_to_ground", "[analytic]") {
    CHECK(tmin_ground_to_ground(2.0, 1.0) == Approx(std::atan(2.0)).epsilon(1e-15));
    CHECK(tmin_ground_to_ground(1.0, 1.0) == Approx(pi / 4.0).epsilon(1e-15));
    CHECK(tmin_ground_to_ground(1e-12, 1.0) < 1e-11);
    CHECK_THROWS_AS(tmin_ground_to_ground(0.0, 1.0), DomainError);
    CHECK_THROWS_AS(tmin_ground_to_ground(1.0, -1.0), DomainError);

    std::mt19937_64 rng(59);
    std::uniform_real_distribution<double> u(0.01, 10.0);
    for (int k = 0; k < 500; ++k) {
        const double g = u(rng);
        const double w = u(rng);
        CHECK(std::abs(tmin_ground_to_ground(g, w) - tmin_general(ground(-g, w), ground(g, w), w)) <
              1e-12 * std::max(1.0, 1.0 / w));
    }
}

TEST_CASE("ground to excited of the same H_gamma follows the general formula", "[analytic]") {
    // omega T = arccos(omega / sqrt(gamma^2 + omega^2)) = arctan(gamma / omega).
    const double g = 2.0;
    const double w = 1.0;
    const double t = tmin_general(ground(g, w), lz_eigenstate(g, w, Level::excited), w);
    CHECK(t == Approx(std::atan(g / w) / w).epsilon(1e-13));
    CHECK(std::abs(t - 1.0 / std::hypot(g, w)) > 0.6);
}

TEST_CASE("pulse_areas for LZ ground states", "[analytic]") {
    const PulseAreas a = pulse_areas(ground(-2.0, 1.0), ground(2.0, 1.0), 1.0);
    CHECK(a.alpha_in == Approx(pi / 4.0).margin(1e-7));
    CHECK(a.alpha_f == Approx(-pi / 4.0).margin(1e-7));
    CHECK(a.t_min == Approx(std::atan(2.0)).epsilon(1e-14));

    // Reversed order of gamma flips the signs.
    const PulseAreas r = pulse_areas(ground(2.0, 1.0), ground(-2.0, 1.0), 1.0);
    CHECK(r.alpha_in == Approx(-pi / 4.0).margin(1e-7));
    CHECK(r.alpha_f == Approx(pi / 4.0).margin(1e-7));

    const PulseAreas same = pulse_areas(ground(1.0, 1.0), ground(1.0, 1.0), 1.0);
    CHECK(same.alpha_in == 0.0);
    CHECK(same.alpha_f == Approx(0.0).margin(1e-15));
    CHECK(same.t_min == 0.0);
}

TEST_CASE("pulse_areas reach random targets", "[analytic][property]") {
    std::mt19937_64 rng(61);
    for (int k = 0; k < 300; ++k) {
        const QubitState i = testing::random_state(rng);
        const QubitState f = testing::random_state(rng);
        const PulseAreas a = pulse_areas(i, f, 0.8);
        const Protocol p = build_composite(a.alpha_in, a.alpha_f, 0.8, a.t_min);
        CHECK(fidelity(propagate_protocol(p, i), f) >= 1.0 - 1e-9);
        CHECK(a.alpha_in > -pi / 2.0);
        CHECK(a.alpha_in <= pi / 2.0);
    }
}

TEST_CASE("regime classification", "[analytic]") {
    CHECK(regime(2.0, 1.0, 0.4) == Regime::bang_bang);
    CHECK(regime(2.0, 1.0, 0.5) == Regime::bang_bang);
    CHECK(regime(2.0, 1.0, 10.0) == Regime::bang_off_bang);
    CHECK(regime(2.0, 1.0, std::nullopt) == Regime::unconstrained);
    CHECK_THROWS_AS(regime(2.0, 1.0, 0.0), DomainError);
    CHECK_THROWS_AS(regime(-2.0, 1.0, 1.0), DomainError);
}

TEST_CASE("tmin_constrained at the regime boundary", "[analytic]") {
    const TminResult at = tmin_constrained(2.0, 1.0, 0.5);
    CHECK(at.regime == Regime::bang_bang);
    CHECK(*at.t_off == 0.0);
    // Both branches give arcsin(sqrt(1/2)) = pi/4 for the bang.
    CHECK(*at.t_c * std::hypot(0.5, 1.0) == Approx(pi / 4.0).epsilon(1e-14));

    const double c = 0.5;
    const double above = std::nextafter(c, 1.0);
    const TminResult up = tmin_constrained(2.0, 1.0, above);
    CHECK(up.regime == Regime::bang_off_bang);
    CHECK(std::abs(up.t_min - at.t_min) < 1e-12);
    CHECK(*up.t_off < 1e-12);

    std::mt19937_64 rng(67);
    std::uniform_real_distribution<double> u(0.2, 5.0);
    for (int k = 0; k < 200; ++k) {
        const double g = u(rng);
        const double w = u(rng);
        const double boundary = w * w / g;
        const TminResult lo = tmin_constrained(g, w, boundary);
        const TminResult hi = tmin_constrained(g, w, std::nextafter(boundary, 2.0 * boundary));
        CHECK(std::abs(lo.t_min - hi.t_min) < 1e-12 * std::max(1.0, lo.t_min));
    }
}

TEST_CASE("tmin_constrained invariants", "[analytic][property]") {
    std::mt19937_64 rng(71);
    std::uniform_real_distribution<double> u(0.05, 20.0);
    for (int k = 0; k < 500; ++k) {
        const double g = u(rng);
        const double w = u(rng);
        const double c = u(rng);
        const TminResult r = tmin_constrained(g, w, c);
        CHECK(r.t_min >= 0.0);
        CHECK(*r.t_off >= 0.0);
        CHECK(r.t_min == 2.0 * *r.t_c + *r.t_off);
        CHECK((r.regime == Regime::bang_bang) == (c <= w * w / g));
        if (r.regime == Regime::bang_bang) CHECK(*r.t_off == 0.0);
        // Bounded control is never faster than unbounded control.
        CHECK(r.t_min >= tmin_ground_to_ground(g, w) - 1e-12);
    }
    CHECK_THROWS_AS(tmin_constrained(0.0, 1.0, 1.0), DomainError);
    CHECK_THROWS_AS(tmin_constrained(1.0, 1.0, -1.0), DomainError);
}

TEST_CASE("tmin_constrained is monotone in c and approaches the unconstrained limit", "[analytic]") {
    // Observed property of the closed forms, checked on a grid.
    for (double g : {0.5, 1.0, 2.0, 4.0}) {
        double prev = std::numeric_limits<double>::infinity();
        for (int k = 0; k <= 400; ++k) {
            const double c = 0.01 * std::pow(10.0, 5.0 * k / 400.0);
            const double t = tmin_constrained(g, 1.0, c).t_min;
            CHECK(t <= prev + 1e-15);
            prev = t;
        }
    }
    const TminResult big = tmin_constrained(2.0, 1.0, 1e6);
    CHECK(*big.t_off == Approx(std::atan(2.0)).margin(1e-5));
    CHECK(std::hypot(1e6, 1.0) * *big.t_c == Approx(pi / 4.0).margin(1e-5));
    CHECK(big.t_min == Approx(std::atan(2.0)).margin(1e-5));
}

TEST_CASE("qsl_times examples", "[analytic][qsl]") {
    const QslReport gg = qsl_times(ground(-2.0, 1.0), ground(2.0, 1.0), 1.0);
    CHECK(std::abs(gg.t_min - gg.t_qsl_overlap) < 1e-12);
    CHECK(gg.t_qsl_variance > gg.t_qsl_overlap);

    const QslReport ge = qsl_times(ground(2.0, 1.0), lz_eigenstate(2.0, 1.0, Level::excited), 1.0);
    CHECK(ge.t_qsl_overlap == Approx(pi / 2.0).epsilon(1e-14));
    CHECK(ge.t_min == Approx(std::atan(2.0)).epsilon(1e-14));
    CHECK(ge.t_min < ge.t_qsl_overlap);

    // sigma1 eigenstate: no energy spread under omega sigma1.
    const QslReport flat = qsl_times(QubitState(1.0, 1.0), QubitState::zero(), 1.0);
    CHECK_FALSE(flat.variance_defined);
    CHECK(std::isinf(flat.t_qsl_variance));
    const QslReport same = qsl_times(QubitState(1.0, 1.0), QubitState(1.0, 1.0), 1.0);
    CHECK(same.t_qsl_variance == 0.0);
}

TEST_CASE("qsl ordering and the equality condition", "[analytic][qsl][property]") {
    std::mt19937_64 rng(73);
    std::uniform_real_distribution<double> th(0.05, pi / 2.0 - 0.05);
    std::uniform_real_distribution<double> ph(-pi, pi);
    for (int k = 0; k < 1000; ++k) {
        const QubitState i = testing::random_state(rng);
        const QubitState f = testing::random_state(rng);
        const QslReport q = qsl_times(i, f, 1.0);
        CHECK(q.t_min <= q.t_qsl_overlap + 1e-15);
        if (q.variance_defined) {
            CHECK(q.t_qsl_overlap <= q.t_qsl_variance);
        }
    }
    for (int k = 0; k < 200; ++k) {
        const double rel = ph(rng);
        const double ti = th(rng);
        const double tf = th(rng);
        const double g0 = ph(rng);
        const double g1 = ph(rng);
        const QubitState i = polar_state(ti, g0, g0 + rel);
        const QubitState matched = polar_state(tf, g1, g1 + rel);
        const QubitState mismatched = polar_state(tf, g1, g1 + rel + 0.2 + std::abs(ph(rng)) / 2.0);
        const QslReport a = qsl_times(i, matched, 1.0);
        CHECK(std::abs(a.t_min - a.t_qsl_overlap) < 1e-12);
        const QslReport b = qsl_times(i, mismatched, 1.0);
        CHECK(b.t_min < b.t_qsl_overlap);
    }
}

TEST_CASE("energy spread and the Fleming time", "[analytic][qsl]") {
    const QubitState s = QubitState::zero();
    CHECK(energy_spread(s, 0.0, 2.0) == Approx(2.0));
    CHECK(energy_spread(s, 2.0, 0.0) == Approx(0.0).margin(1e-15));
    const QslReport q = qsl_times(QubitState::zero(), QubitState(1.0, 1.0), 2.0, 0.0);
    CHECK(q.t_fleming == Approx(q.t_qsl_variance));
    // A constant H reaches the Fleming bound: |0> under omega sigma1 rotates onto |1>.
    const QslReport full = qsl_times(QubitState::zero(), QubitState::one(), 2.0, 0.0);
    CHECK(full.t_fleming == Approx(pi / 4.0));
}
