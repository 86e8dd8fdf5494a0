#include "catch2/catch_amalgamated.hpp"

#include "lzopt/analytic.hpp"
#include "lzopt/config.hpp"
#include "lzopt/dynamics.hpp"
#include "lzopt/oracle.hpp"
#include "test_helpers.hpp"

#include <cmath>
#include <numbers>
#include <random>

using namespace lzopt;
using namespace lzopt::testing;
using Catch::Approx;

namespace {

constexpr double pi = std::numbers::pi;

SearchSpec spec_for(SearchFamily family, bool symmetric = true) {
    SearchSpec s;
    s.family = family;
    s.symmetric = symmetric;
    s.threshold = 1.0 - 1e-9;
    return s;
}

QubitState ground(double gamma) { return lz_eigenstate(gamma, 1.0, Level::ground); }

}  // namespace

TEST_CASE("search spec validation", "[oracle]") {
    SearchSpec s;
    CHECK_NOTHROW(s.validate());
    s.grid = 0;
    CHECK_THROWS_AS(s.validate(), DomainError);
    s = {};
    s.threshold = 1.0;
    CHECK_THROWS_AS(s.validate(), DomainError);
    s = {};
    s.family = SearchFamily::piecewise_constant;
    s.segments = 9;
    CHECK_THROWS_AS(s.validate(), DomainError);
    CHECK_THROWS_AS(search_min_time(spec_for(SearchFamily::three_segment), ground(-2), ground(2),
                                    LzParams{2.0, 1.0, std::nullopt, std::nullopt}),
                    DomainError);
}

TEST_CASE("identical endpoints need no time", "[oracle]") {
    std::mt19937_64 rng(21);
    const QubitState s = random_state(rng);
    const LzParams p{1.0, 1.0, 2.0, std::nullopt};
    for (SearchFamily f : {SearchFamily::composite, SearchFamily::three_segment, SearchFamily::piecewise_constant}) {
        const SearchResult r = search_min_time(spec_for(f), s, s, p);
        CHECK(r.reached);
        CHECK(r.duration == 0.0);
    }
}

TEST_CASE("composite search reproduces the ground-to-ground time", "[oracle]") {
    const SearchResult r =
        search_min_time(spec_for(SearchFamily::composite), ground(-2.0), ground(2.0), LzParams{2.0, 1.0, {}, {}});
    REQUIRE(r.reached);
    CHECK(std::abs(r.duration - std::atan(2.0)) < 1e-3);
    CHECK(std::abs(r.alpha_in - pi / 4.0) < 1e-2);
    CHECK(std::abs(r.alpha_f + pi / 4.0) < 1e-2);
    CHECK(r.fidelity >= 1.0 - 1e-9);
    CHECK(fidelity(propagate_protocol(r.protocol, ground(-2.0)), ground(2.0)) >= 1.0 - 1e-9);

    const QubitState plus(cplx{1.0, 0.0}, cplx{1.0, 0.0});
    const SearchResult q =
        search_min_time(spec_for(SearchFamily::composite), QubitState::zero(), plus, LzParams{0.0, 1.0, {}, {}});
    REQUIRE(q.reached);
    CHECK(std::abs(q.duration - pi / 4.0) < 1e-3);
}

TEST_CASE("composite search never beats the general formula", "[oracle][property]") {
    std::mt19937_64 rng(22);
    SearchSpec s = spec_for(SearchFamily::composite);
    s.grid = 80;
    s.time_grid = 100;
    for (int k = 0; k < 5; ++k) {
        const QubitState i = random_state(rng);
        const QubitState f = random_state(rng);
        const double w = 0.5 + k * 0.3;
        const SearchResult r = search_min_time(s, i, f, LzParams{0.0, w, {}, {}});
        const double predicted = tmin_general(i, f, w);
        REQUIRE(r.reached);
        CHECK(w * r.duration >= w * predicted - 1e-3);
        CHECK(std::abs(w * r.duration - w * predicted) < 1e-3);
    }
}

TEST_CASE("three-segment search matches the constrained formulas", "[oracle]") {
    const LzParams p{2.0, 1.0, 5.0, std::nullopt};
    const TminResult exact = tmin_constrained(2.0, 1.0, 5.0);

    const SearchResult sym = search_min_time(spec_for(SearchFamily::three_segment), ground(-2), ground(2), p);
    REQUIRE(sym.reached);
    CHECK(std::abs(sym.duration - exact.t_min) / exact.t_min < 1e-3);
    CHECK(sym.t_c == sym.t_minus_c);
    CHECK(std::abs(sym.t_off - *exact.t_off) < 1e-3 * exact.t_min);

    const SearchResult asym =
        search_min_time(spec_for(SearchFamily::three_segment, false), ground(-2), ground(2), p);
    REQUIRE(asym.reached);
    CHECK(std::abs(asym.duration - exact.t_min) / exact.t_min < 1e-3);
    CHECK(std::abs(asym.t_c - asym.t_minus_c) < 2.0 * asym.duration / 200.0);
    CHECK(std::abs(asym.duration - sym.duration) < 2.0 * asym.duration / 200.0);
}

TEST_CASE("three-segment search leaves no off period in the bang-bang regime", "[oracle]") {
    for (double c : {0.1, 0.4}) {
        const LzParams p{2.0, 1.0, c, std::nullopt};
        const TminResult exact = tmin_constrained(2.0, 1.0, c);
        SearchSpec s = spec_for(SearchFamily::three_segment);
        s.t_max = 2.0 * exact.t_min;
        const SearchResult r = search_min_time(s, ground(-2), ground(2), p);
        REQUIRE(r.reached);
        CHECK(std::abs(r.duration - exact.t_min) / exact.t_min < 1e-3);
        CHECK(r.t_off < r.duration / 200.0);
    }
}

TEST_CASE("quantized piecewise search is never faster than the analytic time", "[oracle]") {
    for (double c : {0.4, 5.0}) {
        const LzParams p{2.0, 1.0, c, std::nullopt};
        const TminResult exact = tmin_constrained(2.0, 1.0, c);
        for (int n : {2, 4, 6}) {
            SearchSpec s = spec_for(SearchFamily::piecewise_constant);
            s.segments = n;
            s.threshold = 1.0 - 1e-6;
            s.t_max = 3.0 * exact.t_min;
            const SearchResult r = search_min_time(s, ground(-2), ground(2), p);
            if (r.reached) {
                CHECK(r.duration >= exact.t_min * (1.0 - 1e-3));
                CHECK(fidelity(propagate_protocol(r.protocol, ground(-2)), ground(2)) >= 1.0 - 1e-6);
            }
        }
    }
}

TEST_CASE("search results are deterministic", "[oracle]") {
    SearchSpec s = spec_for(SearchFamily::three_segment, false);
    s.grid = 60;
    const LzParams p{1.0, 1.0, 3.0, std::nullopt};
    const SearchResult a = search_min_time(s, ground(-1), ground(1), p);
    const SearchResult b = search_min_time(s, ground(-1), ground(1), p);
    CHECK(a.duration == b.duration);
    CHECK(a.t_c == b.t_c);
    CHECK(a.t_minus_c == b.t_minus_c);
    CHECK(a.fidelity == b.fidelity);
}

TEST_CASE("unreached thresholds are reported", "[oracle]") {
    SearchSpec s = spec_for(SearchFamily::composite);
    s.grid = 40;
    s.time_grid = 20;
    s.t_max = 0.5;  // below arctan 2
    const SearchResult r = search_min_time(s, ground(-2), ground(2), LzParams{2.0, 1.0, {}, {}});
    CHECK_FALSE(r.reached);
    CHECK(r.fidelity < s.threshold);
    CHECK(r.fidelity > 0.0);
    CHECK(r.duration == Approx(0.5));
}

TEST_CASE("constrained-time sweep against c/omega", "[oracle][sweep]") {
    std::vector<double> grid;
    for (int k = 0; k <= 60; ++k) grid.push_back(0.05 * std::pow(400.0, k / 60.0));
    grid.push_back(0.1);
    grid.push_back(0.2);
    grid.push_back(0.3);
    grid.push_back(0.4);
    grid.push_back(0.5);
    grid.push_back(1e3);
    const Sweep s = sweep_fig1(2.0, grid);
    CHECK(s.monotone);
    for (const SweepRow& r : s.rows) {
        CHECK(std::abs(r.w_tmin - (r.two_w_tc + r.w_toff)) <= 1e-12);
        if (r.c_over_omega <= 0.5) {
            CHECK(r.regime == Regime::bang_bang);
            CHECK(r.w_toff == 0.0);
        } else {
            CHECK(r.regime == Regime::bang_off_bang);
        }
    }
    CHECK(s.rows.back().w_tmin - std::atan(2.0) < 5e-3);

    const Sweep edge = sweep_fig1(2.0, {0.5, std::nextafter(0.5, 1.0)});
    CHECK(std::abs(edge.rows[0].w_tmin - edge.rows[1].w_tmin) < 1e-12);

    CHECK_FALSE(sweep_fig1(2.0, {5.0, 0.4}).rows.empty());
    CHECK(sweep_fig1(2.0, {5.0, 0.4}).monotone);
    CHECK_THROWS_AS(sweep_fig1(2.0, {0.0}), DomainError);
}

TEST_CASE("large-Gamma segments approach delta pulses", "[oracle][delta]") {
    const DeltaLimitReport r = verify_delta_limit(pi / 4.0, 1.0, {1e2, 1e3, 1e4});
    REQUIRE(r.errors.size() == 3);
    CHECK(r.decreasing);
    CHECK(r.errors[0] > r.errors[1]);
    CHECK(r.errors[1] > r.errors[2]);
    CHECK(r.errors[2] < 1e-3);

    const DeltaLimitReport zero = verify_delta_limit(0.0, 1.0, {1e2, 1e3, 1e4});
    for (double e : zero.errors) CHECK(e == 0.0);

    const DeltaLimitReport neg = verify_delta_limit(-pi / 4.0, 1.0, {1e2, 1e3, 1e4});
    CHECK(neg.decreasing);
}

TEST_CASE("verify against analytic values", "[oracle][verify]") {
    SearchSpec base;
    base.threshold = 1.0 - 1e-9;
    const auto checks = verify_against_analytic(2.0, 1.0, 5.0, 1e-3, base);
    REQUIRE(checks.size() == 5);
    for (const VerifyCheck& c : checks) {
        INFO(c.name << ": expected " << c.expected << ", found " << c.found);
        CHECK(c.pass);
    }
    const auto plain = verify_against_analytic(2.0, 1.0, std::nullopt, 1e-3, base);
    CHECK(plain.size() == 3);
}
