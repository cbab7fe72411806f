#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "gmi/alpha_opt.hpp"

using namespace gmi;

namespace {

// Saddle-case fixtures (each verified against a dense objective scan).
const DensityBounds kLowerCase{1.0, 1.0, 1.0, 1.0, 1.0, 1.0, 1.0, 2, 1.0, 500};
const DensityBounds kUpperCase{0.5, 2.0, 0.5, 2.0, 0.5, 2.0, 1.0, 2, 1.0, 10000};
const DensityBounds kRootCase{4.0, 4.0, 2.0, 2.0, 2.0, 2.0, 1.0, 2, 0.38, 1000};

double grid_min(const DensityBounds& b, const RateConstants& c, int points) {
    const auto [lo, hi] = alpha_bounds(b);
    double best_a = lo, best_o = alpha_objective(lo, b, c);
    for (int k = 1; k <= points; ++k) {
        const double a = lo + (hi - lo) * k / static_cast<double>(points);
        const double o = alpha_objective(a, b, c);
        if (o < best_o) {
            best_o = o;
            best_a = a;
        }
    }
    return best_a;
}

}  // namespace

TEST_SUITE("alpha_opt") {

TEST_CASE("alpha lower bound is 2 / C_n") {
    DensityBounds b{2.0, 2.0, 1.5, 1.5, 1.5, 1.5, 1.0, 2, 1.0, 1000};
    CHECK(b.c_n() == doctest::Approx(1000.0));
    const auto [lo, hi] = alpha_bounds(b);
    CHECK(lo == doctest::Approx(0.002));
    CHECK(hi > lo);
}

TEST_CASE("mild bounds let the 1/4 term bind the upper end") {
    // C^U_eps = 0.002 / 0.25 = 0.008 keeps the middle term above 1/4 and the
    // smoothness term is 1 - 1e4^(-1/2) = 0.99.
    DensityBounds b{0.002, 0.002, 0.5, 1.0, 0.5, 1.0, 1.0, 2, 1.0, 10000};
    const auto [lo, hi] = alpha_bounds(b);
    CHECK(lo == doctest::Approx(0.2));
    CHECK(hi == doctest::Approx(0.25));
}

TEST_CASE("a huge C^U_eps collapses the interval") {
    // The middle term of the upper bound shrinks like 1/C^U_eps.
    DensityBounds b{2.0, 2.0e6, 0.001, 1.0, 0.001, 1.0, 1.0, 2, 1.0, 1000};
    CHECK(b.c_eps_upper() > 1e6);
    CHECK_THROWS_AS(alpha_bounds(b), std::invalid_argument);
}

TEST_CASE("density bounds validation") {
    CHECK_THROWS_AS((DensityBounds{0.0, 1, 1, 1, 1, 1, 1.0, 2, 1.0, 100}.validate()),
                    std::invalid_argument);
    CHECK_THROWS_AS((DensityBounds{2, 1, 1, 1, 1, 1, 1.0, 2, 1.0, 100}.validate()),
                    std::invalid_argument);  // cl_xy > cu_xy
    CHECK_THROWS_AS((DensityBounds{1, 1, 1, 1, 1, 1, 1.5, 2, 1.0, 100}.validate()),
                    std::invalid_argument);  // eta out of range
    CHECK_THROWS_AS((DensityBounds{1, 1, 1, 1, 1, 1, 1.0, 1, 1.0, 100}.validate()),
                    std::invalid_argument);  // d < 2
    CHECK_THROWS_AS((DensityBounds{3, 3, 1, 1, 1, 1, 1.0, 2, 1.0, 100}.validate()),
                    std::invalid_argument);  // C^L_eps > 1
}

TEST_CASE("block count follows the floor formula") {
    DensityBounds b{1, 1, 1, 1, 1, 1, 1.0, 2, 1.0, 10000};
    CHECK(block_count(b) == 3);  // floor(1e4^(1/8)) = floor(3.162)
    b.n = 1000;
    CHECK(block_count(b) == 2);
    b.eta = 0.5;
    b.d = 4;
    b.n = 100;  // exponent 0.5/24, 100^0.0208 = 1.10
    CHECK(block_count(b) == 1);
}

TEST_CASE("g_tilde collapses to 2 when C_n is astronomically large") {
    // alpha = beta = 1/2, eps = 1: (1)(2)/(1)^2.
    DensityBounds b{1e30, 1e30, 1e15, 1e15, 1e15, 1e15, 1.0, 2, 1.0, 1000};
    CHECK(g_tilde(1.0, 0.5, b) == doctest::Approx(2.0).epsilon(1e-9));
    CHECK_THROWS_AS(g_tilde(0.0, 0.5, b), std::invalid_argument);
    CHECK_THROWS_AS(g_tilde(1.0, 0.0, b), std::invalid_argument);
}

TEST_CASE("g_tilde is increasing in eps up to theta_U on the admissible alphas") {
    // Monotonicity holds on the region the saddle-point argument uses:
    // admissible alpha with eps below theta_U(alpha). (For eps far beyond
    // theta_U the kernel eventually turns over, so the scan stops there.)
    DensityBounds b{1.0, 1.0, 1.0, 1.0, 1.0, 1.0, 1.0, 2, 1.0, 400};
    const double cn = b.c_n();
    const double alpha_top = std::min(0.5 + 0.5 / cn, 1.0 / 3.0 + 2.0 / (3.0 * cn));
    std::size_t scanned = 0;
    for (int ai = 0; ai <= 20; ++ai) {
        const double alpha = 2.0 / cn + (alpha_top - 2.0 / cn) * ai / 20.0;
        const double theta_u = (1.0 - 4.0 * alpha + 1.0 / cn) / (2.0 * alpha);
        if (theta_u <= 0.0) continue;
        double prev = g_tilde(theta_u * 1e-3, alpha, b);
        for (int ei = 1; ei <= 60; ++ei) {
            const double eps = theta_u * (1e-3 + (1.0 - 1e-3) * ei / 60.0);
            const double cur = g_tilde(eps, alpha, b);
            CHECK(cur > prev);
            prev = cur;
            ++scanned;
        }
    }
    CHECK(scanned > 500);
}

TEST_CASE("g_tilde is concave in eps below theta_U for alpha <= 1/4") {
    DensityBounds b{1.0, 1.0, 1.0, 1.0, 1.0, 1.0, 1.0, 2, 1.0, 400};
    const double cn = b.c_n();
    for (double alpha : {0.02, 0.1, 0.2, 0.25}) {
        const double theta_u = (1.0 - 4.0 * alpha + 1.0 / cn) / (2.0 * alpha);
        const double top = std::min(theta_u, 50.0);
        const double h = (top - 0.01) / 200.0;
        if (h <= 0.0) continue;
        for (int i = 1; i < 199; ++i) {
            const double eps = 0.01 + i * h;
            const double second = g_tilde(eps + h, alpha, b) - 2.0 * g_tilde(eps, alpha, b) +
                                  g_tilde(eps - h, alpha, b);
            CHECK(second < 1e-12);
        }
    }
}

TEST_CASE("delta_tilde separates into rate terms plus the g_tilde part") {
    const DensityBounds b = kRootCase;
    const RateConstants c;
    const double eps = b.c_eps_upper();
    const double d_term = rate_term(b, c);
    const double dt_term = rate_term_tilde(b, c);
    for (double a1 : {0.01, 0.05, 0.12}) {
        for (double a2 : {0.02, 0.08, 0.15}) {
            const double diff = delta_tilde(a1, eps, b, c) - delta_tilde(a2, eps, b, c);
            const double expected =
                dt_term * b.cu_xy * b.volume * (g_tilde(eps, a1, b) - g_tilde(eps, a2, b));
            CHECK(diff == doctest::Approx(expected).epsilon(1e-12));
        }
    }
    CHECK(delta_tilde(0.1, eps, b, c) ==
          doctest::Approx(d_term + dt_term * b.cu_xy * b.volume * g_tilde(eps, 0.1, b))
              .epsilon(1e-12));
}

TEST_CASE("rate term D-tilde matches a hand-rolled summation oracle") {
    const DensityBounds b{1.0, 1.0, 1.0, 1.0, 1.0, 1.0, 1.0, 3, 1.0, 5000};
    const RateConstants c;
    const double n = static_cast<double>(b.n);
    const double d = b.d;
    const double l = static_cast<double>(block_count(b));
    const std::size_t m = static_cast<std::size_t>(std::llround(std::pow(l, d)));

    // Direct transcription: every index contributes with a_i = b_i = 1.
    double term2 = 0.0, term3 = 0.0, term4 = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
        term2 += l * std::pow(l, d);
        term3 += l * std::pow(l, d / 2.0);
        term4 += 2.0 * std::pow(n, -1.5) * std::pow(l, -d / 2.0) *
                 std::sqrt(n * std::pow(l, d) + n * n) * std::sqrt(n * std::pow(l, d) + n * n);
    }
    const double expected =
        2.0 + 2.0 / n * term2 + 2.0 * std::pow(n, -1.5) * term3 + term4 / n;
    CHECK(rate_term_tilde(b, c) == doctest::Approx(expected).epsilon(1e-9));

    // Normalization of the index family: sum a_i l^{-d} = M l^{-d} = 1.
    CHECK(static_cast<double>(m) * std::pow(l, -d) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("analytic xi matches central finite differences") {
    // Step 3e-5 keeps the difference quotient's cancellation noise well
    // under the 1e-6 relative target. On the root fixture Xi crosses zero
    // inside the grid, so agreement there is asserted in absolute terms.
    const RateConstants c;
    const double h = 3e-5;
    for (const DensityBounds& b : {kLowerCase, kUpperCase}) {
        const auto [lo, hi] = alpha_bounds(b);
        for (int k = 0; k < 50; ++k) {
            const double alpha = lo + (hi - lo) * (k + 0.5) / 50.0;
            const double fd =
                (alpha_objective(alpha + h, b, c) - alpha_objective(alpha - h, b, c)) / (2.0 * h);
            const double an = xi(alpha, b, c);
            CHECK(std::fabs(an - fd) <= 1e-6 * std::fabs(fd));
        }
    }
    const auto [lo, hi] = alpha_bounds(kRootCase);
    for (int k = 0; k < 50; ++k) {
        const double alpha = lo + (hi - lo) * (k + 0.5) / 50.0;
        const double fd = (alpha_objective(alpha + h, kRootCase, c) -
                           alpha_objective(alpha - h, kRootCase, c)) /
                          (2.0 * h);
        CHECK(std::fabs(xi(alpha, kRootCase, c) - fd) < 1e-8);
    }
}

TEST_CASE("xi reduces to -c_d/n when the g_tilde term vanishes") {
    // eps* = 1 and enormous C_n make g_tilde flat in alpha; a tiny support
    // volume removes the residual 1/C_n dependence.
    DensityBounds b{1e30, 1e30, 1e15, 1e15, 1e15, 1e15, 1.0, 2, 1e-12, 1000};
    const RateConstants c;
    CHECK(b.c_eps_upper() == doctest::Approx(1.0));
    const double expected = -c.cd_for(b.d) / static_cast<double>(b.n);
    for (double alpha : {0.01, 0.1, 0.2})
        CHECK(xi(alpha, b, c) == doctest::Approx(expected).epsilon(1e-9));
}

TEST_CASE("select_alpha picks the lower endpoint when xi stays positive") {
    const auto sol = select_alpha(kLowerCase);
    CHECK(sol.saddle_case == AlphaCase::LowerBound);
    CHECK(sol.xi_lo > 0.0);
    CHECK(sol.alpha_tilde == doctest::Approx(sol.alpha_lo));
    CHECK(!sol.grid_fallback);
    CHECK(sol.alpha_tilde == doctest::Approx(grid_min(kLowerCase, {}, 10000)).epsilon(1e-4));
}

TEST_CASE("select_alpha picks the upper endpoint when xi stays negative") {
    const auto sol = select_alpha(kUpperCase);
    CHECK(sol.saddle_case == AlphaCase::UpperBound);
    CHECK(sol.xi_hi < 0.0);
    CHECK(sol.alpha_tilde == doctest::Approx(sol.alpha_hi));
    const double grid = grid_min(kUpperCase, {}, 10000);
    CHECK(std::fabs(sol.alpha_tilde - grid) < 1e-4);
}

TEST_CASE("select_alpha bisects to the interior stationary point") {
    const auto sol = select_alpha(kRootCase);
    CHECK(sol.saddle_case == AlphaCase::InteriorRoot);
    CHECK(sol.xi_lo < 0.0);
    CHECK(sol.xi_hi > 0.0);
    CHECK(sol.alpha_tilde > sol.alpha_lo);
    CHECK(sol.alpha_tilde < sol.alpha_hi);
    CHECK(!sol.grid_fallback);
    CHECK(std::fabs(xi(sol.alpha_tilde, kRootCase, {})) < 1e-9);
    const double grid = grid_min(kRootCase, {}, 10000);
    CHECK(std::fabs(sol.alpha_tilde - grid) < 1e-4);
}

TEST_CASE("selected alpha always lies in the feasible interval and minimizes") {
    const RateConstants c;
    for (const DensityBounds& b : {kLowerCase, kUpperCase, kRootCase}) {
        const auto sol = select_alpha(b, c);
        CHECK(sol.alpha_tilde >= sol.alpha_lo);
        CHECK(sol.alpha_tilde <= sol.alpha_hi);
        const double obj = alpha_objective(sol.alpha_tilde, b, c);
        const auto [lo, hi] = alpha_bounds(b);
        for (int k = 0; k <= 1000; ++k) {
            const double a = lo + (hi - lo) * k / 1000.0;
            CHECK(obj <= alpha_objective(a, b, c) + 1e-9);
        }
    }
}

TEST_CASE("rate constants default c_d to the degree bound and are overridable") {
    CHECK(mst_degree_bound(2) == 6.0);
    CHECK(mst_degree_bound(3) == 12.0);
    CHECK(mst_degree_bound(10) == doctest::Approx(1024.0));
    RateConstants c;
    CHECK(c.cd_for(2) == 6.0);
    c.c_d = 3.5;
    CHECK(c.cd_for(2) == 3.5);
}

}  // TEST_SUITE
