#include "gmi/alpha_opt.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace gmi {

void DensityBounds::validate() const {
    auto positive = [](double v) { return v > 0.0 && std::isfinite(v); };
    if (!positive(cl_xy) || !positive(cu_xy) || !positive(cl_x) || !positive(cu_x) ||
        !positive(cl_y) || !positive(cu_y))
        throw std::invalid_argument("DensityBounds: all density bounds must be positive");
    if (cl_xy > cu_xy || cl_x > cu_x || cl_y > cu_y)
        throw std::invalid_argument("DensityBounds: lower bounds must not exceed upper bounds");
    if (!(eta > 0.0 && eta <= 1.0))
        throw std::invalid_argument("DensityBounds: eta must lie in (0, 1]");
    if (d < 2) throw std::invalid_argument("DensityBounds: d must be >= 2");
    if (!positive(volume)) throw std::invalid_argument("DensityBounds: volume must be positive");
    if (n < 2) throw std::invalid_argument("DensityBounds: n must be >= 2");
    if (c_eps_lower() > 1.0)
        throw std::invalid_argument("DensityBounds: C^L_eps = " + std::to_string(c_eps_lower()) +
                                    " must be <= 1");
    if (c_eps_lower() > c_eps_upper())
        throw std::invalid_argument("DensityBounds: C^L_eps exceeds C^U_eps");
}

double mst_degree_bound(int d) {
    // Kissing numbers (best known constructions for d = 5..7).
    static constexpr double table[] = {2, 6, 12, 24, 40, 72, 126, 240};
    if (d >= 1 && d <= 8) return table[d - 1];
    return std::pow(2.0, d);
}

double RateConstants::cd_for(int d) const { return c_d > 0.0 ? c_d : mst_degree_bound(d); }

std::pair<double, double> alpha_bounds(const DensityBounds& bounds) {
    bounds.validate();
    const double cn = bounds.c_n();
    const double n = static_cast<double>(bounds.n);
    const double lo = 2.0 / cn;
    const double hi = std::min({0.25,
                                (1.0 + 1.0 / cn) / (4.0 + 2.0 * bounds.c_eps_upper()),
                                1.0 - std::pow(n, bounds.eta / bounds.d - 1.0)});
    if (!(lo < hi))
        throw std::invalid_argument(
            "alpha_bounds: infeasible interval [" + std::to_string(lo) + ", " + std::to_string(hi) +
            "]; n is too small for the given C^L_XY");
    return {lo, hi};
}

std::size_t block_count(const DensityBounds& bounds) {
    const double exponent = bounds.eta / (static_cast<double>(bounds.d) * bounds.d * (1.0 + bounds.eta));
    const double l = std::floor(std::pow(static_cast<double>(bounds.n), exponent));
    if (l < 1.0)
        throw std::invalid_argument("block_count: l_n < 1; n too small for the given eta, d");
    return static_cast<std::size_t>(l);
}

double g_tilde(double eps, double alpha, const DensityBounds& bounds) {
    if (!(alpha > 0.0 && alpha < 1.0))
        throw std::invalid_argument("g_tilde: alpha must lie in (0, 1)");
    if (!(eps > 0.0)) throw std::invalid_argument("g_tilde: eps must be positive");
    const double beta = 1.0 - alpha;
    const double u = eps / (beta * bounds.c_n());
    const double denom = alpha * eps + beta;
    return (1.0 + u) * (1.0 + eps + u) / (denom * denom);
}

double g_tilde_dalpha(double eps, double alpha, const DensityBounds& bounds) {
    const double beta = 1.0 - alpha;
    const double u = eps / (beta * bounds.c_n());
    const double du = u / beta;  // d/dalpha of eps / ((1-alpha) C_n)
    const double s = alpha * eps + beta;
    const double numerator = (1.0 + u) * (1.0 + eps + u);
    const double dnumerator = du * ((1.0 + eps + u) + (1.0 + u));
    return dnumerator / (s * s) - 2.0 * (eps - 1.0) * numerator / (s * s * s);
}

double rate_term(const DensityBounds& bounds, const RateConstants& consts) {
    const double n = static_cast<double>(bounds.n);
    const double d = static_cast<double>(bounds.d);
    const double l = static_cast<double>(block_count(bounds));
    const double ld = std::pow(l, d);
    return consts.c2 * ld / n + consts.cd_for(bounds.d) * std::pow(2.0, d) / n +
           consts.c_prime * ld * std::pow(n, -bounds.eta / d) +
           consts.c * ld * std::pow(n, -1.0 / d) +
           2.0 * consts.c1 * std::pow(l, d - 1.0) * std::pow(n, 1.0 / d - 1.0);
}

double rate_term_tilde(const DensityBounds& bounds, const RateConstants& consts) {
    const double n = static_cast<double>(bounds.n);
    const double d = static_cast<double>(bounds.d);
    const double ln = static_cast<double>(block_count(bounds));
    const double ld = std::pow(ln, d);
    const double m = ld;  // M = l_n^d with a_i = b_i = 1

    // Terms of D~ with a_i = b_i = 1; each index contributes identically, so
    // the sums collapse to M times one term.
    const double term2 = 2.0 * consts.c_dprime / n * m * ln * ld;
    const double term3 = 2.0 * consts.c1_prime * std::pow(n, -1.5) * m * ln * std::pow(ln, d / 2.0);
    const double inner = std::sqrt(n * ld + n * n);  // (n a_i l^d + n^2 a_i^2)^(1/2), a_i = 1
    const double term4 = (1.0 / n) * m * 2.0 * std::pow(n, -1.5) * std::pow(ln, -d / 2.0) * inner * inner;
    return 2.0 + term2 + term3 + term4;
}

double delta_tilde(double alpha, double eps_star, const DensityBounds& bounds,
                   const RateConstants& consts) {
    return rate_term(bounds, consts) +
           rate_term_tilde(bounds, consts) * bounds.cu_xy * bounds.volume *
               g_tilde(eps_star, alpha, bounds);
}

double alpha_objective(double alpha, const DensityBounds& bounds, const RateConstants& consts) {
    return delta_tilde(alpha, bounds.c_eps_upper(), bounds, consts) +
           consts.cd_for(bounds.d) * (1.0 - alpha) / static_cast<double>(bounds.n);
}

double xi(double alpha, const DensityBounds& bounds, const RateConstants& consts) {
    return rate_term_tilde(bounds, consts) * bounds.cu_xy * bounds.volume *
               g_tilde_dalpha(bounds.c_eps_upper(), alpha, bounds) -
           consts.cd_for(bounds.d) / static_cast<double>(bounds.n);
}

AlphaSolution select_alpha(const DensityBounds& bounds, const RateConstants& consts) {
    const auto [lo, hi] = alpha_bounds(bounds);

    AlphaSolution sol;
    sol.alpha_lo = lo;
    sol.alpha_hi = hi;
    sol.xi_lo = xi(lo, bounds, consts);
    sol.xi_hi = xi(hi, bounds, consts);

    if (sol.xi_lo > 0.0) {
        sol.saddle_case = AlphaCase::LowerBound;
        sol.alpha_tilde = lo;
        return sol;
    }
    if (sol.xi_hi < 0.0) {
        sol.saddle_case = AlphaCase::UpperBound;
        sol.alpha_tilde = hi;
        return sol;
    }

    // Xi(lo) <= 0 <= Xi(hi): bisect for the stationary point.
    sol.saddle_case = AlphaCase::InteriorRoot;
    double a = lo, b = hi;
    double root = 0.5 * (a + b);
    for (int iter = 0; iter < 200; ++iter) {
        root = 0.5 * (a + b);
        const double v = xi(root, bounds, consts);
        if (std::fabs(v) < 1e-10 || (b - a) < 1e-12) break;
        if (v < 0.0)
            a = root;
        else
            b = root;
    }
    sol.alpha_tilde = root;

    // Guard against a non-monotone Xi: a root found by bisection must also
    // be the objective minimizer, otherwise fall back to a dense scan.
    constexpr std::size_t kGrid = 1000;
    double best_alpha = root;
    double best_obj = alpha_objective(root, bounds, consts);
    for (std::size_t k = 0; k <= kGrid; ++k) {
        const double cand = lo + (hi - lo) * static_cast<double>(k) / kGrid;
        const double obj = alpha_objective(cand, bounds, consts);
        if (obj < best_obj - 1e-15) {
            best_obj = obj;
            best_alpha = cand;
        }
    }
    if (best_alpha != root && best_obj < alpha_objective(root, bounds, consts) - 1e-9) {
        sol.grid_fallback = true;
        sol.alpha_tilde = best_alpha;
    }
    return sol;
}

}  // namespace gmi
