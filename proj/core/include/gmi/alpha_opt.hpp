#pragma once

#include <cstddef>
#include <utility>

namespace gmi {

/// Density envelope constants and problem size needed by the minimax
/// proportionality-parameter selection.
struct DensityBounds {
    double cl_xy = 0.0;  ///< C^L_XY (joint density floor)
    double cu_xy = 0.0;  ///< C^U_XY
    double cl_x = 0.0;   ///< C^L_X
    double cu_x = 0.0;   ///< C^U_X
    double cl_y = 0.0;   ///< C^L_Y
    double cu_y = 0.0;   ///< C^U_Y
    double eta = 1.0;    ///< smoothness parameter in (0, 1]
    int d = 2;           ///< dimension, >= 2
    double volume = 1.0; ///< V(S_XY), support volume
    std::size_t n = 0;   ///< sample size

    void validate() const;

    double c_eps_lower() const { return cl_xy / (cu_x * cu_y); }  ///< C^L_eps
    double c_eps_upper() const { return cu_xy / (cl_x * cl_y); }  ///< C^U_eps
    double c_n() const { return cl_xy * static_cast<double>(n) / 2.0; }
};

/// Rate constants left unnamed by the analysis; all default to 1, and c_d
/// (which depends only on the dimension) defaults to the MST max-degree
/// bound. The index family uses a_i = b_i = 1 with M = l_n^d, which meets
/// the normalization sum a_i l^{-d} = sum b_i l^{-d} = 1 exactly.
struct RateConstants {
    double c = 1.0;
    double c_prime = 1.0;   // c'
    double c1 = 1.0;
    double c2 = 1.0;
    double c_dprime = 1.0;  // c''
    double c1_prime = 1.0;  // c'_1
    double c_d = 0.0;       // 0 selects mst_degree_bound(d)

    double cd_for(int d) const;
};

/// Default c_d: a max-degree bound for Euclidean MSTs in dimension d
/// (kissing-number values through d = 8, 2^d beyond).
double mst_degree_bound(int d);

/// Feasible interval [alpha_lo, alpha_hi]:
///   alpha_lo = 2 / C_n,
///   alpha_hi = min{ 1/4, (1 + 1/C_n) / (4 + 2 C^U_eps), 1 - n^(eta/d - 1) }.
/// Throws when the interval is empty (n too small for the given C^L_XY).
std::pair<double, double> alpha_bounds(const DensityBounds& bounds);

/// l_n = floor(n^(eta / (d^2 (1 + eta)))).
std::size_t block_count(const DensityBounds& bounds);

/// Simplified bound kernel
///   G~(eps, alpha) = (1 + u) (1 + eps + u) / (alpha eps + beta)^2,
/// with beta = 1 - alpha and u = eps / (beta C_n).
double g_tilde(double eps, double alpha, const DensityBounds& bounds);

/// Closed-form d/dalpha of g_tilde at fixed eps.
double g_tilde_dalpha(double eps, double alpha, const DensityBounds& bounds);

/// The alpha-independent rate terms D(n, l_n, d, eta) and D~(n, l_n, d).
double rate_term(const DensityBounds& bounds, const RateConstants& consts);
double rate_term_tilde(const DensityBounds& bounds, const RateConstants& consts);

/// MSE surrogate Delta~(alpha, eps*) = D + D~ C^U_XY V g_tilde(eps*, alpha);
/// with constant eps* the double integral collapses to V * g_tilde.
double delta_tilde(double alpha, double eps_star, const DensityBounds& bounds,
                   const RateConstants& consts);

/// Objective Delta~(alpha, C^U_eps) + c_d (1 - alpha) / n.
double alpha_objective(double alpha, const DensityBounds& bounds, const RateConstants& consts);

/// Xi(alpha) = d/dalpha of the objective, in closed form.
double xi(double alpha, const DensityBounds& bounds, const RateConstants& consts);

enum class AlphaCase {
    LowerBound,    ///< Xi(alpha_lo) > 0: objective increasing, pick alpha_lo
    UpperBound,    ///< Xi(alpha_hi) < 0: objective decreasing, pick alpha_hi
    InteriorRoot,  ///< stationary point of Xi inside the interval
};

struct AlphaSolution {
    double alpha_tilde = 0.0;
    AlphaCase saddle_case = AlphaCase::InteriorRoot;
    double alpha_lo = 0.0;
    double alpha_hi = 0.0;
    double xi_lo = 0.0;
    double xi_hi = 0.0;
    /// Set when the bisection root did not minimize the objective (Xi not
    /// monotone); alpha_tilde then comes from a dense grid scan.
    bool grid_fallback = false;
};

/// Saddle-point selection of the proportionality parameter over the feasible
/// interval, by the sign of Xi at the endpoints and bisection otherwise.
AlphaSolution select_alpha(const DensityBounds& bounds, const RateConstants& consts = {});

}  // namespace gmi
