#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "gmi/matrix.hpp"

namespace gmi {

/// Divergence parameter p in (0, 1) with q = 1 - p.
struct HpParams {
    double p;
    double q;

    explicit HpParams(double p_) : p(p_), q(1.0 - p_) {
        if (!(p > 0.0 && p < 1.0))
            throw std::invalid_argument("HpParams: p must lie in (0, 1)");
    }
};

/// Finite joint probability table over (X, Y); marginals by row/column sums.
class DiscreteJoint {
public:
    DiscreteJoint(Matrix pmf);

    /// Builds a joint from nonnegative weights, normalizing to total mass 1.
    static DiscreteJoint normalized(Matrix weights);

    std::size_t kx() const { return pmf_.rows(); }
    std::size_t ky() const { return pmf_.cols(); }
    double operator()(std::size_t x, std::size_t y) const { return pmf_(x, y); }
    const Matrix& pmf() const { return pmf_; }

    std::vector<double> marginal_x() const;
    std::vector<double> marginal_y() const;

private:
    Matrix pmf_;
};

/// Finite joint probability tensor over three axes.
class ConditionalJoint {
public:
    ConditionalJoint(std::size_t k1, std::size_t k2, std::size_t k3, std::vector<double> pmf);

    static ConditionalJoint normalized(std::size_t k1, std::size_t k2, std::size_t k3,
                                       std::vector<double> weights);

    std::size_t k1() const { return k1_; }
    std::size_t k2() const { return k2_; }
    std::size_t k3() const { return k3_; }
    double operator()(std::size_t i, std::size_t j, std::size_t k) const {
        return pmf_[(i * k2_ + j) * k3_ + k];
    }

private:
    std::size_t k1_, k2_, k3_;
    std::vector<double> pmf_;
};

/// Henze-Penrose divergence between two pmfs on the same atom set, with the
/// integral replaced by a sum and the 0/0 = 0 convention for empty atoms.
double hp_divergence(std::span<const double> f, std::span<const double> g, const HpParams& params);

/// Geometric affinity A_p of a joint against the product of its marginals.
double affinity(const DiscreteJoint& joint, const HpParams& params);

/// GMI I_p = D_p(f_XY, f_X f_Y). Computed by the divergence route and
/// cross-checked against 1 - A_p before returning.
double gmi(const DiscreteJoint& joint, const HpParams& params);

/// E_Z[I_p(X;Y | Z=z)] over a tensor with axes (X, Y, Z).
double conditional_gmi(const ConditionalJoint& joint, const HpParams& params);

struct ChainRuleGap {
    double lhs;    ///< I_p(X1, X2; Y)
    double rhs;    ///< I_p(X1; Y)
    double delta;  ///< delta_{X2,Y|X1}
};

/// Chain-rule bound data for a tensor with axes (X1, X2, Y):
/// contract lhs >= rhs - delta.
ChainRuleGap chain_rule_gap(const ConditionalJoint& joint, const HpParams& params);

struct DataProcessingGap {
    double lhs;    ///< I_p(Y; X)
    double rhs;    ///< I_p(Z; X)
    double slack;  ///< (p E_XY[delta_{X,Y}] + q)^{-1}
};

/// Data-processing bound for a tensor with axes (X, Y, Z) that factors as a
/// Markov chain f_XYZ = f_{X|Y} f_{Y|Z} f_Z; contract lhs >= rhs - slack.
/// Rejects inputs whose factorization residual exceeds 1e-10.
DataProcessingGap data_processing_gap(const ConditionalJoint& joint, const HpParams& params);

struct MixtureReport {
    double lhs;
    double rhs;
    bool holds;
};

/// Concavity in f_X: I_p of the mixture lambda1*g_X + lambda2*h_X under a
/// shared conditional f_{Y|X} (rows x, columns y, rows summing to 1) is at
/// least the mixed I_p values.
MixtureReport concavity_check(std::span<const double> g_x, std::span<const double> h_x,
                              const Matrix& f_y_given_x, double lambda1, const HpParams& params);

/// Convexity in f_{Y|X}: I_p of the mixed conditional under a shared
/// marginal f_X is at most the mixed I_p values.
MixtureReport convexity_check(const Matrix& g_y_given_x, const Matrix& h_y_given_x,
                              std::span<const double> f_x, double lambda1, const HpParams& params);

/// One named property verified over randomized instances.
struct PropertyCheck {
    std::string name;
    std::size_t checked = 0;
    std::size_t violations = 0;
    double max_violation = 0.0;  ///< worst signed excess over the tolerance target
    std::string counterexample;  ///< empty unless violations > 0
};

/// Randomized verification of the divergence identities and the concavity,
/// convexity, chain-rule, and data-processing inequalities on seeded
/// Dirichlet-uniform instances. Tolerance 1e-12 throughout.
std::vector<PropertyCheck> run_property_sweeps(std::size_t instances, std::uint64_t seed);

}  // namespace gmi
