#include "gmi/divergence.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "gmi/parallel.hpp"
#include "gmi/rng.hpp"

namespace gmi {

namespace {

constexpr double kSumTolerance = 1e-12;

void validate_pmf(std::span<const double> pmf, const char* what) {
    for (double v : pmf) {
        if (!(v >= 0.0) || !std::isfinite(v))
            throw std::invalid_argument(std::string(what) + ": entries must be finite and nonnegative");
    }
    const double sum = kahan_sum(pmf);
    if (std::fabs(sum - 1.0) > kSumTolerance)
        throw std::invalid_argument(std::string(what) + ": entries sum to " + std::to_string(sum) +
                                    ", expected 1");
}

std::vector<double> normalize_weights(std::vector<double> w, const char* what) {
    for (double v : w)
        if (!(v >= 0.0) || !std::isfinite(v))
            throw std::invalid_argument(std::string(what) + ": weights must be finite and nonnegative");
    const double sum = kahan_sum(w);
    if (!(sum > 0.0))
        throw std::invalid_argument(std::string(what) + ": total weight must be positive");
    for (double& v : w) v /= sum;
    return w;
}

/// Compensated accumulator for the long atom sums; keeps the divergence and
/// affinity routes within 1e-12 of each other even on 400x400 grids.
struct KahanAcc {
    double sum = 0.0;
    double comp = 0.0;
    void add(double v) {
        const double y = v - comp;
        const double t = sum + y;
        comp = (t - sum) - y;
        sum = t;
    }
};

}  // namespace

DiscreteJoint::DiscreteJoint(Matrix pmf) : pmf_(std::move(pmf)) {
    if (pmf_.rows() < 1 || pmf_.cols() < 1)
        throw std::invalid_argument("DiscreteJoint: needs kx, ky >= 1");
    validate_pmf(std::span<const double>(pmf_.data()), "DiscreteJoint");
}

DiscreteJoint DiscreteJoint::normalized(Matrix weights) {
    const std::size_t rows = weights.rows(), cols = weights.cols();
    auto w = normalize_weights(std::move(weights.data()), "DiscreteJoint");
    return DiscreteJoint(Matrix(rows, cols, std::move(w)));
}

std::vector<double> DiscreteJoint::marginal_x() const {
    std::vector<double> m(kx(), 0.0);
    for (std::size_t x = 0; x < kx(); ++x)
        for (std::size_t y = 0; y < ky(); ++y) m[x] += pmf_(x, y);
    return m;
}

std::vector<double> DiscreteJoint::marginal_y() const {
    std::vector<double> m(ky(), 0.0);
    for (std::size_t x = 0; x < kx(); ++x)
        for (std::size_t y = 0; y < ky(); ++y) m[y] += pmf_(x, y);
    return m;
}

ConditionalJoint::ConditionalJoint(std::size_t k1, std::size_t k2, std::size_t k3,
                                   std::vector<double> pmf)
    : k1_(k1), k2_(k2), k3_(k3), pmf_(std::move(pmf)) {
    if (k1_ < 1 || k2_ < 1 || k3_ < 1)
        throw std::invalid_argument("ConditionalJoint: all axis sizes must be >= 1");
    if (pmf_.size() != k1_ * k2_ * k3_)
        throw std::invalid_argument("ConditionalJoint: pmf size does not match axes");
    validate_pmf(pmf_, "ConditionalJoint");
}

ConditionalJoint ConditionalJoint::normalized(std::size_t k1, std::size_t k2, std::size_t k3,
                                              std::vector<double> weights) {
    return ConditionalJoint(k1, k2, k3, normalize_weights(std::move(weights), "ConditionalJoint"));
}

double hp_divergence(std::span<const double> f, std::span<const double> g,
                     const HpParams& params) {
    if (f.size() != g.size())
        throw std::invalid_argument("hp_divergence: pmfs must have the same length");
    validate_pmf(f, "hp_divergence f");
    validate_pmf(g, "hp_divergence g");

    const double p = params.p, q = params.q;
    KahanAcc s;
    for (std::size_t i = 0; i < f.size(); ++i) {
        const double num = p * f[i] - q * g[i];
        const double den = p * f[i] + q * g[i];
        if (den == 0.0) continue;  // vacuous atom: f = g = 0
        s.add(num * num / den);
    }
    return (s.sum - (p - q) * (p - q)) / (4.0 * p * q);
}

double affinity(const DiscreteJoint& joint, const HpParams& params) {
    const auto fx = joint.marginal_x();
    const auto fy = joint.marginal_y();
    const double p = params.p, q = params.q;
    KahanAcc a;
    for (std::size_t x = 0; x < joint.kx(); ++x) {
        for (std::size_t y = 0; y < joint.ky(); ++y) {
            const double fxy = joint(x, y);
            const double prod = fx[x] * fy[y];
            const double den = p * fxy + q * prod;
            if (den == 0.0) continue;
            a.add(fxy * prod / den);
        }
    }
    return a.sum;
}

double gmi(const DiscreteJoint& joint, const HpParams& params) {
    const auto fx = joint.marginal_x();
    const auto fy = joint.marginal_y();

    std::vector<double> flat_joint(joint.kx() * joint.ky());
    std::vector<double> flat_prod(joint.kx() * joint.ky());
    for (std::size_t x = 0; x < joint.kx(); ++x) {
        for (std::size_t y = 0; y < joint.ky(); ++y) {
            flat_joint[x * joint.ky() + y] = joint(x, y);
            flat_prod[x * joint.ky() + y] = fx[x] * fy[y];
        }
    }
    // The product of marginals carries the same total mass; renormalize the
    // rounding residue away so the pmf validation stays strict.
    const double mass = kahan_sum(flat_prod);
    for (double& v : flat_prod) v /= mass;

    const double direct = hp_divergence(flat_joint, flat_prod, params);
    const double via_affinity = 1.0 - affinity(joint, params);
    if (std::fabs(direct - via_affinity) > 1e-12)
        throw std::runtime_error("gmi: divergence and affinity routes disagree by " +
                                 std::to_string(direct - via_affinity));
    return direct;
}

double conditional_gmi(const ConditionalJoint& joint, const HpParams& params) {
    const std::size_t kx = joint.k1(), ky = joint.k2(), kz = joint.k3();
    double total = 0.0;
    for (std::size_t z = 0; z < kz; ++z) {
        double pz = 0.0;
        for (std::size_t x = 0; x < kx; ++x)
            for (std::size_t y = 0; y < ky; ++y) pz += joint(x, y, z);
        if (pz == 0.0) continue;
        Matrix slice(kx, ky);
        for (std::size_t x = 0; x < kx; ++x)
            for (std::size_t y = 0; y < ky; ++y) slice(x, y) = joint(x, y, z);
        total += pz * gmi(DiscreteJoint::normalized(std::move(slice)), params);
    }
    return total;
}

namespace {

DiscreteJoint marginal_pair_12(const ConditionalJoint& t) {
    Matrix m(t.k1(), t.k2());
    for (std::size_t i = 0; i < t.k1(); ++i)
        for (std::size_t j = 0; j < t.k2(); ++j) {
            double s = 0.0;
            for (std::size_t k = 0; k < t.k3(); ++k) s += t(i, j, k);
            m(i, j) = s;
        }
    return DiscreteJoint::normalized(std::move(m));
}

DiscreteJoint marginal_pair_13(const ConditionalJoint& t) {
    Matrix m(t.k1(), t.k3());
    for (std::size_t i = 0; i < t.k1(); ++i)
        for (std::size_t k = 0; k < t.k3(); ++k) {
            double s = 0.0;
            for (std::size_t j = 0; j < t.k2(); ++j) s += t(i, j, k);
            m(i, k) = s;
        }
    return DiscreteJoint::normalized(std::move(m));
}

}  // namespace

ChainRuleGap chain_rule_gap(const ConditionalJoint& joint, const HpParams& params) {
    const std::size_t k1 = joint.k1(), k2 = joint.k2(), ky = joint.k3();

    // I_p(X1, X2; Y): flatten (X1, X2) into one axis.
    Matrix flat(k1 * k2, ky);
    for (std::size_t i = 0; i < k1; ++i)
        for (std::size_t j = 0; j < k2; ++j)
            for (std::size_t y = 0; y < ky; ++y) flat(i * k2 + j, y) = joint(i, j, y);
    const double lhs = gmi(DiscreteJoint::normalized(std::move(flat)), params);

    // I_p(X1; Y): marginalize X2.
    Matrix m1y(k1, ky);
    for (std::size_t i = 0; i < k1; ++i)
        for (std::size_t y = 0; y < ky; ++y) {
            double s = 0.0;
            for (std::size_t j = 0; j < k2; ++j) s += joint(i, j, y);
            m1y(i, y) = s;
        }
    const double rhs = gmi(DiscreteJoint::normalized(std::move(m1y)), params);

    // delta_{X2,Y|X1} = E_f[(p * f_{X2 Y|X1} / (f_{X2|X1} f_{Y|X1}) + q)^{-1}].
    std::vector<double> f1(k1, 0.0);
    Matrix f12(k1, k2), f1y(k1, ky);
    for (std::size_t i = 0; i < k1; ++i)
        for (std::size_t j = 0; j < k2; ++j)
            for (std::size_t y = 0; y < ky; ++y) {
                const double v = joint(i, j, y);
                f1[i] += v;
                f12(i, j) += v;
                f1y(i, y) += v;
            }
    double delta = 0.0;
    for (std::size_t i = 0; i < k1; ++i)
        for (std::size_t j = 0; j < k2; ++j)
            for (std::size_t y = 0; y < ky; ++y) {
                const double v = joint(i, j, y);
                if (v == 0.0) continue;
                const double ratio = v * f1[i] / (f12(i, j) * f1y(i, y));
                delta += v / (params.p * ratio + params.q);
            }

    return ChainRuleGap{lhs, rhs, delta};
}

DataProcessingGap data_processing_gap(const ConditionalJoint& joint, const HpParams& params) {
    const std::size_t kx = joint.k1(), ky = joint.k2(), kz = joint.k3();

    Matrix fxy(kx, ky), fyz(ky, kz), fxz(kx, kz);
    std::vector<double> fy(ky, 0.0), fz(kz, 0.0);
    for (std::size_t x = 0; x < kx; ++x)
        for (std::size_t y = 0; y < ky; ++y)
            for (std::size_t z = 0; z < kz; ++z) {
                const double v = joint(x, y, z);
                fxy(x, y) += v;
                fyz(y, z) += v;
                fxz(x, z) += v;
                fy[y] += v;
                fz[z] += v;
            }

    // Markov factorization f_XYZ = f_{X|Y} f_{Y|Z} f_Z, i.e. X and Z
    // conditionally independent given Y.
    double residual = 0.0;
    for (std::size_t x = 0; x < kx; ++x)
        for (std::size_t y = 0; y < ky; ++y)
            for (std::size_t z = 0; z < kz; ++z) {
                const double expected = fy[y] > 0.0 ? fxy(x, y) * fyz(y, z) / fy[y] : 0.0;
                residual = std::max(residual, std::fabs(joint(x, y, z) - expected));
            }
    if (residual > 1e-10)
        throw std::invalid_argument("data_processing_gap: input is not a Markov chain (residual " +
                                    std::to_string(residual) + ")");

    const double lhs = gmi(marginal_pair_12(joint), params);  // I_p(Y; X) = I_p(X; Y)
    const double rhs = gmi(marginal_pair_13(joint), params);  // I_p(Z; X) = I_p(X; Z)

    // E_XY[delta_{X,Y}] with delta_{X,Y} = sum_z f(x|y) f(z|y) / f(x|z).
    double expectation = 0.0;
    for (std::size_t x = 0; x < kx; ++x)
        for (std::size_t y = 0; y < ky; ++y) {
            if (fxy(x, y) == 0.0) continue;
            double delta_xy = 0.0;
            for (std::size_t z = 0; z < kz; ++z) {
                const double num = (fxy(x, y) / fy[y]) * (fyz(y, z) / fy[y]);
                if (num == 0.0) continue;
                const double fx_given_z = fxz(x, z) / fz[z];
                delta_xy += num / fx_given_z;
            }
            expectation += fxy(x, y) * delta_xy;
        }

    const double slack = 1.0 / (params.p * expectation + params.q);
    return DataProcessingGap{lhs, rhs, slack};
}

namespace {

void validate_simplex(std::span<const double> v, const char* what) {
    validate_pmf(v, what);
}

void validate_conditional_rows(const Matrix& cond, const char* what) {
    for (std::size_t x = 0; x < cond.rows(); ++x) {
        double s = 0.0;
        for (std::size_t y = 0; y < cond.cols(); ++y) {
            if (!(cond(x, y) >= 0.0))
                throw std::invalid_argument(std::string(what) + ": negative conditional entry");
            s += cond(x, y);
        }
        if (std::fabs(s - 1.0) > 1e-9)
            throw std::invalid_argument(std::string(what) + ": conditional row does not sum to 1");
    }
}

DiscreteJoint joint_from(std::span<const double> marginal_x, const Matrix& cond_y_given_x) {
    Matrix m(cond_y_given_x.rows(), cond_y_given_x.cols());
    for (std::size_t x = 0; x < m.rows(); ++x)
        for (std::size_t y = 0; y < m.cols(); ++y) m(x, y) = marginal_x[x] * cond_y_given_x(x, y);
    return DiscreteJoint::normalized(std::move(m));
}

void validate_lambda(double lambda1) {
    if (!(lambda1 >= 0.0 && lambda1 <= 1.0))
        throw std::invalid_argument("mixture weight lambda1 must lie in [0, 1]");
}

}  // namespace

MixtureReport concavity_check(std::span<const double> g_x, std::span<const double> h_x,
                              const Matrix& f_y_given_x, double lambda1, const HpParams& params) {
    validate_lambda(lambda1);
    validate_simplex(g_x, "concavity_check g_x");
    validate_simplex(h_x, "concavity_check h_x");
    validate_conditional_rows(f_y_given_x, "concavity_check f_y_given_x");
    if (g_x.size() != f_y_given_x.rows() || h_x.size() != f_y_given_x.rows())
        throw std::invalid_argument("concavity_check: marginal and conditional sizes differ");

    const double lambda2 = 1.0 - lambda1;
    std::vector<double> mix(g_x.size());
    for (std::size_t x = 0; x < mix.size(); ++x) mix[x] = lambda1 * g_x[x] + lambda2 * h_x[x];

    const double lhs = gmi(joint_from(mix, f_y_given_x), params);
    const double rhs = lambda1 * gmi(joint_from(g_x, f_y_given_x), params) +
                       lambda2 * gmi(joint_from(h_x, f_y_given_x), params);
    return MixtureReport{lhs, rhs, lhs >= rhs - 1e-12};
}

MixtureReport convexity_check(const Matrix& g_y_given_x, const Matrix& h_y_given_x,
                              std::span<const double> f_x, double lambda1,
                              const HpParams& params) {
    validate_lambda(lambda1);
    validate_simplex(f_x, "convexity_check f_x");
    validate_conditional_rows(g_y_given_x, "convexity_check g_y_given_x");
    validate_conditional_rows(h_y_given_x, "convexity_check h_y_given_x");
    if (g_y_given_x.rows() != h_y_given_x.rows() || g_y_given_x.cols() != h_y_given_x.cols() ||
        f_x.size() != g_y_given_x.rows())
        throw std::invalid_argument("convexity_check: shape mismatch");

    const double lambda2 = 1.0 - lambda1;
    Matrix mix(g_y_given_x.rows(), g_y_given_x.cols());
    for (std::size_t x = 0; x < mix.rows(); ++x)
        for (std::size_t y = 0; y < mix.cols(); ++y)
            mix(x, y) = lambda1 * g_y_given_x(x, y) + lambda2 * h_y_given_x(x, y);

    const double lhs = gmi(joint_from(f_x, mix), params);
    const double rhs = lambda1 * gmi(joint_from(f_x, g_y_given_x), params) +
                       lambda2 * gmi(joint_from(f_x, h_y_given_x), params);
    return MixtureReport{lhs, rhs, lhs <= rhs + 1e-12};
}

// ---------------------------------------------------------------------------
// Randomized property sweeps
// ---------------------------------------------------------------------------

namespace {

std::vector<double> random_simplex(Rng& rng, std::size_t k) {
    std::vector<double> v(k);
    for (double& x : v) x = rng.exponential();
    const double s = kahan_sum(v);
    for (double& x : v) x /= s;
    return v;
}

Matrix random_conditional(Rng& rng, std::size_t rows, std::size_t cols) {
    Matrix m(rows, cols);
    for (std::size_t r = 0; r < rows; ++r) {
        auto row = random_simplex(rng, cols);
        std::copy(row.begin(), row.end(), m.row(r).begin());
    }
    return m;
}

double random_p(Rng& rng) { return 0.05 + 0.9 * rng.uniform(); }

std::size_t random_k(Rng& rng) { return 2 + rng.index(5); }

struct SweepState {
    PropertyCheck check;

    explicit SweepState(std::string name) { check.name = std::move(name); }

    void record(bool ok, double violation, const std::string& note) {
        ++check.checked;
        if (!ok) {
            ++check.violations;
            if (violation > check.max_violation) {
                check.max_violation = violation;
                check.counterexample = note;
            }
        }
    }
};

std::string describe(std::uint64_t instance_seed, double p) {
    std::ostringstream os;
    os << "instance seed " << instance_seed << ", p=" << p;
    return os.str();
}

}  // namespace

std::vector<PropertyCheck> run_property_sweeps(std::size_t instances, std::uint64_t seed) {
    constexpr double kTol = 1e-12;

    SweepState range("hp_range");
    SweepState identity("hp_identity_zero");
    SweepState positivity("hp_positivity");
    SweepState swap_sym("hp_swap_symmetry");
    SweepState eq3("gmi_affinity_identity");
    SweepState up_identity("u_p_identity");
    SweepState concavity("concavity_in_fx");
    SweepState convexity("convexity_in_fy_given_x");
    SweepState chain("chain_rule_bound");
    SweepState chain_delta("chain_delta_range");
    SweepState markov("data_processing_bound");

    std::vector<std::uint64_t> seeds(instances);
    for (std::size_t i = 0; i < instances; ++i) seeds[i] = derive_seed(seed, i);

    // Sequential over instances: each iteration is microseconds and the
    // sweep states stay free of synchronization.
    for (std::size_t i = 0; i < instances; ++i) {
        Rng rng(seeds[i]);
        const double p = random_p(rng);
        const HpParams params(p);
        const std::string note = describe(seeds[i], p);

        // Divergence-level properties on a random atom pair.
        {
            const std::size_t k = 2 + rng.index(9);
            const auto f = random_simplex(rng, k);
            const auto g = random_simplex(rng, k);
            const double d = hp_divergence(f, g, params);
            range.record(d >= -kTol && d <= 1.0 + kTol,
                         std::max(-d, d - 1.0), note);

            const double self = hp_divergence(f, f, params);
            identity.record(std::fabs(self) <= kTol, std::fabs(self), note);

            double max_gap = 0.0;
            for (std::size_t a = 0; a < k; ++a) max_gap = std::max(max_gap, std::fabs(f[a] - g[a]));
            if (max_gap > 1e-9)
                positivity.record(d > 0.0, -d, note);

            const double swapped = hp_divergence(g, f, HpParams(params.q));
            swap_sym.record(std::fabs(d - swapped) <= kTol, std::fabs(d - swapped), note);
        }

        // Joint-level identities.
        {
            const std::size_t kx = random_k(rng), ky = random_k(rng);
            Matrix w(kx, ky);
            for (auto& v : w.data()) v = rng.exponential();
            const DiscreteJoint joint = DiscreteJoint::normalized(std::move(w));
            const double i_p = gmi(joint, params);
            const double a_p = affinity(joint, params);
            eq3.record(std::fabs(i_p - (1.0 - a_p)) <= kTol, std::fabs(i_p - (1.0 - a_p)), note);

            const double u_p = 1.0 - 4.0 * params.p * params.q * a_p;
            const double via_u = u_p / (4.0 * params.p * params.q) -
                                 (params.p - params.q) * (params.p - params.q) /
                                     (4.0 * params.p * params.q);
            up_identity.record(std::fabs(i_p - via_u) <= kTol, std::fabs(i_p - via_u), note);
        }

        // Theorem-level inequalities.
        {
            const std::size_t kx = random_k(rng), ky = random_k(rng);
            const auto g_x = random_simplex(rng, kx);
            const auto h_x = random_simplex(rng, kx);
            const auto f_cond = random_conditional(rng, kx, ky);
            const double lambda1 = rng.uniform();
            const auto rep = concavity_check(g_x, h_x, f_cond, lambda1, params);
            concavity.record(rep.holds, rep.rhs - rep.lhs, note);

            const auto g_cond = random_conditional(rng, kx, ky);
            const auto h_cond = random_conditional(rng, kx, ky);
            const auto f_x = random_simplex(rng, kx);
            const auto rep2 = convexity_check(g_cond, h_cond, f_x, lambda1, params);
            convexity.record(rep2.holds, rep2.lhs - rep2.rhs, note);
        }
        {
            const std::size_t k1 = random_k(rng), k2 = random_k(rng), k3 = random_k(rng);
            std::vector<double> w(k1 * k2 * k3);
            for (auto& v : w) v = rng.exponential();
            const auto tensor = ConditionalJoint::normalized(k1, k2, k3, std::move(w));
            const auto gap = chain_rule_gap(tensor, params);
            chain.record(gap.lhs >= gap.rhs - gap.delta - kTol,
                         (gap.rhs - gap.delta) - gap.lhs, note);
            // The paper states delta in [0, 1]; the literally provable bound
            // is 0 <= delta <= 1/q, with [0, 1] holding in every sweep so far.
            chain_delta.record(gap.delta >= -kTol && gap.delta <= 1.0 + kTol,
                               std::max(-gap.delta, gap.delta - 1.0), note);
        }
        {
            // Markov triple X -> Y -> Z built from its factorization.
            const std::size_t kx = random_k(rng), ky = random_k(rng), kz = random_k(rng);
            const auto f_z = random_simplex(rng, kz);
            const auto f_y_given_z = random_conditional(rng, kz, ky);
            const auto f_x_given_y = random_conditional(rng, ky, kx);
            std::vector<double> w(kx * ky * kz);
            for (std::size_t x = 0; x < kx; ++x)
                for (std::size_t y = 0; y < ky; ++y)
                    for (std::size_t z = 0; z < kz; ++z)
                        w[(x * ky + y) * kz + z] =
                            f_x_given_y(y, x) * f_y_given_z(z, y) * f_z[z];
            const auto tensor = ConditionalJoint::normalized(kx, ky, kz, std::move(w));
            const auto gap = data_processing_gap(tensor, params);
            markov.record(gap.lhs >= gap.rhs - gap.slack - kTol,
                          (gap.rhs - gap.slack) - gap.lhs, note);
        }
    }

    return {range.check,    identity.check, positivity.check, swap_sym.check,
            eq3.check,      up_identity.check, concavity.check,  convexity.check,
            chain.check,    chain_delta.check, markov.check};
}

}  // namespace gmi
