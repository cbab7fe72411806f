#include "gmi/sweep.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>

#include "gmi/alpha_opt.hpp"
#include "gmi/baselines.hpp"
#include "gmi/parallel.hpp"
#include "gmi/rng.hpp"

namespace gmi {

namespace {

double now_seconds() {
    using clock = std::chrono::steady_clock;
    return std::chrono::duration<double>(clock::now().time_since_epoch()).count();
}

std::string format_double(double v) {
    if (std::isnan(v)) return "nan";
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

}  // namespace

void SweepPlan::validate() const {
    if (trials < 1) throw std::invalid_argument("SweepPlan: trials must be >= 1");
    if (d_grid.empty() || n_grid.empty() || rho_grid.empty() || alpha_grid.empty())
        throw std::invalid_argument("SweepPlan: every grid axis must be nonempty");
    for (int d : d_grid)
        if (d < 2) throw std::invalid_argument("SweepPlan: d must be >= 2");
    for (std::size_t n : n_grid)
        if (n < 4) throw std::invalid_argument("SweepPlan: n must be >= 4");
    for (double r : rho_grid)
        if (!(std::fabs(r) < 1.0)) throw std::invalid_argument("SweepPlan: |rho| must be < 1");
    for (double a : alpha_grid)
        if (!(a > 0.0 && a < 1.0)) throw std::invalid_argument("SweepPlan: alpha must lie in (0,1)");
}

SweepResult run_sweep(const SweepPlan& plan) {
    plan.validate();

    struct CellParams {
        int d;
        std::size_t n;
        double rho;
        double alpha;
        bool feasible;
    };
    std::vector<CellParams> params;
    params.reserve(plan.cell_count());
    for (int d : plan.d_grid)
        for (std::size_t n : plan.n_grid)
            for (double rho : plan.rho_grid)
                for (double alpha : plan.alpha_grid) {
                    const std::size_t np = split_size(alpha, n);
                    const bool feasible =
                        plan.estimator == EstimatorKind::KDE || (np >= 2 && np + 2 <= n);
                    params.push_back({d, n, rho, alpha, feasible});
                }

    // Monte-Carlo truth per distinct (d, rho, alpha); computed up front so
    // the trial pool stays uniform.
    std::map<std::tuple<int, double, double>, double> truth_cache;
    if (plan.truth == TruthSource::MonteCarlo) {
        for (const auto& c : params) {
            const auto key = std::make_tuple(c.d, c.rho, c.alpha);
            if (truth_cache.count(key)) continue;
            if (c.rho == 0.0) {
                truth_cache[key] = 0.0;
                continue;
            }
            TruthOracle oracle;
            oracle.family = GaussianSpec{c.d, c.rho, 2, 0};  // n/seed unused by the MC oracle
            oracle.p = c.alpha;
            oracle.mc_samples = plan.mc_samples;
            oracle.seed = derive_seed(plan.seed, 0xace0 + truth_cache.size());
            truth_cache[key] = mc_true_gmi(oracle).value;
        }
    }
    auto truth_of = [&](const CellParams& c) {
        if (plan.truth == TruthSource::Zero) return 0.0;
        return truth_cache.at(std::make_tuple(c.d, c.rho, c.alpha));
    };

    const std::size_t cells = params.size();
    std::vector<std::vector<double>> estimates(cells);
    std::vector<std::vector<double>> times(cells);
    for (std::size_t c = 0; c < cells; ++c) {
        if (params[c].feasible) {
            estimates[c].assign(plan.trials, 0.0);
            times[c].assign(plan.trials, 0.0);
        }
    }

    // Flatten (cell, trial) into one task list for the pool.
    struct Task {
        std::size_t cell;
        std::size_t trial;
    };
    std::vector<Task> tasks;
    tasks.reserve(cells * plan.trials);
    for (std::size_t c = 0; c < cells; ++c) {
        if (!params[c].feasible) continue;
        for (std::size_t t = 0; t < plan.trials; ++t) tasks.push_back({c, t});
    }

    parallel_for(tasks.size(), [&](std::size_t task_idx) {
        const auto [c, t] = tasks[task_idx];
        const CellParams& cell = params[c];
        const std::uint64_t cell_seed = derive_seed(plan.seed, c);
        const std::uint64_t trial_seed = derive_seed(cell_seed, t);

        GaussianSpec spec{cell.d, cell.rho, cell.n, derive_seed(trial_seed, 0)};
        const double t0 = now_seconds();
        const PairedSampleSet data = generate_gaussian(spec);
        double value;
        if (plan.estimator == EstimatorKind::FR) {
            SplitShuffleConfig cfg{cell.alpha, derive_seed(trial_seed, 1), plan.shuffle};
            EstimatorConfig est;
            est.mst.dualtree_cutoff = plan.mst_cutoff;
            value = estimate_gmi(data, cfg, est).value;
        } else {
            value = kde_gmi(data, cell.alpha);
        }
        times[c][t] = now_seconds() - t0;
        estimates[c][t] = value;
    });

    SweepResult result;
    result.cells.reserve(cells);
    for (std::size_t c = 0; c < cells; ++c) {
        const CellParams& cp = params[c];
        SweepCell cell{};
        cell.estimator = plan.estimator;
        cell.d = cp.d;
        cell.n = cp.n;
        cell.rho = cp.rho;
        cell.alpha = cp.alpha;
        if (!cp.feasible) {
            cell.trials_run = 0;
            cell.mean = cell.mse = cell.std_error = std::nan("");
            cell.seconds = 0.0;
            cell.truth = std::nan("");
        } else {
            const double truth = truth_of(cp);
            const auto& vals = estimates[c];
            double sum = 0.0, sq = 0.0;
            for (double v : vals) {
                sum += v;
                sq += (v - truth) * (v - truth);
            }
            const double trials = static_cast<double>(vals.size());
            cell.trials_run = vals.size();
            cell.mean = sum / trials;
            cell.mse = sq / trials;
            double var = 0.0;
            for (double v : vals) var += (v - cell.mean) * (v - cell.mean);
            cell.std_error = vals.size() > 1 ? std::sqrt(var / (trials - 1.0) / trials) : 0.0;
            cell.seconds = 0.0;
            for (double s : times[c]) cell.seconds += s;
            cell.truth = truth;
        }
        result.cells.push_back(cell);
    }
    return result;
}

std::string SweepResult::to_csv(bool with_timing) const {
    std::ostringstream os;
    os << "estimator,d,n,rho,alpha,trials,mean,mse,stderr,seconds\n";
    for (const auto& c : cells) {
        os << (c.estimator == EstimatorKind::FR ? "fr" : "kde") << ',' << c.d << ',' << c.n << ','
           << format_double(c.rho) << ',' << format_double(c.alpha) << ',' << c.trials_run << ','
           << format_double(c.mean) << ',' << format_double(c.mse) << ','
           << format_double(c.std_error) << ','
           << (with_timing ? format_double(c.seconds) : std::string("0")) << '\n';
    }
    return os.str();
}

namespace {

std::vector<std::string> split_list(const std::string& s) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(item);
    return out;
}

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

double parse_double(const std::string& s, const std::string& key) {
    try {
        std::size_t pos = 0;
        const double v = std::stod(s, &pos);
        if (pos != s.size()) throw std::invalid_argument("");
        return v;
    } catch (...) {
        throw std::invalid_argument("plan: cannot parse '" + s + "' for key " + key);
    }
}

std::uint64_t parse_u64(const std::string& s, const std::string& key) {
    try {
        std::size_t pos = 0;
        const unsigned long long v = std::stoull(s, &pos);
        if (pos != s.size()) throw std::invalid_argument("");
        return v;
    } catch (...) {
        throw std::invalid_argument("plan: cannot parse '" + s + "' for key " + key);
    }
}

}  // namespace

SweepPlan parse_plan(std::istream& in) {
    SweepPlan plan;
    plan.rho_grid.clear();
    plan.alpha_grid.clear();

    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument("plan line " + std::to_string(lineno) +
                                        ": expected key=value");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));

        if (key == "estimator") {
            if (value == "fr")
                plan.estimator = EstimatorKind::FR;
            else if (value == "kde")
                plan.estimator = EstimatorKind::KDE;
            else
                throw std::invalid_argument("plan: estimator must be fr or kde");
        } else if (key == "d") {
            for (const auto& v : split_list(value))
                plan.d_grid.push_back(static_cast<int>(parse_u64(trim(v), key)));
        } else if (key == "n") {
            for (const auto& v : split_list(value))
                plan.n_grid.push_back(static_cast<std::size_t>(parse_u64(trim(v), key)));
        } else if (key == "rho") {
            for (const auto& v : split_list(value)) plan.rho_grid.push_back(parse_double(trim(v), key));
        } else if (key == "alpha") {
            for (const auto& v : split_list(value))
                plan.alpha_grid.push_back(parse_double(trim(v), key));
        } else if (key == "trials") {
            plan.trials = static_cast<std::size_t>(parse_u64(value, key));
        } else if (key == "seed") {
            plan.seed = parse_u64(value, key);
        } else if (key == "truth") {
            if (value == "zero")
                plan.truth = TruthSource::Zero;
            else if (value == "mc")
                plan.truth = TruthSource::MonteCarlo;
            else
                throw std::invalid_argument("plan: truth must be zero or mc");
        } else if (key == "mc_samples") {
            plan.mc_samples = static_cast<std::size_t>(parse_u64(value, key));
        } else if (key == "shuffle") {
            if (value == "perm")
                plan.shuffle = ShuffleMode::Permutation;
            else if (value == "indep")
                plan.shuffle = ShuffleMode::IndependentDraw;
            else
                throw std::invalid_argument("plan: shuffle must be perm or indep");
        } else if (key == "mst_cutoff") {
            plan.mst_cutoff = static_cast<std::size_t>(parse_u64(value, key));
        } else {
            throw std::invalid_argument("plan line " + std::to_string(lineno) + ": unknown key '" +
                                        key + "'");
        }
    }

    if (plan.rho_grid.empty()) plan.rho_grid.push_back(0.0);
    if (plan.alpha_grid.empty()) plan.alpha_grid.push_back(0.5);
    plan.validate();
    return plan;
}

SweepPlan parse_plan_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open plan file: " + path);
    return parse_plan(in);
}

std::vector<RuntimePoint> runtime_compare(std::span<const std::size_t> n_grid, int d,
                                          std::uint64_t seed, int reps, double alpha) {
    if (reps < 3) reps = 3;
    std::vector<RuntimePoint> out;
    out.reserve(n_grid.size());

    for (std::size_t idx = 0; idx < n_grid.size(); ++idx) {
        const std::size_t n = n_grid[idx];
        const PairedSampleSet data =
            generate_gaussian(GaussianSpec{d, 0.0, n, derive_seed(seed, idx)});

        std::vector<double> fr_times, kde_times;
        for (int rep = 0; rep < reps; ++rep) {
            SplitShuffleConfig cfg{alpha, derive_seed(seed, 1000 + rep), ShuffleMode::Permutation};
            double t0 = now_seconds();
            (void)estimate_gmi(data, cfg);
            fr_times.push_back(now_seconds() - t0);

            t0 = now_seconds();
            (void)kde_gmi(data, alpha);
            kde_times.push_back(now_seconds() - t0);
        }
        std::sort(fr_times.begin(), fr_times.end());
        std::sort(kde_times.begin(), kde_times.end());
        out.push_back({n, fr_times[fr_times.size() / 2], kde_times[kde_times.size() / 2]});
    }
    return out;
}

std::vector<EnvelopePoint> theoretical_envelope(std::span<const std::size_t> n_grid, int d,
                                                double eta, double alpha, double c_d) {
    if (!(eta > 0.0 && eta <= 1.0))
        throw std::invalid_argument("theoretical_envelope: eta must lie in (0, 1]");
    if (!(alpha > 0.0 && alpha < 1.0))
        throw std::invalid_argument("theoretical_envelope: alpha must lie in (0, 1)");
    if (d < 2) throw std::invalid_argument("theoretical_envelope: d must be >= 2");
    const double cd = c_d > 0.0 ? c_d : mst_degree_bound(d);
    const double beta = 1.0 - alpha;

    std::vector<EnvelopePoint> out;
    out.reserve(n_grid.size());
    for (std::size_t n : n_grid) {
        const double nd = static_cast<double>(n);
        const double term1 = std::pow(nd, -eta * eta / (d * (1.0 + eta)));
        const double term2 = std::pow(beta * nd, -eta / (1.0 + eta));
        const double term3 = cd * std::pow(2.0, d) / nd;
        out.push_back({n, std::max({term1, term2, term3}), beta * cd / nd});
    }
    return out;
}

}  // namespace gmi
