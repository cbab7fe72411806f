#include "gmi/samples.hpp"

#include <cerrno>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <vector>

#include "gmi/rng.hpp"

namespace gmi {

namespace {

void strip_cr(std::string& line) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
}

bool parse_field(const std::string& field, double& out) {
    const char* begin = field.c_str();
    char* end = nullptr;
    errno = 0;
    out = std::strtod(begin, &end);
    if (end == begin || errno == ERANGE) return false;
    while (*end == ' ' || *end == '\t') ++end;
    return *end == '\0';
}

std::vector<std::string> split_fields(const std::string& line) {
    std::vector<std::string> fields;
    std::string cur;
    std::stringstream ss(line);
    while (std::getline(ss, cur, ',')) fields.push_back(cur);
    if (!line.empty() && line.back() == ',') fields.emplace_back();
    return fields;
}

}  // namespace

PairedSampleSet::PairedSampleSet(Matrix pts, std::size_t dx_, std::size_t dy_)
    : points(std::move(pts)), dx(dx_), dy(dy_) {
    if (dx < 1 || dy < 1)
        throw std::invalid_argument("PairedSampleSet: dx and dy must be >= 1");
    if (points.cols() != dx + dy)
        throw std::invalid_argument("PairedSampleSet: matrix has " +
                                    std::to_string(points.cols()) + " columns, expected dx+dy = " +
                                    std::to_string(dx + dy));
    if (points.rows() < 2)
        throw std::invalid_argument("PairedSampleSet: need at least 2 samples, got " +
                                    std::to_string(points.rows()));
    if (!points.all_finite())
        throw std::invalid_argument("PairedSampleSet: coordinates must be finite");
}

Matrix load_matrix_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open file: " + path);

    std::vector<double> values;
    std::size_t cols = 0, rows = 0, lineno = 0;
    std::string line;
    bool first_content_line = true;

    while (std::getline(in, line)) {
        ++lineno;
        strip_cr(line);
        if (line.empty()) continue;

        const auto fields = split_fields(line);
        if (first_content_line) {
            // A header is any first line with a non-numeric field.
            bool numeric = true;
            double tmp;
            for (const auto& f : fields)
                if (!parse_field(f, tmp)) { numeric = false; break; }
            first_content_line = false;
            if (!numeric) continue;
        }

        if (cols == 0) cols = fields.size();
        if (fields.size() != cols)
            throw std::invalid_argument(path + ": line " + std::to_string(lineno) + " has " +
                                        std::to_string(fields.size()) + " fields, expected " +
                                        std::to_string(cols));
        for (std::size_t c = 0; c < fields.size(); ++c) {
            double v;
            if (!parse_field(fields[c], v))
                throw std::invalid_argument(path + ": line " + std::to_string(lineno) +
                                            ", column " + std::to_string(c + 1) +
                                            ": cannot parse '" + fields[c] + "' as a number");
            if (!std::isfinite(v))
                throw std::invalid_argument(path + ": line " + std::to_string(lineno) +
                                            ", column " + std::to_string(c + 1) +
                                            ": non-finite value '" + fields[c] + "'");
            values.push_back(v);
        }
        ++rows;
    }

    if (rows == 0) throw std::invalid_argument(path + ": no data rows");
    return Matrix(rows, cols, std::move(values));
}

PairedSampleSet load_csv(const std::string& path, std::size_t dx, std::size_t dy) {
    if (dx < 1 || dy < 1) throw std::invalid_argument("load_csv: dx and dy must be >= 1");
    Matrix m = load_matrix_csv(path);
    if (m.cols() != dx + dy)
        throw std::invalid_argument(path + ": rows have " + std::to_string(m.cols()) +
                                    " fields, expected dx+dy = " + std::to_string(dx + dy));
    return PairedSampleSet(std::move(m), dx, dy);
}

PairedSampleSet generate_gaussian(const GaussianSpec& spec) {
    if (spec.d < 2) throw std::invalid_argument("generate_gaussian: d must be >= 2");
    if (spec.n < 2) throw std::invalid_argument("generate_gaussian: n must be >= 2");
    if (!(std::fabs(spec.rho) < 1.0))
        throw std::invalid_argument("generate_gaussian: covariance not positive definite (|rho| must be < 1)");
    if (spec.rho != 0.0 && spec.d % 2 != 0)
        throw std::invalid_argument("generate_gaussian: rho != 0 requires even d (pairwise correlation)");

    const std::size_t d = static_cast<std::size_t>(spec.d);
    const std::size_t dy = d / 2;
    const std::size_t dx = d - dy;
    Matrix pts(spec.n, d);
    Rng rng(spec.seed);

    if (spec.rho == 0.0) {
        for (std::size_t i = 0; i < spec.n; ++i)
            for (std::size_t c = 0; c < d; ++c) pts(i, c) = rng.normal();
    } else {
        const double rho = spec.rho;
        const double resid = std::sqrt(1.0 - rho * rho);
        for (std::size_t i = 0; i < spec.n; ++i) {
            for (std::size_t k = 0; k < dx; ++k) {
                const double x = rng.normal();
                pts(i, k) = x;
                pts(i, dx + k) = rho * x + resid * rng.normal();
            }
        }
    }
    return PairedSampleSet(std::move(pts), dx, dy);
}

std::size_t split_size(double alpha, std::size_t n) {
    return static_cast<std::size_t>(std::floor(alpha * static_cast<double>(n) + 0.5));
}

SplitShuffleResult split_and_shuffle(const PairedSampleSet& data, const SplitShuffleConfig& cfg) {
    if (!(cfg.alpha > 0.0 && cfg.alpha < 1.0))
        throw std::invalid_argument("split_and_shuffle: alpha must lie in (0, 1)");
    const std::size_t n = data.n();
    const std::size_t n_prime = split_size(cfg.alpha, n);
    if (n_prime < 2 || n_prime + 2 > n)
        throw std::invalid_argument("split_and_shuffle: alpha=" + std::to_string(cfg.alpha) +
                                    " with n=" + std::to_string(n) +
                                    " leaves a subset smaller than 2");
    const std::size_t n_dprime = n - n_prime;
    const std::size_t dim = data.dim();

    // Stream order is fixed: row permutation first, then the shuffle draws.
    Rng rng(cfg.seed);
    const auto perm = rng.permutation(static_cast<std::uint32_t>(n));

    Matrix first(n_prime, dim), second(n_dprime, dim), shuffled(n_dprime, dim);
    for (std::size_t i = 0; i < n_prime; ++i) {
        const auto src = data.points.row(perm[i]);
        std::copy(src.begin(), src.end(), first.row(i).begin());
    }
    for (std::size_t i = 0; i < n_dprime; ++i) {
        const auto src = data.points.row(perm[n_prime + i]);
        std::copy(src.begin(), src.end(), second.row(i).begin());
    }

    const std::size_t dx = data.dx;
    if (cfg.shuffle_mode == ShuffleMode::Permutation) {
        const auto pi = rng.permutation(static_cast<std::uint32_t>(n_dprime));
        for (std::size_t k = 0; k < n_dprime; ++k) {
            const auto xs = second.row(k);
            const auto ys = second.row(pi[k]);
            std::copy(xs.begin(), xs.begin() + dx, shuffled.row(k).begin());
            std::copy(ys.begin() + dx, ys.end(), shuffled.row(k).begin() + dx);
        }
    } else {
        for (std::size_t k = 0; k < n_dprime; ++k) {
            const std::size_t xi = rng.index(n_dprime);
            const std::size_t yj = rng.index(n_dprime);
            const auto xs = second.row(xi);
            const auto ys = second.row(yj);
            std::copy(xs.begin(), xs.begin() + dx, shuffled.row(k).begin());
            std::copy(ys.begin() + dx, ys.end(), shuffled.row(k).begin() + dx);
        }
    }

    SplitShuffleResult out;
    out.first = PairedSampleSet(std::move(first), data.dx, data.dy);
    out.second = PairedSampleSet(std::move(second), data.dx, data.dy);
    out.shuffled = PairedSampleSet(std::move(shuffled), data.dx, data.dy);
    return out;
}

}  // namespace gmi
