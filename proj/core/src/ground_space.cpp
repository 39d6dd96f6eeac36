#include "graev/ground_space.hpp"

#include "graev/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace graev {

const char* to_string(AxiomViolation::Rule rule) noexcept {
    switch (rule) {
    case AxiomViolation::Rule::nonzero_diagonal: return "diagonal";
    case AxiomViolation::Rule::asymmetry: return "symmetry";
    case AxiomViolation::Rule::triangle: return "triangle";
    }
    return "unknown";
}

std::string AxiomViolation::describe() const {
    std::ostringstream os;
    os << to_string(rule) << " violated at (" << indices[0] << ',' << indices[1] << ','
       << indices[2] << ") by " << excess;
    return os.str();
}

namespace {

std::vector<std::string> default_labels(std::size_t n) {
    std::vector<std::string> out;
    out.reserve(n);
    out.emplace_back("e");
    for (std::size_t i = 1; i < n; ++i) out.push_back("x" + std::to_string(i));
    return out;
}

void check_labels(const std::vector<std::string>& labels, std::size_t n) {
    if (!labels.empty() && labels.size() != n) {
        throw StructuralError("label count " + std::to_string(labels.size()) +
                              " does not match point count " + std::to_string(n));
    }
}

} // namespace

GroundSpace GroundSpace::from_matrix(std::vector<std::vector<double>> dist,
                                     std::vector<std::string> labels) {
    const std::size_t n = dist.size();
    if (n == 0) throw StructuralError("ground space needs at least the base point e");
    check_labels(labels, n);

    GroundSpace s;
    s.kind_ = SpaceKind::matrix;
    s.size_ = n;
    s.table_.reserve(n * n);
    for (std::size_t i = 0; i < n; ++i) {
        if (dist[i].size() != n) {
            throw StructuralError("distance table is not square: row " + std::to_string(i) +
                                  " has " + std::to_string(dist[i].size()) + " entries, expected " +
                                  std::to_string(n));
        }
        for (std::size_t j = 0; j < n; ++j) {
            const double v = dist[i][j];
            if (!std::isfinite(v)) {
                throw StructuralError("non-finite distance at (" + std::to_string(i) + "," +
                                      std::to_string(j) + ")");
            }
            if (v < 0.0) {
                throw StructuralError("negative distance at (" + std::to_string(i) + "," +
                                      std::to_string(j) + ")");
            }
            s.table_.push_back(v);
        }
    }
    s.labels_ = labels.empty() ? default_labels(n) : std::move(labels);
    s.pseudometric_ = validate_space(s).ok();
    return s;
}

GroundSpace GroundSpace::from_coords(std::vector<std::vector<double>> coords,
                                     std::vector<std::string> labels) {
    const std::size_t n = coords.size();
    if (n == 0) throw StructuralError("ground space needs at least the base point e");
    check_labels(labels, n);
    const std::size_t dim = coords.front().size();
    if (dim == 0) throw StructuralError("euclidean points need at least one coordinate");

    GroundSpace s;
    s.kind_ = SpaceKind::euclidean;
    s.size_ = n;
    s.dim_ = dim;
    s.coords_.reserve(n * dim);
    for (std::size_t i = 0; i < n; ++i) {
        if (coords[i].size() != dim) {
            throw StructuralError("point " + std::to_string(i) + " has dimension " +
                                  std::to_string(coords[i].size()) + ", expected " +
                                  std::to_string(dim));
        }
        for (double c : coords[i]) {
            if (!std::isfinite(c)) {
                throw StructuralError("non-finite coordinate in point " + std::to_string(i));
            }
            s.coords_.push_back(c);
        }
    }
    s.labels_ = labels.empty() ? default_labels(n) : std::move(labels);
    s.pseudometric_ = true;
    return s;
}

double GroundSpace::euclid(PointIndex i, PointIndex j) const noexcept {
    const double* a = coords_.data() + static_cast<std::size_t>(i) * dim_;
    const double* b = coords_.data() + static_cast<std::size_t>(j) * dim_;
    double sum = 0.0;
    for (std::size_t k = 0; k < dim_; ++k) {
        const double d = a[k] - b[k];
        sum += d * d;
    }
    return std::sqrt(sum);
}

void GroundSpace::check_index(PointIndex i) const {
    if (i >= size_) {
        throw IndexError("point index " + std::to_string(i) + " out of range [0, " +
                         std::to_string(size_) + ")");
    }
}

double GroundSpace::distance(PointIndex i, PointIndex j) const {
    check_index(i);
    check_index(j);
    return (*this)(i, j);
}

double GroundSpace::raw(PointIndex i, PointIndex j) const noexcept {
    if (kind_ == SpaceKind::matrix) return table_[static_cast<std::size_t>(i) * size_ + j];
    return i == j ? 0.0 : euclid(i, j);
}

std::span<const double> GroundSpace::coords(PointIndex i) const {
    if (kind_ != SpaceKind::euclidean) throw StructuralError("matrix spaces have no coordinates");
    check_index(i);
    return {coords_.data() + static_cast<std::size_t>(i) * dim_, dim_};
}

void GroundSpace::require_pseudometric() const {
    if (pseudometric_) return;
    const auto report = validate_space(*this);
    throw AxiomError("ground space is not a pseudometric: " +
                     (report.ok() ? std::string("unknown") : report.violations.front().describe()));
}

GroundSpace GroundSpace::with_points(std::span<const std::vector<double>> extra,
                                     std::span<const std::string> extra_labels) const {
    if (kind_ != SpaceKind::euclidean) {
        throw StructuralError("points can only be appended to euclidean spaces");
    }
    GroundSpace s = *this;
    for (std::size_t k = 0; k < extra.size(); ++k) {
        const auto& p = extra[k];
        if (p.size() != dim_) throw StructuralError("appended point has wrong dimension");
        for (double c : p) {
            if (!std::isfinite(c)) throw StructuralError("non-finite coordinate");
            s.coords_.push_back(c);
        }
        s.labels_.push_back(k < extra_labels.size() ? extra_labels[k]
                                                    : "x" + std::to_string(s.size_));
        ++s.size_;
    }
    return s;
}

std::vector<std::vector<double>> GroundSpace::to_matrix() const {
    std::vector<std::vector<double>> out(size_, std::vector<double>(size_, 0.0));
    for (PointIndex i = 0; i < size_; ++i) {
        for (PointIndex j = 0; j < size_; ++j) out[i][j] = (*this)(i, j);
    }
    return out;
}

ValidationReport validate_space(const GroundSpace& s, double tol) {
    ValidationReport report;
    const auto n = static_cast<PointIndex>(s.size());
    using Rule = AxiomViolation::Rule;
    for (PointIndex i = 0; i < n; ++i) {
        const double d = s.raw(i, i);
        if (std::abs(d) > tol) report.violations.push_back({Rule::nonzero_diagonal, {i, i, i}, d});
    }
    for (PointIndex i = 0; i < n; ++i) {
        for (PointIndex j = i + 1; j < n; ++j) {
            const double gap = std::abs(s.raw(i, j) - s.raw(j, i));
            if (gap > tol) report.violations.push_back({Rule::asymmetry, {i, j, j}, gap});
        }
    }
    // Triangle checks use the symmetrized reads, so each unordered (i,k)
    // with an intermediate j is examined once.
    for (PointIndex i = 0; i < n; ++i) {
        for (PointIndex k = i + 1; k < n; ++k) {
            const double direct = s(i, k);
            for (PointIndex j = 0; j < n; ++j) {
                if (j == i || j == k) continue;
                const double excess = direct - (s(i, j) + s(j, k));
                if (excess > tol) report.violations.push_back({Rule::triangle, {i, j, k}, excess});
            }
        }
    }
    return report;
}

// ---------------------------------------------------------------------------

PseudometricSequence::PseudometricSequence(std::vector<GroundSpace> metrics, TailRule tail)
    : metrics_(std::move(metrics)), tail_(tail) {
    if (metrics_.empty()) throw StructuralError("pseudometric sequence needs at least d_1");
    if (tail_.kind == TailRule::Kind::scale && (!std::isfinite(tail_.ratio) || tail_.ratio < 0.0)) {
        throw StructuralError("tail scale ratio must be finite and non-negative");
    }
    points_ = metrics_.front().size();
    for (std::size_t n = 0; n < metrics_.size(); ++n) {
        const auto& m = metrics_[n];
        if (m.kind() != SpaceKind::matrix) {
            throw StructuralError("sequence metrics must be matrix spaces");
        }
        if (m.size() != points_) {
            throw StructuralError("d_" + std::to_string(n + 1) + " has " +
                                  std::to_string(m.size()) + " points, expected " +
                                  std::to_string(points_));
        }
        if (!m.is_pseudometric()) {
            throw AxiomError("d_" + std::to_string(n + 1) + " is not a pseudometric: " +
                             validate_space(m).violations.front().describe());
        }
    }
}

PseudometricSequence PseudometricSequence::scaled(const GroundSpace& base,
                                                  std::span<const double> scales, TailRule tail) {
    base.require_pseudometric();
    const auto table = base.to_matrix();
    std::vector<GroundSpace> metrics;
    metrics.reserve(scales.size());
    for (double c : scales) {
        if (!std::isfinite(c) || c < 0.0) {
            throw StructuralError("metric scale factors must be finite and non-negative");
        }
        auto scaled_table = table;
        for (auto& row : scaled_table) {
            for (auto& v : row) v *= c;
        }
        metrics.push_back(GroundSpace::from_matrix(std::move(scaled_table), base.labels()));
    }
    return PseudometricSequence(std::move(metrics), tail);
}

double PseudometricSequence::operator()(std::size_t n, PointIndex i, PointIndex j) const noexcept {
    const std::size_t len = metrics_.size();
    if (n >= 1 && n <= len) return metrics_[n - 1](i, j);
    const double last = metrics_.back()(i, j);
    switch (tail_.kind) {
    case TailRule::Kind::repeat_last: return last;
    case TailRule::Kind::zero: return 0.0;
    case TailRule::Kind::scale:
        if (last == 0.0) return 0.0;
        return last * std::pow(tail_.ratio, static_cast<double>(n - len));
    }
    return last;
}

double PseudometricSequence::partial_sum(std::uint64_t count, PointIndex i,
                                         PointIndex j) const noexcept {
    // Explicit accumulation keeps every d_m <= partial_sum(count) bitwise for
    // m <= count; the closed form only takes over for very long tails.
    constexpr std::uint64_t kExplicitLimit = 1u << 16;
    const std::uint64_t len = metrics_.size();
    double sum = 0.0;
    const std::uint64_t head = std::min(count, len);
    for (std::uint64_t n = 1; n <= head; ++n) sum += metrics_[n - 1](i, j);
    if (count <= len) return sum;

    const double last = metrics_.back()(i, j);
    if (last == 0.0 || tail_.kind == TailRule::Kind::zero) return sum;

    const std::uint64_t tail_terms = count - len;
    const std::uint64_t explicit_terms = std::min(tail_terms, kExplicitLimit);
    for (std::uint64_t t = 1; t <= explicit_terms; ++t) sum += (*this)(len + t, i, j);
    if (tail_terms == explicit_terms) return sum;

    const double from = static_cast<double>(explicit_terms);
    const double to = static_cast<double>(tail_terms);
    if (tail_.kind == TailRule::Kind::repeat_last || tail_.ratio == 1.0) {
        return sum + last * (to - from);
    }
    // last * sum_{t=from+1}^{to} r^t
    const double r = tail_.ratio;
    const double geometric = (std::pow(r, to + 1.0) - std::pow(r, from + 1.0)) / (r - 1.0);
    if (!std::isfinite(geometric)) return std::numeric_limits<double>::infinity();
    return sum + last * geometric;
}

double PseudometricSequence::p(std::size_t n, PointIndex i, PointIndex j) const noexcept {
    if (n + 1 >= 64) return partial_sum(~std::uint64_t{0}, i, j);
    return partial_sum(std::uint64_t{1} << (n + 1), i, j);
}

double combined_distance(const PseudometricSequence& seq, PointIndex i, PointIndex j) {
    if (i >= seq.points() || j >= seq.points()) {
        throw IndexError("point index out of range for pseudometric sequence");
    }
    if (i == j) return 0.0;
    constexpr std::size_t kMaxLevel = 1074;
    const std::uint64_t len = seq.explicit_length();
    double best = 0.0;
    double running = 0.0;
    std::uint64_t summed = 0;
    for (std::size_t n = 1; n <= kMaxLevel; ++n) {
        const double bound = std::ldexp(1.0, -static_cast<int>(n));
        if (bound <= best) break;
        const std::uint64_t target = n + 1 >= 64 ? ~std::uint64_t{0} : std::uint64_t{1} << (n + 1);
        if (target - summed <= (1u << 16)) {
            for (std::uint64_t m = summed + 1; m <= target; ++m) running += seq(m, i, j);
        } else {
            running = seq.partial_sum(target, i, j);
        }
        summed = target;
        if (std::isnan(running)) throw StructuralError("NaN in pseudometric sequence");
        best = std::max(best, bound * std::min(1.0, running));
        // Every later p_n equals this one when the tail adds nothing.
        if (running == 0.0 && summed >= len) break;
    }
    return best;
}

GroundSpace combine_sup(const PseudometricSequence& seq) {
    const auto n = static_cast<PointIndex>(seq.points());
    std::vector<std::vector<double>> table(n, std::vector<double>(n, 0.0));
    for (PointIndex i = 0; i < n; ++i) {
        for (PointIndex j = i + 1; j < n; ++j) {
            table[i][j] = table[j][i] = combined_distance(seq, i, j);
        }
    }
    return GroundSpace::from_matrix(std::move(table), seq.metric(1).labels());
}

} // namespace graev
