#ifndef BASKOPT_DESIGN_HPP
#define BASKOPT_DESIGN_HPP

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <map>
#include <mutex>
#include <optional>
#include <shared_mutex>
#include <stdexcept>
#include <vector>

#include "baskopt/divergence.hpp"
#include "baskopt/special_functions.hpp"

namespace baskopt {

/// The tuning-parameter vector: detection threshold, similarity-sharpening
/// exponent, similarity cutoff.
struct TuningParams {
    double lambda;
    double epsilon;
    double tau;

    void validate() const {
        if (!(lambda >= 0.0 && lambda <= 1.0))
            throw std::domain_error("TuningParams: lambda must lie in [0,1]");
        if (!(epsilon >= 0.0) || !std::isfinite(epsilon))
            throw std::domain_error("TuningParams: epsilon must be >= 0");
        if (!(tau >= 0.0 && tau <= 1.0))
            throw std::domain_error("TuningParams: tau must lie in [0,1]");
    }
};

/// Trial blueprint: per-stratum sample sizes, beta prior shapes, decision
/// target rates and the similarity metric used for borrowing weights.
struct Design {
    std::vector<int> sample_sizes;
    std::vector<double> prior_a;
    std::vector<double> prior_b;
    std::vector<double> target_rates;
    DivergenceKind divergence = DivergenceKind::Jsd;

    int strata() const { return static_cast<int>(sample_sizes.size()); }

    static Design uniform(int strata, int n, double target_rate,
                          DivergenceKind div = DivergenceKind::Jsd) {
        Design d;
        d.sample_sizes.assign(strata, n);
        d.prior_a.assign(strata, 1.0);
        d.prior_b.assign(strata, 1.0);
        d.target_rates.assign(strata, target_rate);
        d.divergence = div;
        d.validate();
        return d;
    }

    void validate() const {
        const std::size_t count = sample_sizes.size();
        if (count == 0) throw std::domain_error("Design: needs at least one stratum");
        if (prior_a.size() != count || prior_b.size() != count ||
            target_rates.size() != count)
            throw std::domain_error("Design: all per-stratum vectors must have equal length");
        for (int n : sample_sizes)
            if (n < 1) throw std::domain_error("Design: sample sizes must be positive");
        for (std::size_t i = 0; i < count; ++i) {
            if (!(prior_a[i] > 0.0) || !(prior_b[i] > 0.0))
                throw std::domain_error("Design: prior shapes must be positive");
            if (!(target_rates[i] > 0.0 && target_rates[i] < 1.0))
                throw std::domain_error("Design: target rates must lie in (0,1)");
        }
    }

    /// Equal sample sizes, priors and target rates across strata. Decisions
    /// then commute with permutations of the response vector.
    bool exchangeable() const {
        for (int i = 1; i < strata(); ++i)
            if (sample_sizes[i] != sample_sizes[0] || prior_a[i] != prior_a[0] ||
                prior_b[i] != prior_b[0] || target_rates[i] != target_rates[0])
                return false;
        return true;
    }

    /// Unaltered conjugate posterior of stratum i after r responses.
    BetaShapes posterior(int i, int r) const {
        return BetaShapes{prior_a[i] + r, prior_b[i] + (sample_sizes[i] - r)};
    }
};

using OutcomeVector = std::vector<int>;

inline void validate_outcome(const OutcomeVector& r, const Design& design) {
    if (static_cast<int>(r.size()) != design.strata())
        throw std::domain_error("outcome vector length must equal stratum count");
    for (int i = 0; i < design.strata(); ++i)
        if (r[i] < 0 || r[i] > design.sample_sizes[i])
            throw std::domain_error("response count outside [0, n_i]");
}

/// Pairwise similarity memo for one design. Similarities depend only on the
/// unaltered posteriors, not on the tuning parameters, so one table serves
/// every phi evaluated against the design. Thread-safe: the dense table for
/// exchangeable-prior designs is built eagerly in the constructor; the
/// general path computes entries once under a shared mutex.
class SimilarityTable {
public:
    explicit SimilarityTable(Design design) : design_(std::move(design)) {
        design_.validate();
        dense_ = pooled_counts_ok();
        if (dense_) {
            const int n = design_.sample_sizes[0];
            table_.assign(static_cast<std::size_t>(n + 1) * (n + 2) / 2, 0.0);
            for (int lo = 0; lo <= n; ++lo)
                for (int hi = lo; hi <= n; ++hi)
                    table_[tri_index(lo, hi)] = compute(0, 0, lo, hi);
        }
    }

    const Design& design() const { return design_; }

    /// Similarity 1 - divergence of the unaltered posteriors of (i, r_i) and
    /// (j, r_j). Exactly 1 when the posteriors coincide.
    double raw(int i, int j, int r_i, int r_j) const {
        if (dense_) {
            const int lo = std::min(r_i, r_j);
            const int hi = std::max(r_i, r_j);
            return table_[tri_index(lo, hi)];
        }
        const BetaShapes a = design_.posterior(i, r_i);
        const BetaShapes b = design_.posterior(j, r_j);
        if (a == b) return 1.0;
        Key key = make_key(a, b);
        {
            std::shared_lock lock(mutex_);
            auto it = cache_.find(key);
            if (it != cache_.end()) return it->second;
        }
        const double value = 1.0 - divergence(design_.divergence, a, b);
        std::unique_lock lock(mutex_);
        return cache_.emplace(key, value).first->second;
    }

    /// Largest similarity over pairs with distinct unaltered posteriors,
    /// found by exhaustive scan. Needs at least two strata.
    double max_offdiagonal() const {
        if (design_.strata() < 2)
            throw std::invalid_argument("max_offdiagonal: need at least two strata");
        std::call_once(max_once_, [this] {
            double best = 0.0;
            if (dense_) {
                const int n = design_.sample_sizes[0];
                for (int lo = 0; lo <= n; ++lo)
                    for (int hi = lo + 1; hi <= n; ++hi)
                        best = std::max(best, table_[tri_index(lo, hi)]);
            } else {
                for (int i = 0; i < design_.strata(); ++i)
                    for (int j = i + 1; j < design_.strata(); ++j)
                        for (int ri = 0; ri <= design_.sample_sizes[i]; ++ri)
                            for (int rj = 0; rj <= design_.sample_sizes[j]; ++rj) {
                                if (design_.posterior(i, ri) == design_.posterior(j, rj))
                                    continue;
                                best = std::max(best, raw(i, j, ri, rj));
                            }
            }
            max_offdiag_ = best;
        });
        return max_offdiag_;
    }

private:
    bool pooled_counts_ok() const {
        for (int i = 1; i < design_.strata(); ++i)
            if (design_.sample_sizes[i] != design_.sample_sizes[0] ||
                design_.prior_a[i] != design_.prior_a[0] ||
                design_.prior_b[i] != design_.prior_b[0])
                return false;
        return true;
    }

    static std::size_t tri_index(int lo, int hi) {
        return static_cast<std::size_t>(hi) * (hi + 1) / 2 + lo;
    }

    double compute(int i, int j, int r_i, int r_j) const {
        const BetaShapes a = design_.posterior(i, r_i);
        const BetaShapes b = design_.posterior(j, r_j);
        if (a == b) return 1.0;
        return 1.0 - divergence(design_.divergence, a, b);
    }

    using Key = std::array<double, 4>;
    static Key make_key(const BetaShapes& a, const BetaShapes& b) {
        if (a.alpha < b.alpha || (a.alpha == b.alpha && a.beta <= b.beta))
            return {a.alpha, a.beta, b.alpha, b.beta};
        return {b.alpha, b.beta, a.alpha, a.beta};
    }

    Design design_;
    bool dense_ = false;
    std::vector<double> table_;
    mutable std::shared_mutex mutex_;
    mutable std::map<Key, double> cache_;
    mutable std::once_flag max_once_;
    mutable double max_offdiag_ = 0.0;
};

/// Raw similarity of strata i and j at response counts (r_i, r_j).
inline double raw_similarity(int r_i, int r_j, int i, int j,
                             const SimilarityTable& table) {
    return table.raw(i, j, r_i, r_j);
}

/// Thresholded, sharpened borrowing weight: sim^eps if sim^eps > tau
/// (strictly), else 0. Self-weights are handled by the callers, which pin
/// the diagonal to 1.
inline double weight(double similarity, const TuningParams& phi) {
    const double w = std::pow(similarity, phi.epsilon);
    return w > phi.tau ? w : 0.0;
}

/// Full I x I weight matrix, row-major. Diagonal is identically 1: a stratum
/// always keeps its own data even when tau = 1 shuts off all cross terms.
inline std::vector<double> weight_matrix(const OutcomeVector& r,
                                         const TuningParams& phi,
                                         const SimilarityTable& table) {
    const Design& design = table.design();
    validate_outcome(r, design);
    phi.validate();
    const int count = design.strata();
    std::vector<double> w(static_cast<std::size_t>(count) * count, 0.0);
    for (int i = 0; i < count; ++i) {
        w[static_cast<std::size_t>(i) * count + i] = 1.0;
        for (int j = i + 1; j < count; ++j) {
            const double wij = weight(table.raw(i, j, r[i], r[j]), phi);
            w[static_cast<std::size_t>(i) * count + j] = wij;
            w[static_cast<std::size_t>(j) * count + i] = wij;
        }
    }
    return w;
}

/// Posterior shapes after borrowing: component-wise weighted sums of the
/// per-stratum posterior updates.
inline std::vector<BetaShapes> borrowing_posterior(const OutcomeVector& r,
                                                   const TuningParams& phi,
                                                   const SimilarityTable& table) {
    const Design& design = table.design();
    const std::vector<double> w = weight_matrix(r, phi, table);
    const int count = design.strata();
    std::vector<BetaShapes> shapes(count);
    for (int i = 0; i < count; ++i) {
        double alpha = 0.0;
        double beta = 0.0;
        for (int j = 0; j < count; ++j) {
            const double wij = w[static_cast<std::size_t>(i) * count + j];
            if (wij == 0.0) continue;
            alpha += wij * (design.prior_a[j] + r[j]);
            beta += wij * (design.prior_b[j] + (design.sample_sizes[j] - r[j]));
        }
        shapes[i] = BetaShapes{alpha, beta};
    }
    return shapes;
}

/// Detection decisions as a bitmask (bit i = stratum i detected). Stratum i
/// is detected iff P(p_i > target | r) >= lambda under the borrowing
/// posterior; evaluated as I_target(shapes) <= 1 - lambda, which is exact at
/// lambda = 0 and lambda = 1.
inline std::uint64_t decide_mask(const OutcomeVector& r, const TuningParams& phi,
                                 const SimilarityTable& table) {
    const Design& design = table.design();
    if (design.strata() > 64)
        throw std::domain_error("decide: more than 64 strata not supported");
    const std::vector<BetaShapes> shapes = borrowing_posterior(r, phi, table);
    std::uint64_t mask = 0;
    for (int i = 0; i < design.strata(); ++i) {
        const double cdf = reg_inc_beta(design.target_rates[i], shapes[i]);
        if (cdf <= 1.0 - phi.lambda) mask |= std::uint64_t{1} << i;
    }
    return mask;
}

inline std::vector<bool> decide(const OutcomeVector& r, const TuningParams& phi,
                                const SimilarityTable& table) {
    const std::uint64_t mask = decide_mask(r, phi, table);
    std::vector<bool> detected(table.design().strata());
    for (int i = 0; i < table.design().strata(); ++i)
        detected[i] = (mask >> i) & 1;
    return detected;
}

/// Extreme borrowing boundary ln(tau) / ln(sim*): above this epsilon,
/// borrowing happens only between strata whose unaltered posteriors
/// coincide. sim* is the exhaustive-scan maximum off-diagonal similarity.
inline double extreme_boundary(double tau, const SimilarityTable& table) {
    if (table.design().strata() < 2)
        throw std::invalid_argument("extreme_boundary: need at least two strata");
    if (!(tau > 0.0 && tau < 1.0))
        throw std::domain_error("extreme_boundary: tau must lie in (0,1)");
    return std::log(tau) / std::log(table.max_offdiagonal());
}

} // namespace baskopt

#endif
