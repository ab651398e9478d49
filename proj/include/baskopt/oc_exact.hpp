#ifndef BASKOPT_OC_EXACT_HPP
#define BASKOPT_OC_EXACT_HPP

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <thread>
#include <vector>

#include "baskopt/oc.hpp"
#include "baskopt/scenario.hpp"

namespace baskopt {

struct ExactOptions {
    /// Refuse to enumerate outcome spaces larger than this; callers should
    /// fall back to the Monte-Carlo engine instead.
    double outcome_ceiling = 1e7;
    int workers = 1;
};

/// Number of outcome vectors, prod (n_i + 1).
inline double outcome_space_size(const Design& design) {
    double total = 1.0;
    for (int n : design.sample_sizes) total *= n + 1.0;
    return total;
}

/// Canonical representative of an outcome vector. For exchangeable designs
/// the decision of a sorted vector determines the decision of every
/// permutation of it, so decisions are cached per sorted key. `positions[i]`
/// is the index of stratum i within the sorted key (stable on ties).
struct RepresentativeKey {
    OutcomeVector sorted;
    std::vector<int> positions;
};

inline RepresentativeKey representative_key(const OutcomeVector& r,
                                            const Design& design) {
    validate_outcome(r, design);
    RepresentativeKey key;
    const int count = design.strata();
    key.positions.resize(count);
    if (!design.exchangeable()) {
        key.sorted = r;
        std::iota(key.positions.begin(), key.positions.end(), 0);
        return key;
    }
    key.sorted = r;
    std::sort(key.sorted.begin(), key.sorted.end());
    for (int i = 0; i < count; ++i) {
        int pos = 0;
        for (int j = 0; j < count; ++j)
            if (r[j] < r[i] || (r[j] == r[i] && j < i)) ++pos;
        key.positions[i] = pos;
    }
    return key;
}

namespace detail {

// Colex rank of a non-decreasing vector with entries in [0, n]: map to the
// strictly increasing vector d_k = r_k + k and sum C(d_k, k+1). Ranks are
// dense in [0, C(n+I, I)).
class MultisetRanker {
public:
    MultisetRanker(int strata, int n) : strata_(strata) {
        choose_.assign(static_cast<std::size_t>(n + strata), {});
        for (int d = 0; d < n + strata; ++d) {
            choose_[d].assign(strata + 1, 0);
            choose_[d][0] = 1;
            for (int k = 1; k <= std::min(strata, d); ++k)
                choose_[d][k] = (d - 1 >= 0 ? choose_[d - 1][k - 1] : 0) +
                                (d - 1 >= k ? choose_[d - 1][k] : 0);
        }
    }

    std::uint64_t rank(const OutcomeVector& sorted) const {
        std::uint64_t acc = 0;
        for (int k = 0; k < strata_; ++k) acc += choose(sorted[k] + k, k + 1);
        return acc;
    }

    std::uint64_t count(int n) const { return choose(n + strata_ - 1 + 1, strata_); }

private:
    std::uint64_t choose(int d, int k) const {
        if (k > strata_ || d < 0) return 0;
        if (d >= static_cast<int>(choose_.size()))
            throw std::logic_error("MultisetRanker: index out of range");
        return choose_[d][k];
    }

    int strata_;
    std::vector<std::vector<std::uint64_t>> choose_;
};

struct ExactAccumulator {
    std::vector<double> reject;
    double fwer = 0.0;
    double ewp = 0.0;
    double total = 0.0;

    explicit ExactAccumulator(int strata) : reject(strata, 0.0) {}

    void merge(const ExactAccumulator& other) {
        for (std::size_t i = 0; i < reject.size(); ++i) reject[i] += other.reject[i];
        fwer += other.fwer;
        ewp += other.ewp;
        total += other.total;
    }
};

} // namespace detail

/// Exact operating characteristics by full enumeration of the outcome space.
/// The outcome space is partitioned by the first stratum's count and partial
/// accumulators are merged in ascending partition order, so results are
/// bit-identical for any worker count.
inline OCResult exact_oc(const TuningParams& phi, const Scenario& scenario,
                         const SimilarityTable& table,
                         const ExactOptions& options = {}) {
    const Design& design = table.design();
    scenario.validate(design);
    phi.validate();
    const double space = outcome_space_size(design);
    if (space > options.outcome_ceiling)
        throw resource_error(
            "exact_oc: outcome space of " + std::to_string(space) +
            " vectors exceeds the ceiling of " +
            std::to_string(options.outcome_ceiling) +
            "; use the Monte-Carlo backend for this design");

    const int count = design.strata();
    const std::uint64_t active = scenario.active_mask();
    const std::uint64_t inactive = ~active & ((count == 64)
                                                  ? ~std::uint64_t{0}
                                                  : ((std::uint64_t{1} << count) - 1));

    // Per-stratum sampling pmfs.
    std::vector<std::vector<double>> pmf(count);
    for (int i = 0; i < count; ++i) {
        pmf[i].resize(design.sample_sizes[i] + 1);
        for (int k = 0; k <= design.sample_sizes[i]; ++k)
            pmf[i][k] = binom_pmf(k, design.sample_sizes[i], scenario.rates[i]);
    }

    const bool exchangeable = design.exchangeable();
    const int n0 = design.sample_sizes[0];

    // Decision table. Exchangeable designs get one decision per sorted
    // representative; otherwise decisions are computed per raw vector below.
    std::vector<std::uint64_t> decisions;
    detail::MultisetRanker ranker(count, exchangeable ? n0 : 0);
    long n_keys = 0;
    if (exchangeable) {
        decisions.assign(ranker.count(n0), 0);
        OutcomeVector sorted(count, 0);
        // Enumerate non-decreasing vectors with a rising odometer.
        while (true) {
            decisions[ranker.rank(sorted)] = decide_mask(sorted, phi, table);
            ++n_keys;
            int d = count - 1;
            while (d >= 0 && sorted[d] == n0) --d;
            if (d < 0) break;
            const int v = sorted[d] + 1;
            for (int j = d; j < count; ++j) sorted[j] = v;
        }
    }

    // One partition per first-stratum count.
    std::vector<detail::ExactAccumulator> parts(n0 + 1,
                                                detail::ExactAccumulator(count));
    auto run_partition = [&](int r0) {
        detail::ExactAccumulator& acc = parts[r0];
        OutcomeVector r(count, 0);
        r[0] = r0;
        OutcomeVector sorted(count);
        const double w0 = pmf[0][r0];
        while (true) {
            double w = w0;
            for (int i = 1; i < count; ++i) w *= pmf[i][r[i]];

            std::uint64_t mask;
            if (exchangeable) {
                sorted = r;
                std::sort(sorted.begin(), sorted.end());
                const std::uint64_t sorted_mask = decisions[ranker.rank(sorted)];
                mask = 0;
                for (int i = 0; i < count; ++i) {
                    int pos = 0;
                    for (int j = 0; j < count; ++j)
                        if (r[j] < r[i] || (r[j] == r[i] && j < i)) ++pos;
                    mask |= ((sorted_mask >> pos) & 1) << i;
                }
            } else {
                mask = decide_mask(r, phi, table);
            }

            acc.total += w;
            for (int i = 0; i < count; ++i)
                if ((mask >> i) & 1) acc.reject[i] += w;
            if (mask & inactive) acc.fwer += w;
            if (mask & active) acc.ewp += w;

            int d = count - 1;
            while (d >= 1 && r[d] == design.sample_sizes[d]) r[d--] = 0;
            if (d < 1) break;
            ++r[d];
        }
    };

    const int workers = std::max(1, std::min(options.workers, n0 + 1));
    if (workers == 1) {
        for (int r0 = 0; r0 <= n0; ++r0) run_partition(r0);
    } else {
        std::vector<std::thread> pool;
        pool.reserve(workers);
        for (int w = 0; w < workers; ++w)
            pool.emplace_back([&, w] {
                for (int r0 = w; r0 <= n0; r0 += workers) run_partition(r0);
            });
        for (std::thread& t : pool) t.join();
    }

    detail::ExactAccumulator total(count);
    for (int r0 = 0; r0 <= n0; ++r0) total.merge(parts[r0]);

    OCResult result;
    result.backend = OcBackend::Exact;
    result.reject_prob = total.reject;
    result.fwer = total.fwer;
    result.ewp = total.ewp;
    result.total_weight = total.total;
    result.decision_keys = exchangeable ? n_keys : 0;
    result.active.resize(count);
    result.ecd = 0.0;
    for (int i = 0; i < count; ++i) {
        result.active[i] = scenario.active(i);
        result.ecd += result.active[i] ? result.reject_prob[i]
                                       : 1.0 - result.reject_prob[i];
    }
    return result;
}

} // namespace baskopt

#endif
