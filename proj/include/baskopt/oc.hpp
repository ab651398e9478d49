#ifndef BASKOPT_OC_HPP
#define BASKOPT_OC_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace baskopt {

enum class OcBackend { Exact, MonteCarlo };

/// Monte-Carlo standard errors attached to an estimated OCResult.
struct McseInfo {
    std::vector<double> reject;
    double fwer = 0.0;
    double ewp = 0.0;
    double ecd = 0.0;
};

/// Operating characteristics of one (design, phi, scenario) combination.
/// fwer and ewp are joint-event probabilities accumulated directly, never
/// reconstructed from the marginals.
struct OCResult {
    std::vector<double> reject_prob;
    double fwer = 0.0;
    double ewp = 0.0;
    double ecd = 0.0;
    std::vector<bool> active;
    OcBackend backend = OcBackend::Exact;
    std::optional<McseInfo> mcse;

    // Diagnostics. `total_weight` is the accumulated probability mass of the
    // exact enumeration (1 for Monte Carlo); `decision_keys` counts distinct
    // canonical outcome keys evaluated by the exact engine.
    double total_weight = 1.0;
    long decision_keys = 0;
    int n_mc = 0;
    std::uint64_t seed = 0;
    std::string rng;

    /// Max rejection probability over inactive strata (0 if none).
    double max_inactive_reject() const {
        double m = 0.0;
        for (std::size_t i = 0; i < reject_prob.size(); ++i)
            if (!active[i] && reject_prob[i] > m) m = reject_prob[i];
        return m;
    }
};

} // namespace baskopt

#endif
