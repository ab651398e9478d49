#ifndef BASKOPT_SCENARIO_HPP
#define BASKOPT_SCENARIO_HPP

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "baskopt/design.hpp"

namespace baskopt {

/// One true-state hypothesis: per-stratum response rates plus the null rate
/// that separates active from inactive strata.
struct Scenario {
    std::string label;
    std::string description;
    std::vector<double> rates;
    double null_rate = 0.0;
    /// Observed-rate scenarios are reported on but excluded from
    /// optimization averages.
    bool evaluation_only = false;

    int strata() const { return static_cast<int>(rates.size()); }
    bool active(int i) const { return rates[i] > null_rate; }

    std::uint64_t active_mask() const {
        std::uint64_t mask = 0;
        for (int i = 0; i < strata(); ++i)
            if (active(i)) mask |= std::uint64_t{1} << i;
        return mask;
    }

    int active_count() const {
        int count = 0;
        for (int i = 0; i < strata(); ++i)
            if (active(i)) ++count;
        return count;
    }

    void validate(const Design& design) const {
        if (strata() != design.strata())
            throw std::domain_error("Scenario: rate vector length must equal stratum count");
        for (double p : rates)
            if (!(p >= 0.0 && p <= 1.0))
                throw std::domain_error("Scenario: rates must lie in [0,1]");
    }
};

/// A design together with its catalog of scenarios. `weights` aligns with
/// `scenarios`; evaluation-only entries carry weight 0 and the rest sum to 1.
struct ScenarioSet {
    std::string id;
    Design design;
    std::vector<Scenario> scenarios;
    std::vector<double> weights;
    int null_index = -1;

    const Scenario& null_scenario() const { return scenarios.at(null_index); }

    const Scenario& by_label(const std::string& label) const {
        for (const Scenario& s : scenarios)
            if (s.label == label) return s;
        throw std::invalid_argument("unknown scenario label '" + label +
                                    "' in set " + id);
    }

    int index_of(const std::string& label) const {
        for (std::size_t i = 0; i < scenarios.size(); ++i)
            if (scenarios[i].label == label) return static_cast<int>(i);
        throw std::invalid_argument("unknown scenario label '" + label +
                                    "' in set " + id);
    }

    void validate() const {
        design.validate();
        if (scenarios.empty()) throw std::domain_error("ScenarioSet: no scenarios");
        if (weights.size() != scenarios.size())
            throw std::domain_error("ScenarioSet: weights must align with scenarios");
        double total = 0.0;
        for (std::size_t i = 0; i < scenarios.size(); ++i) {
            scenarios[i].validate(design);
            if (weights[i] < 0.0)
                throw std::domain_error("ScenarioSet: weights must be nonnegative");
            if (scenarios[i].evaluation_only && weights[i] != 0.0)
                throw std::domain_error("ScenarioSet: evaluation-only scenarios carry weight 0");
            total += weights[i];
        }
        if (std::fabs(total - 1.0) > 1e-12)
            throw std::domain_error("ScenarioSet: weights must sum to 1");
        if (null_index < 0 || null_index >= static_cast<int>(scenarios.size()))
            throw std::domain_error("ScenarioSet: missing null scenario");
        if (scenarios[null_index].active_count() != 0)
            throw std::domain_error("ScenarioSet: null scenario must have no active strata");
    }

    /// Uniform weights over the non-evaluation-only scenarios.
    void assign_uniform_weights() {
        int optimized = 0;
        for (const Scenario& s : scenarios)
            if (!s.evaluation_only) ++optimized;
        weights.assign(scenarios.size(), 0.0);
        for (std::size_t i = 0; i < scenarios.size(); ++i)
            if (!scenarios[i].evaluation_only)
                weights[i] = 1.0 / optimized;
    }
};

} // namespace baskopt

#endif
