#pragma once

#include <cstddef>
#include <stdexcept>
#include <vector>

namespace ufodt {

struct Observation {
    std::size_t feature = 0;
    int value = 0;  // binary outcome
};

// Ordered record of the (feature, value) pairs revealed within one epoch,
// with the accumulated query cost.
struct ObservationSet {
    std::vector<Observation> entries;
    double total_cost = 0.0;

    bool contains(std::size_t feature) const {
        for (const auto& e : entries)
            if (e.feature == feature) return true;
        return false;
    }

    void add(std::size_t feature, int value, double cost) {
        if (contains(feature))
            throw std::invalid_argument("ObservationSet: feature already observed");
        entries.push_back({feature, value});
        total_cost += cost;
    }

    std::size_t size() const { return entries.size(); }
    bool empty() const { return entries.empty(); }
};

// Per-feature positive query costs; defaults to unit cost everywhere.
struct CostModel {
    std::vector<double> costs;

    static CostModel uniform(std::size_t n, double c = 1.0) {
        CostModel m;
        m.costs.assign(n, c);
        return m;
    }

    double cost(std::size_t feature) const { return costs.at(feature); }
    double min_cost() const {
        double m = costs.empty() ? 1.0 : costs.front();
        for (double c : costs)
            if (c < m) m = c;
        return m;
    }
};

}  // namespace ufodt
