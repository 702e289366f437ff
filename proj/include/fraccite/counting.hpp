#pragma once

// Fractional citation counting: every reference into the corpus becomes
// one citation event per cited unit, weighted by the inverse length of
// the citing paper's reference list. Counting is a pure map-reduce over
// citing papers; fractional totals accumulate over sorted weights with
// Neumaier compensation, so results are bit-identical under any
// permutation of the input and under any partition/merge scheme that
// feeds the same weight multiset.

#include <algorithm>
#include <cstddef>
#include <map>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "fraccite/bibdata.hpp"
#include "fraccite/numeric.hpp"

namespace fraccite {

struct counting_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};
// A citing paper with an empty reference list cannot be weighted.
struct zero_reference_error : counting_error {
    using counting_error::counting_error;
};
// A unit queried for counts is not in the registry (distinct from a
// registered unit that simply has no events).
struct unknown_unit_error : counting_error {
    using counting_error::counting_error;
};

struct citation_event {
    std::string citing_id;
    std::string cited_id;
    std::string unit_id;
    double weight = 0.0;  // 1/NR of the citing paper, in (0, 1]
};

// Weight of one reference from the given citing paper: 1/NR.
inline double reference_weight(const citing_paper& citing) {
    if (citing.ref_count <= 0)
        throw zero_reference_error("citing paper '" + citing.id +
                                   "' has an empty reference list");
    return 1.0 / static_cast<double>(citing.ref_count);
}

struct event_stats {
    std::size_t zero_ref_citing_skipped = 0;
    std::size_t self_citation_dropped = 0;
};

// One event per (link, cited unit). Citing papers with NR = 0 are
// skipped and counted; with include_self_citations off, events whose
// cited unit appears among the citing paper's own units are dropped.
inline std::vector<citation_event> enumerate_events(std::span<const citation_link> links,
                                                    const corpus& c,
                                                    bool include_self_citations = true,
                                                    event_stats* stats = nullptr) {
    event_stats local;
    std::map<std::string_view, const citing_paper*> citing_by_id;
    for (const auto& p : c.citing) citing_by_id.emplace(p.id, &p);
    std::map<std::string_view, const cited_paper*> cited_by_id;
    for (const auto& p : c.cited) cited_by_id.emplace(p.id, &p);

    std::vector<std::string_view> skipped_zero_ref;
    std::vector<citation_event> events;
    for (const auto& link : links) {
        const auto citing_it = citing_by_id.find(link.citing_id);
        const auto cited_it = cited_by_id.find(link.cited_id);
        if (citing_it == citing_by_id.end() || cited_it == cited_by_id.end())
            throw counting_error("link (" + link.citing_id + ", " + link.cited_id +
                                 ") references a paper missing from the corpus");
        const citing_paper& citing = *citing_it->second;
        if (citing.ref_count <= 0) {
            skipped_zero_ref.push_back(citing.id);
            continue;
        }
        const double w = reference_weight(citing);
        for (const auto& unit : cited_it->second->unit_ids) {
            if (!include_self_citations &&
                std::binary_search(citing.unit_ids.begin(), citing.unit_ids.end(), unit)) {
                ++local.self_citation_dropped;
                continue;
            }
            events.push_back({citing.id, link.cited_id, unit, w});
        }
    }
    std::sort(skipped_zero_ref.begin(), skipped_zero_ref.end());
    local.zero_ref_citing_skipped =
        static_cast<std::size_t>(std::distance(
            skipped_zero_ref.begin(),
            std::unique(skipped_zero_ref.begin(), skipped_zero_ref.end())));
    if (stats) *stats = local;
    return events;
}

struct unit_counts {
    std::string unit_id;
    std::size_t ic = 0;  // integer-counted citations
    double fc = 0.0;     // fractionally counted citations
};

// Mean observation value fc/ic; the per-unit mean citation weight.
inline double mean_weight(const unit_counts& c) {
    if (c.ic == 0) throw counting_error("mean_weight: unit '" + c.unit_id + "' has no events");
    return c.fc / static_cast<double>(c.ic);
}

struct unit_distribution {
    std::string unit_id;
    std::vector<double> observations;  // sorted ascending
};

// Groups event weights by unit; observations are sorted, so identical
// event multisets give identical distributions regardless of order.
inline std::map<std::string, unit_distribution> distributions(
    std::span<const citation_event> events) {
    std::map<std::string, unit_distribution> out;
    for (const auto& e : events) {
        auto& d = out[e.unit_id];
        if (d.unit_id.empty()) d.unit_id = e.unit_id;
        d.observations.push_back(e.weight);
    }
    for (auto& [unit, d] : out) std::sort(d.observations.begin(), d.observations.end());
    return out;
}

// Counts for every registered unit, zero rows included; registry order.
inline std::vector<unit_counts> count_by_unit(std::span<const citation_event> events,
                                              const unit_registry& registry) {
    std::map<std::string, std::vector<double>> weights;
    for (const auto& e : events) weights[e.unit_id].push_back(e.weight);
    std::vector<unit_counts> out;
    out.reserve(registry.size());
    for (const auto& unit : registry.units()) {
        unit_counts c;
        c.unit_id = unit.unit_id;
        const auto it = weights.find(unit.unit_id);
        if (it != weights.end()) {
            c.ic = it->second.size();
            c.fc = stable_sum(it->second);
        }
        out.push_back(std::move(c));
    }
    return out;
}

inline std::size_t integer_count(std::span<const citation_event> events,
                                 const std::string& unit, const unit_registry& registry) {
    if (!registry.contains(unit))
        throw unknown_unit_error("unit '" + unit + "' is not in the registry");
    std::size_t n = 0;
    for (const auto& e : events)
        if (e.unit_id == unit) ++n;
    return n;
}

inline double fractional_count(std::span<const citation_event> events, const std::string& unit,
                               const unit_registry& registry) {
    if (!registry.contains(unit))
        throw unknown_unit_error("unit '" + unit + "' is not in the registry");
    std::vector<double> weights;
    for (const auto& e : events)
        if (e.unit_id == unit) weights.push_back(e.weight);
    return stable_sum(std::move(weights));
}

}  // namespace fraccite
