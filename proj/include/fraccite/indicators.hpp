#pragma once

// Size, impact, and productivity indicators per unit, plus rankings with
// competition (display) and fractional (average) rank variants.

#include <algorithm>
#include <cstddef>
#include <map>
#include <numeric>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "fraccite/bibdata.hpp"
#include "fraccite/counting.hpp"

namespace fraccite {

struct indicator_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct indicator_row {
    std::string unit_id;
    double faculty_fte = 0.0;
    std::size_t publications = 0;  // p
    std::size_t ic = 0;
    double fc = 0.0;
    double ic_per_p = 0.0;
    double fc_per_p_x100 = 0.0;
    double ic_per_fac = 0.0;
    double fc_per_fac_x100 = 0.0;
    double p_per_fac = 0.0;
    std::optional<double> mean_ref_len;  // ic/fc; absent when fc = 0
};

struct indicator_table {
    std::vector<indicator_row> rows;

    const indicator_row& row(std::string_view unit_id) const {
        for (const auto& r : rows)
            if (r.unit_id == unit_id) return r;
        throw indicator_error("no indicator row for unit '" + std::string(unit_id) + "'");
    }
};

// All ratio columns from the primitives; a unit with no citations gets
// zero ratios and no mean reference-list length. Every registered unit
// must have a publication count (zero is fine).
inline indicator_table compute_indicator_table(
    std::span<const unit_counts> counts, const std::map<std::string, std::size_t>& publications,
    const unit_registry& registry) {
    indicator_table table;
    table.rows.reserve(counts.size());
    for (const auto& c : counts) {
        const unit_info& unit = registry.at(c.unit_id);
        const auto pub_it = publications.find(c.unit_id);
        if (pub_it == publications.end())
            throw indicator_error("missing publication count for unit '" + c.unit_id + "'");
        indicator_row r;
        r.unit_id = c.unit_id;
        r.faculty_fte = unit.faculty_fte;
        r.publications = pub_it->second;
        r.ic = c.ic;
        r.fc = c.fc;
        const double p = static_cast<double>(r.publications);
        const double ic = static_cast<double>(r.ic);
        r.ic_per_p = p > 0.0 ? ic / p : 0.0;
        r.fc_per_p_x100 = p > 0.0 ? 100.0 * r.fc / p : 0.0;
        r.ic_per_fac = ic / r.faculty_fte;
        r.fc_per_fac_x100 = 100.0 * r.fc / r.faculty_fte;
        r.p_per_fac = p / r.faculty_fte;
        if (r.fc > 0.0) r.mean_ref_len = ic / r.fc;
        table.rows.push_back(std::move(r));
    }
    return table;
}

inline const std::vector<std::string>& indicator_keys() {
    static const std::vector<std::string> keys = {
        "fac",        "p",          "ic",          "fc",        "ic_per_p",
        "fc_per_p",   "ic_per_fac", "fc_per_fac",  "p_per_fac", "mean_ref_len"};
    return keys;
}

inline std::optional<double> indicator_value(const indicator_row& r, std::string_view key) {
    if (key == "fac") return r.faculty_fte;
    if (key == "p") return static_cast<double>(r.publications);
    if (key == "ic") return static_cast<double>(r.ic);
    if (key == "fc") return r.fc;
    if (key == "ic_per_p") return r.ic_per_p;
    if (key == "fc_per_p") return r.fc_per_p_x100;
    if (key == "ic_per_fac") return r.ic_per_fac;
    if (key == "fc_per_fac") return r.fc_per_fac_x100;
    if (key == "p_per_fac") return r.p_per_fac;
    if (key == "mean_ref_len") return r.mean_ref_len;
    std::string valid;
    for (const auto& k : indicator_keys()) valid += (valid.empty() ? "" : ", ") + k;
    throw indicator_error("unknown indicator key '" + std::string(key) + "' (valid: " + valid +
                          ")");
}

enum class rank_direction { descending, ascending };

struct ranking {
    std::string key;
    std::vector<std::string> unit_ids;       // ordered best-first
    std::vector<int> display_ranks;          // competition ranking, ties share smaller rank
    std::vector<double> fractional_ranks;    // average ranks, sum to n(n+1)/2
};

// Orders units by one indicator column (descending by default).
inline ranking rank_units(const indicator_table& table, const std::string& key,
                          rank_direction direction = rank_direction::descending) {
    std::vector<double> values;
    values.reserve(table.rows.size());
    for (const auto& r : table.rows) {
        const auto v = indicator_value(r, key);
        if (!v)
            throw indicator_error("unit '" + r.unit_id + "' has no value for '" + key + "'");
        values.push_back(*v);
    }
    std::vector<std::size_t> idx(values.size());
    std::iota(idx.begin(), idx.end(), 0);
    std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
        return direction == rank_direction::descending ? values[a] > values[b]
                                                       : values[a] < values[b];
    });
    ranking out;
    out.key = key;
    out.unit_ids.resize(idx.size());
    out.display_ranks.resize(idx.size());
    out.fractional_ranks.resize(idx.size());
    std::size_t i = 0;
    while (i < idx.size()) {
        std::size_t j = i;
        while (j + 1 < idx.size() && values[idx[j + 1]] == values[idx[i]]) ++j;
        const double frac = 0.5 * (static_cast<double>(i + 1) + static_cast<double>(j + 1));
        for (std::size_t t = i; t <= j; ++t) {
            out.unit_ids[t] = table.rows[idx[t]].unit_id;
            out.display_ranks[t] = static_cast<int>(i + 1);
            out.fractional_ranks[t] = frac;
        }
        i = j + 1;
    }
    return out;
}

}  // namespace fraccite
