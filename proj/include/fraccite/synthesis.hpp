#pragma once

// Synthetic corpora. The seven-university Korea benchmark reproduces the
// published per-unit totals (publications 2005-2007, citations 2009) so
// indicator and comparison outputs can be validated against known
// values; the random corpus generator produces arbitrary-scale inputs
// for property and performance tests. Both are fully deterministic.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <map>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "fraccite/bibdata.hpp"

namespace fraccite {

struct benchmark_unit {
    const char* unit_id;
    double faculty_fte;
    std::size_t publications;  // p: cited papers attributed to the unit
    std::size_t ic;            // citation events received
    double fc;                 // fractional citation total
};

// Reference totals for the seven-university Korea benchmark.
inline const std::array<benchmark_unit, 7>& korea_benchmark_units() {
    static const std::array<benchmark_unit, 7> units = {{
        {"POSTECH", 224.0, 2941, 6715, 212.90},
        {"SNU", 1733.0, 12814, 28709, 905.52},
        {"Yonsei", 1677.0, 6809, 13445, 439.74},
        {"Korea", 1246.0, 5911, 10682, 345.71},
        {"KAIST", 399.0, 4776, 8268, 289.01},
        {"SKK", 1118.0, 5239, 9063, 301.17},
        {"Hanyang", 1131.0, 4350, 6718, 234.67},
    }};
    return units;
}

inline unit_registry korea_benchmark_registry() {
    std::vector<unit_info> units;
    for (const auto& u : korea_benchmark_units()) {
        unit_info info;
        info.unit_id = u.unit_id;
        info.display_name = u.unit_id;
        info.address_patterns = {std::string(u.unit_id)};
        info.faculty_fte = u.faculty_fte;
        units.push_back(std::move(info));
    }
    return unit_registry(std::move(units));
}

namespace detail {

// Reference-list lengths whose inverse weights hit the unit's (ic, fc)
// targets: a two-point mixture NR in {10, 50} plus four greedily chosen
// fine-tuning lengths. |sum(1/NR) - fc| stays below 1e-5.
inline std::map<long, std::size_t> benchmark_ref_lengths(std::size_t ic, double fc) {
    constexpr std::size_t tails = 4;
    if (ic < tails + 2) throw std::invalid_argument("benchmark_ref_lengths: ic too small");
    const double body = static_cast<double>(ic - tails);
    long a = static_cast<long>(std::floor((fc - 0.02 * body) / 0.08));
    double residual = fc - 0.02 * body - 0.08 * static_cast<double>(a);
    if (residual < 0.004) {
        --a;
        residual += 0.08;
    }
    if (a < 0 || static_cast<std::size_t>(a) > ic - tails)
        throw std::invalid_argument("benchmark_ref_lengths: targets out of range");
    std::map<long, std::size_t> lengths;
    lengths[10] += static_cast<std::size_t>(a);
    lengths[50] += ic - tails - static_cast<std::size_t>(a);
    for (std::size_t s = 0; s < tails; ++s) {
        const double reserve = 1e-6 * static_cast<double>(tails - s - 1);
        const double want = residual - reserve;
        long n = 1000000;
        if (want > 1e-6) {
            n = static_cast<long>(std::ceil(1.0 / want));
            n = std::max(2L, std::min(1000000L, n));
        }
        lengths[n] += 1;
        residual -= 1.0 / static_cast<double>(n);
    }
    return lengths;
}

}  // namespace detail

// The bundled benchmark corpus: each unit holds its published paper
// count, and its citation events carry weights whose count and sum match
// the published ic/fc totals (fc to well within printing precision).
inline corpus make_benchmark_corpus() {
    corpus c;
    c.registry = korea_benchmark_registry();
    c.pub_window = {2005, 2007};
    c.cite_window = {2009, 2009};
    const char* doctype_cycle[] = {"Article", "Article", "Article", "Letter",
                                   "Article", "Review",  "Article", "Proceedings Paper"};
    for (const auto& u : korea_benchmark_units()) {
        const std::string unit = u.unit_id;
        for (std::size_t i = 0; i < u.publications; ++i) {
            cited_paper p;
            p.id = "P-" + unit + "-" + std::to_string(i);
            p.year = 2005 + static_cast<int>(i % 3);
            p.doctype = default_doctype_table().normalize(doctype_cycle[i % 8]);
            p.unit_ids = {unit};
            c.cited.push_back(std::move(p));
        }
        const auto lengths = detail::benchmark_ref_lengths(u.ic, u.fc);
        std::size_t pool = 0, serial = 0;
        for (const auto& [nr, events] : lengths) {
            std::size_t remaining = events;
            while (remaining > 0) {
                const std::size_t chunk =
                    std::min<std::size_t>(remaining, static_cast<std::size_t>(nr));
                citing_paper q;
                q.id = "C-" + unit + "-" + std::to_string(serial++);
                q.year = 2009;
                q.doctype = default_doctype_table().normalize("Article");
                q.ref_count = static_cast<int>(nr);
                for (std::size_t t = 0; t < chunk; ++t) {
                    q.cited_ids.push_back("P-" + unit + "-" +
                                          std::to_string((pool + t) % u.publications));
                }
                pool = (pool + chunk) % u.publications;
                std::sort(q.cited_ids.begin(), q.cited_ids.end());
                c.citing.push_back(std::move(q));
                remaining -= chunk;
            }
        }
    }
    return c;
}

namespace detail {

// Deterministic bounded draw; mt19937_64's output sequence is fully
// specified, so generated corpora are identical across platforms.
inline std::uint64_t draw(std::mt19937_64& rng, std::uint64_t bound) {
    return rng() % bound;
}

}  // namespace detail

// Random corpus for scale/property testing: n_units units, cited papers
// spread over the publication window, citing papers in the citation
// window with reference lists of 5..120 and 1..8 in-corpus references.
// A small fraction of dangling references and out-of-window citing
// records exercises the documented drop paths.
inline corpus make_random_corpus(std::size_t n_cited, std::size_t n_citing,
                                 std::size_t n_units, std::uint64_t seed) {
    if (n_units == 0 || n_cited == 0) throw std::invalid_argument("make_random_corpus: empty");
    corpus c;
    c.pub_window = {2005, 2007};
    c.cite_window = {2009, 2009};
    std::vector<unit_info> units;
    for (std::size_t u = 0; u < n_units; ++u) {
        unit_info info;
        info.unit_id = "U" + std::to_string(u);
        info.display_name = "Unit " + std::to_string(u);
        info.address_patterns = {"univ " + std::to_string(u)};
        info.faculty_fte = 100.0 + static_cast<double>(u) * 10.0;
        units.push_back(std::move(info));
    }
    c.registry = unit_registry(std::move(units));

    std::mt19937_64 rng(seed);
    c.cited.reserve(n_cited);
    for (std::size_t i = 0; i < n_cited; ++i) {
        cited_paper p;
        p.id = "R" + std::to_string(i);
        p.year = 2005 + static_cast<int>(detail::draw(rng, 3));
        p.doctype = default_doctype_table().normalize("Article");
        p.unit_ids = {"U" + std::to_string(detail::draw(rng, n_units))};
        if (detail::draw(rng, 10) == 0) {  // occasional co-affiliation
            std::string second = "U" + std::to_string(detail::draw(rng, n_units));
            if (second != p.unit_ids[0]) p.unit_ids.push_back(std::move(second));
        }
        std::sort(p.unit_ids.begin(), p.unit_ids.end());
        c.cited.push_back(std::move(p));
    }
    c.citing.reserve(n_citing);
    for (std::size_t j = 0; j < n_citing; ++j) {
        citing_paper q;
        q.id = "S" + std::to_string(j);
        q.year = detail::draw(rng, 50) == 0 ? 2008 : 2009;
        q.doctype = default_doctype_table().normalize("Article");
        q.ref_count = 5 + static_cast<int>(detail::draw(rng, 116));
        const std::size_t refs = 1 + detail::draw(rng, 8);
        for (std::size_t t = 0; t < refs; ++t) {
            if (detail::draw(rng, 100) == 0)
                q.cited_ids.push_back("EXT" + std::to_string(detail::draw(rng, 1000)));
            else
                q.cited_ids.push_back("R" + std::to_string(detail::draw(rng, n_cited)));
        }
        std::sort(q.cited_ids.begin(), q.cited_ids.end());
        q.cited_ids.erase(std::unique(q.cited_ids.begin(), q.cited_ids.end()),
                          q.cited_ids.end());
        c.citing.push_back(std::move(q));
    }
    return c;
}

}  // namespace fraccite
