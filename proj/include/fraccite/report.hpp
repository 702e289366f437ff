#pragma once

// Markdown report rendering. The renderer consumes a report_source that
// both the pipeline (in memory) and the report regeneration path (from
// artifact files) can build, so regenerated reports are byte-identical
// to the originals.

#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "fraccite/format.hpp"
#include "fraccite/grouping.hpp"
#include "fraccite/indicators.hpp"
#include "fraccite/stats.hpp"

namespace fraccite {

struct report_source {
    std::string digest;
    std::vector<indicator_row> indicators;
    // Pre-formatted Spearman matrix cells; empty keys mean the
    // correlation stage did not run (fewer than three units).
    std::vector<std::string> correlation_keys;
    std::vector<std::vector<std::string>> correlation_cells;
    // Ordered (I, J) comparisons, every ordered pair once; empty means
    // the comparison stage did not run.
    std::vector<pairwise_comparison> ordered_comparisons;
    std::string method;
    double alpha = 0.05;
};

namespace detail {

inline std::string join_group(const std::vector<std::string>& members) {
    std::string out = "{";
    for (std::size_t i = 0; i < members.size(); ++i) {
        if (i) out += ", ";
        out += members[i];
    }
    return out + "}";
}

}  // namespace detail

inline std::string render_report(const report_source& src) {
    std::ostringstream md;
    md << "# Citation impact report\n\n";
    md << "<!-- config=" << src.digest << " -->\n\n";

    md << "## Size and impact\n\n";
    md << "| unit | faculty | p | ic | ic/p | ic/fac |\n";
    md << "|---|---:|---:|---:|---:|---:|\n";
    for (const auto& r : src.indicators) {
        md << "| " << r.unit_id << " | " << format_double(r.faculty_fte) << " | "
           << r.publications << " | " << r.ic << " | " << format_fixed(r.ic_per_p, 3) << " | "
           << format_fixed(r.ic_per_fac, 3) << " |\n";
    }
    md << "\n";

    md << "## Citation measures\n\n";
    md << "| unit | ic | fc | ic/p | 100*fc/p | ic/fac | 100*fc/fac | p/fac | mean ref len |\n";
    md << "|---|---:|---:|---:|---:|---:|---:|---:|---:|\n";
    for (const auto& r : src.indicators) {
        md << "| " << r.unit_id << " | " << r.ic << " | " << format_fixed(r.fc, 2) << " | "
           << format_fixed(r.ic_per_p, 2) << " | " << format_fixed(r.fc_per_p_x100, 2) << " | "
           << format_fixed(r.ic_per_fac, 2) << " | " << format_fixed(r.fc_per_fac_x100, 2)
           << " | " << format_fixed(r.p_per_fac, 2) << " | "
           << (r.mean_ref_len ? format_fixed(*r.mean_ref_len, 1) : std::string("-")) << " |\n";
    }
    md << "\n";

    md << "## Spearman rank correlations\n\n";
    if (src.correlation_keys.empty()) {
        md << "Omitted: rank correlations need at least three units.\n\n";
    } else {
        md << "|  |";
        for (std::size_t j = 1; j < src.correlation_keys.size(); ++j)
            md << ' ' << src.correlation_keys[j] << " |";
        md << "\n|---|";
        for (std::size_t j = 1; j < src.correlation_keys.size(); ++j) md << "---:|";
        md << "\n";
        for (std::size_t i = 0; i + 1 < src.correlation_keys.size(); ++i) {
            md << "| " << src.correlation_keys[i] << " |";
            for (std::size_t j = 1; j < src.correlation_keys.size(); ++j)
                md << ' ' << src.correlation_cells[i][j] << " |";
            md << "\n";
        }
        md << "\n(**) significant at the 0.01 level, (*) at the 0.05 level (2-tailed).\n\n";
    }

    md << "## Pairwise comparisons\n\n";
    if (src.ordered_comparisons.empty()) {
        md << "Omitted: comparisons need at least two units with two or more citation "
              "events each.\n";
        return md.str();
    }
    md << "Method: " << src.method << ", alpha = " << format_double(src.alpha) << ".\n\n";
    md << "| I | J | mean difference (I-J) | std. error | CI lower | CI upper |  |\n";
    md << "|---|---|---:|---:|---:|---:|---|\n";
    for (const auto& c : src.ordered_comparisons) {
        md << "| " << c.unit_i << " | " << c.unit_j << " | "
           << format_bare_fixed(c.mean_diff, 9) << " | " << format_bare_fixed(c.std_error, 9)
           << " | " << format_bare_fixed(c.ci_low, 8) << " | "
           << format_bare_fixed(c.ci_high, 8) << " | " << (c.significant ? "*" : "") << " |\n";
    }
    md << "\n\\* the mean difference is significant at the " << format_double(src.alpha)
       << " level.\n\n";

    // Rebuild the similarity structure from the comparison flags; this
    // is deterministic, so regenerated reports match the originals.
    posthoc_result posthoc;
    posthoc.alpha = src.alpha;
    posthoc.method = src.method == posthoc_method_name(posthoc_method::dunnett_c)
                         ? posthoc_method::dunnett_c
                         : posthoc_method::tukey_kramer;
    for (const auto& c : src.ordered_comparisons)
        if (c.unit_i < c.unit_j) posthoc.comparisons.push_back(c);
    const similarity_graph graph = build_similarity_graph(posthoc);
    const auto components = connected_components(graph);
    const auto groups = maximal_cliques(graph);

    md << "## Homogeneous groups\n\n";
    md << "Components: ";
    for (std::size_t i = 0; i < components.size(); ++i)
        md << (i ? "; " : "") << detail::join_group(components[i]);
    md << "\n\nGroups (maximal cliques): ";
    for (std::size_t i = 0; i < groups.size(); ++i)
        md << (i ? "; " : "") << detail::join_group(groups[i]);
    md << "\n\nUnits inside one group do not differ significantly in mean fractional "
          "citation impact at alpha = "
       << format_double(src.alpha) << ".\n";
    return md.str();
}

}  // namespace fraccite
