#pragma once

// Pipeline orchestration: ingest -> count -> indicators -> compare ->
// graph -> report, driven by a reproducible configuration. Identical
// inputs and configuration produce byte-identical artifact files; every
// artifact header embeds the configuration digest.

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "fraccite/bibdata.hpp"
#include "fraccite/counting.hpp"
#include "fraccite/format.hpp"
#include "fraccite/grouping.hpp"
#include "fraccite/indicators.hpp"
#include "fraccite/report.hpp"
#include "fraccite/stats.hpp"

namespace fraccite {

struct pipeline_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

enum class posthoc_choice { automatic, tukey, dunnett_c };
enum class graph_format { pajek, dot, both };

struct run_config {
    year_range pub_window{2005, 2007};
    year_range cite_window{2009, 2009};
    double alpha = 0.05;
    posthoc_choice posthoc = posthoc_choice::automatic;
    bool include_self_citations = true;
    graph_format format = graph_format::both;
    std::string registry_path;
    std::vector<std::string> input_paths;
    std::string out_dir = ".";
    std::string doctype_map_path;  // optional override of the default table

    void validate() const {
        if (pub_window.empty() || cite_window.empty())
            throw pipeline_error("config: year windows must be non-empty");
        if (!(alpha > 0.0 && alpha < 1.0))
            throw pipeline_error("config: alpha must be in (0,1)");
    }
};

// Digest over the semantic configuration (not file paths, which vary by
// machine and would break reproducible artifacts).
inline std::string config_digest(const run_config& cfg) {
    std::ostringstream canon;
    canon << "pub_window=" << cfg.pub_window.first << ':' << cfg.pub_window.last << '\n'
          << "cite_window=" << cfg.cite_window.first << ':' << cfg.cite_window.last << '\n'
          << "alpha=" << format_double(cfg.alpha) << '\n'
          << "posthoc="
          << (cfg.posthoc == posthoc_choice::automatic
                  ? "auto"
                  : cfg.posthoc == posthoc_choice::tukey ? "tukey" : "dunnett-c")
          << '\n'
          << "include_self_citations=" << (cfg.include_self_citations ? "true" : "false") << '\n'
          << "format="
          << (cfg.format == graph_format::pajek
                  ? "pajek"
                  : cfg.format == graph_format::dot ? "dot" : "both")
          << '\n';
    return to_hex(fnv1a(canon.str()));
}

struct pipeline_summary {
    filter_stats filters;
    link_stats links;
    event_stats events;
    std::size_t units_compared = 0;
    std::optional<levene_result> levene;
    std::optional<anova_result> anova;
    std::optional<kruskal_result> kruskal;
};

struct correlation_matrix {
    std::vector<std::string> keys;
    // cells[i][j] for j > i; nullopt where a column was constant.
    std::vector<std::vector<std::optional<correlation_result>>> cells;
};

struct pipeline_result {
    corpus corp;
    std::vector<unit_counts> counts;
    indicator_table indicators;
    std::optional<correlation_matrix> correlations;
    std::optional<posthoc_result> posthoc;
    std::optional<similarity_graph> graph;
    std::vector<homogeneous_group> groups;
    pipeline_summary summary;
};

namespace detail {

inline const std::vector<std::string>& correlation_measure_keys() {
    static const std::vector<std::string> keys = {"fac",        "p",          "ic",
                                                  "fc",         "ic_per_p",   "fc_per_p",
                                                  "ic_per_fac", "fc_per_fac", "p_per_fac"};
    return keys;
}

inline correlation_matrix correlate_indicators(const indicator_table& table) {
    correlation_matrix m;
    m.keys = correlation_measure_keys();
    std::vector<std::vector<double>> columns;
    for (const auto& key : m.keys) {
        std::vector<double> col;
        for (const auto& r : table.rows) col.push_back(*indicator_value(r, key));
        columns.push_back(std::move(col));
    }
    m.cells.resize(m.keys.size());
    for (std::size_t i = 0; i < m.keys.size(); ++i) {
        m.cells[i].resize(m.keys.size());
        for (std::size_t j = i + 1; j < m.keys.size(); ++j) {
            try {
                m.cells[i][j] = spearman_rho(columns[i], columns[j]);
            } catch (const constant_input_error&) {
                m.cells[i][j] = std::nullopt;
            }
        }
    }
    return m;
}

}  // namespace detail

// Runs every stage on an in-memory corpus. Stages whose preconditions
// the corpus cannot meet (fewer than two comparable units, fewer than
// three units for correlations) are skipped, not failed.
inline pipeline_result analyze(corpus corp, const run_config& cfg) {
    cfg.validate();
    pipeline_result res;
    res.corp = std::move(corp);

    res.corp.cited =
        filter_citable(std::move(res.corp.cited), cfg.pub_window, &res.summary.filters);
    if (res.corp.cited.empty())
        throw pipeline_error("no citable items in the configured publication window");

    const auto links = build_citation_links(res.corp, &res.summary.links);
    const auto events =
        enumerate_events(links, res.corp, cfg.include_self_citations, &res.summary.events);
    res.counts = count_by_unit(events, res.corp.registry);

    std::map<std::string, std::size_t> publications;
    for (const auto& unit : res.corp.registry.units()) publications[unit.unit_id] = 0;
    for (const auto& p : res.corp.cited)
        for (const auto& unit : p.unit_ids)
            if (res.corp.registry.contains(unit)) ++publications[unit];
    res.indicators = compute_indicator_table(res.counts, publications, res.corp.registry);

    if (res.indicators.rows.size() >= 3)
        res.correlations = detail::correlate_indicators(res.indicators);

    auto dists = distributions(events);
    std::vector<group_sample> groups;
    for (const auto& unit : res.corp.registry.units()) {
        const auto it = dists.find(unit.unit_id);
        if (it != dists.end() && it->second.observations.size() >= 2)
            groups.push_back({unit.unit_id, it->second.observations});
    }
    res.summary.units_compared = groups.size();
    if (groups.size() >= 2) {
        try {
            res.summary.levene = levene_test(groups);
        } catch (const degenerate_variance_error&) {
        }
        try {
            res.summary.anova = oneway_anova(groups);
        } catch (const no_variation_error&) {
        }
        res.summary.kruskal = kruskal_wallis(groups);
        switch (cfg.posthoc) {
            case posthoc_choice::automatic:
                res.posthoc = select_posthoc(groups, cfg.alpha);
                break;
            case posthoc_choice::tukey:
                res.posthoc = run_posthoc(groups, cfg.alpha, posthoc_method::tukey_kramer);
                break;
            case posthoc_choice::dunnett_c:
                res.posthoc = run_posthoc(groups, cfg.alpha, posthoc_method::dunnett_c);
                break;
        }
        res.graph = build_similarity_graph(*res.posthoc);
        res.groups = maximal_cliques(*res.graph);
    }
    return res;
}

// ---------------------------------------------------------------------------
// Input loading

inline corpus load_corpus(const run_config& cfg) {
    if (cfg.registry_path.empty()) throw pipeline_error("config: --registry is required");
    std::ifstream reg(cfg.registry_path);
    if (!reg) throw pipeline_error("cannot open registry file '" + cfg.registry_path + "'");
    corpus c;
    c.registry = load_unit_registry(reg);
    c.pub_window = cfg.pub_window;
    c.cite_window = cfg.cite_window;

    doctype_table table = default_doctype_table();
    if (!cfg.doctype_map_path.empty()) {
        std::ifstream dt(cfg.doctype_map_path);
        if (!dt)
            throw pipeline_error("cannot open doctype map '" + cfg.doctype_map_path + "'");
        table = load_doctype_table(dt);
    }

    if (cfg.input_paths.empty()) throw pipeline_error("config: no input files given");
    std::set<std::string> seen_ids;
    for (const auto& path : cfg.input_paths) {
        std::ifstream in(path);
        if (!in) throw pipeline_error("cannot open input file '" + path + "'");
        corpus_fragment frag = parse_canonical(in, table);
        for (const auto& p : frag.cited)
            if (!seen_ids.insert(p.id).second)
                throw parse_error("duplicate id '" + p.id + "' across input files");
        for (const auto& p : frag.citing)
            if (!seen_ids.insert(p.id).second)
                throw parse_error("duplicate id '" + p.id + "' across input files");
        std::move(frag.cited.begin(), frag.cited.end(), std::back_inserter(c.cited));
        std::move(frag.citing.begin(), frag.citing.end(), std::back_inserter(c.citing));
    }
    for (const auto& p : c.cited)
        for (const auto& u : p.unit_ids)
            if (!c.registry.contains(u))
                throw pipeline_error("cited paper '" + p.id + "' names unknown unit '" + u +
                                     "'");
    return c;
}

// ---------------------------------------------------------------------------
// Artifact writing

namespace detail {

inline std::vector<pairwise_comparison> ordered_comparisons(const posthoc_result& posthoc) {
    std::map<std::pair<std::string, std::string>, pairwise_comparison> by_pair;
    std::vector<std::string> order;
    for (const auto& c : posthoc.comparisons) {
        if (std::find(order.begin(), order.end(), c.unit_i) == order.end())
            order.push_back(c.unit_i);
        if (std::find(order.begin(), order.end(), c.unit_j) == order.end())
            order.push_back(c.unit_j);
        by_pair[{c.unit_i, c.unit_j}] = c;
        by_pair[{c.unit_j, c.unit_i}] = c.reversed();
    }
    std::vector<pairwise_comparison> out;
    for (const auto& i : order)
        for (const auto& j : order)
            if (i != j) out.push_back(by_pair.at({i, j}));
    return out;
}

inline std::string format_correlation_cell(const std::optional<correlation_result>& cell) {
    if (!cell) return "na";
    std::string s = format_bare_fixed(cell->rho, 3);
    const int stars = significance_stars(cell->p_value);
    if (stars == 2) s += "(**)";
    else if (stars == 1) s += "(*)";
    return s;
}

class artifact_writer {
public:
    explicit artifact_writer(std::filesystem::path dir) : dir_(std::move(dir)) {
        std::filesystem::create_directories(dir_);
    }

    void write(const std::string& name, const std::string& content) {
        const auto path = dir_ / name;
        std::ofstream out(path, std::ios::binary);
        if (!out) throw pipeline_error("cannot write artifact '" + path.string() + "'");
        out << content;
        out.close();
        if (!out) throw pipeline_error("failed writing artifact '" + path.string() + "'");
        written_.push_back(path);
    }

    // Partial outputs are removed when a stage fails mid-run.
    void discard_written() {
        std::error_code ec;
        for (const auto& p : written_) std::filesystem::remove(p, ec);
        written_.clear();
    }

private:
    std::filesystem::path dir_;
    std::vector<std::filesystem::path> written_;
};

}  // namespace detail

inline std::string render_counts_csv(const pipeline_result& res, const std::string& digest) {
    std::ostringstream out;
    out << "# config=" << digest << "\n";
    out << "unit_id,ic,fc\n";
    for (const auto& c : res.counts)
        out << csv_cell(c.unit_id) << ',' << c.ic << ',' << format_double(c.fc) << '\n';
    return out.str();
}

inline std::string render_indicators_csv(const pipeline_result& res,
                                         const std::string& digest) {
    std::ostringstream out;
    out << "# config=" << digest << "\n";
    out << "unit_id,fac,p,ic,fc,ic_per_p,fc_per_p_x100,ic_per_fac,fc_per_fac_x100,p_per_fac,"
           "mean_ref_len\n";
    for (const auto& r : res.indicators.rows) {
        out << csv_cell(r.unit_id) << ',' << format_double(r.faculty_fte) << ','
            << r.publications << ',' << r.ic << ',' << format_double(r.fc) << ','
            << format_double(r.ic_per_p) << ',' << format_double(r.fc_per_p_x100) << ','
            << format_double(r.ic_per_fac) << ',' << format_double(r.fc_per_fac_x100) << ','
            << format_double(r.p_per_fac) << ','
            << (r.mean_ref_len ? format_double(*r.mean_ref_len) : std::string()) << '\n';
    }
    return out.str();
}

inline std::string render_correlations_csv(const correlation_matrix& m,
                                           const std::string& digest) {
    std::ostringstream out;
    out << "# config=" << digest << "\n";
    out << "measure";
    for (const auto& key : m.keys) out << ',' << key;
    out << '\n';
    for (std::size_t i = 0; i < m.keys.size(); ++i) {
        out << m.keys[i];
        for (std::size_t j = 0; j < m.keys.size(); ++j) {
            out << ',';
            if (j > i) out << detail::format_correlation_cell(m.cells[i][j]);
        }
        out << '\n';
    }
    return out.str();
}

inline std::string render_comparisons_csv(const posthoc_result& posthoc,
                                          const std::string& digest) {
    std::ostringstream out;
    out << "# config=" << digest << "\n";
    out << "unit_i,unit_j,mean_diff,std_error,ci_low,ci_high,significant,method,alpha\n";
    for (const auto& c : detail::ordered_comparisons(posthoc)) {
        out << csv_cell(c.unit_i) << ',' << csv_cell(c.unit_j) << ','
            << format_double(c.mean_diff) << ',' << format_double(c.std_error) << ','
            << format_double(c.ci_low) << ',' << format_double(c.ci_high) << ','
            << (c.significant ? "*" : "") << ',' << posthoc_method_name(posthoc.method) << ','
            << format_double(posthoc.alpha) << '\n';
    }
    return out.str();
}

inline report_source build_report_source(const pipeline_result& res,
                                         const std::string& digest) {
    report_source src;
    src.digest = digest;
    src.indicators = res.indicators.rows;
    if (res.correlations) {
        src.correlation_keys = res.correlations->keys;
        src.correlation_cells.resize(src.correlation_keys.size());
        for (std::size_t i = 0; i < src.correlation_keys.size(); ++i) {
            src.correlation_cells[i].resize(src.correlation_keys.size());
            for (std::size_t j = i + 1; j < src.correlation_keys.size(); ++j)
                src.correlation_cells[i][j] =
                    detail::format_correlation_cell(res.correlations->cells[i][j]);
        }
    }
    if (res.posthoc) {
        src.ordered_comparisons = detail::ordered_comparisons(*res.posthoc);
        src.method = posthoc_method_name(res.posthoc->method);
        src.alpha = res.posthoc->alpha;
    }
    return src;
}

// Writes the artifact set for a full run into cfg.out_dir. On error,
// files written so far are removed before the exception propagates.
inline void write_artifacts(const pipeline_result& res, const run_config& cfg) {
    const std::string digest = config_digest(cfg);
    detail::artifact_writer writer{cfg.out_dir};
    try {
        writer.write("counts.csv", render_counts_csv(res, digest));
        writer.write("indicators.csv", render_indicators_csv(res, digest));
        if (res.correlations)
            writer.write("correlations.csv", render_correlations_csv(*res.correlations, digest));
        if (res.posthoc)
            writer.write("comparisons.csv", render_comparisons_csv(*res.posthoc, digest));
        if (res.graph) {
            if (cfg.format != graph_format::dot)
                writer.write("graph.net", "% config=" + digest + "\n" + export_pajek(*res.graph));
            if (cfg.format != graph_format::pajek)
                writer.write("graph.gv",
                             "// config=" + digest + "\n" + export_dot(*res.graph, res.groups));
        }
        writer.write("report.md", render_report(build_report_source(res, digest)));
    } catch (...) {
        writer.discard_written();
        throw;
    }
}

// Full pipeline from files on disk.
inline pipeline_result run_pipeline(const run_config& cfg) {
    pipeline_result res = analyze(load_corpus(cfg), cfg);
    write_artifacts(res, cfg);
    return res;
}

// ---------------------------------------------------------------------------
// Report regeneration from artifact files

namespace detail {

inline std::vector<std::string> read_artifact_lines(const std::filesystem::path& path,
                                                    std::string* digest) {
    std::ifstream in(path);
    if (!in) throw pipeline_error("missing artifact file '" + path.string() + "'");
    std::vector<std::string> lines;
    std::string line;
    bool first = true;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (first && line.rfind("# config=", 0) == 0) {
            if (digest) *digest = line.substr(9);
            first = false;
            continue;
        }
        first = false;
        lines.push_back(line);
    }
    return lines;
}

}  // namespace detail

// Rebuilds the report source from the artifact files in dir. The
// producing run's digest is carried through, so the regenerated report
// is byte-identical to the one the run wrote.
inline report_source load_report_source(const std::string& dir) {
    namespace fs = std::filesystem;
    report_source src;
    const auto ind_lines =
        detail::read_artifact_lines(fs::path(dir) / "indicators.csv", &src.digest);
    for (std::size_t i = 1; i < ind_lines.size(); ++i) {
        if (ind_lines[i].empty()) continue;
        const auto cells = detail::split_csv_line(ind_lines[i], i + 1);
        if (cells.size() < 11)
            throw pipeline_error("indicators.csv: malformed row " + std::to_string(i + 1));
        indicator_row r;
        r.unit_id = cells[0];
        r.faculty_fte = std::stod(cells[1]);
        r.publications = static_cast<std::size_t>(std::stoull(cells[2]));
        r.ic = static_cast<std::size_t>(std::stoull(cells[3]));
        r.fc = std::stod(cells[4]);
        r.ic_per_p = std::stod(cells[5]);
        r.fc_per_p_x100 = std::stod(cells[6]);
        r.ic_per_fac = std::stod(cells[7]);
        r.fc_per_fac_x100 = std::stod(cells[8]);
        r.p_per_fac = std::stod(cells[9]);
        if (!cells[10].empty()) r.mean_ref_len = std::stod(cells[10]);
        src.indicators.push_back(std::move(r));
    }

    if (fs::exists(fs::path(dir) / "correlations.csv")) {
        const auto lines =
            detail::read_artifact_lines(fs::path(dir) / "correlations.csv", nullptr);
        if (!lines.empty()) {
            const auto header = detail::split_csv_line(lines[0], 1);
            src.correlation_keys.assign(header.begin() + 1, header.end());
            src.correlation_cells.assign(
                src.correlation_keys.size(),
                std::vector<std::string>(src.correlation_keys.size()));
            for (std::size_t i = 1; i < lines.size(); ++i) {
                if (lines[i].empty()) continue;
                const auto cells = detail::split_csv_line(lines[i], i + 1);
                for (std::size_t j = 1; j < cells.size(); ++j)
                    if (!cells[j].empty()) src.correlation_cells[i - 1][j - 1] = cells[j];
            }
        }
    }

    if (fs::exists(fs::path(dir) / "comparisons.csv")) {
        const auto lines =
            detail::read_artifact_lines(fs::path(dir) / "comparisons.csv", nullptr);
        for (std::size_t i = 1; i < lines.size(); ++i) {
            if (lines[i].empty()) continue;
            const auto cells = detail::split_csv_line(lines[i], i + 1);
            if (cells.size() < 9)
                throw pipeline_error("comparisons.csv: malformed row " + std::to_string(i + 1));
            pairwise_comparison c;
            c.unit_i = cells[0];
            c.unit_j = cells[1];
            c.mean_diff = std::stod(cells[2]);
            c.std_error = std::stod(cells[3]);
            c.ci_low = std::stod(cells[4]);
            c.ci_high = std::stod(cells[5]);
            c.significant = cells[6] == "*";
            src.method = cells[7];
            c.alpha = src.alpha = std::stod(cells[8]);
            src.ordered_comparisons.push_back(std::move(c));
        }
    }
    return src;
}

}  // namespace fraccite
