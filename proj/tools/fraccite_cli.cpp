// Command-line front end: ingest, count, indicators, compare, graph,
// report, and run (all stages) over canonical or tagged-field inputs.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "fraccite/bibdata.hpp"
#include "fraccite/format.hpp"
#include "fraccite/pipeline.hpp"
#include "fraccite/report.hpp"

namespace {

fraccite::year_range parse_window(const std::string& spec) {
    const auto colon = spec.find(':');
    try {
        if (colon == std::string::npos) {
            const int y = std::stoi(spec);
            return {y, y};
        }
        return {std::stoi(spec.substr(0, colon)), std::stoi(spec.substr(colon + 1))};
    } catch (const std::exception&) {
        throw CLI::ValidationError("expected a year window like 2005:2007, got '" + spec + "'");
    }
}

// Converts a tagged-field export into canonical records. Cited-role
// records resolve units from their addresses; citing-role records take
// NR and, when present, cited ids from CR lines.
fraccite::corpus_fragment convert_wos(const fraccite::wos_parse_result& parsed,
                                      const std::string& role,
                                      const fraccite::unit_registry& registry,
                                      const fraccite::doctype_table& table) {
    fraccite::corpus_fragment frag;
    for (const auto& rec : parsed.records) {
        if (rec.id.empty())
            throw fraccite::field_error("record @" + std::to_string(rec.offset) +
                                        ": missing UT id");
        if (!rec.year)
            throw fraccite::field_error("record '" + rec.id + "': missing PY year");
        if (role == "cited") {
            fraccite::cited_paper p;
            p.id = rec.id;
            p.year = *rec.year;
            p.doctype = table.normalize(rec.doctype_label);
            p.unit_ids = fraccite::resolve_units(rec.addresses, registry);
            frag.cited.push_back(std::move(p));
        } else {
            fraccite::citing_paper p;
            p.id = rec.id;
            p.year = *rec.year;
            p.doctype = table.normalize(rec.doctype_label);
            if (!rec.ref_count)
                throw fraccite::field_error("record '" + rec.id + "': missing NR");
            p.ref_count = *rec.ref_count;
            const auto cr = rec.extras.find("CR");
            if (cr != rec.extras.end()) p.cited_ids = cr->second;
            std::sort(p.cited_ids.begin(), p.cited_ids.end());
            p.cited_ids.erase(std::unique(p.cited_ids.begin(), p.cited_ids.end()),
                              p.cited_ids.end());
            frag.citing.push_back(std::move(p));
        }
    }
    return frag;
}

void print_summary(const fraccite::pipeline_result& res) {
    const auto& s = res.summary;
    std::printf("citable items kept: %zu (dropped %zu by doctype, %zu by year)\n",
                s.filters.kept, s.filters.dropped_doctype, s.filters.dropped_year);
    std::printf("links: %zu dangling references dropped, %zu citing records out of window\n",
                s.links.dangling_dropped, s.links.citing_out_of_window);
    std::printf("events: %zu zero-reference citing papers skipped, %zu self-citations dropped\n",
                s.events.zero_ref_citing_skipped, s.events.self_citation_dropped);
    if (s.levene)
        std::printf("levene: W = %.4f, p = %s\n", s.levene->w,
                    fraccite::format_pvalue(s.levene->p_value).c_str());
    if (s.anova)
        std::printf("anova: F(%g, %g) = %.4f, p = %s\n", s.anova->df_between,
                    s.anova->df_within, s.anova->f,
                    fraccite::format_pvalue(s.anova->p_value).c_str());
    if (s.kruskal)
        std::printf("kruskal-wallis: H = %.4f, df = %g, p = %s\n", s.kruskal->h, s.kruskal->df,
                    fraccite::format_pvalue(s.kruskal->p_value).c_str());
    if (res.posthoc)
        std::printf("posthoc: %s at alpha = %s\n",
                    fraccite::posthoc_method_name(res.posthoc->method),
                    fraccite::format_double(res.posthoc->alpha).c_str());
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"fractionally counted citation impact analysis"};
    app.require_subcommand(1);
    app.fallthrough();
    app.set_config("--config", "", "key=value configuration file; flags override it");

    std::string registry_path, out_dir = ".", doctype_map;
    std::string pub_window = "2005:2007", cite_window = "2009:2009";
    std::string posthoc = "auto", format = "both";
    double alpha = 0.05;
    bool exclude_self = false;
    std::vector<std::string> inputs;

    app.add_option("--registry", registry_path, "unit registry CSV");
    app.add_option("--pub-window", pub_window, "publication years, Y1:Y2");
    app.add_option("--cite-window", cite_window, "citation years, Y1:Y2");
    app.add_option("--alpha", alpha, "significance level")->check(CLI::Range(1e-9, 1.0));
    app.add_option("--posthoc", posthoc, "post-hoc test")
        ->check(CLI::IsMember({"auto", "tukey", "dunnett-c"}));
    app.add_flag("--exclude-self-citations", exclude_self,
                 "drop events whose citing paper resolves to the cited unit");
    app.add_option("--out", out_dir, "output directory");
    app.add_option("--format", format, "graph export format")
        ->check(CLI::IsMember({"pajek", "dot", "both"}));
    app.add_option("--doctype-map", doctype_map, "doctype normalization table CSV");
    app.add_option("inputs", inputs, "input record files");

    auto* ingest = app.add_subcommand("ingest", "convert inputs to a canonical corpus file");
    std::string input_format = "canonical", role = "cited";
    ingest->add_option("--input-format", input_format, "input file format")
        ->check(CLI::IsMember({"canonical", "wos"}));
    ingest->add_option("--role", role, "role of tagged-export records")
        ->check(CLI::IsMember({"cited", "citing"}));

    auto* count = app.add_subcommand("count", "write the per-unit counts table");
    auto* indicators = app.add_subcommand("indicators", "write indicator and correlation tables");
    auto* compare = app.add_subcommand("compare", "write the pairwise comparison table");
    auto* graph = app.add_subcommand("graph", "write the similarity network files");
    auto* report = app.add_subcommand("report", "regenerate report.md from artifacts in --out");
    auto* run = app.add_subcommand("run", "run every stage");

    CLI11_PARSE(app, argc, argv);

    fraccite::run_config cfg;
    try {
        cfg.pub_window = parse_window(pub_window);
        cfg.cite_window = parse_window(cite_window);
        cfg.alpha = alpha;
        cfg.posthoc = posthoc == "tukey"       ? fraccite::posthoc_choice::tukey
                      : posthoc == "dunnett-c" ? fraccite::posthoc_choice::dunnett_c
                                               : fraccite::posthoc_choice::automatic;
        cfg.include_self_citations = !exclude_self;
        cfg.format = format == "pajek" ? fraccite::graph_format::pajek
                     : format == "dot" ? fraccite::graph_format::dot
                                       : fraccite::graph_format::both;
        cfg.registry_path = registry_path;
        cfg.input_paths = inputs;
        cfg.out_dir = out_dir;
        cfg.doctype_map_path = doctype_map;

        const std::string digest = fraccite::config_digest(cfg);

        if (report->parsed()) {
            const auto src = fraccite::load_report_source(cfg.out_dir);
            std::ofstream out(std::filesystem::path(cfg.out_dir) / "report.md",
                              std::ios::binary);
            out << fraccite::render_report(src);
            return 0;
        }

        if (ingest->parsed()) {
            fraccite::doctype_table table = fraccite::default_doctype_table();
            if (!doctype_map.empty()) {
                std::ifstream dt(doctype_map);
                if (!dt) throw fraccite::pipeline_error("cannot open doctype map");
                table = fraccite::load_doctype_table(dt);
            }
            fraccite::corpus_fragment merged;
            for (const auto& path : inputs) {
                std::ifstream in(path, std::ios::binary);
                if (!in)
                    throw fraccite::pipeline_error("cannot open input file '" + path + "'");
                fraccite::corpus_fragment frag;
                if (input_format == "wos") {
                    if (registry_path.empty())
                        throw fraccite::pipeline_error("--registry is required for wos input");
                    std::ifstream reg(registry_path);
                    if (!reg) throw fraccite::pipeline_error("cannot open registry file");
                    const auto registry = fraccite::load_unit_registry(reg);
                    const auto parsed = fraccite::parse_wos_tagged(in);
                    for (const auto& e : parsed.field_errors)
                        std::fprintf(stderr, "warning: %s: %s (%s)\n", e.record_id.c_str(),
                                     e.field.c_str(), e.message.c_str());
                    frag = convert_wos(parsed, role, registry, table);
                } else {
                    frag = fraccite::parse_canonical(in, table);
                }
                std::move(frag.cited.begin(), frag.cited.end(),
                          std::back_inserter(merged.cited));
                std::move(frag.citing.begin(), frag.citing.end(),
                          std::back_inserter(merged.citing));
            }
            std::filesystem::create_directories(cfg.out_dir);
            std::ofstream out(std::filesystem::path(cfg.out_dir) / "corpus.jsonl",
                              std::ios::binary);
            fraccite::serialize_canonical(merged, out);
            std::printf("ingested %zu cited and %zu citing records\n", merged.cited.size(),
                        merged.citing.size());
            return 0;
        }

        fraccite::pipeline_result res = fraccite::analyze(fraccite::load_corpus(cfg), cfg);

        if (run->parsed()) {
            fraccite::write_artifacts(res, cfg);
            print_summary(res);
            return 0;
        }

        fraccite::detail::artifact_writer writer{cfg.out_dir};
        if (count->parsed()) {
            writer.write("counts.csv", fraccite::render_counts_csv(res, digest));
        } else if (indicators->parsed()) {
            writer.write("indicators.csv", fraccite::render_indicators_csv(res, digest));
            if (res.correlations)
                writer.write("correlations.csv",
                             fraccite::render_correlations_csv(*res.correlations, digest));
        } else if (compare->parsed()) {
            if (!res.posthoc)
                throw fraccite::pipeline_error(
                    "comparisons need at least two units with two or more citation events");
            writer.write("comparisons.csv",
                         fraccite::render_comparisons_csv(*res.posthoc, digest));
            print_summary(res);
        } else if (graph->parsed()) {
            if (!res.graph)
                throw fraccite::pipeline_error(
                    "graph needs at least two units with two or more citation events");
            if (cfg.format != fraccite::graph_format::dot)
                writer.write("graph.net",
                             "% config=" + digest + "\n" + fraccite::export_pajek(*res.graph));
            if (cfg.format != fraccite::graph_format::pajek)
                writer.write("graph.gv", "// config=" + digest + "\n" +
                                             fraccite::export_dot(*res.graph, res.groups));
        }
        return 0;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
}
