#include "fraccite/pipeline.hpp"

#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>

#include "fraccite/synthesis.hpp"
#include "fixtures/korea7.hpp"
#include "testutil.hpp"

using namespace fraccite;
namespace fs = std::filesystem;

namespace {

run_config default_config(const std::string& out_dir) {
    run_config cfg;
    cfg.out_dir = out_dir;
    return cfg;
}

fs::path scratch(const std::string& name) {
    const fs::path dir = fs::temp_directory_path() / "fraccite_tests" / name;
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

const pipeline_result& benchmark_result() {
    static const pipeline_result res =
        analyze(make_benchmark_corpus(), default_config("unused"));
    return res;
}

}  // namespace

TEST(Pipeline, BenchmarkCountsHitPublishedTotals) {
    const auto& res = benchmark_result();
    ASSERT_EQ(res.counts.size(), 7u);
    for (std::size_t i = 0; i < res.counts.size(); ++i) {
        const auto& target = korea_benchmark_units()[i];
        EXPECT_EQ(res.counts[i].unit_id, target.unit_id);
        EXPECT_EQ(res.counts[i].ic, target.ic);
        EXPECT_NEAR(res.counts[i].fc, target.fc, 5e-3);
    }
    EXPECT_EQ(res.summary.filters.dropped_doctype, 0u);
    EXPECT_EQ(res.summary.links.dangling_dropped, 0u);
}

TEST(Pipeline, BenchmarkComparisonStageRuns) {
    const auto& res = benchmark_result();
    ASSERT_TRUE(res.posthoc.has_value());
    EXPECT_EQ(res.posthoc->comparisons.size(), 21u);
    ASSERT_TRUE(res.summary.kruskal.has_value());
    EXPECT_LT(res.summary.kruskal->p_value, 0.0005);  // prints as p = 0.000
    ASSERT_TRUE(res.summary.anova.has_value());
    EXPECT_GT(res.summary.anova->f, 1.0);
}

TEST(Pipeline, ArtifactsAreByteIdenticalAcrossRuns) {
    const auto dir1 = scratch("det1"), dir2 = scratch("det2");
    write_artifacts(benchmark_result(), default_config(dir1.string()));
    const auto res2 = analyze(make_benchmark_corpus(), default_config(dir2.string()));
    write_artifacts(res2, default_config(dir2.string()));
    std::size_t files = 0;
    for (const auto& entry : fs::directory_iterator(dir1)) {
        ++files;
        const auto name = entry.path().filename();
        EXPECT_EQ(testutil::read_file(entry.path()), testutil::read_file(dir2 / name))
            << name;
    }
    EXPECT_EQ(files, 7u);
}

TEST(Pipeline, ArtifactsMatchFrozenGoldens) {
    const auto dir = scratch("golden");
    write_artifacts(benchmark_result(), default_config(dir.string()));
    for (const char* name : {"counts.csv", "indicators.csv", "correlations.csv",
                             "comparisons.csv", "graph.net", "graph.gv", "report.md"}) {
        EXPECT_EQ(testutil::read_file(dir / name),
                  testutil::read_file(testutil::fixture_path(std::string("golden/run/") + name)))
            << name;
    }
}

TEST(Pipeline, EveryArtifactEmbedsTheConfigDigest) {
    const auto dir = scratch("digest");
    const auto cfg = default_config(dir.string());
    write_artifacts(benchmark_result(), cfg);
    const std::string digest = config_digest(cfg);
    for (const auto& entry : fs::directory_iterator(dir)) {
        const auto content = testutil::read_file(entry.path());
        EXPECT_NE(content.find("config=" + digest), std::string::npos)
            << entry.path().filename();
    }
}

TEST(Pipeline, ReportRegenerationIsIdempotent) {
    const auto dir = scratch("regen");
    write_artifacts(benchmark_result(), default_config(dir.string()));
    const std::string original = testutil::read_file(dir / "report.md");
    const auto src = load_report_source(dir.string());
    EXPECT_EQ(render_report(src), original);
    // write it back and regenerate once more
    {
        std::ofstream out(dir / "report.md", std::ios::binary);
        out << render_report(src);
    }
    EXPECT_EQ(render_report(load_report_source(dir.string())), original);
}

TEST(Pipeline, ReportRegenerationNamesMissingArtifact) {
    const auto dir = scratch("missing");
    try {
        load_report_source(dir.string());
        FAIL() << "expected pipeline_error";
    } catch (const pipeline_error& e) {
        EXPECT_NE(std::string(e.what()).find("indicators.csv"), std::string::npos);
    }
}

TEST(Pipeline, HigherAlphaNeverAddsEdges) {
    const corpus base = make_random_corpus(300, 400, 5, 7);
    auto cfg_low = default_config("unused");
    cfg_low.alpha = 0.05;
    auto cfg_high = cfg_low;
    cfg_high.alpha = 0.5;
    const auto res_low = analyze(base, cfg_low);
    const auto res_high = analyze(base, cfg_high);
    ASSERT_TRUE(res_low.graph && res_high.graph);
    for (const auto& e : res_high.graph->edges)
        EXPECT_TRUE(res_low.graph->has_edge(e.first, e.second))
            << e.first << "--" << e.second;
}

TEST(Pipeline, EmptyCorpusFailsWithNoCitableItems) {
    corpus c;
    c.registry = unit_registry({{"A", "A", 1.0, {"a"}}});
    c.pub_window = {2005, 2007};
    c.cite_window = {2009, 2009};
    try {
        analyze(c, default_config("unused"));
        FAIL() << "expected pipeline_error";
    } catch (const pipeline_error& e) {
        EXPECT_NE(std::string(e.what()).find("no citable items"), std::string::npos);
    }
}

TEST(Pipeline, SingleUnitSkipsComparisonsWithNote) {
    corpus c;
    c.registry = unit_registry({{"A", "A", 2.0, {"a"}}});
    c.pub_window = {2005, 2007};
    c.cite_window = {2009, 2009};
    const auto& table = default_doctype_table();
    c.cited = {{"P1", 2006, table.normalize("Article"), {"A"}},
               {"P2", 2006, table.normalize("Article"), {"A"}}};
    citing_paper citing;
    citing.id = "C1";
    citing.year = 2009;
    citing.doctype = table.normalize("Article");
    citing.ref_count = 4;
    citing.cited_ids = {"P1", "P2"};
    c.citing = {citing};
    const auto dir = scratch("single");
    const auto cfg = default_config(dir.string());
    const auto res = analyze(c, cfg);
    EXPECT_FALSE(res.posthoc.has_value());
    EXPECT_FALSE(res.correlations.has_value());
    write_artifacts(res, cfg);
    EXPECT_FALSE(fs::exists(dir / "comparisons.csv"));
    EXPECT_FALSE(fs::exists(dir / "graph.net"));
    const auto report = testutil::read_file(dir / "report.md");
    EXPECT_NE(report.find("Omitted"), std::string::npos);
}

TEST(Pipeline, SelfCitationFlagDropsMatchingEvents) {
    corpus c;
    c.registry = unit_registry({{"A", "A", 2.0, {"a"}}, {"B", "B", 2.0, {"b"}}});
    c.pub_window = {2005, 2007};
    c.cite_window = {2009, 2009};
    const auto& table = default_doctype_table();
    c.cited = {{"P1", 2006, table.normalize("Article"), {"A"}},
               {"P2", 2006, table.normalize("Article"), {"B"}}};
    citing_paper citing;
    citing.id = "C1";
    citing.year = 2009;
    citing.doctype = table.normalize("Article");
    citing.ref_count = 5;
    citing.cited_ids = {"P1", "P2"};
    citing.unit_ids = {"A"};
    c.citing = {citing};
    auto cfg = default_config("unused");
    const auto with = analyze(c, cfg);
    cfg.include_self_citations = false;
    const auto without = analyze(c, cfg);
    EXPECT_EQ(with.counts[0].ic, 1u);
    EXPECT_EQ(without.counts[0].ic, 0u);
    EXPECT_EQ(without.counts[1].ic, 1u);
    EXPECT_EQ(without.summary.events.self_citation_dropped, 1u);
}

TEST(Pipeline, ConfigDigestIgnoresPathsButTracksKnobs) {
    run_config a = default_config("x");
    run_config b = default_config("y");
    b.registry_path = "elsewhere.csv";
    EXPECT_EQ(config_digest(a), config_digest(b));
    b.alpha = 0.01;
    EXPECT_NE(config_digest(a), config_digest(b));
}

TEST(Cli, EndToEndRunOnSynthesizedCorpus) {
    const auto dir = scratch("cli");
    const std::string data = (dir / "data").string(), out = (dir / "out").string();
    const std::string synth = std::string(FRACCITE_SYNTH_PATH) +
                              " random --cited 500 --citing 800 --units 5 --seed 11 --out " +
                              data;
    ASSERT_EQ(std::system(synth.c_str()), 0);
    const std::string run = std::string(FRACCITE_CLI_PATH) + " run --registry " + data +
                            "/registry.csv --out " + out + " " + data + "/corpus.jsonl";
    ASSERT_EQ(std::system(run.c_str()), 0);
    for (const char* name : {"counts.csv", "indicators.csv", "correlations.csv",
                             "comparisons.csv", "graph.net", "graph.gv", "report.md"})
        EXPECT_TRUE(fs::exists(fs::path(out) / name)) << name;
    // report regeneration through the CLI touches only report.md
    const std::string report = std::string(FRACCITE_CLI_PATH) + " report --out " + out;
    const std::string before = testutil::read_file(fs::path(out) / "report.md");
    ASSERT_EQ(std::system(report.c_str()), 0);
    EXPECT_EQ(testutil::read_file(fs::path(out) / "report.md"), before);
}

TEST(Cli, ConfigFileDrivesFlagsAndFlagsOverride) {
    const auto dir = scratch("cli_cfg");
    const std::string data = (dir / "data").string();
    const std::string synth = std::string(FRACCITE_SYNTH_PATH) +
                              " random --cited 200 --citing 300 --units 4 --seed 3 --out " +
                              data;
    ASSERT_EQ(std::system(synth.c_str()), 0);
    {
        std::ofstream cfg(dir / "fraccite.ini");
        cfg << "registry=" << data << "/registry.csv\n";
        cfg << "out=" << (dir / "out1").string() << "\n";
        cfg << "alpha=0.1\n";
    }
    const std::string with_cfg = std::string(FRACCITE_CLI_PATH) + " count --config " +
                                 (dir / "fraccite.ini").string() + " " + data +
                                 "/corpus.jsonl";
    ASSERT_EQ(std::system(with_cfg.c_str()), 0);
    EXPECT_TRUE(fs::exists(dir / "out1" / "counts.csv"));
    const std::string with_override = std::string(FRACCITE_CLI_PATH) + " count --config " +
                                      (dir / "fraccite.ini").string() + " --out " +
                                      (dir / "out2").string() + " " + data + "/corpus.jsonl";
    ASSERT_EQ(std::system(with_override.c_str()), 0);
    EXPECT_TRUE(fs::exists(dir / "out2" / "counts.csv"));
}

TEST(Cli, WosIngestProducesCanonicalRecords) {
    const auto dir = scratch("cli_wos");
    {
        std::ofstream wos(dir / "export.txt");
        wos << "FN Export\nVR 1.0\n"
               "PT J\nDT Article\nPY 2006\nNR 12\nUT WOS:A1\n"
               "C1 Seoul Natl Univ, Seoul, South Korea\nER\n"
               "PT J\nDT Editorial Material\nPY 2006\nNR 2\nUT WOS:A2\n"
               "C1 Nowhere Univ\nER\nEF\n";
    }
    {
        std::ofstream reg(dir / "registry.csv");
        reg << "unit_id,display_name,faculty_fte,address_patterns\n"
               "SNU,Seoul National University,1733,Seoul Natl Univ\n";
    }
    const std::string cmd = std::string(FRACCITE_CLI_PATH) + " ingest --input-format wos " +
                            "--role cited --registry " + (dir / "registry.csv").string() +
                            " --out " + dir.string() + " " + (dir / "export.txt").string();
    ASSERT_EQ(std::system(cmd.c_str()), 0);
    std::ifstream in(dir / "corpus.jsonl");
    const auto frag = parse_canonical(in);
    ASSERT_EQ(frag.cited.size(), 2u);
    EXPECT_EQ(frag.cited[0].unit_ids, std::vector<std::string>{"SNU"});
    EXPECT_EQ(frag.cited[1].doctype.kind, doc_kind::other);
}
