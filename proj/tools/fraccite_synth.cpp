// Writes synthetic corpora to disk: the bundled seven-university
// benchmark, or a seeded random corpus for scale testing.

#include <filesystem>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "fraccite/format.hpp"
#include "fraccite/synthesis.hpp"

namespace {

void write_corpus(const fraccite::corpus& c, const std::string& dir) {
    namespace fs = std::filesystem;
    fs::create_directories(dir);
    {
        std::ofstream out(fs::path(dir) / "corpus.jsonl", std::ios::binary);
        fraccite::corpus_fragment frag{c.cited, c.citing};
        fraccite::serialize_canonical(frag, out);
    }
    std::ofstream reg(fs::path(dir) / "registry.csv", std::ios::binary);
    reg << "unit_id,display_name,faculty_fte,address_patterns\n";
    for (const auto& u : c.registry.units()) {
        std::string patterns;
        for (const auto& p : u.address_patterns)
            patterns += (patterns.empty() ? "" : ";") + p;
        reg << fraccite::csv_cell(u.unit_id) << ',' << fraccite::csv_cell(u.display_name) << ','
            << fraccite::format_double(u.faculty_fte) << ',' << fraccite::csv_cell(patterns)
            << '\n';
    }
    std::cout << "wrote " << c.cited.size() << " cited and " << c.citing.size()
              << " citing records to " << dir << "\n";
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"synthetic corpus generator"};
    app.require_subcommand(1);
    app.fallthrough();
    std::string out_dir = ".";
    app.add_option("--out", out_dir, "output directory");

    auto* benchmark =
        app.add_subcommand("benchmark", "seven-university benchmark corpus and registry");
    std::size_t n_cited = 50000, n_citing = 100000, n_units = 10;
    std::uint64_t seed = 20090101;
    auto* random = app.add_subcommand("random", "seeded random corpus");
    random->add_option("--cited", n_cited, "number of cited papers");
    random->add_option("--citing", n_citing, "number of citing papers");
    random->add_option("--units", n_units, "number of units");
    random->add_option("--seed", seed, "RNG seed");

    CLI11_PARSE(app, argc, argv);
    try {
        if (benchmark->parsed())
            write_corpus(fraccite::make_benchmark_corpus(), out_dir);
        else
            write_corpus(fraccite::make_random_corpus(n_cited, n_citing, n_units, seed),
                         out_dir);
        return 0;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
