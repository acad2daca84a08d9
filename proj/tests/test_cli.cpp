#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <unistd.h>

#include <filesystem>
#include <initializer_list>
#include <string>
#include <vector>

#include "riskgene/cli.hpp"
#include "riskgene/io.hpp"
#include "riskgene/population.hpp"

namespace fs = std::filesystem;

namespace {

fs::path scratch_dir() {
    static const fs::path dir = [] {
        fs::path d = fs::temp_directory_path() /
                     ("riskgene-cli-test-" + std::to_string(::getpid()));
        fs::create_directories(d);
        return d;
    }();
    return dir;
}

std::string scratch_file(const std::string& name) { return (scratch_dir() / name).string(); }

int run_cli(std::initializer_list<std::string> args) {
    std::vector<std::string> storage = {"riskgene-sim"};
    storage.insert(storage.end(), args.begin(), args.end());
    std::vector<const char*> argv;
    for (const std::string& a : storage) argv.push_back(a.c_str());
    return riskgene::cli::run(static_cast<int>(argv.size()), argv.data());
}

std::size_t count_data_rows(const std::string& text) {
    std::size_t rows = 0;
    bool header_seen = false;
    std::size_t start = 0;
    while (start < text.size()) {
        std::size_t end = text.find('\n', start);
        if (end == std::string::npos) end = text.size();
        const std::string line = text.substr(start, end - start);
        start = end + 1;
        if (line.empty() || line.front() == '#') continue;
        if (!header_seen) {
            header_seen = true;
            continue;
        }
        ++rows;
    }
    return rows;
}

}  // namespace

TEST_CASE("table3 reproduces the reference values") {
    const std::string out = scratch_file("table3.csv");
    REQUIRE(run_cli({"table3", "--out", out}) == 0);
    const std::string text = riskgene::read_text_file(out);

    CHECK(text.find("test_id,genes,true_lr,posterior_pct\n") != std::string::npos);
    CHECK(count_data_rows(text) == 11);
    // singles print the exact ratio; their posterior uses the two-decimal value
    CHECK(text.find("g1,1,1.35714,6.67976\n") != std::string::npos);
    CHECK(text.find("g2,1,1.72727,8.30116\n") != std::string::npos);
    CHECK(text.find("g3,1,2.15909,10.2079\n") != std::string::npos);
    CHECK(text.find("g4,1,2.71429,12.4827\n") != std::string::npos);
    CHECK(text.find("g5,1,3.50000,15.5556\n") != std::string::npos);
    // multi-gene rows chain the two-decimal single-gene values
    CHECK(text.find("g1+g2,2,2.33920,10.9653\n") != std::string::npos);
    CHECK(text.find("g1+g3,2,2.93760,13.4002\n") != std::string::npos);
    CHECK(text.find("g2+g3,2,3.71520,16.3732\n") != std::string::npos);
    CHECK(text.find("g1+g2+g3,3,5.05267,20.9979\n") != std::string::npos);
    CHECK(text.find("g1+g2+g3+g4,4,13.6927,41.8783\n") != std::string::npos);
    CHECK(text.find("g1+g2+g3+g4+g5,5,47.9246,71.6079\n") != std::string::npos);
}

TEST_CASE("table3 with a custom panel uses plain rounding for the chain") {
    const std::string out = scratch_file("table3_custom.csv");
    REQUIRE(run_cli({"table3", "--genes", "2.0:0.3,3.0:0.1", "--prevalence", "0.1",
                     "--out", out}) == 0);
    const std::string text = riskgene::read_text_file(out);
    // singles plus the cumulative prefix
    CHECK(count_data_rows(text) == 3);
    CHECK(text.find("g1+g2,2,") != std::string::npos);
}

TEST_CASE("stochastic commands demand a seed") {
    CHECK(run_cli({"figure1", "--out", scratch_file("f.csv")}) == 1);
    CHECK(run_cli({"drift", "--out", scratch_file("d.csv")}) == 1);
    CHECK(run_cli({"simulate", "--out", scratch_file("s.csv")}) == 1);
    CHECK(run_cli({"table3", "--with-estimates", "--out", scratch_file("t.csv")}) == 1);
}

TEST_CASE("config files feed commands and flags override them") {
    const std::string cfg = scratch_file("table5.cfg");
    riskgene::write_text_file(cfg,
                              "# gene count targets\n"
                              "ors = 5.0\n"
                              "multiplier = 5.0\n"
                              "f = 0.10\n");
    const std::string out = scratch_file("table5_cfg.csv");
    REQUIRE(run_cli({"table5", "--config", cfg, "--out", out}) == 0);
    std::string text = riskgene::read_text_file(out);
    CHECK(count_data_rows(text) == 1);
    CHECK(text.find("5.00000,0.100000,1,3,\n") != std::string::npos);

    // the flag wins over the file entry
    REQUIRE(run_cli({"table5", "--config", cfg, "--ors", "1.5", "--out", out}) == 0);
    text = riskgene::read_text_file(out);
    CHECK(count_data_rows(text) == 1);
    CHECK(text.find("1.50000,0.100000,4,8,\n") != std::string::npos);
}

TEST_CASE("table5 frozen row set") {
    const std::string out = scratch_file("table5_default.csv");
    REQUIRE(run_cli({"table5", "--out", out}) == 0);
    const std::string text = riskgene::read_text_file(out);
    CHECK(text.find("or,f,smallest,largest,note\n") != std::string::npos);
    CHECK(text.find("1.05000,0.100000,26,57,\n") != std::string::npos);
    CHECK(text.find("1.10000,0.100000,13,30,\n") != std::string::npos);
    CHECK(text.find("1.25000,0.100000,6,13,\n") != std::string::npos);
    CHECK(text.find("1.50000,0.100000,4,8,\n") != std::string::npos);
    CHECK(text.find("3.00000,0.100000,2,3,\n") != std::string::npos);
    CHECK(text.find("5.00000,0.100000,1,3,\n") != std::string::npos);
}

TEST_CASE("simulate writes a cohort that loads back") {
    const std::string out = scratch_file("cohort.csv");
    REQUIRE(run_cli({"simulate", "--n", "400", "--prevalence", "0.25", "--m", "2", "--or",
                     "2.0", "--f", "0.2", "--procedure", "revised", "--seed", "9", "--out",
                     out}) == 0);
    const riskgene::Population pop = riskgene::read_population(out);
    CHECK(pop.n_subjects == 400);
    CHECK(pop.n_genes == 2);
    CHECK(pop.procedure == "revised");
    CHECK(pop.case_count() == 100);
    CHECK(pop.params.seed == 9);

    // same invocation, same bytes
    const std::string again = scratch_file("cohort_again.csv");
    REQUIRE(run_cli({"simulate", "--n", "400", "--prevalence", "0.25", "--m", "2", "--or",
                     "2.0", "--f", "0.2", "--procedure", "revised", "--seed", "9", "--out",
                     again}) == 0);
    CHECK(riskgene::read_text_file(out) == riskgene::read_text_file(again));
}

TEST_CASE("simulate rejects contradictory gene options") {
    CHECK(run_cli({"simulate", "--m", "3", "--genes", "2.0:0.1", "--seed", "1", "--out",
                   scratch_file("x.csv")}) == 1);
}

TEST_CASE("drift emits per-replicate and aggregate rows") {
    const std::string out = scratch_file("drift.csv");
    REQUIRE(run_cli({"drift", "--n", "2000", "--ms", "5", "--replicates", "2", "--or", "1.5",
                     "--f", "0.2", "--prevalence", "0.3", "--procedure", "both", "--seed", "4",
                     "--out", out}) == 0);
    const std::string text = riskgene::read_text_file(out);
    CHECK(text.find("procedure,m,replicate,seed,p_target,p_observed\n") != std::string::npos);
    // 2 procedures x (2 replicates + mean + sd)
    CHECK(count_data_rows(text) == 8);
    // the revised procedure hits the target exactly: 600 cases out of 2000
    CHECK(text.find("revised,5,mean,,0.300000,0.300000\n") != std::string::npos);
    CHECK(text.find("janssens,5,0,") != std::string::npos);
    CHECK(text.find("janssens,5,1,") != std::string::npos);
}

TEST_CASE("figure1 writes grid rows and an optional chart") {
    const std::string out = scratch_file("figure1.csv");
    const std::string svg = scratch_file("figure1.svg");
    REQUIRE(run_cli({"figure1", "--n", "2000", "--ms", "1,5", "--ors", "1.5,2.0",
                     "--replicates", "2", "--seed", "12", "--svg", svg, "--out", out}) == 0);
    const std::string text = riskgene::read_text_file(out);
    CHECK(text.find("procedure,or,m,replicate,seed,auc,p_observed\n") != std::string::npos);
    // 2 ors x 2 ms x (2 replicates + mean + sd)
    CHECK(count_data_rows(text) == 16);
    CHECK(text.find("revised,1.50000,1,0,") != std::string::npos);
    CHECK(text.find("revised,2.00000,5,mean,") != std::string::npos);

    const std::string chart = riskgene::read_text_file(svg);
    CHECK(chart.find("<svg") != std::string::npos);
    CHECK(chart.find("OR 2.00000") != std::string::npos);
    CHECK(chart.find("</svg>") != std::string::npos);
}

TEST_CASE("byte-identical output across repeat runs") {
    const std::string a = scratch_file("rep_a.csv");
    const std::string b = scratch_file("rep_b.csv");
    for (const std::string& path : {a, b}) {
        REQUIRE(run_cli({"figure1", "--n", "1000", "--ms", "1,5", "--ors", "1.5",
                         "--replicates", "3", "--procedure", "both", "--seed", "77", "--out",
                         path}) == 0);
    }
    CHECK(riskgene::read_text_file(a) == riskgene::read_text_file(b));
}

TEST_CASE("bad invocations exit nonzero") {
    CHECK(run_cli({"table5", "--bogus-flag"}) != 0);
    CHECK(run_cli({"no-such-command"}) != 0);
    CHECK(run_cli({}) != 0);
    // malformed gene pair
    CHECK(run_cli({"table3", "--genes", "2.0-0.3", "--out", scratch_file("bad.csv")}) == 1);
    // unreadable config path
    CHECK(run_cli({"table5", "--config", scratch_file("missing.cfg"), "--out",
                   scratch_file("bad2.csv")}) == 1);
}

TEST_CASE("version flag") {
    CHECK(run_cli({"--version"}) == 0);
}
