#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <unistd.h>

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "riskgene/config.hpp"
#include "riskgene/errors.hpp"
#include "riskgene/io.hpp"
#include "riskgene/population.hpp"

using namespace riskgene;
namespace fs = std::filesystem;

namespace {

// Unique scratch directory per process so parallel ctest runs do not race.
fs::path scratch_dir() {
    static const fs::path dir = [] {
        fs::path d = fs::temp_directory_path() /
                     ("riskgene-io-test-" + std::to_string(::getpid()));
        fs::create_directories(d);
        return d;
    }();
    return dir;
}

fs::path scratch_file(const std::string& name) { return scratch_dir() / name; }

}  // namespace

TEST_CASE("six-significant-digit formatting") {
    CHECK(format_sig6(0.0) == "0.00000");
    CHECK(format_sig6(1.0) == "1.00000");
    CHECK(format_sig6(1.05) == "1.05000");
    CHECK(format_sig6(0.26) == "0.260000");
    CHECK(format_sig6(0.1234564) == "0.123456");
    CHECK(format_sig6(0.1234566) == "0.123457");
    CHECK(format_sig6(3.5) == "3.50000");
    CHECK(format_sig6(47.9246) == "47.9246");
    CHECK(format_sig6(123456.0) == "123456");
    CHECK(format_sig6(1234567.0) == "1234570");
    CHECK(format_sig6(987654321.0) == "987654000");
    CHECK(format_sig6(0.000123456789) == "0.000123457");
    CHECK(format_sig6(-2.5) == "-2.50000");
    CHECK(format_sig6(-0.000123456789) == "-0.000123457");
}

TEST_CASE("key=value parsing with comments and overrides") {
    const fs::path path = scratch_file("config_basic.cfg");
    write_text_file(path,
                    "# comment line\n"
                    "n = 1000\n"
                    "prevalence = 0.25   # trailing comment\n"
                    "ors = 1.05,1.5,2.0\n"
                    "\n"
                    "procedure = janssens\n"
                    "n = 2000\n");
    const KeyValueConfig cfg = KeyValueConfig::from_file(path);
    CHECK(cfg.get_u64("n", 0) == 2000);  // later entry wins
    CHECK(cfg.get_double("prevalence", 0.0) == doctest::Approx(0.25));
    CHECK(cfg.get_string("procedure", "") == "janssens");
    CHECK(cfg.get_doubles("ors", {}) == std::vector<double>{1.05, 1.5, 2.0});
    CHECK(cfg.get_u64("missing", 77) == 77);
    CHECK(cfg.has("n"));
    CHECK(!cfg.has("missing"));
}

TEST_CASE("malformed config lines are rejected") {
    const fs::path path = scratch_file("config_bad.cfg");
    write_text_file(path, "n = 10\nthis line has no equals sign\n");
    CHECK_THROWS_AS(KeyValueConfig::from_file(path), usage_error);

    CHECK_THROWS_AS(KeyValueConfig::from_file(scratch_file("does_not_exist.cfg")), io_error);
}

TEST_CASE("strict scalar parsing") {
    CHECK(parse_u64("42", "n") == 42);
    CHECK(parse_double("0.5", "p") == doctest::Approx(0.5));
    CHECK(parse_bool("true", "flag"));
    CHECK(!parse_bool("false", "flag"));
    CHECK_THROWS_AS(parse_u64("42x", "n"), usage_error);
    CHECK_THROWS_AS(parse_u64("-1", "n"), usage_error);
    CHECK_THROWS_AS(parse_u64("", "n"), usage_error);
    CHECK_THROWS_AS(parse_double("1.2.3", "p"), usage_error);
    CHECK_THROWS_AS(parse_bool("yes!", "flag"), usage_error);

    CHECK(trim("  a b  ") == "a b");
    CHECK(split_list("a, b ,c", ',') == std::vector<std::string>{"a", "b", "c"});
}

TEST_CASE("typed getters validate stored text") {
    KeyValueConfig cfg;
    cfg.set("bad", "abc");
    CHECK_THROWS_AS(cfg.get_u64("bad", 0), usage_error);
    CHECK_THROWS_AS(cfg.get_double("bad", 0.0), usage_error);
    CHECK_THROWS_AS(cfg.get_bool("bad", false), usage_error);
    cfg.set("list", "1,2,junk");
    CHECK_THROWS_AS(cfg.get_u64s("list", {}), usage_error);
}

TEST_CASE("population round trip preserves genotypes, status and metadata") {
    SimParams params;
    params.n_subjects = 500;
    params.prevalence = 0.2;
    params.genes = {TriGeneSpec{0.1, 2.0}, TriGeneSpec{0.3, 1.5}};
    params.seed = 99;
    const Population pop = simulate_revised(params);

    const fs::path path = scratch_file("cohort.csv");
    write_population(pop, path);
    CHECK(fs::exists(path));
    CHECK(fs::exists(path.string() + ".meta.json"));

    const Population loaded = read_population(path);
    CHECK(loaded.n_subjects == pop.n_subjects);
    CHECK(loaded.n_genes == pop.n_genes);
    CHECK(loaded.genotypes == pop.genotypes);
    CHECK(loaded.status == pop.status);
    CHECK(loaded.procedure == pop.procedure);
    CHECK(loaded.params.prevalence == doctest::Approx(pop.params.prevalence));
    CHECK(loaded.params.seed == pop.params.seed);
    REQUIRE(loaded.params.genes.size() == 2);
    CHECK(loaded.params.genes[1].allele_freq == doctest::Approx(0.3));
    REQUIRE(loaded.risk.size() == pop.risk.size());
    for (std::size_t i = 0; i < pop.risk.size(); i += 41) {
        // risk survives at the printed six-digit precision
        CHECK(loaded.risk[i] == doctest::Approx(pop.risk[i]).epsilon(1e-5));
    }

    // writing the same cohort twice produces identical bytes
    const fs::path again = scratch_file("cohort2.csv");
    write_population(pop, again);
    CHECK(read_text_file(path) == read_text_file(again));
}

TEST_CASE("read_population rejects tampered files") {
    SimParams params;
    params.n_subjects = 50;
    params.prevalence = 0.2;
    params.genes = {TriGeneSpec{0.1, 2.0}};
    params.seed = 5;
    const Population pop = simulate_janssens(params);

    const fs::path path = scratch_file("tamper.csv");
    write_population(pop, path);

    // truncated data rows
    std::string text = read_text_file(path);
    write_text_file(path, text.substr(0, text.size() - 20));
    CHECK_THROWS_AS(read_population(path), io_error);

    // missing sidecar
    const fs::path orphan = scratch_file("orphan.csv");
    write_population(pop, orphan);
    fs::remove(orphan.string() + ".meta.json");
    CHECK_THROWS_AS(read_population(orphan), io_error);

    CHECK_THROWS_AS(read_population(scratch_file("never_written.csv")), io_error);
}

TEST_CASE("population csv layout") {
    SimParams params;
    params.n_subjects = 4;
    params.prevalence = 0.5;
    params.genes = {TriGeneSpec{0.2, 1.5}};
    params.seed = 3;
    const Population pop = simulate_revised(params);
    const fs::path path = scratch_file("layout.csv");
    write_population(pop, path);
    const std::string text = read_text_file(path);
    CHECK(text.find("subject_id,status,risk,g1\n") != std::string::npos);
    // two cases out of four, cases first under the revised procedure
    CHECK(text.find("\n1,1,") != std::string::npos);
    CHECK(text.find("\n3,0,") != std::string::npos);
}
