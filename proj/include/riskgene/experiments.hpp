#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "riskgene/population.hpp"
#include "riskgene/risk_math.hpp"

namespace riskgene {

// A CSV document: comment block (one "# " line each), header row, data
// rows. Rendering is the only place bytes are produced, so identical
// content always gives identical files.
struct CsvDoc {
    std::vector<std::string> comments;
    std::vector<std::string> columns;
    std::vector<std::vector<std::string>> rows;

    std::string to_string() const;
};

struct RunResult {
    CsvDoc csv;
    std::vector<std::string> failures;  // one entry per cell that could not be computed
    std::string svg;                    // empty unless a chart was requested
};

using MetadataList = std::vector<std::pair<std::string, std::string>>;

// ---------------------------------------------------------------------------
// table3: true and estimated likelihood ratios of multi-gene tests
// ---------------------------------------------------------------------------

struct Table3Config {
    double prevalence = 0.05;
    std::vector<BinaryGeneSpec> genes;                // empty = default five genes
    std::vector<std::vector<std::size_t>> tests;      // empty = default layout
    std::vector<double> chain_lr;                     // empty = round each LR to 2 decimals
    bool with_estimates = false;
    std::uint64_t population = 1000000;               // cohort the studies sample from
    std::uint64_t cases = 1000;
    std::uint64_t controls = 1000;
    std::uint64_t replicates = 20;
    std::uint64_t seed = 0;

    MetadataList metadata() const;
};

// The five standard gene specs: relative risks 1.5..3.5 against carrier
// frequencies 0.25..0.05.
std::vector<BinaryGeneSpec> default_table3_genes();

// Two-decimal single-gene values the multi-gene rows multiply when the
// default genes are in play. The reference table this command reproduces
// prints 1.72 for the second gene even though the exact value (19/11)
// rounds to 1.73, and its product rows chain the printed values, so plain
// rounding cannot rebuild them. Custom gene lists fall back to rounding.
std::vector<double> default_table3_chain_lr();

// Row layout for the default five genes: the five single-gene tests, three
// selected two-gene tests, then the cumulative three-, four- and five-gene
// tests.
std::vector<std::vector<std::size_t>> default_table3_tests();

// Generic layout for k genes: singles followed by cumulative prefixes.
std::vector<std::vector<std::size_t>> prefix_tests(std::size_t k);

RunResult run_table3(const Table3Config& config);

// ---------------------------------------------------------------------------
// table5: gene counts needed to multiply the background risk
// ---------------------------------------------------------------------------

struct Table5Config {
    double prevalence = 0.10;
    double multiplier = 5.0;
    double allele_freq = 0.10;
    std::vector<double> or_grid = {1.05, 1.10, 1.25, 1.5, 3.0, 5.0};
    bool sweep_f = false;  // one block per f in 0.05..0.50 instead of a single f

    MetadataList metadata() const;
};

RunResult run_table5(const Table5Config& config);

// ---------------------------------------------------------------------------
// figure1: AUC of multi-gene tests over an (OR, M) grid
// ---------------------------------------------------------------------------

struct Figure1Config {
    double prevalence = 0.10;
    double allele_freq = 0.10;
    std::vector<double> or_grid = {1.05, 1.1, 1.25, 1.5, 2.0};
    std::vector<std::uint64_t> m_grid = {1, 5, 10, 25, 50, 100, 200, 400};
    std::uint64_t n_subjects = 100000;
    std::uint64_t replicates = 20;
    std::uint64_t seed = 0;
    std::vector<std::string> procedures = {"revised"};

    MetadataList metadata() const;
};

RunResult run_figure1(const Figure1Config& config, bool with_svg);

// ---------------------------------------------------------------------------
// drift: configured vs observed prevalence per procedure
// ---------------------------------------------------------------------------

struct DriftConfig {
    double prevalence = 0.30;
    double allele_freq = 0.10;
    double or_het = 1.5;
    std::vector<std::uint64_t> m_grid = {100, 200, 400};
    std::uint64_t n_subjects = 100000;
    std::uint64_t replicates = 20;
    std::uint64_t seed = 0;
    std::vector<std::string> procedures = {"janssens", "revised"};

    MetadataList metadata() const;
};

RunResult run_drift(const DriftConfig& config);

// ---------------------------------------------------------------------------
// simulate: one cohort, written to disk by the caller
// ---------------------------------------------------------------------------

struct SimulateConfig {
    SimParams params;
    std::string procedure = "revised";

    MetadataList metadata() const;
};

Population run_simulate(const SimulateConfig& config);

}  // namespace riskgene
