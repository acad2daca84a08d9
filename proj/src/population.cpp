#include "riskgene/population.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numeric>

#include "riskgene/errors.hpp"
#include "riskgene/rng.hpp"

namespace riskgene {

namespace {

// Precomputed log likelihood ratios, indexed by genotype code.
struct GeneLogLr {
    std::array<double, 3> by_code;
};

std::vector<GeneLogLr> gene_log_lrs(const std::vector<GenotypeLRs>& lrs) {
    std::vector<GeneLogLr> logs(lrs.size());
    for (std::size_t g = 0; g < lrs.size(); ++g) {
        logs[g].by_code = {std::log(lrs[g].lr_nonrisk), std::log(lrs[g].lr_het),
                           std::log(lrs[g].lr_ee_risk)};
    }
    return logs;
}

// Accumulates each subject's log likelihood ratio gene by gene (the matrix
// is column-major) and converts to a posterior at the end.
std::vector<double> population_risk(const Population& pop, const std::vector<GeneLogLr>& logs) {
    const std::uint64_t n = pop.n_subjects;
    std::vector<double> ln_lr(n, 0.0);
    for (std::uint64_t g = 0; g < pop.n_genes; ++g) {
        const std::uint8_t* column = pop.genotypes.data() + g * n;
        const auto& by_code = logs[g].by_code;
        for (std::uint64_t i = 0; i < n; ++i) {
            ln_lr[i] += by_code[column[i]];
        }
    }
    std::vector<double> risk(n);
    for (std::uint64_t i = 0; i < n; ++i) {
        risk[i] = posterior_risk_log(ln_lr[i], pop.params.prevalence);
    }
    return risk;
}

void fill_column_from_counts(std::uint8_t* column, const std::array<std::uint64_t, 3>& counts) {
    std::uint64_t offset = 0;
    for (std::uint8_t code = 0; code < 3; ++code) {
        std::fill_n(column + offset, counts[code], code);
        offset += counts[code];
    }
}

std::vector<GenotypeLRs> solve_all_genes(const SimParams& params,
                                         std::vector<GenotypeTable>* tables_out) {
    std::vector<GenotypeLRs> lrs;
    lrs.reserve(params.genes.size());
    for (const TriGeneSpec& spec : params.genes) {
        GenotypeTable table =
            solve_genotype_table(spec, params.prevalence, static_cast<double>(params.n_subjects));
        lrs.push_back(genotype_lrs(table));
        if (tables_out) tables_out->push_back(table);
    }
    return lrs;
}

}  // namespace

std::uint64_t SimParams::expected_cases() const {
    return static_cast<std::uint64_t>(
        std::llround(static_cast<double>(n_subjects) * prevalence));
}

void SimParams::validate() const {
    if (n_subjects < 1) throw domain_error("n_subjects must be at least 1");
    if (genes.empty()) throw domain_error("at least one gene spec is required");
    if (!(prevalence > 0.0) || !(prevalence < 1.0)) {
        throw domain_error("prevalence must lie strictly between 0 and 1");
    }
    const std::uint64_t cases = expected_cases();
    if (cases < 1 || cases > n_subjects - 1) {
        throw domain_error("round(N*p) must leave at least one case and one control");
    }
    for (const TriGeneSpec& spec : genes) spec.validate();
}

std::uint64_t Population::case_count() const {
    return static_cast<std::uint64_t>(
        std::count(status.begin(), status.end(), std::uint8_t{1}));
}

std::vector<std::uint64_t> largest_remainder(std::span<const double> weights,
                                             std::uint64_t total) {
    double sum = 0.0;
    for (double w : weights) {
        if (!(w >= 0.0) || !std::isfinite(w)) {
            throw domain_error("weights must be finite and nonnegative");
        }
        sum += w;
    }
    if (weights.empty() || !(sum > 0.0)) {
        throw domain_error("weights must contain a positive entry");
    }

    std::vector<std::uint64_t> counts(weights.size());
    std::vector<double> fractions(weights.size());
    std::uint64_t assigned = 0;
    for (std::size_t i = 0; i < weights.size(); ++i) {
        const double exact = weights[i] / sum * static_cast<double>(total);
        const double floored = std::floor(exact);
        counts[i] = static_cast<std::uint64_t>(floored);
        fractions[i] = exact - floored;
        assigned += counts[i];
    }

    std::vector<std::size_t> order(weights.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return fractions[a] > fractions[b]; });
    for (std::size_t k = 0; assigned < total; ++k) {
        counts[order[k % order.size()]]++;
        ++assigned;
    }
    return counts;
}

double profile_risk(std::span<const GenotypeLRs> lr_by_gene,
                    std::span<const std::uint8_t> codes, double prior) {
    if (lr_by_gene.size() != codes.size()) {
        throw usage_error("genotype profile length does not match gene count");
    }
    double ln_lr = 0.0;
    for (std::size_t g = 0; g < codes.size(); ++g) {
        if (codes[g] > 2) throw usage_error("genotype codes must be 0, 1 or 2");
        const auto& lr = lr_by_gene[g];
        const double value = codes[g] == 2 ? lr.lr_ee_risk : codes[g] == 1 ? lr.lr_het : lr.lr_nonrisk;
        ln_lr += std::log(value);
    }
    return posterior_risk_log(ln_lr, prior);
}

Population simulate_janssens(const SimParams& params) {
    params.validate();
    const std::vector<GenotypeLRs> lrs = solve_all_genes(params, nullptr);

    Population pop;
    pop.n_subjects = params.n_subjects;
    pop.n_genes = params.n_genes();
    pop.params = params;
    pop.procedure = "janssens";
    pop.genotypes.resize(pop.n_subjects * pop.n_genes);
    pop.status.resize(pop.n_subjects);

    Xoshiro256PlusPlus rng(params.seed);
    const std::uint64_t n = pop.n_subjects;
    for (std::uint64_t g = 0; g < pop.n_genes; ++g) {
        const HweFreqs hwe = hardy_weinberg(params.genes[g].allele_freq);
        const std::array<double, 3> weights = {hwe.nonrisk, hwe.het, hwe.ee_risk};
        const std::vector<std::uint64_t> counts = largest_remainder(weights, n);
        std::uint8_t* column = pop.genotypes.data() + g * n;
        fill_column_from_counts(column, {counts[0], counts[1], counts[2]});
        fisher_yates(std::span<std::uint8_t>(column, n), rng);
    }

    pop.risk = population_risk(pop, gene_log_lrs(lrs));
    for (std::uint64_t i = 0; i < n; ++i) {
        pop.status[i] = pop.risk[i] > rng.next_double() ? 1 : 0;
    }
    return pop;
}

GenotypePool build_genotype_pool(const GenotypeTable& table,
                                 std::uint64_t n_cases, std::uint64_t n_controls) {
    const std::array<double, 3> diseased = {table.e, table.c, table.a};
    const std::array<double, 3> non_diseased = {table.g, table.d, table.b};
    const std::vector<std::uint64_t> case_counts = largest_remainder(diseased, n_cases);
    const std::vector<std::uint64_t> control_counts = largest_remainder(non_diseased, n_controls);
    GenotypePool pool;
    pool.diseased = {case_counts[0], case_counts[1], case_counts[2]};
    pool.non_diseased = {control_counts[0], control_counts[1], control_counts[2]};
    return pool;
}

Population simulate_revised(const SimParams& params) {
    params.validate();
    std::vector<GenotypeTable> tables;
    tables.reserve(params.genes.size());
    const std::vector<GenotypeLRs> lrs = solve_all_genes(params, &tables);

    Population pop;
    pop.n_subjects = params.n_subjects;
    pop.n_genes = params.n_genes();
    pop.params = params;
    pop.procedure = "revised";
    pop.genotypes.resize(pop.n_subjects * pop.n_genes);
    pop.status.resize(pop.n_subjects);

    const std::uint64_t n_cases = params.expected_cases();
    const std::uint64_t n_controls = pop.n_subjects - n_cases;
    std::fill_n(pop.status.begin(), n_cases, std::uint8_t{1});

    Xoshiro256PlusPlus rng(params.seed);
    for (std::uint64_t g = 0; g < pop.n_genes; ++g) {
        const GenotypePool pool = build_genotype_pool(tables[g], n_cases, n_controls);
        // A cell with positive expectation can still round to zero when the
        // group is small; record it so downstream consumers can tell.
        const std::array<double, 3> case_cells = {tables[g].e, tables[g].c, tables[g].a};
        const std::array<double, 3> control_cells = {tables[g].g, tables[g].d, tables[g].b};
        for (std::uint8_t code = 0; code < 3; ++code) {
            if (case_cells[code] > 0.0 && pool.diseased[code] == 0) {
                pop.warnings.push_back("gene " + std::to_string(g + 1) + ": case pool rounds genotype " +
                                       std::to_string(code) + " to zero");
            }
            if (control_cells[code] > 0.0 && pool.non_diseased[code] == 0) {
                pop.warnings.push_back("gene " + std::to_string(g + 1) +
                                       ": control pool rounds genotype " + std::to_string(code) +
                                       " to zero");
            }
        }

        std::uint8_t* column = pop.genotypes.data() + g * pop.n_subjects;
        fill_column_from_counts(column, pool.diseased);
        fill_column_from_counts(column + n_cases, pool.non_diseased);
        fisher_yates(std::span<std::uint8_t>(column, n_cases), rng);
        fisher_yates(std::span<std::uint8_t>(column + n_cases, n_controls), rng);
    }

    pop.risk = population_risk(pop, gene_log_lrs(lrs));
    return pop;
}

}  // namespace riskgene
