#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "riskgene/risk_math.hpp"

namespace riskgene {

struct SimParams {
    std::uint64_t n_subjects = 100000;
    double prevalence = 0.1;
    std::vector<TriGeneSpec> genes;  // one spec per simulated gene
    std::uint64_t seed = 0;

    std::uint64_t n_genes() const { return genes.size(); }
    std::uint64_t expected_cases() const;  // round(N * p)
    void validate() const;
};

// Genotype counts for one gene, split by disease group. Each column is the
// integerized version of the corresponding GenotypeTable column and sums
// exactly to its group size.
struct GenotypePool {
    std::array<std::uint64_t, 3> diseased = {0, 0, 0};      // [ee, Ee, EE]
    std::array<std::uint64_t, 3> non_diseased = {0, 0, 0};  // [ee, Ee, EE]
};

// A simulated cohort. Genotypes are stored column-major (one contiguous
// block per gene) so per-gene pool construction and shuffles stay local.
// Codes are 0 = ee, 1 = Ee, 2 = EE for the three-genotype procedures and
// 0/1 = non-carrier/carrier for binary populations.
struct Population {
    std::uint64_t n_subjects = 0;
    std::uint64_t n_genes = 0;
    std::vector<std::uint8_t> genotypes;  // size N*M, gene g at [g*N ... g*N+N)
    std::vector<std::uint8_t> status;     // size N, 1 = develops disease
    std::vector<double> risk;             // size N or empty
    SimParams params;
    std::string procedure;                 // "janssens", "revised" or "binary"
    std::vector<std::string> warnings;     // nonfatal issues, e.g. pool rounding

    std::uint8_t genotype(std::uint64_t subject, std::uint64_t gene) const {
        return genotypes[gene * n_subjects + subject];
    }
    std::uint8_t& genotype(std::uint64_t subject, std::uint64_t gene) {
        return genotypes[gene * n_subjects + subject];
    }
    std::uint64_t case_count() const;
};

// Rounds nonnegative weights to integers summing exactly to total, by
// largest remainder: floor everything, then hand out the shortfall to the
// largest fractional parts (ties to the lower index).
std::vector<std::uint64_t> largest_remainder(std::span<const double> weights, std::uint64_t total);

// Original three-step procedure. Step 1 lays out each gene column with the
// integerized Hardy-Weinberg composition and applies a random permutation;
// step 2 computes each subject's posterior risk from the product of its
// per-genotype likelihood ratios; step 3 draws u ~ U(0,1) per subject and
// sets status = 1 iff risk > u. Observed prevalence therefore drifts from
// the configured one whenever the genes carry signal.
Population simulate_janssens(const SimParams& params);

// Revised procedure. Status is assigned first (exactly round(N*p) cases),
// then each gene's genotypes are drawn per disease group by shuffling an
// explicit pool integerized from the corresponding GenotypeTable column.
// Risk is computed exactly as in simulate_janssens; here it is a
// prediction, not the cause of status.
Population simulate_revised(const SimParams& params);

// Per-gene pool used by simulate_revised, exposed for tests.
GenotypePool build_genotype_pool(const GenotypeTable& table,
                                 std::uint64_t n_cases, std::uint64_t n_controls);

// Log-space posterior over all genes of one subject; shared by both
// procedures and by evaluation code. lr_by_gene holds one GenotypeLRs per
// gene; codes index into it.
double profile_risk(std::span<const GenotypeLRs> lr_by_gene,
                    std::span<const std::uint8_t> codes, double prior);

}  // namespace riskgene
