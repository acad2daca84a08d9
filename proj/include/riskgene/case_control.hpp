#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "riskgene/population.hpp"
#include "riskgene/risk_math.hpp"

namespace riskgene {

// Rows are subjects (cases first), columns are genes with binary coding.
struct CaseControlSample {
    std::uint64_t n_cases = 0;
    std::uint64_t n_controls = 0;
    std::uint64_t n_genes = 0;
    std::vector<std::uint8_t> design;  // row-major, size rows()*n_genes
    std::vector<std::uint8_t> labels;  // 1 = case, size rows()

    std::uint64_t rows() const { return n_cases + n_controls; }
    std::uint8_t at(std::uint64_t row, std::uint64_t gene) const {
        return design[row * n_genes + gene];
    }
    void validate() const;
};

// Maximum-likelihood logistic regression result. The covariance is stored
// row-major over (intercept, coefficients...) and equals the inverse of the
// observed information at the fitted parameters.
struct LogisticFit {
    double intercept = 0.0;
    std::vector<double> coefficients;
    std::vector<double> covariance;
    bool converged = false;
    unsigned iterations = 0;

    std::size_t dim() const { return coefficients.size() + 1; }
    double covariance_at(std::size_t i, std::size_t j) const {
        return covariance[i * dim() + j];
    }
};

struct LrEstimate {
    double lr = 1.0;
    double ci_low = 1.0;
    double ci_high = 1.0;
};

// Cohort with binary genotype coding: disease status assigned first
// (exactly round(n*p) cases), then each gene drawn independently per
// subject with the carrier probability its 2x2 table implies for that
// disease group. Genes are conditionally independent given status.
Population simulate_binary_population(std::span<const BinaryGeneSpec> specs, double p,
                                      std::uint64_t n, std::uint64_t seed);

// Uniform sampling without replacement within each status group.
CaseControlSample sample_case_control(const Population& pop, std::uint64_t n_cases,
                                      std::uint64_t n_controls, std::uint64_t seed);

// Newton / iteratively reweighted least squares fit of
// logit P(case) = intercept + coefficients . genes, stopping when the
// gradient max-norm falls below 1e-8 (at most 100 iterations). Throws
// separation_error when any coefficient magnitude passes 30 and
// rank_error when the information matrix is singular.
LogisticFit fit_logistic(const CaseControlSample& sample);

// Likelihood ratio of a genotype profile from a case-control fit:
// ln lr = ln(n_controls/n_cases) + intercept + coefficients . profile.
// The interval is Wald, 95%, on the log scale.
LrEstimate estimate_lr(const LogisticFit& fit, std::uint64_t n_cases, std::uint64_t n_controls,
                       std::span<const std::uint8_t> profile);

}  // namespace riskgene
