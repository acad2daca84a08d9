#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace riskgene {

// ---------------------------------------------------------------------------
// Domain types
// ---------------------------------------------------------------------------

// Binary-coded gene: a subject tests positive (carries at least one risk
// allele) with frequency carrier_freq; disease risk in positives is
// relative_risk times the risk in negatives.
struct BinaryGeneSpec {
    double carrier_freq = 0.0;   // f, in (0,1)
    double relative_risk = 1.0;  // R, > 0

    void validate() const;
};

// Three-genotype gene: risk-allele frequency and the heterozygous odds
// ratio; the homozygous-risk odds ratio is or_het squared.
struct TriGeneSpec {
    double allele_freq = 0.0;  // f, in (0,1)
    double or_het = 1.0;       // OR, > 0

    void validate() const;
};

// Expected cell counts of the disease-by-test 2x2 table:
//
//              diseased  non-diseased   total
//   positive      a           b          f*n
//   negative      c           d        (1-f)*n
//   total        p*n       (1-p)*n       n
struct BinaryTable {
    double a = 0, b = 0, c = 0, d = 0;
    double n = 0;  // total subjects
    double p = 0;  // disease prevalence
};

// Expected cell counts of the disease-by-genotype 3x2 table (the sixth cell
// is named g, not f, to keep it distinct from the allele frequency):
//
//              diseased  non-diseased     total
//   EE            a           b          f^2 * n
//   Ee            c           d       2f(1-f) * n
//   ee            e           g        (1-f)^2 * n
//   total        p*n       (1-p)*n         n
struct GenotypeTable {
    double a = 0, b = 0, c = 0, d = 0, e = 0, g = 0;
    double n = 0;
    double p = 0;
};

// The heterozygous-non-diseased count D satisfies
//   a3*D^3 + a2*D^2 + a1*D + a0 = 0
// with coefficients built from the substitutions t1..t5.
struct CubicSystem {
    double t1 = 0;  // f^2 * n
    double t2 = 0;  // 2f(1-f) * n
    double t3 = 0;  // (1-f)^2 * n
    double t4 = 0;  // p * n
    double t5 = 0;  // or_het
    double a3 = 0, a2 = 0, a1 = 0, a0 = 0;
};

// Per-genotype likelihood ratios of one gene.
struct GenotypeLRs {
    double lr_ee_risk = 1.0;  // homozygous risk, EE
    double lr_het = 1.0;      // heterozygous, Ee
    double lr_nonrisk = 1.0;  // homozygous non-risk, ee
};

struct BinaryLRs {
    double positive = 1.0;  // LR(1)
    double negative = 1.0;  // LR(0)
};

// Hardy-Weinberg genotype frequencies for risk-allele frequency f.
struct HweFreqs {
    double ee_risk = 0;  // f^2
    double het = 0;      // 2f(1-f)
    double nonrisk = 0;  // (1-f)^2
};

// ---------------------------------------------------------------------------
// Operations
// ---------------------------------------------------------------------------

// Posterior disease probability from a likelihood ratio and a prior:
// lr*p / ((1-p) + lr*p). Strictly increasing in lr; equals the prior at lr=1.
double posterior_risk(double lr, double prior);

// Same posterior with the likelihood ratio given as a logarithm, so long
// products of per-gene ratios can be accumulated without overflow.
double posterior_risk_log(double ln_lr, double prior);

// Product of per-test likelihood ratios; the empty product is 1.
double combine_lr(std::span<const double> lrs);

// Exact solution of the binary-gene table: disease rate in negatives is
// p/(1-f+f*R) and in positives R times that. Throws infeasible_error when a
// rate reaches 1 (the corresponding survivor cell would go nonpositive).
BinaryTable solve_binary_table(const BinaryGeneSpec& spec, double p, double n);

BinaryLRs binary_lr(const BinaryTable& table);

HweFreqs hardy_weinberg(double f);

CubicSystem cubic_coefficients(double f, double p, double or_het, double n);

// Solves the six-equation genotype-table system. The heterozygous
// non-diseased cell is the unique real root of the cubic in (0, t2); the
// closed-form roots are polished by a safeguarded Newton iteration on the
// column-sum residual so every residual lands near machine precision. The
// OR~1 degeneracy (|a3| < 1e-12*|a2|) falls back to a quadratic/linear
// solve before polishing.
GenotypeTable solve_genotype_table(const TriGeneSpec& spec, double p, double n);

GenotypeLRs genotype_lrs(const GenotypeTable& table);

namespace detail {

// All real roots of a3*x^3 + a2*x^2 + a1*x + a0 with |a3| not negligible.
// Roots are Newton-polished on the cubic but not deduplicated.
std::vector<double> cubic_real_roots(double a3, double a2, double a1, double a0);

}  // namespace detail

}  // namespace riskgene
