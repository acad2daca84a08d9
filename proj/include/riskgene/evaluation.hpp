#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "riskgene/risk_math.hpp"

namespace riskgene {

struct Population;

// 2x2 confusion counts of a binarized test. Derived measures return
// nullopt instead of a value when their denominator is zero.
struct ConfusionCounts {
    std::uint64_t tp = 0, fp = 0, fn = 0, tn = 0;

    std::optional<double> sensitivity() const;  // tp / (tp + fn)
    std::optional<double> specificity() const;  // tn / (fp + tn)
    std::optional<double> ppv() const;          // tp / (fp + tp)
    std::optional<double> npv() const;          // tn / (fn + tn)
};

// ROC from a full threshold sweep over distinct score values, plus the
// Mann-Whitney AUC (ties count 0.5). points run from (0,0) to (1,1) and are
// nondecreasing in both coordinates; auc equals the trapezoidal area.
struct RocCurve {
    std::vector<std::pair<double, double>> points;  // (fpr, tpr)
    double auc = 0.5;
};

struct PrevalenceDrift {
    double target = 0;    // configured prevalence
    double observed = 0;  // mean disease status in the population
};

// Gene counts needed for the posterior to reach multiplier * p:
// smallest assumes every genotype is homozygous risk, largest assumes
// every genotype is heterozygous.
struct GenesNeeded {
    std::uint64_t smallest = 0;
    std::uint64_t largest = 0;
};

ConfusionCounts confusion(std::span<const std::uint8_t> predicted,
                          std::span<const std::uint8_t> truth);

RocCurve roc_auc(std::span<const double> scores, std::span<const std::uint8_t> truth);

PrevalenceDrift prevalence_drift(const Population& population);

// Incremental search, hard-capped at 10,000 genes. Throws infeasible_error
// when a likelihood ratio is <= 1 (the search cannot terminate) or the cap
// is reached; domain_error when multiplier * p >= 1.
GenesNeeded genes_needed_for_ppv(const TriGeneSpec& spec, double p, double multiplier);

}  // namespace riskgene
