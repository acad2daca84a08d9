#include "riskgene/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numeric>

#include "riskgene/errors.hpp"
#include "riskgene/population.hpp"

namespace riskgene {

namespace {

std::optional<double> ratio(std::uint64_t num, std::uint64_t den) {
    if (den == 0) return std::nullopt;
    return static_cast<double>(num) / static_cast<double>(den);
}

void require_binary(std::span<const std::uint8_t> values, const char* name) {
    for (std::uint8_t v : values) {
        if (v > 1) throw usage_error(std::string(name) + " entries must be 0 or 1");
    }
}

}  // namespace

std::optional<double> ConfusionCounts::sensitivity() const { return ratio(tp, tp + fn); }
std::optional<double> ConfusionCounts::specificity() const { return ratio(tn, fp + tn); }
std::optional<double> ConfusionCounts::ppv() const { return ratio(tp, fp + tp); }
std::optional<double> ConfusionCounts::npv() const { return ratio(tn, fn + tn); }

ConfusionCounts confusion(std::span<const std::uint8_t> predicted,
                          std::span<const std::uint8_t> truth) {
    if (predicted.size() != truth.size()) {
        throw usage_error("predicted and truth sequences differ in length");
    }
    if (predicted.empty()) {
        throw usage_error("confusion requires at least one observation");
    }
    require_binary(predicted, "predicted");
    require_binary(truth, "truth");

    ConfusionCounts counts;
    for (std::size_t i = 0; i < truth.size(); ++i) {
        if (truth[i]) {
            (predicted[i] ? counts.tp : counts.fn)++;
        } else {
            (predicted[i] ? counts.fp : counts.tn)++;
        }
    }
    return counts;
}

RocCurve roc_auc(std::span<const double> scores, std::span<const std::uint8_t> truth) {
    if (scores.size() != truth.size()) {
        throw usage_error("scores and truth sequences differ in length");
    }
    if (scores.empty()) {
        throw usage_error("roc_auc requires at least one observation");
    }
    require_binary(truth, "truth");
    for (double s : scores) {
        if (std::isnan(s)) throw usage_error("scores must not contain NaN");
    }

    const auto n_pos = static_cast<std::uint64_t>(
        std::count(truth.begin(), truth.end(), std::uint8_t{1}));
    const std::uint64_t n_neg = truth.size() - n_pos;
    if (n_pos == 0 || n_neg == 0) {
        throw undefined_auc_error("AUC is undefined when only one class is present");
    }

    std::vector<std::size_t> order(scores.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return scores[a] < scores[b]; });

    // Mann-Whitney through midranks: tied scores share the average rank of
    // their run, which books 0.5 per tied positive/negative pair.
    double rank_sum_pos = 0.0;
    for (std::size_t i = 0; i < order.size();) {
        std::size_t j = i;
        while (j < order.size() && scores[order[j]] == scores[order[i]]) ++j;
        const double midrank = 0.5 * (static_cast<double>(i + 1) + static_cast<double>(j));
        for (std::size_t k = i; k < j; ++k) {
            if (truth[order[k]]) rank_sum_pos += midrank;
        }
        i = j;
    }
    const double np = static_cast<double>(n_pos);
    const double nn = static_cast<double>(n_neg);

    RocCurve curve;
    curve.auc = (rank_sum_pos - np * (np + 1.0) / 2.0) / (np * nn);

    // Threshold sweep from the highest score down; each distinct value adds
    // one operating point (predict positive when score >= threshold).
    curve.points.reserve(scores.size() + 1);
    curve.points.emplace_back(0.0, 0.0);
    std::uint64_t tp = 0, fp = 0;
    for (std::size_t i = order.size(); i > 0;) {
        std::size_t j = i;
        while (j > 0 && scores[order[j - 1]] == scores[order[i - 1]]) --j;
        for (std::size_t k = j; k < i; ++k) {
            if (truth[order[k]]) ++tp; else ++fp;
        }
        curve.points.emplace_back(static_cast<double>(fp) / nn, static_cast<double>(tp) / np);
        i = j;
    }
    return curve;
}

PrevalenceDrift prevalence_drift(const Population& population) {
    if (population.n_subjects == 0 || population.status.size() != population.n_subjects) {
        throw usage_error("population has no valid status vector");
    }
    const auto cases = static_cast<std::uint64_t>(
        std::count(population.status.begin(), population.status.end(), std::uint8_t{1}));
    return PrevalenceDrift{
        population.params.prevalence,
        static_cast<double>(cases) / static_cast<double>(population.n_subjects)};
}

GenesNeeded genes_needed_for_ppv(const TriGeneSpec& spec, double p, double multiplier) {
    spec.validate();
    if (!(p > 0.0) || !(p < 1.0)) {
        throw domain_error("prevalence must lie strictly between 0 and 1");
    }
    if (!(multiplier > 1.0)) {
        throw domain_error("target multiplier must exceed 1");
    }
    const double target = multiplier * p;
    if (target >= 1.0) {
        throw domain_error("target posterior multiplier*p must stay below 1");
    }

    const GenotypeLRs lrs = genotype_lrs(solve_genotype_table(spec, p, 1.0));

    constexpr std::uint64_t kMaxGenes = 10000;
    auto count_for = [&](double lr, const char* genotype) {
        if (!(lr > 1.0)) {
            throw infeasible_error(std::string("likelihood ratio for ") + genotype +
                                   " genotypes is <= 1; the posterior can never reach the target");
        }
        const double ln_lr = std::log(lr);
        for (std::uint64_t m = 1; m <= kMaxGenes; ++m) {
            if (posterior_risk_log(static_cast<double>(m) * ln_lr, p) >= target) return m;
        }
        throw infeasible_error(std::string("no gene count up to 10000 reaches the target for ") +
                               genotype + " genotypes");
    };

    GenesNeeded needed;
    needed.smallest = count_for(lrs.lr_ee_risk, "homozygous-risk");
    needed.largest = count_for(lrs.lr_het, "heterozygous");
    return needed;
}

}  // namespace riskgene
