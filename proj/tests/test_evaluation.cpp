#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "riskgene/errors.hpp"
#include "riskgene/evaluation.hpp"
#include "riskgene/population.hpp"

using namespace riskgene;

namespace {

// All-pairs Mann-Whitney AUC: P(case score > control score) + 0.5 ties.
double brute_force_auc(const std::vector<double>& scores, const std::vector<std::uint8_t>& truth) {
    double wins = 0.0;
    std::uint64_t pairs = 0;
    for (std::size_t i = 0; i < scores.size(); ++i) {
        if (truth[i] != 1) continue;
        for (std::size_t j = 0; j < scores.size(); ++j) {
            if (truth[j] != 0) continue;
            ++pairs;
            if (scores[i] > scores[j])
                wins += 1.0;
            else if (scores[i] == scores[j])
                wins += 0.5;
        }
    }
    return wins / static_cast<double>(pairs);
}

double trapezoid_area(const std::vector<std::pair<double, double>>& pts) {
    double area = 0.0;
    for (std::size_t i = 1; i < pts.size(); ++i) {
        area += (pts[i].first - pts[i - 1].first) * (pts[i].second + pts[i - 1].second) * 0.5;
    }
    return area;
}

}  // namespace

TEST_CASE("confusion counts and derived measures") {
    // 30 true positives, 10 false positives, 20 false negatives, 40 true negatives
    std::vector<std::uint8_t> predicted, truth;
    auto add = [&](int n, std::uint8_t pred, std::uint8_t t) {
        for (int i = 0; i < n; ++i) {
            predicted.push_back(pred);
            truth.push_back(t);
        }
    };
    add(30, 1, 1);
    add(10, 1, 0);
    add(20, 0, 1);
    add(40, 0, 0);

    const ConfusionCounts c = confusion(predicted, truth);
    CHECK(c.tp == 30);
    CHECK(c.fp == 10);
    CHECK(c.fn == 20);
    CHECK(c.tn == 40);
    CHECK(c.sensitivity().value() == doctest::Approx(0.6).epsilon(1e-15));
    CHECK(c.specificity().value() == doctest::Approx(0.8).epsilon(1e-15));
    CHECK(c.ppv().value() == doctest::Approx(0.75).epsilon(1e-15));
    CHECK(c.npv().value() == doctest::Approx(2.0 / 3.0).epsilon(1e-15));
}

TEST_CASE("confusion handles empty denominators and bad input") {
    ConfusionCounts c;
    c.fp = 5;
    c.tn = 5;
    CHECK(!c.sensitivity().has_value());
    CHECK(c.ppv().value() == doctest::Approx(0.0));  // 0 of 5 predicted positives
    CHECK(c.npv().value() == doctest::Approx(1.0));
    CHECK(c.specificity().value() == doctest::Approx(0.5));

    const ConfusionCounts empty;
    CHECK(!empty.sensitivity().has_value());
    CHECK(!empty.specificity().has_value());
    CHECK(!empty.ppv().has_value());
    CHECK(!empty.npv().has_value());

    const std::vector<std::uint8_t> ok = {0, 1};
    const std::vector<std::uint8_t> bad = {0, 2};
    const std::vector<std::uint8_t> shorter = {0};
    CHECK_THROWS_AS(confusion(ok, bad), usage_error);
    CHECK_THROWS_AS(confusion(bad, ok), usage_error);
    CHECK_THROWS_AS(confusion(ok, shorter), usage_error);
}

TEST_CASE("roc on a worked example") {
    const std::vector<double> scores = {0.9, 0.4, 0.5, 0.1};
    const std::vector<std::uint8_t> truth = {1, 1, 0, 0};
    const RocCurve roc = roc_auc(scores, truth);
    // pairs: (0.9 vs 0.5) win, (0.9 vs 0.1) win, (0.4 vs 0.5) loss, (0.4 vs 0.1) win
    CHECK(roc.auc == doctest::Approx(0.75).epsilon(1e-15));
    CHECK(roc.points.front() == std::pair<double, double>(0.0, 0.0));
    CHECK(roc.points.back() == std::pair<double, double>(1.0, 1.0));
    CHECK(trapezoid_area(roc.points) == doctest::Approx(roc.auc).epsilon(1e-12));
}

TEST_CASE("roc endpoints: perfect, inverted, constant") {
    const std::vector<double> scores = {0.8, 0.7, 0.3, 0.2};
    const std::vector<std::uint8_t> truth = {1, 1, 0, 0};
    CHECK(roc_auc(scores, truth).auc == doctest::Approx(1.0));

    const std::vector<std::uint8_t> flipped = {0, 0, 1, 1};
    CHECK(roc_auc(scores, flipped).auc == doctest::Approx(0.0));

    const std::vector<double> constant = {0.4, 0.4, 0.4, 0.4};
    const RocCurve tied = roc_auc(constant, truth);
    CHECK(tied.auc == doctest::Approx(0.5).epsilon(1e-15));
    // all ties collapse the sweep to the diagonal
    REQUIRE(tied.points.size() == 2);
}

TEST_CASE("roc rejects single-class truth and malformed input") {
    const std::vector<double> scores = {0.1, 0.2};
    const std::vector<std::uint8_t> all_cases = {1, 1};
    const std::vector<std::uint8_t> all_controls = {0, 0};
    CHECK_THROWS_AS(roc_auc(scores, all_cases), undefined_auc_error);
    CHECK_THROWS_AS(roc_auc(scores, all_controls), undefined_auc_error);
    const std::vector<std::uint8_t> shorter = {1};
    CHECK_THROWS_AS(roc_auc(scores, shorter), usage_error);
    const std::vector<double> with_nan = {0.1, std::nan("")};
    const std::vector<std::uint8_t> truth = {1, 0};
    CHECK_THROWS_AS(roc_auc(with_nan, truth), usage_error);
}

TEST_CASE("roc matches the all-pairs oracle on random data") {
    std::mt19937_64 gen(424242);
    std::uniform_int_distribution<int> size_dist(2, 200);
    std::uniform_real_distribution<double> score_dist(0.0, 1.0);
    std::uniform_int_distribution<int> granularity(2, 30);
    std::bernoulli_distribution label(0.4);
    int rounds_done = 0;
    for (int round = 0; round < 500; ++round) {
        const int n = size_dist(gen);
        std::vector<double> scores(n);
        std::vector<std::uint8_t> truth(n);
        const int buckets = granularity(gen);  // coarse scores force heavy ties
        bool has_case = false, has_control = false;
        for (int i = 0; i < n; ++i) {
            scores[i] = std::floor(score_dist(gen) * buckets) / buckets;
            truth[i] = label(gen) ? 1 : 0;
            (truth[i] ? has_case : has_control) = true;
        }
        if (!has_case || !has_control) continue;
        ++rounds_done;
        const RocCurve roc = roc_auc(scores, truth);
        CHECK(roc.auc == doctest::Approx(brute_force_auc(scores, truth)).epsilon(1e-12));
        CHECK(trapezoid_area(roc.points) == doctest::Approx(roc.auc).epsilon(1e-12));
        // monotone transforms leave the ranking, hence the AUC, unchanged
        std::vector<double> warped(n);
        for (int i = 0; i < n; ++i) warped[i] = std::exp(3.0 * scores[i]) - 2.0;
        CHECK(roc_auc(warped, truth).auc == doctest::Approx(roc.auc).epsilon(1e-12));
        // flipping labels mirrors the area
        std::vector<std::uint8_t> flipped(n);
        for (int i = 0; i < n; ++i) flipped[i] = truth[i] ? 0 : 1;
        CHECK(roc_auc(scores, flipped).auc == doctest::Approx(1.0 - roc.auc).epsilon(1e-12));
    }
    CHECK(rounds_done > 400);
}

TEST_CASE("prevalence drift report") {
    SimParams params;
    params.n_subjects = 10000;
    params.prevalence = 0.3;
    params.genes.assign(50, TriGeneSpec{0.1, 1.5});
    params.seed = 5;
    const Population pop = simulate_janssens(params);
    const PrevalenceDrift drift = prevalence_drift(pop);
    CHECK(drift.target == doctest::Approx(0.3));
    CHECK(drift.observed ==
          doctest::Approx(static_cast<double>(pop.case_count()) / 10000.0).epsilon(1e-15));
    CHECK(drift.observed < drift.target);
}

TEST_CASE("gene counts needed to multiply the background risk") {
    // frozen counts for p=0.10, multiplier 5, f=0.10
    const std::vector<std::pair<double, std::pair<std::uint64_t, std::uint64_t>>> want = {
        {1.05, {26, 57}}, {1.10, {13, 30}}, {1.25, {6, 13}},
        {1.5, {4, 8}},    {3.0, {2, 3}},    {5.0, {1, 3}},
    };
    for (const auto& [or_het, counts] : want) {
        const GenesNeeded got = genes_needed_for_ppv({0.10, or_het}, 0.10, 5.0);
        CHECK(got.smallest == counts.first);
        CHECK(got.largest == counts.second);
        CHECK(got.smallest <= got.largest);
    }

    // smallest/largest both shrink as the odds ratio grows
    std::uint64_t prev_small = 1000000, prev_large = 1000000;
    for (double or_het : {1.05, 1.1, 1.25, 1.5, 2.0, 3.0, 5.0}) {
        const GenesNeeded got = genes_needed_for_ppv({0.10, or_het}, 0.10, 5.0);
        CHECK(got.smallest <= prev_small);
        CHECK(got.largest <= prev_large);
        prev_small = got.smallest;
        prev_large = got.largest;
    }
}

TEST_CASE("gene count search reports its failure modes") {
    // or = 1 gives lr = 1: the posterior can never move
    CHECK_THROWS_AS(genes_needed_for_ppv({0.10, 1.0}, 0.10, 5.0), infeasible_error);
    // target posterior at or above one is meaningless
    CHECK_THROWS_AS(genes_needed_for_ppv({0.10, 2.0}, 0.10, 10.0), domain_error);
    CHECK_THROWS_AS(genes_needed_for_ppv({0.10, 2.0}, 0.10, 0.5), domain_error);
    // barely-above-one odds ratio exhausts the 10000-gene cap
    CHECK_THROWS_AS(genes_needed_for_ppv({0.10, 1.0 + 1e-7}, 0.10, 5.0), infeasible_error);
}

TEST_CASE("gene count search at other operating points") {
    // posterior after k homozygous-risk genes crosses 0.5 exactly when
    // lr_ee^k * p / (1-p) >= multiplier-adjusted odds; cross-check one case
    // by explicit accumulation
    const TriGeneSpec spec{0.2, 2.0};
    const double p = 0.05;
    const double multiplier = 4.0;
    const GenesNeeded got = genes_needed_for_ppv(spec, p, multiplier);
    const GenotypeLRs lrs = genotype_lrs(solve_genotype_table(spec, p, 1.0));
    const double target = multiplier * p;
    double ln_lr = 0.0;
    std::uint64_t k_small = 0;
    while (posterior_risk_log(ln_lr, p) < target) {
        ln_lr += std::log(lrs.lr_ee_risk);
        ++k_small;
    }
    CHECK(got.smallest == k_small);
    ln_lr = 0.0;
    std::uint64_t k_large = 0;
    while (posterior_risk_log(ln_lr, p) < target) {
        ln_lr += std::log(lrs.lr_het);
        ++k_large;
    }
    CHECK(got.largest == k_large);
}
