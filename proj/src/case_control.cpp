#include "riskgene/case_control.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <string>

#include "riskgene/errors.hpp"
#include "riskgene/rng.hpp"

namespace riskgene {

namespace {

// First k entries of a uniformly random k-subset, via a partial shuffle.
std::vector<std::uint64_t> sample_without_replacement(std::vector<std::uint64_t> indices,
                                                      std::uint64_t k, Xoshiro256PlusPlus& rng) {
    for (std::uint64_t i = 0; i < k; ++i) {
        const std::uint64_t j = i + rng.next_below(indices.size() - i);
        std::swap(indices[i], indices[j]);
    }
    indices.resize(k);
    return indices;
}

Eigen::MatrixXd design_with_intercept(const CaseControlSample& sample) {
    const auto rows = static_cast<Eigen::Index>(sample.rows());
    const auto genes = static_cast<Eigen::Index>(sample.n_genes);
    Eigen::MatrixXd x(rows, genes + 1);
    x.col(0).setOnes();
    for (Eigen::Index r = 0; r < rows; ++r) {
        for (Eigen::Index g = 0; g < genes; ++g) {
            x(r, g + 1) = static_cast<double>(
                sample.at(static_cast<std::uint64_t>(r), static_cast<std::uint64_t>(g)));
        }
    }
    return x;
}

}  // namespace

void CaseControlSample::validate() const {
    if (n_cases == 0 || n_controls == 0) {
        throw usage_error("sample must contain at least one case and one control");
    }
    if (n_genes == 0) throw usage_error("sample must cover at least one gene");
    if (design.size() != rows() * n_genes || labels.size() != rows()) {
        throw usage_error("sample dimensions are inconsistent");
    }
    std::uint64_t label_sum = 0;
    for (std::uint8_t l : labels) {
        if (l > 1) throw usage_error("labels must be 0 or 1");
        label_sum += l;
    }
    if (label_sum != n_cases) throw usage_error("labels do not sum to n_cases");
    for (std::uint8_t v : design) {
        if (v > 1) throw usage_error("design entries must be 0 or 1");
    }
}

Population simulate_binary_population(std::span<const BinaryGeneSpec> specs, double p,
                                      std::uint64_t n, std::uint64_t seed) {
    if (specs.empty()) throw domain_error("at least one gene spec is required");
    if (n < 1) throw domain_error("population size must be at least 1");
    if (!(p > 0.0) || !(p < 1.0)) {
        throw domain_error("prevalence must lie strictly between 0 and 1");
    }
    const auto n_cases =
        static_cast<std::uint64_t>(std::llround(static_cast<double>(n) * p));
    if (n_cases < 1 || n_cases > n - 1) {
        throw domain_error("round(n*p) must leave at least one case and one control");
    }

    // Carrier probability per disease group, from each gene's exact table.
    std::vector<double> p_case(specs.size()), p_control(specs.size());
    for (std::size_t g = 0; g < specs.size(); ++g) {
        const BinaryTable table = solve_binary_table(specs[g], p, static_cast<double>(n));
        p_case[g] = table.a / (p * static_cast<double>(n));
        p_control[g] = table.b / ((1.0 - p) * static_cast<double>(n));
    }

    Population pop;
    pop.n_subjects = n;
    pop.n_genes = specs.size();
    pop.params.n_subjects = n;
    pop.params.prevalence = p;
    pop.params.seed = seed;
    pop.procedure = "binary";
    pop.genotypes.resize(n * specs.size());
    pop.status.resize(n);
    std::fill_n(pop.status.begin(), n_cases, std::uint8_t{1});

    Xoshiro256PlusPlus rng(seed);
    for (std::size_t g = 0; g < specs.size(); ++g) {
        std::uint8_t* column = pop.genotypes.data() + g * n;
        for (std::uint64_t i = 0; i < n; ++i) {
            const double carrier = i < n_cases ? p_case[g] : p_control[g];
            column[i] = rng.next_double() < carrier ? 1 : 0;
        }
    }
    return pop;
}

CaseControlSample sample_case_control(const Population& pop, std::uint64_t n_cases,
                                      std::uint64_t n_controls, std::uint64_t seed) {
    std::vector<std::uint64_t> case_idx, control_idx;
    case_idx.reserve(pop.n_subjects);
    control_idx.reserve(pop.n_subjects);
    for (std::uint64_t i = 0; i < pop.n_subjects; ++i) {
        (pop.status[i] ? case_idx : control_idx).push_back(i);
    }
    if (case_idx.size() < n_cases || control_idx.size() < n_controls) {
        throw usage_error("population holds " + std::to_string(case_idx.size()) + " cases and " +
                          std::to_string(control_idx.size()) + " controls; requested " +
                          std::to_string(n_cases) + "+" + std::to_string(n_controls));
    }
    if (n_cases == 0 || n_controls == 0) {
        throw usage_error("sample must contain at least one case and one control");
    }

    Xoshiro256PlusPlus rng(seed);
    const std::vector<std::uint64_t> chosen_cases =
        sample_without_replacement(std::move(case_idx), n_cases, rng);
    const std::vector<std::uint64_t> chosen_controls =
        sample_without_replacement(std::move(control_idx), n_controls, rng);

    CaseControlSample sample;
    sample.n_cases = n_cases;
    sample.n_controls = n_controls;
    sample.n_genes = pop.n_genes;
    sample.design.resize((n_cases + n_controls) * pop.n_genes);
    sample.labels.assign(n_cases + n_controls, 0);
    std::fill_n(sample.labels.begin(), n_cases, std::uint8_t{1});

    auto copy_row = [&](std::uint64_t row, std::uint64_t subject) {
        for (std::uint64_t g = 0; g < pop.n_genes; ++g) {
            const std::uint8_t code = pop.genotype(subject, g);
            if (code > 1) {
                throw usage_error("case-control sampling requires binary genotype coding");
            }
            sample.design[row * pop.n_genes + g] = code;
        }
    };
    for (std::uint64_t r = 0; r < n_cases; ++r) copy_row(r, chosen_cases[r]);
    for (std::uint64_t r = 0; r < n_controls; ++r) copy_row(n_cases + r, chosen_controls[r]);
    return sample;
}

LogisticFit fit_logistic(const CaseControlSample& sample) {
    sample.validate();
    for (std::uint64_t g = 0; g < sample.n_genes; ++g) {
        const std::uint8_t first = sample.at(0, g);
        bool varies = false;
        for (std::uint64_t r = 1; r < sample.rows() && !varies; ++r) {
            varies = sample.at(r, g) != first;
        }
        if (!varies) {
            throw rank_error("design column " + std::to_string(g + 1) +
                             " is constant; the fit is not identifiable");
        }
    }

    const Eigen::MatrixXd x = design_with_intercept(sample);
    Eigen::VectorXd y(x.rows());
    for (Eigen::Index r = 0; r < y.size(); ++r) {
        y(r) = static_cast<double>(sample.labels[static_cast<std::size_t>(r)]);
    }

    constexpr double kGradientTol = 1e-8;
    constexpr unsigned kMaxIterations = 100;
    constexpr double kSeparationBound = 30.0;

    Eigen::VectorXd theta = Eigen::VectorXd::Zero(x.cols());
    Eigen::MatrixXd information(x.cols(), x.cols());
    LogisticFit fit;
    fit.coefficients.assign(static_cast<std::size_t>(x.cols()) - 1, 0.0);

    for (unsigned iter = 0; iter <= kMaxIterations; ++iter) {
        const Eigen::VectorXd eta = x * theta;
        const Eigen::VectorXd mu =
            eta.unaryExpr([](double v) { return 1.0 / (1.0 + std::exp(-v)); });
        const Eigen::VectorXd gradient = x.transpose() * (y - mu);
        if (gradient.cwiseAbs().maxCoeff() < kGradientTol) {
            fit.converged = true;
            fit.iterations = iter;
            break;
        }
        if (iter == kMaxIterations) {
            fit.iterations = iter;
            break;
        }

        const Eigen::VectorXd w = mu.array() * (1.0 - mu.array());
        information.noalias() = x.transpose() * w.asDiagonal() * x;
        const Eigen::FullPivLU<Eigen::MatrixXd> lu(information);
        if (!lu.isInvertible()) {
            throw rank_error("information matrix is singular");
        }
        theta += lu.solve(gradient);

        for (Eigen::Index j = 1; j < theta.size(); ++j) {
            if (std::abs(theta(j)) > kSeparationBound) {
                throw separation_error("coefficient " + std::to_string(j) +
                                       " diverged past 30; data are separated");
            }
        }
    }

    fit.intercept = theta(0);
    for (Eigen::Index j = 1; j < theta.size(); ++j) {
        fit.coefficients[static_cast<std::size_t>(j) - 1] = theta(j);
    }

    // Covariance from the information at the final parameters.
    const Eigen::VectorXd eta = x * theta;
    const Eigen::VectorXd mu = eta.unaryExpr([](double v) { return 1.0 / (1.0 + std::exp(-v)); });
    const Eigen::VectorXd w = mu.array() * (1.0 - mu.array());
    information.noalias() = x.transpose() * w.asDiagonal() * x;
    const Eigen::FullPivLU<Eigen::MatrixXd> lu(information);
    if (!lu.isInvertible()) {
        throw rank_error("information matrix is singular at the optimum");
    }
    const Eigen::MatrixXd cov = lu.inverse();
    fit.covariance.resize(static_cast<std::size_t>(cov.rows()) * cov.cols());
    for (Eigen::Index i = 0; i < cov.rows(); ++i) {
        for (Eigen::Index j = 0; j < cov.cols(); ++j) {
            fit.covariance[static_cast<std::size_t>(i * cov.cols() + j)] =
                0.5 * (cov(i, j) + cov(j, i));
        }
    }
    return fit;
}

LrEstimate estimate_lr(const LogisticFit& fit, std::uint64_t n_cases, std::uint64_t n_controls,
                       std::span<const std::uint8_t> profile) {
    if (profile.size() != fit.coefficients.size()) {
        throw usage_error("profile length does not match the fitted gene count");
    }
    if (n_cases == 0 || n_controls == 0) {
        throw usage_error("group sizes must be positive");
    }

    double log_lr = std::log(static_cast<double>(n_controls) / static_cast<double>(n_cases)) +
                    fit.intercept;
    for (std::size_t g = 0; g < profile.size(); ++g) {
        if (profile[g] > 1) throw usage_error("profile entries must be 0 or 1");
        log_lr += fit.coefficients[g] * static_cast<double>(profile[g]);
    }

    // Wald variance of the linear predictor under fixed profile weights.
    const std::size_t dim = fit.dim();
    std::vector<double> wvec(dim, 1.0);
    for (std::size_t g = 0; g < profile.size(); ++g) {
        wvec[g + 1] = static_cast<double>(profile[g]);
    }
    double variance = 0.0;
    for (std::size_t i = 0; i < dim; ++i) {
        for (std::size_t j = 0; j < dim; ++j) {
            variance += wvec[i] * fit.covariance_at(i, j) * wvec[j];
        }
    }
    variance = std::max(variance, 0.0);
    const double se = std::sqrt(variance);

    LrEstimate estimate;
    estimate.lr = std::exp(log_lr);
    estimate.ci_low = std::exp(log_lr - 1.96 * se);
    estimate.ci_high = std::exp(log_lr + 1.96 * se);
    return estimate;
}

}  // namespace riskgene
