#pragma once

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace riskgene {

// Base class for every error raised by the toolkit.
class error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// A parameter lies outside its mathematical domain (probability not in
// (0,1), negative likelihood ratio, ...).
class domain_error : public error {
public:
    using error::error;
};

// Parameters imply a contingency table with a cell outside [0, total],
// or a search that cannot terminate. Carries any real roots found when
// raised by the genotype-table solver.
class infeasible_error : public error {
public:
    explicit infeasible_error(const std::string& what, std::vector<double> roots = {})
        : error(what), roots_(std::move(roots)) {}
    const std::vector<double>& roots() const noexcept { return roots_; }

private:
    std::vector<double> roots_;
};

// More than one admissible root of the genotype cubic; never silently
// resolved.
class ambiguous_root_error : public error {
public:
    explicit ambiguous_root_error(const std::string& what, std::vector<double> roots)
        : error(what), roots_(std::move(roots)) {}
    const std::vector<double>& roots() const noexcept { return roots_; }

private:
    std::vector<double> roots_;
};

// A table cell is zero where a likelihood ratio needs it positive.
class degenerate_error : public error {
public:
    using error::error;
};

// API misuse: mismatched lengths, missing inputs, malformed files.
class usage_error : public error {
public:
    using error::error;
};

// AUC requested with a single-class truth vector.
class undefined_auc_error : public error {
public:
    using error::error;
};

// Logistic fit diverged: data (quasi-)separated.
class separation_error : public error {
public:
    using error::error;
};

// Singular information matrix (constant or collinear columns).
class rank_error : public error {
public:
    using error::error;
};

// Filesystem / parse failures.
class io_error : public error {
public:
    using error::error;
};

}  // namespace riskgene
