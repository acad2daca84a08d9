#include "riskgene/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <sstream>

#include "riskgene/case_control.hpp"
#include "riskgene/errors.hpp"
#include "riskgene/evaluation.hpp"
#include "riskgene/io.hpp"
#include "riskgene/parallel.hpp"
#include "riskgene/rng.hpp"
#include "riskgene/version.hpp"

namespace riskgene {

namespace {

std::string join(const std::vector<std::string>& parts, char sep) {
    std::string out;
    for (std::size_t i = 0; i < parts.size(); ++i) {
        if (i > 0) out += sep;
        out += parts[i];
    }
    return out;
}

std::string join_doubles(const std::vector<double>& values) {
    std::vector<std::string> parts;
    parts.reserve(values.size());
    for (double v : values) parts.push_back(format_sig6(v));
    return join(parts, ',');
}

std::string join_u64(const std::vector<std::uint64_t>& values) {
    std::vector<std::string> parts;
    parts.reserve(values.size());
    for (std::uint64_t v : values) parts.push_back(std::to_string(v));
    return join(parts, ',');
}

std::vector<std::string> standard_comments(const char* command, const MetadataList& meta) {
    std::vector<std::string> lines;
    lines.push_back(std::string(kToolName) + " " + kVersion);
    lines.push_back(std::string("command = ") + command);
    for (const auto& [key, value] : meta) lines.push_back(key + " = " + value);
    return lines;
}

double round2(double v) { return std::round(v * 100.0) / 100.0; }

double mean_of(const std::vector<double>& values) {
    double sum = 0.0;
    for (double v : values) sum += v;
    return sum / static_cast<double>(values.size());
}

double sample_sd(const std::vector<double>& values) {
    if (values.size() < 2) return 0.0;
    const double m = mean_of(values);
    double ss = 0.0;
    for (double v : values) ss += (v - m) * (v - m);
    return std::sqrt(ss / static_cast<double>(values.size() - 1));
}

double median_of(std::vector<double> values) {
    std::sort(values.begin(), values.end());
    const std::size_t n = values.size();
    return n % 2 == 1 ? values[n / 2] : 0.5 * (values[n / 2 - 1] + values[n / 2]);
}

// Commas would break the CSV; the note column carries prose.
std::string sanitize_note(std::string text) {
    std::replace(text.begin(), text.end(), ',', ';');
    std::replace(text.begin(), text.end(), '\n', ' ');
    return text;
}

std::string test_label(const std::vector<std::size_t>& gene_idx) {
    std::vector<std::string> parts;
    parts.reserve(gene_idx.size());
    for (std::size_t i : gene_idx) parts.push_back("g" + std::to_string(i + 1));
    return join(parts, '+');
}

CaseControlSample subset_columns(const CaseControlSample& sample,
                                 const std::vector<std::size_t>& cols) {
    CaseControlSample out;
    out.n_cases = sample.n_cases;
    out.n_controls = sample.n_controls;
    out.n_genes = cols.size();
    out.labels = sample.labels;
    out.design.resize(sample.rows() * cols.size());
    for (std::uint64_t r = 0; r < sample.rows(); ++r) {
        for (std::size_t j = 0; j < cols.size(); ++j) {
            out.design[r * cols.size() + j] = sample.at(r, cols[j]);
        }
    }
    return out;
}

std::vector<double> sorted_unique(std::vector<double> values) {
    std::sort(values.begin(), values.end());
    values.erase(std::unique(values.begin(), values.end()), values.end());
    return values;
}

std::vector<std::uint64_t> sorted_unique(std::vector<std::uint64_t> values) {
    std::sort(values.begin(), values.end());
    values.erase(std::unique(values.begin(), values.end()), values.end());
    return values;
}

std::vector<std::string> normalized_procedures(std::vector<std::string> procedures) {
    std::sort(procedures.begin(), procedures.end());
    procedures.erase(std::unique(procedures.begin(), procedures.end()), procedures.end());
    if (procedures.empty()) throw usage_error("at least one procedure is required");
    for (const std::string& p : procedures) {
        if (p != "janssens" && p != "revised") {
            throw usage_error("unknown procedure '" + p + "' (expected janssens or revised)");
        }
    }
    return procedures;
}

Population simulate_with(const std::string& procedure, const SimParams& params) {
    return procedure == "janssens" ? simulate_janssens(params) : simulate_revised(params);
}

// ---------------------------------------------------------------------------
// SVG line chart (cosmetic output for the figure command)
// ---------------------------------------------------------------------------

struct ChartSeries {
    std::string label;
    std::vector<std::pair<double, double>> points;  // (m, mean auc)
};

std::string render_line_chart(const std::string& title, const std::vector<ChartSeries>& series) {
    constexpr double kWidth = 860, kHeight = 560;
    constexpr double kLeft = 70, kRight = 680, kTop = 50, kBottom = 500;
    static const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                                     "#ff7f0e", "#8c564b", "#e377c2", "#7f7f7f"};

    double x_min = 0, x_max = 1, y_min = 0.5;
    bool any = false;
    for (const ChartSeries& s : series) {
        for (const auto& [x, y] : s.points) {
            if (!any) {
                x_min = x_max = x;
                any = true;
            }
            x_min = std::min(x_min, x);
            x_max = std::max(x_max, x);
            y_min = std::min(y_min, y);
        }
    }
    if (x_max <= x_min) x_max = x_min + 1;
    y_min = std::floor((y_min - 0.02) * 10.0) / 10.0;
    const double y_max = 1.0;

    auto sx = [&](double x) { return kLeft + (x - x_min) / (x_max - x_min) * (kRight - kLeft); };
    auto sy = [&](double y) { return kBottom - (y - y_min) / (y_max - y_min) * (kBottom - kTop); };
    auto num = [](double v) {
        std::ostringstream s;
        s << v;
        return s.str();
    };

    std::ostringstream svg;
    svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\""
        << kHeight << "\" viewBox=\"0 0 " << kWidth << " " << kHeight << "\">\n"
        << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
        << "<text x=\"" << (kLeft + kRight) / 2 << "\" y=\"28\" text-anchor=\"middle\" "
           "font-family=\"sans-serif\" font-size=\"18\">" << title << "</text>\n";

    // Axes and ticks.
    svg << "<line x1=\"" << kLeft << "\" y1=\"" << kBottom << "\" x2=\"" << kRight << "\" y2=\""
        << kBottom << "\" stroke=\"black\"/>\n"
        << "<line x1=\"" << kLeft << "\" y1=\"" << kTop << "\" x2=\"" << kLeft << "\" y2=\""
        << kBottom << "\" stroke=\"black\"/>\n";
    for (double y = y_min; y <= y_max + 1e-9; y += 0.1) {
        svg << "<line x1=\"" << kLeft - 5 << "\" y1=\"" << sy(y) << "\" x2=\"" << kLeft
            << "\" y2=\"" << sy(y) << "\" stroke=\"black\"/>\n"
            << "<text x=\"" << kLeft - 10 << "\" y=\"" << sy(y) + 4
            << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"12\">" << num(y)
            << "</text>\n";
    }
    std::vector<double> x_ticks;
    for (const ChartSeries& s : series) {
        for (const auto& [x, y] : s.points) x_ticks.push_back(x);
    }
    x_ticks = sorted_unique(std::move(x_ticks));
    for (double x : x_ticks) {
        svg << "<line x1=\"" << sx(x) << "\" y1=\"" << kBottom << "\" x2=\"" << sx(x)
            << "\" y2=\"" << kBottom + 5 << "\" stroke=\"black\"/>\n"
            << "<text x=\"" << sx(x) << "\" y=\"" << kBottom + 20
            << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\">" << num(x)
            << "</text>\n";
    }
    svg << "<text x=\"" << (kLeft + kRight) / 2 << "\" y=\"" << kHeight - 18
        << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"14\">genes in test"
           "</text>\n"
        << "<text x=\"20\" y=\"" << (kTop + kBottom) / 2
        << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"14\" "
           "transform=\"rotate(-90 20 " << (kTop + kBottom) / 2 << ")\">mean AUC</text>\n";

    for (std::size_t i = 0; i < series.size(); ++i) {
        const char* color = kPalette[i % (sizeof kPalette / sizeof kPalette[0])];
        svg << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"2\" points=\"";
        for (const auto& [x, y] : series[i].points) svg << sx(x) << "," << sy(y) << " ";
        svg << "\"/>\n";
        for (const auto& [x, y] : series[i].points) {
            svg << "<circle cx=\"" << sx(x) << "\" cy=\"" << sy(y) << "\" r=\"3\" fill=\"" << color
                << "\"/>\n";
        }
        const double ly = kTop + 18.0 * static_cast<double>(i);
        svg << "<line x1=\"" << kRight + 14 << "\" y1=\"" << ly << "\" x2=\"" << kRight + 38
            << "\" y2=\"" << ly << "\" stroke=\"" << color << "\" stroke-width=\"2\"/>\n"
            << "<text x=\"" << kRight + 44 << "\" y=\"" << ly + 4
            << "\" font-family=\"sans-serif\" font-size=\"12\">" << series[i].label << "</text>\n";
    }
    svg << "</svg>\n";
    return svg.str();
}

}  // namespace

std::string CsvDoc::to_string() const {
    std::string out;
    for (const std::string& comment : comments) {
        out += "# ";
        out += comment;
        out += '\n';
    }
    out += join(columns, ',');
    out += '\n';
    for (const auto& row : rows) {
        out += join(row, ',');
        out += '\n';
    }
    return out;
}

// ---------------------------------------------------------------------------
// table3
// ---------------------------------------------------------------------------

std::vector<BinaryGeneSpec> default_table3_genes() {
    std::vector<BinaryGeneSpec> genes(5);
    genes[0] = {0.25, 1.5};
    genes[1] = {0.20, 2.0};
    genes[2] = {0.15, 2.5};
    genes[3] = {0.10, 3.0};
    genes[4] = {0.05, 3.5};
    return genes;
}

std::vector<std::vector<std::size_t>> default_table3_tests() {
    return {{0}, {1}, {2}, {3}, {4}, {0, 1}, {0, 2}, {1, 2},
            {0, 1, 2}, {0, 1, 2, 3}, {0, 1, 2, 3, 4}};
}

std::vector<double> default_table3_chain_lr() {
    return {1.36, 1.72, 2.16, 2.71, 3.50};
}

std::vector<std::vector<std::size_t>> prefix_tests(std::size_t k) {
    std::vector<std::vector<std::size_t>> tests;
    for (std::size_t i = 0; i < k; ++i) tests.push_back({i});
    std::vector<std::size_t> prefix = {0};
    for (std::size_t i = 1; i < k; ++i) {
        prefix.push_back(i);
        tests.push_back(prefix);
    }
    return tests;
}

MetadataList Table3Config::metadata() const {
    MetadataList meta;
    meta.emplace_back("prevalence", format_sig6(prevalence));
    std::vector<std::string> gene_parts;
    for (const BinaryGeneSpec& g : genes) {
        gene_parts.push_back(format_sig6(g.relative_risk) + ":" + format_sig6(g.carrier_freq));
    }
    meta.emplace_back("genes", join(gene_parts, ','));
    meta.emplace_back("with_estimates", with_estimates ? "true" : "false");
    if (with_estimates) {
        meta.emplace_back("population", std::to_string(population));
        meta.emplace_back("cases", std::to_string(cases));
        meta.emplace_back("controls", std::to_string(controls));
        meta.emplace_back("replicates", std::to_string(replicates));
        meta.emplace_back("seed", std::to_string(seed));
    }
    return meta;
}

RunResult run_table3(const Table3Config& config) {
    Table3Config cfg = config;
    const bool defaulted_genes = cfg.genes.empty();
    if (defaulted_genes) cfg.genes = default_table3_genes();
    if (cfg.tests.empty()) {
        cfg.tests = defaulted_genes ? default_table3_tests() : prefix_tests(cfg.genes.size());
    }
    if (cfg.with_estimates && cfg.replicates < 1) {
        throw usage_error("replicates must be at least 1");
    }
    for (const auto& test : cfg.tests) {
        if (test.empty()) throw usage_error("every test needs at least one gene");
        for (std::size_t idx : test) {
            if (idx >= cfg.genes.size()) {
                throw usage_error("test references gene " + std::to_string(idx + 1) +
                                  " but only " + std::to_string(cfg.genes.size()) +
                                  " genes are configured");
            }
        }
    }

    std::vector<double> true_lr(cfg.genes.size());
    for (std::size_t i = 0; i < cfg.genes.size(); ++i) {
        true_lr[i] = binary_lr(solve_binary_table(cfg.genes[i], cfg.prevalence, 1.0)).positive;
    }

    // Two-decimal factors the multi-gene rows multiply. Overrides exist so
    // the default table can chain its reference values (whose second entry
    // is printed a cent below the exact LR); any override further than a
    // cent from the exact value is a configuration mistake, not an
    // alternate rounding.
    std::vector<double> chain_lr = cfg.chain_lr;
    if (chain_lr.empty() && defaulted_genes) chain_lr = default_table3_chain_lr();
    if (chain_lr.empty()) {
        for (double lr : true_lr) chain_lr.push_back(round2(lr));
    }
    if (chain_lr.size() != cfg.genes.size()) {
        throw usage_error("chain_lr must list one value per gene");
    }
    for (std::size_t i = 0; i < chain_lr.size(); ++i) {
        if (std::abs(chain_lr[i] - true_lr[i]) > 0.01 + 1e-9) {
            throw usage_error("chain_lr[" + std::to_string(i) +
                              "] is more than a cent away from the exact likelihood ratio");
        }
    }

    RunResult result;
    result.csv.comments = standard_comments("table3", cfg.metadata());
    result.csv.columns = {"test_id", "genes", "true_lr", "posterior_pct"};
    if (cfg.with_estimates) {
        for (const char* c : {"estimated_lr", "ci_low", "ci_high", "replicates"}) {
            result.csv.columns.push_back(c);
        }
    }

    // One case-control study per replicate; each test row refits on its own
    // gene subset of the same study.
    std::vector<std::vector<std::optional<LrEstimate>>> estimates;
    std::vector<std::vector<std::string>> estimate_errors;
    if (cfg.with_estimates) {
        estimates.assign(cfg.replicates, std::vector<std::optional<LrEstimate>>(cfg.tests.size()));
        estimate_errors.assign(cfg.replicates, std::vector<std::string>(cfg.tests.size()));
        parallel_for_index(cfg.replicates, [&](std::uint64_t r) {
            CaseControlSample sample;
            try {
                const Population pop =
                    simulate_binary_population(cfg.genes, cfg.prevalence, cfg.population,
                                               derive_replicate_seed(cfg.seed, 2 * r));
                sample = sample_case_control(pop, cfg.cases, cfg.controls,
                                             derive_replicate_seed(cfg.seed, 2 * r + 1));
            } catch (const error& ex) {
                for (std::size_t t = 0; t < cfg.tests.size(); ++t) {
                    estimate_errors[r][t] = ex.what();
                }
                return;
            }
            for (std::size_t t = 0; t < cfg.tests.size(); ++t) {
                try {
                    const CaseControlSample sub = subset_columns(sample, cfg.tests[t]);
                    const LogisticFit fit = fit_logistic(sub);
                    const std::vector<std::uint8_t> profile(cfg.tests[t].size(), 1);
                    estimates[r][t] = estimate_lr(fit, cfg.cases, cfg.controls, profile);
                } catch (const error& ex) {
                    estimate_errors[r][t] = ex.what();
                }
            }
        });
    }

    for (std::size_t t = 0; t < cfg.tests.size(); ++t) {
        const auto& test = cfg.tests[t];
        // Singles display the exact LR; multi-gene rows display the product
        // of the two-decimal factors. Posteriors always start from the
        // two-decimal form so they agree with the displayed table.
        double display_lr, rounded_lr;
        if (test.size() == 1) {
            display_lr = true_lr[test[0]];
            rounded_lr = chain_lr[test[0]];
        } else {
            display_lr = 1.0;
            for (std::size_t idx : test) display_lr *= chain_lr[idx];
            rounded_lr = round2(display_lr);
        }
        const double posterior_pct = 100.0 * posterior_risk(rounded_lr, cfg.prevalence);

        std::vector<std::string> row = {test_label(test), std::to_string(test.size()),
                                        format_sig6(display_lr), format_sig6(posterior_pct)};
        if (cfg.with_estimates) {
            std::vector<double> lr, lo, hi;
            std::string first_error;
            for (std::uint64_t r = 0; r < cfg.replicates; ++r) {
                if (estimates[r][t]) {
                    lr.push_back(estimates[r][t]->lr);
                    lo.push_back(estimates[r][t]->ci_low);
                    hi.push_back(estimates[r][t]->ci_high);
                } else if (first_error.empty()) {
                    first_error = estimate_errors[r][t];
                }
            }
            if (lr.empty()) {
                row.insert(row.end(), {"", "", "", "0"});
                result.failures.push_back("table3 " + test_label(test) +
                                          ": every replicate failed: " + first_error);
            } else {
                row.push_back(format_sig6(median_of(lr)));
                row.push_back(format_sig6(median_of(lo)));
                row.push_back(format_sig6(median_of(hi)));
                row.push_back(std::to_string(lr.size()));
            }
        }
        result.csv.rows.push_back(std::move(row));
    }
    return result;
}

// ---------------------------------------------------------------------------
// table5
// ---------------------------------------------------------------------------

MetadataList Table5Config::metadata() const {
    MetadataList meta;
    meta.emplace_back("prevalence", format_sig6(prevalence));
    meta.emplace_back("multiplier", format_sig6(multiplier));
    meta.emplace_back("f", format_sig6(allele_freq));
    meta.emplace_back("ors", join_doubles(or_grid));
    meta.emplace_back("sweep_f", sweep_f ? "true" : "false");
    return meta;
}

RunResult run_table5(const Table5Config& config) {
    RunResult result;
    result.csv.comments = standard_comments("table5", config.metadata());
    result.csv.columns = {"or", "f", "smallest", "largest", "note"};

    std::vector<double> freqs;
    if (config.sweep_f) {
        for (int i = 1; i <= 10; ++i) freqs.push_back(0.05 * i);
    } else {
        freqs.push_back(config.allele_freq);
    }

    const std::vector<double> ors = sorted_unique(config.or_grid);
    for (double f : freqs) {
        for (double or_het : ors) {
            std::vector<std::string> row = {format_sig6(or_het), format_sig6(f)};
            try {
                const GenesNeeded needed =
                    genes_needed_for_ppv(TriGeneSpec{f, or_het}, config.prevalence,
                                         config.multiplier);
                row.push_back(std::to_string(needed.smallest));
                row.push_back(std::to_string(needed.largest));
                row.emplace_back();
            } catch (const error& ex) {
                row.insert(row.end(), {"", ""});
                row.push_back(sanitize_note(ex.what()));
                result.failures.push_back("table5 or=" + format_sig6(or_het) + " f=" +
                                          format_sig6(f) + ": " + ex.what());
            }
            result.csv.rows.push_back(std::move(row));
        }
    }
    return result;
}

// ---------------------------------------------------------------------------
// figure1
// ---------------------------------------------------------------------------

MetadataList Figure1Config::metadata() const {
    MetadataList meta;
    meta.emplace_back("prevalence", format_sig6(prevalence));
    meta.emplace_back("f", format_sig6(allele_freq));
    meta.emplace_back("ors", join_doubles(or_grid));
    meta.emplace_back("ms", join_u64(m_grid));
    meta.emplace_back("n", std::to_string(n_subjects));
    meta.emplace_back("replicates", std::to_string(replicates));
    meta.emplace_back("seed", std::to_string(seed));
    meta.emplace_back("procedures", join(procedures, ','));
    return meta;
}

namespace {

struct GridCell {
    std::string procedure;
    double or_het = 1.0;
    std::uint64_t m = 0;
    std::uint64_t replicate = 0;
    std::uint64_t seed = 0;
};

struct GridOutcome {
    bool ok = false;
    double auc = 0.0;
    double p_observed = 0.0;
    std::string error;
};

}  // namespace

RunResult run_figure1(const Figure1Config& config, bool with_svg) {
    Figure1Config cfg = config;
    cfg.or_grid = sorted_unique(cfg.or_grid);
    cfg.m_grid = sorted_unique(cfg.m_grid);
    cfg.procedures = normalized_procedures(cfg.procedures);
    if (cfg.replicates < 1) throw usage_error("replicates must be at least 1");
    if (cfg.or_grid.empty() || cfg.m_grid.empty()) {
        throw usage_error("the or and m grids must be nonempty");
    }

    std::vector<GridCell> cells;
    for (const std::string& procedure : cfg.procedures) {
        for (double or_het : cfg.or_grid) {
            for (std::uint64_t m : cfg.m_grid) {
                for (std::uint64_t r = 0; r < cfg.replicates; ++r) {
                    GridCell cell{procedure, or_het, m, r,
                                  derive_replicate_seed(cfg.seed, cells.size())};
                    cells.push_back(std::move(cell));
                }
            }
        }
    }

    std::vector<GridOutcome> outcomes(cells.size());
    parallel_for_index(cells.size(), [&](std::uint64_t i) {
        const GridCell& cell = cells[i];
        try {
            SimParams params;
            params.n_subjects = cfg.n_subjects;
            params.prevalence = cfg.prevalence;
            params.genes.assign(cell.m, TriGeneSpec{cfg.allele_freq, cell.or_het});
            params.seed = cell.seed;
            const Population pop = simulate_with(cell.procedure, params);
            outcomes[i].auc = roc_auc(pop.risk, pop.status).auc;
            outcomes[i].p_observed = prevalence_drift(pop).observed;
            outcomes[i].ok = true;
        } catch (const error& ex) {
            outcomes[i].error = ex.what();
        }
    });

    RunResult result;
    result.csv.comments = standard_comments("figure1", cfg.metadata());
    result.csv.columns = {"procedure", "or", "m", "replicate", "seed", "auc", "p_observed"};
    for (std::size_t i = 0; i < cells.size(); ++i) {
        const GridCell& cell = cells[i];
        if (!outcomes[i].ok) {
            result.failures.push_back("figure1 procedure=" + cell.procedure + " or=" +
                                      format_sig6(cell.or_het) + " m=" + std::to_string(cell.m) +
                                      " replicate=" + std::to_string(cell.replicate) + ": " +
                                      outcomes[i].error);
            continue;
        }
        result.csv.rows.push_back({cell.procedure, format_sig6(cell.or_het),
                                   std::to_string(cell.m), std::to_string(cell.replicate),
                                   std::to_string(cell.seed), format_sig6(outcomes[i].auc),
                                   format_sig6(outcomes[i].p_observed)});
    }

    // Aggregates follow the per-replicate rows, in the same grid order.
    std::vector<ChartSeries> series;
    std::size_t base = 0;
    for (const std::string& procedure : cfg.procedures) {
        for (double or_het : cfg.or_grid) {
            ChartSeries line;
            line.label = "OR " + format_sig6(or_het) +
                         (cfg.procedures.size() > 1 ? " (" + procedure + ")" : "");
            for (std::uint64_t m : cfg.m_grid) {
                std::vector<double> aucs, drifts;
                for (std::uint64_t r = 0; r < cfg.replicates; ++r) {
                    const GridOutcome& o = outcomes[base + r];
                    if (o.ok) {
                        aucs.push_back(o.auc);
                        drifts.push_back(o.p_observed);
                    }
                }
                base += cfg.replicates;
                if (aucs.empty()) continue;
                result.csv.rows.push_back({procedure, format_sig6(or_het), std::to_string(m),
                                           "mean", "", format_sig6(mean_of(aucs)),
                                           format_sig6(mean_of(drifts))});
                result.csv.rows.push_back({procedure, format_sig6(or_het), std::to_string(m),
                                           "sd", "", format_sig6(sample_sd(aucs)),
                                           format_sig6(sample_sd(drifts))});
                line.points.emplace_back(static_cast<double>(m), mean_of(aucs));
            }
            if (!line.points.empty()) series.push_back(std::move(line));
        }
    }

    if (with_svg) {
        result.svg = render_line_chart("Discriminative accuracy of multi-gene tests", series);
    }
    return result;
}

// ---------------------------------------------------------------------------
// drift
// ---------------------------------------------------------------------------

MetadataList DriftConfig::metadata() const {
    MetadataList meta;
    meta.emplace_back("prevalence", format_sig6(prevalence));
    meta.emplace_back("f", format_sig6(allele_freq));
    meta.emplace_back("or", format_sig6(or_het));
    meta.emplace_back("ms", join_u64(m_grid));
    meta.emplace_back("n", std::to_string(n_subjects));
    meta.emplace_back("replicates", std::to_string(replicates));
    meta.emplace_back("seed", std::to_string(seed));
    meta.emplace_back("procedures", join(procedures, ','));
    return meta;
}

RunResult run_drift(const DriftConfig& config) {
    DriftConfig cfg = config;
    cfg.m_grid = sorted_unique(cfg.m_grid);
    cfg.procedures = normalized_procedures(cfg.procedures);
    if (cfg.replicates < 1) throw usage_error("replicates must be at least 1");
    if (cfg.m_grid.empty()) throw usage_error("the m grid must be nonempty");

    std::vector<GridCell> cells;
    for (const std::string& procedure : cfg.procedures) {
        for (std::uint64_t m : cfg.m_grid) {
            for (std::uint64_t r = 0; r < cfg.replicates; ++r) {
                GridCell cell{procedure, cfg.or_het, m, r,
                              derive_replicate_seed(cfg.seed, cells.size())};
                cells.push_back(std::move(cell));
            }
        }
    }

    std::vector<GridOutcome> outcomes(cells.size());
    parallel_for_index(cells.size(), [&](std::uint64_t i) {
        const GridCell& cell = cells[i];
        try {
            SimParams params;
            params.n_subjects = cfg.n_subjects;
            params.prevalence = cfg.prevalence;
            params.genes.assign(cell.m, TriGeneSpec{cfg.allele_freq, cell.or_het});
            params.seed = cell.seed;
            const Population pop = simulate_with(cell.procedure, params);
            outcomes[i].p_observed = prevalence_drift(pop).observed;
            outcomes[i].ok = true;
        } catch (const error& ex) {
            outcomes[i].error = ex.what();
        }
    });

    RunResult result;
    result.csv.comments = standard_comments("drift", cfg.metadata());
    result.csv.columns = {"procedure", "m", "replicate", "seed", "p_target", "p_observed"};
    for (std::size_t i = 0; i < cells.size(); ++i) {
        const GridCell& cell = cells[i];
        if (!outcomes[i].ok) {
            result.failures.push_back("drift procedure=" + cell.procedure + " m=" +
                                      std::to_string(cell.m) + " replicate=" +
                                      std::to_string(cell.replicate) + ": " + outcomes[i].error);
            continue;
        }
        result.csv.rows.push_back({cell.procedure, std::to_string(cell.m),
                                   std::to_string(cell.replicate), std::to_string(cell.seed),
                                   format_sig6(cfg.prevalence),
                                   format_sig6(outcomes[i].p_observed)});
    }

    std::size_t base = 0;
    for (const std::string& procedure : cfg.procedures) {
        for (std::uint64_t m : cfg.m_grid) {
            std::vector<double> drifts;
            for (std::uint64_t r = 0; r < cfg.replicates; ++r) {
                if (outcomes[base + r].ok) drifts.push_back(outcomes[base + r].p_observed);
            }
            base += cfg.replicates;
            if (drifts.empty()) continue;
            result.csv.rows.push_back({procedure, std::to_string(m), "mean", "",
                                       format_sig6(cfg.prevalence),
                                       format_sig6(mean_of(drifts))});
            result.csv.rows.push_back({procedure, std::to_string(m), "sd", "", "",
                                       format_sig6(sample_sd(drifts))});
        }
    }
    return result;
}

// ---------------------------------------------------------------------------
// simulate
// ---------------------------------------------------------------------------

MetadataList SimulateConfig::metadata() const {
    MetadataList meta;
    meta.emplace_back("n", std::to_string(params.n_subjects));
    meta.emplace_back("prevalence", format_sig6(params.prevalence));
    std::vector<std::string> gene_parts;
    for (const TriGeneSpec& g : params.genes) {
        gene_parts.push_back(format_sig6(g.or_het) + ":" + format_sig6(g.allele_freq));
    }
    meta.emplace_back("genes", join(gene_parts, ','));
    meta.emplace_back("seed", std::to_string(params.seed));
    meta.emplace_back("procedure", procedure);
    return meta;
}

Population run_simulate(const SimulateConfig& config) {
    if (config.procedure != "janssens" && config.procedure != "revised") {
        throw usage_error("unknown procedure '" + config.procedure +
                          "' (expected janssens or revised)");
    }
    return simulate_with(config.procedure, config.params);
}

}  // namespace riskgene
