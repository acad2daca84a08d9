#include "riskgene/cli.hpp"

#include <CLI11.hpp>

#include <iostream>
#include <memory>
#include <string>
#include <tuple>
#include <vector>

#include "riskgene/config.hpp"
#include "riskgene/errors.hpp"
#include "riskgene/experiments.hpp"
#include "riskgene/io.hpp"
#include "riskgene/version.hpp"

namespace riskgene::cli {

namespace {

// Every option value is captured as a string and overlaid onto the config
// file entries after parsing, so flags always win and both sources share
// one parser and one set of error messages.
class OptionBag {
public:
    void add(CLI::App* cmd, const std::string& flag, const std::string& key,
             const std::string& description) {
        auto holder = std::make_shared<std::string>();
        CLI::Option* option = cmd->add_option(flag, *holder, description);
        options_.emplace_back(key, option, std::move(holder));
    }

    void add_flag(CLI::App* cmd, const std::string& flag, const std::string& key,
                  const std::string& description) {
        CLI::Option* option = cmd->add_flag(flag, description);
        options_.emplace_back(key, option, nullptr);
    }

    KeyValueConfig merged() const {
        KeyValueConfig kv;
        for (const auto& [key, option, holder] : options_) {
            if (key == "config" && option->count() > 0) {
                kv = KeyValueConfig::from_file(*holder);
            }
        }
        for (const auto& [key, option, holder] : options_) {
            if (key == "config" || option->count() == 0) continue;
            kv.set(key, holder ? *holder : "true");
        }
        return kv;
    }

private:
    std::vector<std::tuple<std::string, CLI::Option*, std::shared_ptr<std::string>>> options_;
};

void add_config_and_out(OptionBag& bag, CLI::App* cmd) {
    bag.add(cmd, "--config", "config", "key = value file; flags override its entries");
    bag.add(cmd, "--out", "out", "output CSV path (default: standard output)");
}

std::vector<BinaryGeneSpec> parse_binary_genes(const std::string& text) {
    std::vector<BinaryGeneSpec> genes;
    for (const std::string& part : split_list(text, ',')) {
        const std::vector<std::string> pair = split_list(part, ':');
        if (pair.size() != 2) {
            throw usage_error("genes: expected comma-separated R:f pairs, got '" + part + "'");
        }
        BinaryGeneSpec spec;
        spec.relative_risk = parse_double(pair[0], "genes (relative risk)");
        spec.carrier_freq = parse_double(pair[1], "genes (carrier frequency)");
        genes.push_back(spec);
    }
    if (genes.empty()) throw usage_error("genes: expected at least one R:f pair");
    return genes;
}

std::vector<TriGeneSpec> parse_tri_genes(const std::string& text) {
    std::vector<TriGeneSpec> genes;
    for (const std::string& part : split_list(text, ',')) {
        const std::vector<std::string> pair = split_list(part, ':');
        if (pair.size() != 2) {
            throw usage_error("genes: expected comma-separated OR:f pairs, got '" + part + "'");
        }
        TriGeneSpec spec;
        spec.or_het = parse_double(pair[0], "genes (odds ratio)");
        spec.allele_freq = parse_double(pair[1], "genes (allele frequency)");
        genes.push_back(spec);
    }
    if (genes.empty()) throw usage_error("genes: expected at least one OR:f pair");
    return genes;
}

std::uint64_t required_seed(const KeyValueConfig& kv) {
    if (!kv.has("seed")) {
        throw usage_error("this command is stochastic: provide --seed (or seed= in the config)");
    }
    return kv.get_u64("seed", 0);
}

std::vector<std::string> parse_procedures(const KeyValueConfig& kv,
                                          const std::string& fallback) {
    const std::string value = kv.get_string("procedure", fallback);
    if (value == "both") return {"janssens", "revised"};
    return {value};
}

int emit(const RunResult& result, const KeyValueConfig& kv, const std::string& svg_key) {
    const std::string out = kv.get_string("out", "");
    const std::string csv = result.csv.to_string();
    if (out.empty()) {
        std::cout << csv;
    } else {
        write_text_file(out, csv);
    }
    if (!svg_key.empty()) {
        const std::string svg_path = kv.get_string(svg_key, "");
        if (!svg_path.empty()) write_text_file(svg_path, result.svg);
    }
    for (const std::string& failure : result.failures) {
        std::cerr << "error: " << failure << "\n";
    }
    return result.failures.empty() ? 0 : 1;
}

int run_table3_cmd(const KeyValueConfig& kv) {
    Table3Config cfg;
    cfg.prevalence = kv.get_double("prevalence", cfg.prevalence);
    if (kv.has("genes")) cfg.genes = parse_binary_genes(kv.get_string("genes", ""));
    cfg.with_estimates = kv.get_bool("with_estimates", false);
    cfg.population = kv.get_u64("population", cfg.population);
    cfg.cases = kv.get_u64("cases", cfg.cases);
    cfg.controls = kv.get_u64("controls", cfg.controls);
    cfg.replicates = kv.get_u64("replicates", cfg.replicates);
    if (cfg.with_estimates) cfg.seed = required_seed(kv);
    return emit(run_table3(cfg), kv, "");
}

int run_table5_cmd(const KeyValueConfig& kv) {
    Table5Config cfg;
    cfg.prevalence = kv.get_double("prevalence", cfg.prevalence);
    cfg.multiplier = kv.get_double("multiplier", cfg.multiplier);
    cfg.allele_freq = kv.get_double("f", cfg.allele_freq);
    cfg.or_grid = kv.get_doubles("ors", cfg.or_grid);
    cfg.sweep_f = kv.get_bool("sweep_f", false);
    return emit(run_table5(cfg), kv, "");
}

int run_figure1_cmd(const KeyValueConfig& kv) {
    Figure1Config cfg;
    cfg.prevalence = kv.get_double("prevalence", cfg.prevalence);
    cfg.allele_freq = kv.get_double("f", cfg.allele_freq);
    cfg.or_grid = kv.get_doubles("ors", cfg.or_grid);
    cfg.m_grid = kv.get_u64s("ms", cfg.m_grid);
    cfg.n_subjects = kv.get_u64("n", cfg.n_subjects);
    cfg.replicates = kv.get_u64("replicates", cfg.replicates);
    cfg.procedures = parse_procedures(kv, "revised");
    cfg.seed = required_seed(kv);
    const bool with_svg = kv.has("svg");
    return emit(run_figure1(cfg, with_svg), kv, "svg");
}

int run_drift_cmd(const KeyValueConfig& kv) {
    DriftConfig cfg;
    cfg.prevalence = kv.get_double("prevalence", cfg.prevalence);
    cfg.allele_freq = kv.get_double("f", cfg.allele_freq);
    cfg.or_het = kv.get_double("or", cfg.or_het);
    cfg.m_grid = kv.get_u64s("ms", cfg.m_grid);
    cfg.n_subjects = kv.get_u64("n", cfg.n_subjects);
    cfg.replicates = kv.get_u64("replicates", cfg.replicates);
    cfg.procedures = parse_procedures(kv, "both");
    cfg.seed = required_seed(kv);
    return emit(run_drift(cfg), kv, "");
}

int run_simulate_cmd(const KeyValueConfig& kv) {
    SimulateConfig cfg;
    cfg.params.n_subjects = kv.get_u64("n", cfg.params.n_subjects);
    cfg.params.prevalence = kv.get_double("prevalence", cfg.params.prevalence);
    cfg.procedure = kv.get_string("procedure", cfg.procedure);
    cfg.params.seed = required_seed(kv);

    const bool explicit_genes = kv.has("genes");
    const bool uniform_genes = kv.has("m") || kv.has("or") || kv.has("f");
    if (explicit_genes && uniform_genes) {
        throw usage_error("provide either genes or the uniform m/or/f trio, not both");
    }
    if (explicit_genes) {
        cfg.params.genes = parse_tri_genes(kv.get_string("genes", ""));
    } else {
        const std::uint64_t m = kv.get_u64("m", 1);
        TriGeneSpec spec;
        spec.allele_freq = kv.get_double("f", 0.10);
        spec.or_het = kv.get_double("or", 1.5);
        cfg.params.genes.assign(m, spec);
    }

    const std::string out = kv.get_string("out", "");
    if (out.empty()) {
        throw usage_error("simulate writes a cohort file: provide --out");
    }

    const Population pop = run_simulate(cfg);
    write_population(pop, out);
    for (const std::string& warning : pop.warnings) {
        std::cerr << "warning: " << warning << "\n";
    }
    return 0;
}

}  // namespace

int run(int argc, const char* const* argv) {
    CLI::App app{"Simulation toolkit for the prognostic value of multi-gene risk tests"};
    app.name(kToolName);
    app.set_version_flag("--version", std::string(kToolName) + " " + kVersion);
    app.require_subcommand(1);

    CLI::App* table3 = app.add_subcommand(
        "table3", "True and case-control-estimated likelihood ratios of multi-gene tests");
    OptionBag table3_bag;
    add_config_and_out(table3_bag, table3);
    table3_bag.add(table3, "--prevalence", "prevalence", "background disease risk (default 0.05)");
    table3_bag.add(table3, "--genes", "genes",
                   "comma-separated R:f pairs (relative risk : carrier frequency)");
    table3_bag.add_flag(table3, "--with-estimates", "with_estimates",
                        "add case-control estimate columns (needs --seed)");
    table3_bag.add(table3, "--population", "population",
                   "cohort size the studies sample from (default 1000000)");
    table3_bag.add(table3, "--cases", "cases", "cases per study (default 1000)");
    table3_bag.add(table3, "--controls", "controls", "controls per study (default 1000)");
    table3_bag.add(table3, "--replicates", "replicates", "study replicates (default 20)");
    table3_bag.add(table3, "--seed", "seed", "master seed for the estimate columns");

    CLI::App* table5 = app.add_subcommand(
        "table5", "Gene counts needed to multiply the background risk");
    OptionBag table5_bag;
    add_config_and_out(table5_bag, table5);
    table5_bag.add(table5, "--prevalence", "prevalence", "background disease risk (default 0.10)");
    table5_bag.add(table5, "--multiplier", "multiplier", "target risk multiplier (default 5)");
    table5_bag.add(table5, "--f", "f", "risk allele frequency (default 0.10)");
    table5_bag.add(table5, "--ors", "ors", "comma-separated heterozygous odds ratios");
    table5_bag.add_flag(table5, "--sweep-f", "sweep_f",
                        "emit one block per f in 0.05..0.50 step 0.05");

    CLI::App* figure1 = app.add_subcommand(
        "figure1", "AUC of multi-gene tests over an (OR, gene count) grid");
    OptionBag figure1_bag;
    add_config_and_out(figure1_bag, figure1);
    figure1_bag.add(figure1, "--prevalence", "prevalence",
                    "background disease risk (default 0.10)");
    figure1_bag.add(figure1, "--f", "f", "risk allele frequency (default 0.10)");
    figure1_bag.add(figure1, "--ors", "ors", "comma-separated heterozygous odds ratios");
    figure1_bag.add(figure1, "--ms", "ms", "comma-separated gene counts");
    figure1_bag.add(figure1, "--n", "n", "subjects per simulation (default 100000)");
    figure1_bag.add(figure1, "--replicates", "replicates", "replicates per cell (default 20)");
    figure1_bag.add(figure1, "--procedure", "procedure",
                    "janssens, revised or both (default revised)");
    figure1_bag.add(figure1, "--seed", "seed", "master seed (required)");
    figure1_bag.add(figure1, "--svg", "svg", "also write a line chart to this path");

    CLI::App* drift = app.add_subcommand(
        "drift", "Configured vs observed prevalence per simulation procedure");
    OptionBag drift_bag;
    add_config_and_out(drift_bag, drift);
    drift_bag.add(drift, "--prevalence", "prevalence", "background disease risk (default 0.30)");
    drift_bag.add(drift, "--f", "f", "risk allele frequency (default 0.10)");
    drift_bag.add(drift, "--or", "or", "heterozygous odds ratio (default 1.5)");
    drift_bag.add(drift, "--ms", "ms", "comma-separated gene counts (default 100,200,400)");
    drift_bag.add(drift, "--n", "n", "subjects per simulation (default 100000)");
    drift_bag.add(drift, "--replicates", "replicates", "replicates per cell (default 20)");
    drift_bag.add(drift, "--procedure", "procedure",
                  "janssens, revised or both (default both)");
    drift_bag.add(drift, "--seed", "seed", "master seed (required)");

    CLI::App* simulate = app.add_subcommand(
        "simulate", "Write one simulated cohort with its metadata sidecar");
    OptionBag simulate_bag;
    add_config_and_out(simulate_bag, simulate);
    simulate_bag.add(simulate, "--n", "n", "subjects (default 100000)");
    simulate_bag.add(simulate, "--prevalence", "prevalence",
                     "background disease risk (default 0.10)");
    simulate_bag.add(simulate, "--m", "m", "gene count for a uniform panel (default 1)");
    simulate_bag.add(simulate, "--or", "or", "uniform heterozygous odds ratio (default 1.5)");
    simulate_bag.add(simulate, "--f", "f", "uniform risk allele frequency (default 0.10)");
    simulate_bag.add(simulate, "--genes", "genes",
                     "comma-separated OR:f pairs overriding the uniform panel");
    simulate_bag.add(simulate, "--procedure", "procedure",
                     "janssens or revised (default revised)");
    simulate_bag.add(simulate, "--seed", "seed", "seed (required)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    }

    try {
        if (table3->parsed()) return run_table3_cmd(table3_bag.merged());
        if (table5->parsed()) return run_table5_cmd(table5_bag.merged());
        if (figure1->parsed()) return run_figure1_cmd(figure1_bag.merged());
        if (drift->parsed()) return run_drift_cmd(drift_bag.merged());
        if (simulate->parsed()) return run_simulate_cmd(simulate_bag.merged());
    } catch (const error& ex) {
        std::cerr << "error: " << ex.what() << "\n";
        return 1;
    }
    return 0;
}

}  // namespace riskgene::cli
