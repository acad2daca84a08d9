#include "riskgene/io.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <sstream>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "riskgene/errors.hpp"
#include "riskgene/version.hpp"

namespace riskgene {

namespace {

std::vector<std::string_view> split_view(std::string_view line, char sep) {
    std::vector<std::string_view> fields;
    std::size_t start = 0;
    while (true) {
        const std::size_t pos = line.find(sep, start);
        if (pos == std::string_view::npos) {
            fields.push_back(line.substr(start));
            return fields;
        }
        fields.push_back(line.substr(start, pos - start));
        start = pos + 1;
    }
}

}  // namespace

std::string format_sig6(double value) {
    if (!std::isfinite(value)) {
        throw domain_error("cannot format a non-finite value");
    }
    if (value == 0.0) return "0.00000";

    char buf[64];
    std::snprintf(buf, sizeof buf, "%.5e", value);
    const char* e = std::strchr(buf, 'e');
    const int exponent = std::atoi(e + 1);

    const int decimals = 5 - exponent;
    if (decimals >= 0) {
        std::snprintf(buf, sizeof buf, "%.*f", decimals, value);
        return buf;
    }
    // Magnitude past six digits: round to six significant digits first so
    // the fixed print does not fake precision.
    const double scale = std::pow(10.0, exponent - 5);
    std::snprintf(buf, sizeof buf, "%.0f", std::round(value / scale) * scale);
    return buf;
}

std::string read_text_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw io_error("cannot open " + path.string() + " for reading");
    std::ostringstream content;
    content << in.rdbuf();
    if (in.bad()) throw io_error("read failed for " + path.string());
    return content.str();
}

void write_text_file(const std::filesystem::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw io_error("cannot open " + path.string() + " for writing");
    out << content;
    out.flush();
    if (!out) throw io_error("write failed for " + path.string());
}

void write_population(const Population& pop, const std::filesystem::path& csv_path) {
    const std::uint64_t n = pop.n_subjects;
    const std::uint64_t m = pop.n_genes;
    if (pop.genotypes.size() != n * m || pop.status.size() != n) {
        throw usage_error("population dimensions are inconsistent");
    }
    const bool has_risk = !pop.risk.empty();
    if (has_risk && pop.risk.size() != n) {
        throw usage_error("population risk vector length does not match n_subjects");
    }

    const double p_observed = n == 0 ? 0.0
                                     : static_cast<double>(pop.case_count()) /
                                           static_cast<double>(n);

    std::string csv;
    csv.reserve(64 + n * (8 + 9 + 2 * m));
    csv += "# ";
    csv += kToolName;
    csv += " ";
    csv += kVersion;
    csv += "\n# procedure = " + pop.procedure;
    csv += "\n# seed = " + std::to_string(pop.params.seed);
    csv += "\nsubject_id,status,risk";
    for (std::uint64_t g = 1; g <= m; ++g) csv += ",g" + std::to_string(g);
    csv += "\n";
    for (std::uint64_t i = 0; i < n; ++i) {
        csv += std::to_string(i + 1);
        csv += pop.status[i] ? ",1," : ",0,";
        csv += has_risk ? format_sig6(pop.risk[i]) : "";
        for (std::uint64_t g = 0; g < m; ++g) {
            csv += ',';
            csv += static_cast<char>('0' + pop.genotype(i, g));
        }
        csv += '\n';
    }
    write_text_file(csv_path, csv);

    nlohmann::json meta;
    meta["tool"] = kToolName;
    meta["version"] = kVersion;
    meta["procedure"] = pop.procedure;
    meta["seed"] = pop.params.seed;
    meta["n_subjects"] = n;
    meta["n_genes"] = m;
    meta["prevalence"] = pop.params.prevalence;
    meta["p_observed"] = p_observed;
    meta["warnings"] = pop.warnings;
    nlohmann::json genes = nlohmann::json::array();
    for (const TriGeneSpec& spec : pop.params.genes) {
        genes.push_back({{"allele_freq", spec.allele_freq}, {"or_het", spec.or_het}});
    }
    meta["genes"] = genes;
    write_text_file(csv_path.string() + ".meta.json", meta.dump(2) + "\n");
}

Population read_population(const std::filesystem::path& csv_path) {
    const std::filesystem::path meta_path = csv_path.string() + ".meta.json";
    nlohmann::json meta;
    try {
        meta = nlohmann::json::parse(read_text_file(meta_path));
    } catch (const nlohmann::json::exception& ex) {
        throw io_error("cannot parse " + meta_path.string() + ": " + ex.what());
    }

    Population pop;
    try {
        pop.procedure = meta.at("procedure").get<std::string>();
        pop.n_subjects = meta.at("n_subjects").get<std::uint64_t>();
        pop.n_genes = meta.at("n_genes").get<std::uint64_t>();
        pop.params.n_subjects = pop.n_subjects;
        pop.params.prevalence = meta.at("prevalence").get<double>();
        pop.params.seed = meta.at("seed").get<std::uint64_t>();
        for (const auto& gene : meta.at("genes")) {
            pop.params.genes.push_back(TriGeneSpec{gene.at("allele_freq").get<double>(),
                                                   gene.at("or_het").get<double>()});
        }
        if (meta.contains("warnings")) {
            pop.warnings = meta.at("warnings").get<std::vector<std::string>>();
        }
    } catch (const nlohmann::json::exception& ex) {
        throw io_error("metadata in " + meta_path.string() + " is incomplete: " + ex.what());
    }

    const std::string csv = read_text_file(csv_path);
    pop.genotypes.resize(pop.n_subjects * pop.n_genes);
    pop.status.resize(pop.n_subjects);
    pop.risk.resize(pop.n_subjects);

    std::uint64_t row = 0;
    bool header_seen = false;
    std::size_t line_start = 0;
    while (line_start < csv.size()) {
        std::size_t line_end = csv.find('\n', line_start);
        if (line_end == std::string::npos) line_end = csv.size();
        const std::string_view line(csv.data() + line_start, line_end - line_start);
        line_start = line_end + 1;

        if (line.empty() || line.front() == '#') continue;
        if (!header_seen) {
            if (!line.starts_with("subject_id,status,risk")) {
                throw io_error(csv_path.string() + " does not start with the expected header row");
            }
            header_seen = true;
            continue;
        }
        if (row >= pop.n_subjects) {
            throw io_error(csv_path.string() + " has more data rows than the metadata declares");
        }

        const auto fields = split_view(line, ',');
        if (fields.size() != 3 + pop.n_genes) {
            throw io_error(csv_path.string() + " row " + std::to_string(row + 1) +
                           " has " + std::to_string(fields.size()) + " fields, expected " +
                           std::to_string(3 + pop.n_genes));
        }
        if (fields[1] != "0" && fields[1] != "1") {
            throw io_error("status must be 0 or 1 in row " + std::to_string(row + 1));
        }
        pop.status[row] = fields[1] == "1" ? 1 : 0;
        pop.risk[row] = fields[2].empty() ? 0.0 : std::strtod(std::string(fields[2]).c_str(), nullptr);
        for (std::uint64_t g = 0; g < pop.n_genes; ++g) {
            const std::string_view cell = fields[3 + g];
            if (cell.size() != 1 || cell[0] < '0' || cell[0] > '2') {
                throw io_error("genotype codes must be 0, 1 or 2 in row " + std::to_string(row + 1));
            }
            pop.genotype(row, g) = static_cast<std::uint8_t>(cell[0] - '0');
        }
        ++row;
    }
    if (row != pop.n_subjects) {
        throw io_error(csv_path.string() + " has " + std::to_string(row) +
                       " data rows, metadata declares " + std::to_string(pop.n_subjects));
    }
    return pop;
}

}  // namespace riskgene
