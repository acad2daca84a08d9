#pragma once

#include <filesystem>
#include <string>

#include "riskgene/population.hpp"

namespace riskgene {

// Fixed decimal formatting with exactly six significant digits and no
// scientific notation, so CSV bytes are stable across platforms and runs.
std::string format_sig6(double value);

std::string read_text_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, const std::string& content);

// Writes the cohort as a CSV (columns subject_id, status, risk, g1..gM)
// plus a JSON metadata sidecar at <path>.meta.json carrying the parameters,
// procedure, observed prevalence, warnings and tool version.
void write_population(const Population& pop, const std::filesystem::path& csv_path);

// Reads a cohort written by write_population. Genotypes and status are
// restored exactly; risk is restored at the file's printed precision.
Population read_population(const std::filesystem::path& csv_path);

}  // namespace riskgene
