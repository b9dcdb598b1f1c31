#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "migstock/summary.hpp"

namespace migstock {

std::string sha256_hex(std::string_view bytes);
std::string sha256_file(const std::filesystem::path& path);

/// Persist per-chain draws as columnar CSV files chain_0.csv .. chain_K.csv
/// under `dir` (one column per flattened parameter).
void write_samples_csv(const PosteriorSamples& samples, const std::filesystem::path& dir);

/// Summary rows as CSV: age_group,year,region,median,lower95,upper95[,kind].
void write_summary_csv(const std::vector<CellSummary>& rows, const std::filesystem::path& path,
                       bool with_kind);

/// Key = value run configuration files ('#' comments, blank lines ignored).
std::map<std::string, std::string> read_config_file(const std::filesystem::path& path);

std::string format_full(double v);  // round-trip-exact decimal formatting

}  // namespace migstock
