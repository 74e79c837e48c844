#pragma once

#include <string>
#include <vector>

#include "json.hpp"
#include "kdvsol/deform.hpp"
#include "kdvsol/oracle.hpp"
#include "kdvsol/scatter.hpp"

namespace kdv {

/// 17-significant-digit C-locale rendering used by every numeric text output,
/// so identical inputs always produce byte-identical files.
std::string format_double(double value);

/// Two-column table with a header row and '\n' line endings.
std::string csv_two_columns(const std::string& header, const std::vector<double>& a,
                            const std::vector<double>& b);

/// Three-column table with a header row and '\n' line endings.
std::string csv_three_columns(const std::string& header, const std::vector<double>& a,
                              const std::vector<double>& b, const std::vector<double>& c);

/// Writes the whole string; throws IoFailure on any stream error.
void write_text_file(const std::string& path, const std::string& content);

/// Reads the whole file; throws IoFailure if it cannot be opened.
std::string read_text_file(const std::string& path);

/// Stable two-space-indented rendering with a trailing newline.
std::string dump_json(const nlohmann::json& j);

nlohmann::json to_json(const ScatteringData& data);
ScatteringData scattering_data_from_json(const nlohmann::json& j);

nlohmann::json to_json(const AdmissibilityReport& report);
nlohmann::json to_json(const VerificationReport& report);

} // namespace kdv
