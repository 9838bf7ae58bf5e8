#pragma once

#include <filesystem>
#include <string>

#include <json.hpp>

#include "revmine/metrics.hpp"

namespace revmine {

nlohmann::json report_to_json(const MetricsReport& r);
MetricsReport report_from_json(const nlohmann::json& j);

// Aligned text table with one row per label plus a Weighted Average row.
std::string render_table(const MetricsReport& r);

// "<protocol>[_<held-out-app-slug>]_run<k>_seed<s>.json"; run index -1 means
// an aggregate report and drops the run suffix.
std::string report_filename(const MetricsReport& r);

// Atomic write (temp file + rename).
void write_json_file(const nlohmann::json& j, const std::filesystem::path& path);
void write_text_file(const std::string& text, const std::filesystem::path& path);

}  // namespace revmine
