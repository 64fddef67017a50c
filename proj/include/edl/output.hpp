#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "edl/infodyn.hpp"
#include "edl/integrate.hpp"
#include "edl/scenario.hpp"
#include "edl/sweep.hpp"

namespace edl::io {

/// Self-describing header written at the top of every output file.
struct Metadata {
    std::string command;
    Scenario scenario;
    /// Command-specific facts (thresholds, detected u_c, ...), written in order.
    std::vector<std::pair<std::string, std::string>> extra;
    std::optional<std::string> timestamp;

    /// Flat key/value view: tool, version, command, generated_at, config.*, extra.
    std::vector<std::pair<std::string, std::string>> entries() const;
};

/// UTC time as YYYY-MM-DDTHH:MM:SSZ.
std::string utc_timestamp();

/// %.17g, which round-trips every double.
std::string format_real(double v);

// CSV: metadata as leading "# key = value" lines, then one header row and one
// row per sample.
std::string trajectory_csv(const Trajectory& traj, const Metadata& meta);
std::string sweep_csv(const SweepResult& sweep, const Metadata& meta);
std::string infodyn_csv(const std::vector<info::InfoMetrics>& series, const Metadata& meta);

struct CsvTable {
    /// Leading comment lines without the "# " prefix.
    std::vector<std::string> comments;
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;
};

CsvTable parse_csv(const std::string& text);

// JSON: keys sorted lexicographically; dump with to_json_text for stable bytes.
nlohmann::json metadata_json(const Metadata& meta);
nlohmann::json trajectory_json(const Trajectory& traj, const Metadata& meta);
nlohmann::json sweep_json(const SweepResult& sweep, const Metadata& meta);
nlohmann::json infodyn_json(const std::vector<info::InfoMetrics>& series, const Metadata& meta);
nlohmann::json intervention_json(const InterventionReport& report, const Metadata& meta);
nlohmann::json regime_json(const RegimeLabel& label);

Trajectory trajectory_from_json(const nlohmann::json& j);
SweepResult sweep_from_json(const nlohmann::json& j);
std::vector<info::InfoMetrics> infodyn_from_json(const nlohmann::json& j);

std::string to_json_text(const nlohmann::json& j);

// SVG 1.1 static line charts, 800x500 viewBox, one polyline per series.
std::string trajectory_svg(const Trajectory& traj, const Metadata& meta);
std::string sweep_svg(const SweepResult& sweep, const Metadata& meta);

/// Writes text to a file, creating parent directories. Throws edl::Error on failure.
void write_file(const std::string& path, const std::string& contents);

}  // namespace edl::io
