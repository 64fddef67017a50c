#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "edl/equilibrium.hpp"
#include "edl/infodyn.hpp"
#include "edl/integrate.hpp"
#include "edl/sweep.hpp"

namespace edl {

struct SweepSpec {
    double u_min = 0.05;
    double u_max = 1.0;
    double u_step = 0.01;
    SweepMode mode = SweepMode::Analytic;
    double band_fraction = 0.5;

    std::vector<double> grid() const { return uniform_grid(u_min, u_max, u_step); }
    bool operator==(const SweepSpec&) const = default;
};

struct InfodynSpec {
    info::InfoConfig config;
    std::size_t K = 64;
    double zipf_exponent = 1.0;
    int generations = 20;

    bool operator==(const InfodynSpec&) const = default;
};

/// A complete, validated run description.
struct Scenario {
    std::string name = "scenario";
    std::string description;
    SystemParams params;
    ControlParams control;
    StateVec init{0.5, 0.5, 0.5};
    IntegratorConfig integrator;
    RegimeThresholds thresholds;
    std::optional<SweepSpec> sweep;
    std::optional<InfodynSpec> infodyn;

    bool operator==(const Scenario&) const = default;
};

ValidationResult validate(const Scenario& scenario);

/// Parses the line-based `key = value` format (`#` starts a comment).
/// Unknown or duplicate keys are errors; missing keys keep their defaults.
/// Throws ParseError (with line number) or ValidationError.
Scenario parse_config(std::string_view text);

/// Reads and parses a file; I/O failures throw edl::Error.
Scenario load_config(const std::string& path);

/// Canonical text form; parse_config(serialize_config(s)) == s.
std::string serialize_config(const Scenario& scenario);

/// Every recognised key, in canonical order.
const std::vector<std::string>& config_keys();

std::string_view to_string(Method m);

}  // namespace edl
