#pragma once

#include <optional>
#include <span>
#include <string_view>

#include "edl/scenario.hpp"

namespace edl {

/// A scenario file bundled into the binary from presets/*.cfg.
struct Preset {
    std::string_view name;
    std::string_view text;
};

std::span<const Preset> bundled_presets();

std::optional<Preset> find_preset(std::string_view name);

/// Parses the named preset; throws edl::Error if it does not exist.
Scenario load_preset(std::string_view name);

}  // namespace edl
