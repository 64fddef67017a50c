#include "edl/presets.hpp"

#include <string>

#include "presets_data.inc"

namespace edl {

std::span<const Preset> bundled_presets() { return kBundledPresets; }

std::optional<Preset> find_preset(std::string_view name) {
    for (const auto& p : kBundledPresets)
        if (p.name == name) return p;
    return std::nullopt;
}

Scenario load_preset(std::string_view name) {
    const auto p = find_preset(name);
    if (!p) throw Error("unknown preset '" + std::string(name) + "'");
    return parse_config(p->text);
}

}  // namespace edl
