#include "edl/scenario.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>

namespace edl {

std::string_view to_string(Method m) { return m == Method::Euler ? "euler" : "rk4"; }

namespace {

std::string_view trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

std::string format_real(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

double parse_real(std::string_view v, std::size_t line, std::string_view key) {
    double out = 0.0;
    const char* end = v.data() + v.size();
    if (!v.empty() && v.front() == '+') v.remove_prefix(1);
    auto [ptr, ec] = std::from_chars(v.data(), end, out);
    if (ec != std::errc{} || ptr != end || v.empty())
        throw ParseError(line, "'" + std::string(key) + "' expects a real number, got '" + std::string(v) + "'");
    return out;
}

std::size_t parse_count(std::string_view v, std::size_t line, std::string_view key) {
    std::size_t out = 0;
    const char* end = v.data() + v.size();
    auto [ptr, ec] = std::from_chars(v.data(), end, out);
    if (ec != std::errc{} || ptr != end || v.empty())
        throw ParseError(line, "'" + std::string(key) + "' expects a nonnegative integer, got '" + std::string(v) + "'");
    return out;
}

bool parse_bool(std::string_view v, std::size_t line, std::string_view key) {
    if (v == "true" || v == "1" || v == "on") return true;
    if (v == "false" || v == "0" || v == "off") return false;
    throw ParseError(line, "'" + std::string(key) + "' expects true or false, got '" + std::string(v) + "'");
}

SweepSpec& sweep_of(Scenario& s) {
    if (!s.sweep) s.sweep.emplace();
    return *s.sweep;
}

InfodynSpec& infodyn_of(Scenario& s) {
    if (!s.infodyn) s.infodyn.emplace();
    return *s.infodyn;
}

struct KeySpec {
    std::string key;
    bool text;  // value taken verbatim, no trailing comments
    std::function<void(Scenario&, std::string_view, std::size_t)> set;
    // Returns nothing when the key should not be written.
    std::function<std::optional<std::string>(const Scenario&)> get;
};

KeySpec real_key(std::string key, std::function<double&(Scenario&)> ref) {
    return {key, false,
            [ref, key](Scenario& s, std::string_view v, std::size_t line) { ref(s) = parse_real(v, line, key); },
            [ref](const Scenario& s) -> std::optional<std::string> {
                Scenario copy = s;
                return format_real(ref(copy));
            }};
}

template <typename Section>
KeySpec section_real(std::string key, const std::optional<Section> Scenario::*opt, Section& (*make)(Scenario&),
                     double Section::*field) {
    return {key, false,
            [key, make, field](Scenario& s, std::string_view v, std::size_t line) {
                make(s).*field = parse_real(v, line, key);
            },
            [opt, field](const Scenario& s) -> std::optional<std::string> {
                if (!(s.*opt)) return std::nullopt;
                return format_real((*(s.*opt)).*field);
            }};
}

const std::vector<KeySpec>& key_table() {
    static const std::vector<KeySpec> table = [] {
        std::vector<KeySpec> t;
        t.push_back({"name", true, [](Scenario& s, std::string_view v, std::size_t) { s.name = std::string(v); },
                     [](const Scenario& s) -> std::optional<std::string> { return s.name; }});
        t.push_back({"description", true,
                     [](Scenario& s, std::string_view v, std::size_t) { s.description = std::string(v); },
                     [](const Scenario& s) -> std::optional<std::string> { return s.description; }});

        t.push_back(real_key("params.a", [](Scenario& s) -> double& { return s.params.a; }));
        t.push_back(real_key("params.b", [](Scenario& s) -> double& { return s.params.b; }));
        t.push_back(real_key("params.c", [](Scenario& s) -> double& { return s.params.c; }));
        t.push_back(real_key("params.d", [](Scenario& s) -> double& { return s.params.d; }));
        t.push_back(real_key("params.e", [](Scenario& s) -> double& { return s.params.e; }));
        t.push_back(real_key("params.f", [](Scenario& s) -> double& { return s.params.f; }));
        t.push_back(real_key("params.r_H", [](Scenario& s) -> double& { return s.params.r_H; }));
        t.push_back(real_key("params.r_Q", [](Scenario& s) -> double& { return s.params.r_Q; }));
        t.push_back(real_key("params.r_M", [](Scenario& s) -> double& { return s.params.r_M; }));
        t.push_back(real_key("control.alpha", [](Scenario& s) -> double& { return s.control.alpha; }));
        t.push_back(real_key("control.beta", [](Scenario& s) -> double& { return s.control.beta; }));
        t.push_back(real_key("control.u", [](Scenario& s) -> double& { return s.control.u; }));
        t.push_back(real_key("init.H", [](Scenario& s) -> double& { return s.init.H; }));
        t.push_back(real_key("init.Q", [](Scenario& s) -> double& { return s.init.Q; }));
        t.push_back(real_key("init.M", [](Scenario& s) -> double& { return s.init.M; }));

        t.push_back({"integrator.method", false,
                     [](Scenario& s, std::string_view v, std::size_t line) {
                         if (v == "euler")
                             s.integrator.method = Method::Euler;
                         else if (v == "rk4")
                             s.integrator.method = Method::RK4;
                         else
                             throw ParseError(line, "'integrator.method' expects euler or rk4, got '" + std::string(v) + "'");
                     },
                     [](const Scenario& s) -> std::optional<std::string> {
                         return std::string(to_string(s.integrator.method));
                     }});
        t.push_back(real_key("integrator.h", [](Scenario& s) -> double& { return s.integrator.h; }));
        t.push_back(real_key("integrator.T", [](Scenario& s) -> double& { return s.integrator.T; }));
        t.push_back({"integrator.clamp", false,
                     [](Scenario& s, std::string_view v, std::size_t line) {
                         s.integrator.clamp_nonneg = parse_bool(v, line, "integrator.clamp");
                     },
                     [](const Scenario& s) -> std::optional<std::string> {
                         return s.integrator.clamp_nonneg ? "true" : "false";
                     }});
        t.push_back({"integrator.max_steps", false,
                     [](Scenario& s, std::string_view v, std::size_t line) {
                         s.integrator.max_steps = parse_count(v, line, "integrator.max_steps");
                     },
                     [](const Scenario& s) -> std::optional<std::string> {
                         return std::to_string(s.integrator.max_steps);
                     }});
        t.push_back({"integrator.stride", false,
                     [](Scenario& s, std::string_view v, std::size_t line) {
                         s.integrator.stride = parse_count(v, line, "integrator.stride");
                     },
                     [](const Scenario& s) -> std::optional<std::string> {
                         return std::to_string(s.integrator.stride);
                     }});

        t.push_back(real_key("regime.eps_eq", [](Scenario& s) -> double& { return s.thresholds.eps_eq; }));
        t.push_back(real_key("regime.s_conv", [](Scenario& s) -> double& { return s.thresholds.s_conv; }));
        t.push_back(real_key("regime.s_min", [](Scenario& s) -> double& { return s.thresholds.s_min; }));
        t.push_back(real_key("regime.delta", [](Scenario& s) -> double& { return s.thresholds.delta; }));
        t.push_back(real_key("regime.tail_fraction", [](Scenario& s) -> double& { return s.thresholds.tail_fraction; }));

        t.push_back(section_real("sweep.u_min", &Scenario::sweep, &sweep_of, &SweepSpec::u_min));
        t.push_back(section_real("sweep.u_max", &Scenario::sweep, &sweep_of, &SweepSpec::u_max));
        t.push_back(section_real("sweep.u_step", &Scenario::sweep, &sweep_of, &SweepSpec::u_step));
        t.push_back({"sweep.mode", false,
                     [](Scenario& s, std::string_view v, std::size_t line) {
                         if (v == "analytic")
                             sweep_of(s).mode = SweepMode::Analytic;
                         else if (v == "simulated")
                             sweep_of(s).mode = SweepMode::Simulated;
                         else
                             throw ParseError(line, "'sweep.mode' expects analytic or simulated, got '" + std::string(v) + "'");
                     },
                     [](const Scenario& s) -> std::optional<std::string> {
                         if (!s.sweep) return std::nullopt;
                         return std::string(to_string(s.sweep->mode));
                     }});
        t.push_back(section_real("sweep.band_fraction", &Scenario::sweep, &sweep_of, &SweepSpec::band_fraction));

        t.push_back({"infodyn.K", false,
                     [](Scenario& s, std::string_view v, std::size_t line) { infodyn_of(s).K = parse_count(v, line, "infodyn.K"); },
                     [](const Scenario& s) -> std::optional<std::string> {
                         if (!s.infodyn) return std::nullopt;
                         return std::to_string(s.infodyn->K);
                     }});
        t.push_back(section_real("infodyn.zipf_exponent", &Scenario::infodyn, &infodyn_of, &InfodynSpec::zipf_exponent));
        t.push_back({"infodyn.generations", false,
                     [](Scenario& s, std::string_view v, std::size_t line) {
                         const std::size_t g = parse_count(v, line, "infodyn.generations");
                         if (g > 1'000'000) throw ParseError(line, "'infodyn.generations' is too large");
                         infodyn_of(s).generations = static_cast<int>(g);
                     },
                     [](const Scenario& s) -> std::optional<std::string> {
                         if (!s.infodyn) return std::nullopt;
                         return std::to_string(s.infodyn->generations);
                     }});
        auto info_real = [](std::string key, double info::InfoConfig::*field) {
            return KeySpec{key, false,
                           [key, field](Scenario& s, std::string_view v, std::size_t line) {
                               infodyn_of(s).config.*field = parse_real(v, line, key);
                           },
                           [field](const Scenario& s) -> std::optional<std::string> {
                               if (!s.infodyn) return std::nullopt;
                               return format_real(s.infodyn->config.*field);
                           }};
        };
        auto info_optional = [](std::string key, std::optional<double> info::InfoConfig::*field) {
            return KeySpec{key, false,
                           [key, field](Scenario& s, std::string_view v, std::size_t line) {
                               infodyn_of(s).config.*field = parse_real(v, line, key);
                           },
                           [field](const Scenario& s) -> std::optional<std::string> {
                               if (!s.infodyn || !(s.infodyn->config.*field)) return std::nullopt;
                               return format_real(*(s.infodyn->config.*field));
                           }};
        };
        t.push_back(info_real("infodyn.u", &info::InfoConfig::u));
        t.push_back(info_optional("infodyn.lambda", &info::InfoConfig::lambda));
        t.push_back(info_optional("infodyn.tau", &info::InfoConfig::tau));
        t.push_back(info_real("infodyn.epsilon_tail", &info::InfoConfig::epsilon_tail));
        t.push_back(info_real("infodyn.kappa", &info::InfoConfig::kappa));
        t.push_back(info_real("infodyn.smoothing", &info::InfoConfig::smoothing));
        return t;
    }();
    return table;
}

// Bare parameter names accepted as shorthand for their namespaced keys.
const std::map<std::string, std::string, std::less<>>& aliases() {
    static const std::map<std::string, std::string, std::less<>> a = {
        {"a", "params.a"},         {"b", "params.b"},         {"c", "params.c"},
        {"d", "params.d"},         {"e", "params.e"},         {"f", "params.f"},
        {"r_H", "params.r_H"},     {"r_Q", "params.r_Q"},     {"r_M", "params.r_M"},
        {"alpha", "control.alpha"}, {"beta", "control.beta"}, {"u", "control.u"},
    };
    return a;
}

const KeySpec* find_key(std::string_view key) {
    if (auto it = aliases().find(key); it != aliases().end()) key = it->second;
    for (const auto& k : key_table())
        if (k.key == key) return &k;
    return nullptr;
}

}  // namespace

const std::vector<std::string>& config_keys() {
    static const std::vector<std::string> keys = [] {
        std::vector<std::string> out;
        for (const auto& k : key_table()) out.push_back(k.key);
        return out;
    }();
    return keys;
}

ValidationResult validate(const Scenario& s) {
    ValidationResult r;
    if (s.name.empty()) r.add("name", "be non-empty");
    const ValidationResult model = validate(s.params, s.control);
    for (const auto& v : model.violations()) {
        const bool control = v.field == "alpha" || v.field == "beta" || v.field == "u";
        r.add((control ? "control." : "params.") + v.field, v.constraint);
    }
    r.merge(validate_state(s.init));
    r.merge(validate(s.integrator));
    r.merge(validate(s.thresholds));
    if (s.sweep) {
        const SweepSpec& w = *s.sweep;
        if (!std::isfinite(w.u_min) || w.u_min <= 0.0)
            r.add("sweep.u_min", "be > 0 (u = 0 gives a singular equilibrium: b*u = 0)");
        if (!std::isfinite(w.u_max) || w.u_max > 1.0) r.add("sweep.u_max", "be <= 1");
        if (!std::isfinite(w.u_step) || !(w.u_step > 0.0)) r.add("sweep.u_step", "be > 0");
        if (!(w.band_fraction > 0.0) || w.band_fraction > 1.0) r.add("sweep.band_fraction", "lie in (0,1]");
        if (r.ok()) {
            if (w.u_max < w.u_min)
                r.add("sweep.u_max", "be >= sweep.u_min");
            else if (w.grid().size() < kMinSweepPoints)
                r.add("sweep grid", "contain at least " + std::to_string(kMinSweepPoints) + " points");
        }
    }
    if (s.infodyn) {
        r.merge(info::validate(s.infodyn->config));
        if (s.infodyn->K < 2) r.add("infodyn.K", "be >= 2");
        if (!std::isfinite(s.infodyn->zipf_exponent) || s.infodyn->zipf_exponent < 0.0)
            r.add("infodyn.zipf_exponent", "be >= 0");
        if (s.infodyn->generations < 2) r.add("infodyn.generations", "be >= 2");
    }
    return r;
}

Scenario parse_config(std::string_view text) {
    Scenario s;
    std::set<std::string, std::less<>> seen;
    std::size_t line_no = 0;
    while (!text.empty()) {
        ++line_no;
        const auto nl = text.find('\n');
        std::string_view line = text.substr(0, nl);
        text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);

        line = trim(line);
        if (line.empty() || line.front() == '#') continue;
        const auto eq = line.find('=');
        if (eq == std::string_view::npos) throw ParseError(line_no, "expected 'key = value'");
        const std::string_view raw_key = trim(line.substr(0, eq));
        std::string_view value = trim(line.substr(eq + 1));
        if (raw_key.empty()) throw ParseError(line_no, "missing key before '='");

        const KeySpec* spec = find_key(raw_key);
        if (!spec) throw ParseError(line_no, "unknown key '" + std::string(raw_key) + "'");
        if (!seen.insert(spec->key).second) throw ParseError(line_no, "duplicate key '" + spec->key + "'");
        if (!spec->text) {
            if (const auto hash = value.find('#'); hash != std::string_view::npos) value = trim(value.substr(0, hash));
        }
        spec->set(s, value, line_no);
    }
    validate(s).throw_if_invalid();
    return s;
}

Scenario load_config(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open config file '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config(buf.str());
}

std::string serialize_config(const Scenario& s) {
    std::string out;
    for (const auto& k : key_table()) {
        if (auto v = k.get(s)) {
            out += k.key;
            out += " = ";
            out += *v;
            out += '\n';
        }
    }
    return out;
}

}  // namespace edl
