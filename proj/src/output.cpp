#include "edl/output.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>

#include "edl/version.hpp"

namespace edl::io {

using nlohmann::json;

std::string format_real(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string utc_timestamp() {
    const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

std::vector<std::pair<std::string, std::string>> Metadata::entries() const {
    std::vector<std::pair<std::string, std::string>> out;
    out.emplace_back("tool", "edl");
    out.emplace_back("version", EDL_VERSION_STRING);
    out.emplace_back("command", command);
    if (timestamp) out.emplace_back("generated_at", *timestamp);
    std::istringstream cfg(serialize_config(scenario));
    for (std::string line; std::getline(cfg, line);) {
        const auto eq = line.find(" = ");
        out.emplace_back("config." + line.substr(0, eq), line.substr(eq + 3));
    }
    for (const auto& kv : extra) out.push_back(kv);
    return out;
}

namespace {

std::string csv_header(const Metadata& meta) {
    std::string out;
    for (const auto& [k, v] : meta.entries()) out += "# " + k + " = " + v + "\n";
    return out;
}

std::string join_row(std::initializer_list<std::string> cells) {
    std::string out;
    bool first = true;
    for (const auto& c : cells) {
        if (!first) out += ',';
        out += c;
        first = false;
    }
    out += '\n';
    return out;
}

std::string regime_cell(const std::optional<Regime>& r) { return r ? std::string(to_string(*r)) : std::string(); }

Stability stability_from(const std::string& s) {
    for (Stability v : {Stability::StableNode, Stability::StableSpiralMixed, Stability::Unstable, Stability::Marginal})
        if (to_string(v) == s) return v;
    throw Error("unknown stability label '" + s + "'");
}

Regime regime_from(const std::string& s) {
    for (Regime v : {Regime::Enhancement, Regime::Equilibrium, Regime::Degeneration, Regime::Unclassified})
        if (to_string(v) == s) return v;
    throw Error("unknown regime label '" + s + "'");
}

json state_json(const StateVec& x) { return json{{"H", x.H}, {"Q", x.Q}, {"M", x.M}}; }

}  // namespace

std::string trajectory_csv(const Trajectory& traj, const Metadata& meta) {
    std::string out = csv_header(meta);
    out += "t,H,Q,M,A,S\n";
    for (std::size_t i = 0; i < traj.size(); ++i) {
        const auto& x = traj.states[i];
        const auto& s = traj.signals[i];
        out += join_row({format_real(traj.times[i]), format_real(x.H), format_real(x.Q), format_real(x.M),
                         format_real(s.A), format_real(s.S)});
    }
    return out;
}

std::string sweep_csv(const SweepResult& sw, const Metadata& meta) {
    std::string out = csv_header(meta);
    out += "u,H_star,Q_star,M_star,max_re_lambda,stability,regime\n";
    for (std::size_t i = 0; i < sw.u_grid.size(); ++i) {
        const auto& x = sw.steady_states[i];
        out += join_row({format_real(sw.u_grid[i]), format_real(x.H), format_real(x.Q), format_real(x.M),
                         format_real(sw.max_re_lambda[i]), std::string(to_string(sw.stability[i])),
                         regime_cell(sw.regimes[i])});
    }
    return out;
}

std::string infodyn_csv(const std::vector<info::InfoMetrics>& series, const Metadata& meta) {
    std::string out = csv_header(meta);
    out += "gen,H_human,H_model,kl_model_human,kl_model_world,tail_support,mi_consecutive\n";
    for (const auto& m : series)
        out += join_row({std::to_string(m.generation), format_real(m.entropy_human), format_real(m.entropy_model),
                         format_real(m.kl_model_human), format_real(m.kl_model_world), std::to_string(m.tail_support),
                         format_real(m.mi_consecutive)});
    return out;
}

CsvTable parse_csv(const std::string& text) {
    CsvTable t;
    std::istringstream in(text);
    for (std::string line; std::getline(in, line);) {
        if (!line.empty() && line.front() == '#') {
            const auto body = line.find_first_not_of(" ", 1);
            t.comments.push_back(body == std::string::npos ? std::string() : line.substr(body));
            continue;
        }
        std::vector<std::string> cells;
        std::string cell;
        std::istringstream ls(line);
        while (std::getline(ls, cell, ',')) cells.push_back(cell);
        if (!line.empty() && line.back() == ',') cells.emplace_back();
        if (t.header.empty())
            t.header = std::move(cells);
        else
            t.rows.push_back(std::move(cells));
    }
    return t;
}

json metadata_json(const Metadata& meta) {
    json j = json::object();
    json cfg = json::object();
    for (const auto& [k, v] : meta.entries()) {
        if (k.rfind("config.", 0) == 0)
            cfg[k.substr(7)] = v;
        else
            j[k] = v;
    }
    j["config"] = cfg;
    return j;
}

json trajectory_json(const Trajectory& traj, const Metadata& meta) {
    json j;
    j["metadata"] = metadata_json(meta);
    j["clamp_events"] = traj.clamp_events;
    std::vector<double> H, Q, M, A, S;
    for (std::size_t i = 0; i < traj.size(); ++i) {
        H.push_back(traj.states[i].H);
        Q.push_back(traj.states[i].Q);
        M.push_back(traj.states[i].M);
        A.push_back(traj.signals[i].A);
        S.push_back(traj.signals[i].S);
    }
    j["t"] = traj.times;
    j["H"] = H;
    j["Q"] = Q;
    j["M"] = M;
    j["A"] = A;
    j["S"] = S;
    return j;
}

Trajectory trajectory_from_json(const json& j) {
    Trajectory t;
    t.clamp_events = j.at("clamp_events").get<std::size_t>();
    t.times = j.at("t").get<std::vector<double>>();
    const auto H = j.at("H").get<std::vector<double>>();
    const auto Q = j.at("Q").get<std::vector<double>>();
    const auto M = j.at("M").get<std::vector<double>>();
    const auto A = j.at("A").get<std::vector<double>>();
    const auto S = j.at("S").get<std::vector<double>>();
    for (std::size_t i = 0; i < t.times.size(); ++i) {
        t.states.push_back({H.at(i), Q.at(i), M.at(i)});
        t.signals.push_back({A.at(i), S.at(i)});
    }
    return t;
}

json sweep_json(const SweepResult& sw, const Metadata& meta) {
    json j;
    j["metadata"] = metadata_json(meta);
    j["mode"] = std::string(to_string(sw.mode));
    json points = json::array();
    for (std::size_t i = 0; i < sw.u_grid.size(); ++i) {
        json p;
        p["u"] = sw.u_grid[i];
        p["steady_state"] = state_json(sw.steady_states[i]);
        p["max_re_lambda"] = sw.max_re_lambda[i];
        p["stability"] = std::string(to_string(sw.stability[i]));
        p["regime"] = sw.regimes[i] ? json(std::string(to_string(*sw.regimes[i]))) : json(nullptr);
        p["curvature"] = sw.threshold.curvature.empty() ? 0.0 : sw.threshold.curvature[i];
        points.push_back(p);
    }
    j["points"] = points;
    json th;
    th["detected"] = sw.threshold.detected();
    th["u_c"] = sw.threshold.u_c ? json(*sw.threshold.u_c) : json(nullptr);
    th["index"] = sw.threshold.index;
    th["transition_band"] = sw.threshold.band ? json::array({sw.threshold.band->first, sw.threshold.band->second})
                                              : json(nullptr);
    j["threshold"] = th;
    return j;
}

SweepResult sweep_from_json(const json& j) {
    SweepResult sw;
    sw.mode = j.at("mode").get<std::string>() == "simulated" ? SweepMode::Simulated : SweepMode::Analytic;
    for (const auto& p : j.at("points")) {
        sw.u_grid.push_back(p.at("u").get<double>());
        const auto& x = p.at("steady_state");
        sw.steady_states.push_back({x.at("H").get<double>(), x.at("Q").get<double>(), x.at("M").get<double>()});
        sw.max_re_lambda.push_back(p.at("max_re_lambda").get<double>());
        sw.stability.push_back(stability_from(p.at("stability").get<std::string>()));
        sw.regimes.push_back(p.at("regime").is_null() ? std::nullopt
                                                       : std::optional<Regime>(regime_from(p.at("regime").get<std::string>())));
        sw.threshold.curvature.push_back(p.at("curvature").get<double>());
    }
    const auto& th = j.at("threshold");
    sw.threshold.index = th.at("index").get<std::size_t>();
    if (!th.at("u_c").is_null()) sw.threshold.u_c = th.at("u_c").get<double>();
    if (!th.at("transition_band").is_null())
        sw.threshold.band = std::make_pair(th.at("transition_band").at(0).get<double>(),
                                           th.at("transition_band").at(1).get<double>());
    return sw;
}

json infodyn_json(const std::vector<info::InfoMetrics>& series, const Metadata& meta) {
    json j;
    j["metadata"] = metadata_json(meta);
    json rows = json::array();
    for (const auto& m : series) {
        rows.push_back(json{{"gen", m.generation},
                            {"H_human", m.entropy_human},
                            {"H_model", m.entropy_model},
                            {"kl_model_human", m.kl_model_human},
                            {"kl_model_world", m.kl_model_world},
                            {"tail_support", m.tail_support},
                            {"mi_consecutive", m.mi_consecutive}});
    }
    j["generations"] = rows;
    return j;
}

std::vector<info::InfoMetrics> infodyn_from_json(const json& j) {
    std::vector<info::InfoMetrics> out;
    for (const auto& r : j.at("generations")) {
        info::InfoMetrics m;
        m.generation = r.at("gen").get<int>();
        m.entropy_human = r.at("H_human").get<double>();
        m.entropy_model = r.at("H_model").get<double>();
        m.kl_model_human = r.at("kl_model_human").get<double>();
        m.kl_model_world = r.at("kl_model_world").get<double>();
        m.tail_support = r.at("tail_support").get<std::size_t>();
        m.mi_consecutive = r.at("mi_consecutive").get<double>();
        out.push_back(m);
    }
    return out;
}

json intervention_json(const InterventionReport& rep, const Metadata& meta) {
    json j;
    j["metadata"] = metadata_json(meta);
    j["baseline"] = state_json(rep.baseline);
    json list = json::array();
    for (const auto& o : rep.outcomes) {
        list.push_back(json{{"channel", o.channel},
                            {"increment", o.increment},
                            {"steady_state", state_json(o.steady)},
                            {"delta", state_json(o.delta)},
                            {"sign", json{{"H", o.sign[0]}, {"Q", o.sign[1]}, {"M", o.sign[2]}}}});
    }
    j["interventions"] = list;
    return j;
}

json regime_json(const RegimeLabel& label) {
    const auto& ev = label.evidence;
    return json{{"label", std::string(to_string(label.label))},
                {"converged", ev.converged},
                {"residual", ev.residual},
                {"window", ev.window},
                {"tail_slope", ev.tail_slope},
                {"tail_abs_slope", ev.tail_abs_slope},
                {"initial", state_json(ev.initial)},
                {"final", state_json(ev.final)}};
}

std::string to_json_text(const json& j) { return j.dump(2) + "\n"; }

namespace {

std::string xml_escape(const std::string& s) {
    std::string out;
    for (char c : s) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '"': out += "&quot;"; break;
            default: out += c;
        }
    }
    return out;
}

std::string xml_comment_safe(std::string s) {
    for (std::size_t pos; (pos = s.find("--")) != std::string::npos;) s.replace(pos, 2, "- -");
    if (!s.empty() && s.back() == '-') s += ' ';
    return s;
}

std::string short_num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3g", v);
    return buf;
}

struct Series {
    std::string name;
    std::string color;
    std::vector<double> y;
};

struct Marker {
    double x = 0.0;
    std::optional<std::pair<double, double>> band;
};

std::string line_chart(const std::string& title, const std::string& x_label, const std::vector<double>& x,
                       const std::vector<Series>& series, const Metadata& meta, const std::optional<Marker>& marker) {
    constexpr double W = 800, H = 500, left = 70, right = 140, top = 40, bottom = 60;
    const double pw = W - left - right, ph = H - top - bottom;

    double x_lo = x.empty() ? 0.0 : x.front(), x_hi = x.empty() ? 1.0 : x.back();
    if (!(x_hi > x_lo)) x_hi = x_lo + 1.0;
    double y_lo = 0.0, y_hi = 0.0;
    for (const auto& s : series)
        for (double v : s.y) {
            y_lo = std::min(y_lo, v);
            y_hi = std::max(y_hi, v);
        }
    if (!(y_hi > y_lo)) y_hi = y_lo + 1.0;
    y_hi += 0.05 * (y_hi - y_lo);

    auto px = [&](double v) { return left + (v - x_lo) / (x_hi - x_lo) * pw; };
    auto py = [&](double v) { return top + ph - (v - y_lo) / (y_hi - y_lo) * ph; };
    auto fmt = [](double v) {
        char buf[32];
        std::snprintf(buf, sizeof buf, "%.2f", v);
        return std::string(buf);
    };

    std::ostringstream os;
    os << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    os << "<!--\n";
    for (const auto& [k, v] : meta.entries()) os << xml_comment_safe(k + " = " + v) << "\n";
    os << "-->\n";
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"800\" height=\"500\" viewBox=\"0 0 800 500\">\n";
    os << "<rect x=\"0\" y=\"0\" width=\"800\" height=\"500\" fill=\"white\"/>\n";
    os << "<text x=\"" << fmt(left + pw / 2) << "\" y=\"24\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"16\">"
       << xml_escape(title) << "</text>\n";

    if (marker) {
        if (marker->band) {
            const double b0 = px(marker->band->first), b1 = px(marker->band->second);
            os << "<rect x=\"" << fmt(b0) << "\" y=\"" << fmt(top) << "\" width=\"" << fmt(std::max(b1 - b0, 2.0))
               << "\" height=\"" << fmt(ph) << "\" fill=\"#cccccc\" fill-opacity=\"0.5\"/>\n";
        }
        os << "<line x1=\"" << fmt(px(marker->x)) << "\" y1=\"" << fmt(top) << "\" x2=\"" << fmt(px(marker->x))
           << "\" y2=\"" << fmt(top + ph) << "\" stroke=\"black\" stroke-dasharray=\"6,4\"/>\n";
    }

    // Axes and ticks.
    os << "<line x1=\"" << fmt(left) << "\" y1=\"" << fmt(top + ph) << "\" x2=\"" << fmt(left + pw) << "\" y2=\""
       << fmt(top + ph) << "\" stroke=\"black\"/>\n";
    os << "<line x1=\"" << fmt(left) << "\" y1=\"" << fmt(top) << "\" x2=\"" << fmt(left) << "\" y2=\"" << fmt(top + ph)
       << "\" stroke=\"black\"/>\n";
    for (int i = 0; i <= 5; ++i) {
        const double xv = x_lo + (x_hi - x_lo) * i / 5.0;
        const double yv = y_lo + (y_hi - y_lo) * i / 5.0;
        os << "<text x=\"" << fmt(px(xv)) << "\" y=\"" << fmt(top + ph + 18)
           << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"11\">" << short_num(xv) << "</text>\n";
        os << "<text x=\"" << fmt(left - 6) << "\" y=\"" << fmt(py(yv) + 4)
           << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">" << short_num(yv) << "</text>\n";
    }
    os << "<text x=\"" << fmt(left + pw / 2) << "\" y=\"" << fmt(H - 16)
       << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\">" << xml_escape(x_label) << "</text>\n";

    for (std::size_t s = 0; s < series.size(); ++s) {
        os << "<polyline fill=\"none\" stroke=\"" << series[s].color << "\" stroke-width=\"1.5\" points=\"";
        for (std::size_t i = 0; i < x.size(); ++i) {
            if (i) os << ' ';
            os << fmt(px(x[i])) << ',' << fmt(py(series[s].y[i]));
        }
        os << "\"/>\n";
        const double ly = top + 20 + 22 * static_cast<double>(s);
        os << "<rect x=\"" << fmt(left + pw + 16) << "\" y=\"" << fmt(ly - 8) << "\" width=\"14\" height=\"4\" fill=\""
           << series[s].color << "\"/>\n";
        os << "<text x=\"" << fmt(left + pw + 36) << "\" y=\"" << fmt(ly)
           << "\" font-family=\"sans-serif\" font-size=\"13\">" << xml_escape(series[s].name) << "</text>\n";
    }
    os << "</svg>\n";
    return os.str();
}

// Charts need at most a few thousand vertices; longer records are thinned.
std::vector<std::size_t> plot_indices(std::size_t n, std::size_t limit = 4000) {
    std::vector<std::size_t> idx;
    const std::size_t step = std::max<std::size_t>(1, (n + limit - 1) / limit);
    for (std::size_t i = 0; i < n; i += step) idx.push_back(i);
    if (n > 0 && idx.back() != n - 1) idx.push_back(n - 1);
    return idx;
}

}  // namespace

std::string trajectory_svg(const Trajectory& traj, const Metadata& meta) {
    std::vector<double> x;
    std::vector<Series> s = {{"H", "#1f77b4", {}}, {"Q", "#2ca02c", {}}, {"M", "#d62728", {}}};
    for (std::size_t i : plot_indices(traj.size())) {
        x.push_back(traj.times[i]);
        for (int k = 0; k < 3; ++k) s[static_cast<std::size_t>(k)].y.push_back(traj.states[i][k]);
    }
    return line_chart(meta.scenario.name + ": H(t), Q(t), M(t)", "t", x, s, meta, std::nullopt);
}

std::string sweep_svg(const SweepResult& sw, const Metadata& meta) {
    std::vector<Series> s = {{"H*", "#1f77b4", {}}, {"Q*", "#2ca02c", {}}, {"M*", "#d62728", {}}};
    for (const auto& x : sw.steady_states)
        for (int k = 0; k < 3; ++k) s[static_cast<std::size_t>(k)].y.push_back(x[k]);
    std::optional<Marker> marker;
    if (sw.threshold.u_c) marker = Marker{*sw.threshold.u_c, sw.threshold.band};
    return line_chart(meta.scenario.name + ": steady state vs u", "u", sw.u_grid, s, meta, marker);
}

void write_file(const std::string& path, const std::string& contents) {
    namespace fs = std::filesystem;
    std::error_code ec;
    const fs::path p(path);
    if (p.has_parent_path()) fs::create_directories(p.parent_path(), ec);
    if (ec) throw IoError("cannot create directory '" + p.parent_path().string() + "': " + ec.message());
    std::ofstream out(p, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open '" + path + "' for writing");
    out << contents;
    out.flush();
    if (!out) throw IoError("failed writing '" + path + "'");
}

}  // namespace edl::io
