#include "edl/cli.hpp"

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>

#include "edl/output.hpp"
#include "edl/presets.hpp"
#include "edl/scenario.hpp"

namespace edl::cli {

namespace {

struct Options {
    std::string config;
    std::string out_dir;
    std::string format = "csv";
    bool svg = false;
    bool json = false;
    bool no_timestamp = false;
    double dr_h = 0.0;
    double dr_q = 0.0;
    double dr_m = 0.0;
    int generations = -1;
    std::string preset_action;
    std::string preset_name;
};

bool timestamps_suppressed(const Options& o) {
    if (o.no_timestamp) return true;
    const char* env = std::getenv("EDL_NO_TIMESTAMP");
    return env != nullptr && std::string(env) == "1";
}

io::Metadata make_meta(const std::string& command, const Scenario& s, const Options& o) {
    io::Metadata m;
    m.command = command;
    m.scenario = s;
    if (!timestamps_suppressed(o)) m.timestamp = io::utc_timestamp();
    return m;
}

std::string out_path(const Options& o, const std::string& file) {
    return (std::filesystem::path(o.out_dir) / file).string();
}

int cmd_simulate(const Options& o, std::ostream& out) {
    const Scenario s = load_config(o.config);
    const Trajectory traj = integrate(s.init, s.params, s.control, s.integrator);
    io::Metadata meta = make_meta("simulate", s, o);
    meta.extra.emplace_back("samples", std::to_string(traj.size()));
    meta.extra.emplace_back("clamp_events", std::to_string(traj.clamp_events));

    const std::string data = o.format == "json" ? io::to_json_text(io::trajectory_json(traj, meta))
                                                : io::trajectory_csv(traj, meta);
    const std::string path = out_path(o, "trajectory." + o.format);
    io::write_file(path, data);
    out << path << "\n";
    if (o.svg) {
        const std::string svg_path = out_path(o, "trajectory.svg");
        io::write_file(svg_path, io::trajectory_svg(traj, meta));
        out << svg_path << "\n";
    }
    return kSuccess;
}

int cmd_sweep(const Options& o, std::ostream& out) {
    const Scenario s = load_config(o.config);
    const SweepSpec spec = s.sweep.value_or(SweepSpec{});
    SweepOptions opt;
    opt.mode = spec.mode;
    opt.init = s.init;
    opt.integrator = s.integrator;
    opt.thresholds = s.thresholds;
    opt.band_fraction = spec.band_fraction;
    const std::vector<double> grid = spec.grid();
    const SweepResult res = sweep_u(s.params, s.control.alpha, s.control.beta, grid, opt);

    io::Metadata meta = make_meta("sweep", s, o);
    meta.extra.emplace_back("threshold_rule", "argmax |second difference of Q*|, band >= band_fraction * max");
    meta.extra.emplace_back("u_c", res.threshold.u_c ? io::format_real(*res.threshold.u_c) : "none");
    meta.extra.emplace_back("transition_band", res.threshold.band ? io::format_real(res.threshold.band->first) + "," +
                                                                        io::format_real(res.threshold.band->second)
                                                                  : "none");

    const std::string csv = out_path(o, "sweep.csv");
    const std::string js = out_path(o, "sweep.json");
    io::write_file(csv, io::sweep_csv(res, meta));
    io::write_file(js, io::to_json_text(io::sweep_json(res, meta)));
    out << csv << "\n" << js << "\n";
    if (o.svg) {
        const std::string svg_path = out_path(o, "sweep.svg");
        io::write_file(svg_path, io::sweep_svg(res, meta));
        out << svg_path << "\n";
    }
    out << "u_c = " << (res.threshold.u_c ? io::format_real(*res.threshold.u_c) : std::string("none")) << "\n";
    return kSuccess;
}

int cmd_classify(const Options& o, std::ostream& out) {
    const Scenario s = load_config(o.config);
    const Trajectory traj = integrate(s.init, s.params, s.control, s.integrator);
    const RegimeLabel label = classify_regime(traj, s.params, s.control, s.thresholds);
    if (o.json)
        out << io::to_json_text(io::regime_json(label));
    else
        out << to_string(label.label) << "\n";
    return kSuccess;
}

int cmd_intervene(const Options& o, std::ostream& out) {
    const Scenario s = load_config(o.config);
    const InterventionReport rep = compare_interventions(s.params, s.control, {o.dr_h, o.dr_q, o.dr_m});
    if (o.json) {
        out << io::to_json_text(io::intervention_json(rep, make_meta("intervene", s, o)));
        return kSuccess;
    }
    auto row = [&](const std::string& label, const StateVec& x) {
        out << label << "," << io::format_real(x.H) << "," << io::format_real(x.Q) << "," << io::format_real(x.M) << "\n";
    };
    out << "case,H_star,Q_star,M_star\n";
    row("baseline", rep.baseline);
    for (const auto& oc : rep.outcomes) {
        row("+" + oc.channel, oc.steady);
        row("delta_" + oc.channel, oc.delta);
    }
    return kSuccess;
}

int cmd_infodyn(const Options& o, std::ostream& out) {
    const Scenario s = load_config(o.config);
    InfodynSpec spec = s.infodyn.value_or(InfodynSpec{});
    if (o.generations >= 0) spec.generations = o.generations;
    if (spec.generations < 2) throw ValidationError(std::vector<Violation>{{"--generations", "be >= 2"}});
    const auto series =
        info::run_generations(info::initial_state(spec.K, spec.zipf_exponent), spec.config, spec.generations);

    Scenario resolved = s;
    resolved.infodyn = spec;
    io::Metadata meta = make_meta("infodyn", resolved, o);
    meta.extra.emplace_back("lambda_resolved", io::format_real(spec.config.lambda_value()));
    meta.extra.emplace_back("tau_resolved", io::format_real(spec.config.tau_value()));
    meta.extra.emplace_back("kl_smoothing", "floor added to second argument, then renormalized");

    const std::string csv = out_path(o, "infodyn.csv");
    const std::string js = out_path(o, "infodyn.json");
    io::write_file(csv, io::infodyn_csv(series, meta));
    io::write_file(js, io::to_json_text(io::infodyn_json(series, meta)));
    out << csv << "\n" << js << "\n";
    return kSuccess;
}

int cmd_presets(const Options& o, std::ostream& out, std::ostream& err) {
    if (o.preset_action == "list") {
        for (const auto& p : bundled_presets()) {
            const Scenario s = parse_config(p.text);
            out << p.name << "\t" << s.description << "\n";
        }
        return kSuccess;
    }
    if (o.preset_name.empty()) {
        err << "presets show: missing preset name\n";
        return kUsage;
    }
    const auto p = find_preset(o.preset_name);
    if (!p) {
        err << "unknown preset '" << o.preset_name << "'\n";
        return kUsage;
    }
    out << p->text;
    return kSuccess;
}

}  // namespace

int run_command(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    Options o;
    CLI::App app{"edl: human / data-quality / model-capability dynamics laboratory", "edl"};
    app.require_subcommand(1);
    app.add_flag("--no-timestamp", o.no_timestamp, "Omit the generated_at field (same as EDL_NO_TIMESTAMP=1)");

    auto add_config = [&](CLI::App* sub) {
        sub->add_option("--config", o.config, "Scenario file")->required();
    };

    auto* simulate = app.add_subcommand("simulate", "Integrate one trajectory");
    add_config(simulate);
    simulate->add_option("--out", o.out_dir, "Output directory")->required();
    simulate->add_option("--format", o.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
    simulate->add_flag("--svg", o.svg, "Also write an SVG chart");

    auto* sweep = app.add_subcommand("sweep", "Sweep u and locate the threshold u_c");
    add_config(sweep);
    sweep->add_option("--out", o.out_dir, "Output directory")->required();
    sweep->add_flag("--svg", o.svg, "Also write an SVG chart");

    auto* classify = app.add_subcommand("classify", "Print the regime label of the configured trajectory");
    add_config(classify);
    classify->add_flag("--json", o.json, "Print label and evidence as JSON");

    auto* intervene = app.add_subcommand("intervene", "Steady-state effect of raising r_H, r_Q, r_M");
    add_config(intervene);
    intervene->add_option("--dr-h", o.dr_h, "Increment to r_H");
    intervene->add_option("--dr-q", o.dr_q, "Increment to r_Q");
    intervene->add_option("--dr-m", o.dr_m, "Increment to r_M");
    intervene->add_flag("--json", o.json, "Print the report as JSON");

    auto* infodyn = app.add_subcommand("infodyn", "Run the closed-loop distribution dynamics");
    add_config(infodyn);
    infodyn->add_option("--generations", o.generations, "Number of generations (overrides infodyn.generations)");
    infodyn->add_option("--out", o.out_dir, "Output directory")->required();

    auto* presets = app.add_subcommand("presets", "List or print bundled scenarios");
    presets->add_option("action", o.preset_action, "list or show")->required()->check(CLI::IsMember({"list", "show"}));
    presets->add_option("name", o.preset_name, "Preset name for show");

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kSuccess : kUsage;
    }

    try {
        if (simulate->parsed()) return cmd_simulate(o, out);
        if (sweep->parsed()) return cmd_sweep(o, out);
        if (classify->parsed()) return cmd_classify(o, out);
        if (intervene->parsed()) return cmd_intervene(o, out);
        if (infodyn->parsed()) return cmd_infodyn(o, out);
        if (presets->parsed()) return cmd_presets(o, out, err);
    } catch (const IoError& e) {
        err << "error: " << e.what() << "\n";
        return kNumerical;
    } catch (const NumericalError& e) {
        err << "numerical failure: " << e.what() << "\n";
        return kNumerical;
    } catch (const SingularEquilibriumError& e) {
        err << "error: " << e.what() << "\n";
        return kConfig;
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return kConfig;
    } catch (const std::invalid_argument& e) {
        err << "error: " << e.what() << "\n";
        return kConfig;
    }
    return kUsage;
}

}  // namespace edl::cli
