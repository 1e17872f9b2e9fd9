#include "stochosc/cli.hpp"

#include <unistd.h>

#include <array>
#include <charconv>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <ostream>
#include <set>

#include <CLI11.hpp>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "stochosc/config.hpp"
#include "stochosc/models.hpp"
#include "stochosc/output.hpp"
#include "stochosc/serialize.hpp"
#include "stochosc/transform.hpp"

namespace stochosc {

using nlohmann::json;

namespace {

const std::map<std::string, std::set<std::string>>& known_keys() {
    static const std::map<std::string, std::set<std::string>> keys{
        {"model", {"name", "preset", "params"}},
        {"integration",
         {"dt", "T", "initial", "seed", "r_max", "record_stride", "representation", "n_paths", "levels", "threads"}},
        {"output", {"csv", "svg", "report", "json"}},
        {"verify", {"R_check", "grid", "mc_samples", "c", "alpha_max"}},
    };
    return keys;
}

void check_keys(const json& cfg, const char* origin) {
    if (!cfg.is_object()) throw ConfigError(std::string(origin) + ": expected sections");
    for (const auto& [section, body] : cfg.items()) {
        const auto it = known_keys().find(section);
        if (it == known_keys().end()) throw ConfigError(std::string(origin) + ": unknown section [" + section + "]");
        if (!body.is_object()) throw ConfigError(std::string(origin) + ": [" + section + "] must hold keys");
        for (const auto& [key, _] : body.items())
            if (!it->second.count(key))
                throw ConfigError(std::string(origin) + ": unknown key '" + key + "' in [" + section + "]");
    }
}

const json* lookup(const json& cfg, const char* section, const char* key) {
    if (!cfg.contains(section)) return nullptr;
    const auto& s = cfg.at(section);
    return s.contains(key) ? &s.at(key) : nullptr;
}

std::string qualified(const char* section, const char* key) { return std::string(section) + "." + key; }

double get_real(const json& v, const char* section, const char* key) {
    if (!v.is_number()) throw ConfigError("'" + qualified(section, key) + "' must be a number");
    return v.get<double>();
}

std::uint64_t get_count(const json& v, const char* section, const char* key) {
    if (v.is_number_unsigned()) return v.get<std::uint64_t>();
    if (v.is_number_integer() && v.get<long long>() >= 0) return static_cast<std::uint64_t>(v.get<long long>());
    throw ConfigError("'" + qualified(section, key) + "' must be a nonnegative integer");
}

std::string get_string(const json& v, const char* section, const char* key) {
    if (!v.is_string()) throw ConfigError("'" + qualified(section, key) + "' must be a string");
    return v.get<std::string>();
}

std::uint64_t parse_seed(const std::string& s, const char* origin) {
    std::uint64_t v = 0;
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (s.empty() || ec != std::errc() || p != s.data() + s.size())
        throw ConfigError(std::string(origin) + ": seed must be an unsigned 64-bit integer, got '" + s + "'");
    return v;
}

std::size_t model_dimension(const RunConfig& rc) { return build_model(rc).dimension(); }

}  // namespace

RunConfig resolve_run_config(const json& file, const json& overrides, const char* env_seed) {
    check_keys(file, "config file");
    check_keys(overrides, "command line");
    json cfg = file;
    for (const auto& [section, body] : overrides.items())
        for (const auto& [key, v] : body.items()) {
            if (section == "model" && key == "params" && cfg.contains("model") && cfg["model"].contains("params")) {
                // Individual --param flags refine the file's parameter table.
                auto& params = cfg["model"]["params"];
                if (!params.is_object()) throw ConfigError("'model.params' must be a table");
                for (const auto& [pk, pv] : v.items()) params[pk] = pv;
                continue;
            }
            cfg[section][key] = v;
        }

    RunConfig rc;
    if (env_seed && *env_seed) rc.integration.seed = parse_seed(env_seed, "STOCHOSC_SEED");

    if (const auto* v = lookup(cfg, "model", "name")) rc.model = get_string(*v, "model", "name");
    json user_params = json::object();
    if (const auto* v = lookup(cfg, "model", "params")) {
        if (!v->is_object()) throw ConfigError("'model.params' must be a table");
        user_params = *v;
    }
    std::string preset;
    if (const auto* v = lookup(cfg, "model", "preset")) preset = get_string(*v, "model", "preset");
    if (!preset.empty() && preset != "paper") throw ConfigError("unknown preset '" + preset + "' (known: paper)");
    if (rc.model == "custom") {
        if (!preset.empty()) throw ConfigError("preset does not apply to custom models");
        rc.params = user_params;
    } else {
        try {
            rc.params = preset.empty() ? json::object() : preset_params(rc.model);
        } catch (const std::invalid_argument& e) {
            throw ConfigError(e.what());
        }
        for (const auto& [k, v] : user_params.items()) rc.params[k] = v;
    }

    auto& ic = rc.integration;
    ic.dt = 1e-3;
    ic.T = 50.0;
    if (const auto* v = lookup(cfg, "integration", "dt")) ic.dt = get_real(*v, "integration", "dt");
    if (const auto* v = lookup(cfg, "integration", "T")) ic.T = get_real(*v, "integration", "T");
    if (const auto* v = lookup(cfg, "integration", "seed")) ic.seed = get_count(*v, "integration", "seed");
    if (const auto* v = lookup(cfg, "integration", "r_max")) ic.r_max = get_real(*v, "integration", "r_max");
    if (const auto* v = lookup(cfg, "integration", "record_stride"))
        ic.record_stride = get_count(*v, "integration", "record_stride");
    if (const auto* v = lookup(cfg, "integration", "n_paths")) rc.n_paths = get_count(*v, "integration", "n_paths");
    if (const auto* v = lookup(cfg, "integration", "levels")) rc.levels = get_count(*v, "integration", "levels");
    if (const auto* v = lookup(cfg, "integration", "threads"))
        rc.threads = static_cast<int>(get_count(*v, "integration", "threads"));
    if (const auto* v = lookup(cfg, "integration", "representation")) {
        const auto r = get_string(*v, "integration", "representation");
        if (r == "direct")
            rc.representation = Representation::Direct;
        else if (r == "transformed")
            rc.representation = Representation::Transformed;
        else
            throw ConfigError("'integration.representation' must be \"direct\" or \"transformed\"");
    }

    const std::size_t n = model_dimension(rc);
    if (const auto* v = lookup(cfg, "integration", "initial")) {
        if (!v->is_array() || v->size() != 2 * n)
            throw ConfigError("'integration.initial' must list " + std::to_string(2 * n) + " numbers (x then v)");
        std::vector<double> z;
        for (const auto& e : *v) z.push_back(get_real(e, "integration", "initial"));
        ic.initial = PhasePoint::from_flat(z);
    } else {
        std::vector<double> x(n, 0.0);
        x[0] = 1.0;
        ic.initial = PhasePoint(std::move(x), std::vector<double>(n, 0.0));
    }

    if (const auto* v = lookup(cfg, "output", "csv")) rc.outputs.csv = get_string(*v, "output", "csv");
    if (const auto* v = lookup(cfg, "output", "svg")) rc.outputs.svg = get_string(*v, "output", "svg");
    if (const auto* v = lookup(cfg, "output", "report")) rc.outputs.report = get_string(*v, "output", "report");
    if (const auto* v = lookup(cfg, "output", "json")) rc.outputs.json = get_string(*v, "output", "json");

    auto& vo = rc.verify;
    if (const auto* v = lookup(cfg, "verify", "R_check")) vo.domain.radius = get_real(*v, "verify", "R_check");
    if (const auto* v = lookup(cfg, "verify", "grid"))
        vo.domain.points_per_axis = static_cast<int>(get_count(*v, "verify", "grid"));
    if (const auto* v = lookup(cfg, "verify", "mc_samples")) vo.domain.mc_samples = get_count(*v, "verify", "mc_samples");
    if (const auto* v = lookup(cfg, "verify", "c")) vo.c = get_real(*v, "verify", "c");
    if (const auto* v = lookup(cfg, "verify", "alpha_max")) vo.alpha_max = get_real(*v, "verify", "alpha_max");
    if (!(vo.domain.radius > 0.0)) throw ConfigError("'verify.R_check' must be positive");
    if (!(vo.c > 0.0)) throw ConfigError("'verify.c' must be positive");
    if (vo.alpha_max < 0.0) throw ConfigError("'verify.alpha_max' must be nonnegative");
    if (vo.domain.points_per_axis == 1) throw ConfigError("'verify.grid' must be at least 2");

    try {
        ic.validate(n);
    } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
    }
    return rc;
}

OscillatorModel build_model(const RunConfig& rc) {
    try {
        if (rc.model == "custom") return build_custom_model(rc.params);
        return find_model(rc.model).build(rc.params);
    } catch (const ConfigError&) {
        throw;
    } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("model parameters: ") + e.what());
    }
}

// ---------------------------------------------------------------------------

namespace {

void check_writable(const std::string& path) {
    if (path.empty()) return;
    namespace fs = std::filesystem;
    const fs::path p(path);
    if (fs::is_directory(p)) throw ConfigError("output path '" + path + "' is a directory");
    if (fs::exists(p)) {
        if (::access(path.c_str(), W_OK) != 0) throw ConfigError("output path '" + path + "' is not writable");
        return;
    }
    const fs::path dir = p.has_parent_path() ? p.parent_path() : fs::path(".");
    if (!fs::is_directory(dir) || ::access(dir.c_str(), W_OK) != 0)
        throw ConfigError("output path '" + path + "' is not writable");
}

void check_outputs(const OutputPaths& o) {
    for (const auto* p : {&o.csv, &o.svg, &o.report, &o.json}) check_writable(*p);
}

void write_text(const std::string& path, const std::string& text, std::ostream& fallback) {
    if (path.empty()) {
        fallback << text;
        return;
    }
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f) throw std::runtime_error("cannot open '" + path + "' for writing");
    f << text;
    if (!f) throw std::runtime_error("failed writing '" + path + "'");
}

std::string representation_name(Representation r) {
    return r == Representation::Direct ? "direct" : "transformed";
}

/// The system to integrate, with the maps between physical and integrated states.
struct Simulation {
    std::optional<TransformedSystem> transformed;
    std::optional<PhaseSystem> direct;

    const PhaseSystem& system() const { return transformed ? transformed->system : *direct; }
    PhasePoint to_integrated(const PhasePoint& p) const {
        return transformed ? phi_forward(p, transformed->F) : p;
    }
    PhasePoint to_physical(const PhasePoint& p) const {
        return transformed ? phi_inverse(p, transformed->F) : p;
    }
};

Simulation make_simulation(const OscillatorModel& model, Representation rep) {
    Simulation s;
    if (rep == Representation::Transformed) {
        try {
            s.transformed = build_transformed_system(model);
        } catch (const std::invalid_argument& e) {
            throw ConfigError(e.what());
        }
    } else {
        s.direct = reduce_to_phase_system(model);
    }
    return s;
}

IntegrationConfig integrated_config(const RunConfig& rc, const Simulation& sim) {
    IntegrationConfig ic = rc.integration;
    ic.initial = sim.to_integrated(ic.initial);
    try {
        ic.validate(sim.system().half_dimension());
    } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
    }
    return ic;
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

int cmd_simulate(const RunConfig& rc, std::ostream& out, std::ostream& err) {
    check_outputs(rc.outputs);
    const auto model = build_model(rc);
    const auto sim = make_simulation(model, rc.representation);
    const auto ic = integrated_config(rc, sim);
    Trajectory traj = simulate_path(sim.system(), ic);
    for (auto& s : traj.states) s = sim.to_physical(s);

    write_text(rc.outputs.csv, trajectory_csv(traj, representation_name(rc.representation)), out);
    if (!rc.outputs.svg.empty())
        write_text(rc.outputs.svg, render_svg(traj, model.name() + ", seed " + std::to_string(ic.seed)), out);
    if (traj.escaped)
        err << "warning: path escaped |z| >= " << format_double(ic.r_max) << " at t = "
            << format_double(*traj.escape_time) << "\n";
    return 0;
}

int cmd_ensemble(const RunConfig& rc, std::ostream& out, std::ostream& err) {
    check_outputs(rc.outputs);
    if (rc.n_paths < 1) throw ConfigError("'integration.n_paths' must be at least 1");
    const auto model = build_model(rc);
    const auto sim = make_simulation(model, rc.representation);
    const auto ic = integrated_config(rc, sim);
    const auto result = simulate_ensemble(sim.system(), ic, rc.n_paths);

    if (!rc.outputs.csv.empty()) write_text(rc.outputs.csv, ensemble_summary_csv(result.summary), out);
    json stats{{"model", model.name()},
               {"representation", representation_name(rc.representation)},
               {"seed", ic.seed},
               {"dt", ic.dt},
               {"T", ic.T},
               {"r_max", ic.r_max},
               {"n_paths", result.n_paths},
               {"escape_count", result.escape_count},
               {"escape_times", result.escape_times},
               {"escape_paths", result.escape_paths}};
    write_text(rc.outputs.json, dump(stats), out);
    if (result.escape_count > 0) err << "warning: " << result.escape_count << " of " << result.n_paths << " paths escaped\n";
    return 0;
}

int cmd_verify(const RunConfig& rc, std::ostream& out, std::ostream&) {
    check_outputs(rc.outputs);
    const auto model = build_model(rc);
    const auto cert = verify_nonexplosion(model, rc.verify);
    if (!rc.outputs.json.empty()) write_text(rc.outputs.json, dump(to_json(cert)), out);
    if (!rc.outputs.report.empty()) write_text(rc.outputs.report, cert.report_text, out);
    out << cert.report_text;
    return cert.non_explosive() ? 0 : 2;
}

int cmd_convergence(const RunConfig& rc, std::ostream& out, std::ostream& err) {
    check_outputs(rc.outputs);
    if (rc.levels < 3) throw ConfigError("'integration.levels' must be at least 3");
    if (rc.n_paths < 1) throw ConfigError("'integration.n_paths' must be at least 1");
    const auto model = build_model(rc);
    const auto sim = make_simulation(model, rc.representation);
    const auto ic = integrated_config(rc, sim);
    StrongOrderResult r;
    try {
        r = estimate_strong_order(sim.system(), ic, rc.n_paths, rc.levels);
    } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
    }
    json j = to_json(r);
    j["model"] = model.name();
    j["seed"] = ic.seed;
    j["dt"] = ic.dt;
    j["T"] = ic.T;
    write_text(rc.outputs.json, dump(j), out);
    if (r.unreliable) err << "warning: more than 10% of paths escaped; estimate flagged unreliable\n";
    return 0;
}

int cmd_catalog(std::ostream& out) {
    for (const auto& e : model_catalog()) {
        out << e.name << "\n  " << e.description << "\n  defaults: " << e.default_params.dump() << "\n";
    }
    out << "custom\n  inline polynomial model: damping_general | damping_lienard, restoring | potential, sigma\n";
    return 0;
}

/// Flag values as they would be written in a config file.
json parse_flag_value(const std::string& text, const std::string& flag) {
    try {
        return parse_config("[v]\nx = " + text + "\n").at("v").at("x");
    } catch (const ConfigError& e) {
        throw ConfigError("invalid value for " + flag + ": " + e.what());
    }
}

struct FlagSpec {
    const char* names;
    const char* section;
    const char* key;
    const char* help;
    bool string_valued;
};

const std::vector<FlagSpec>& flag_specs() {
    static const std::vector<FlagSpec> specs{
        {"--model", "model", "name", "catalog model name or \"custom\"", true},
        {"--preset", "model", "preset", "parameter preset (paper)", true},
        {"--dt", "integration", "dt", "time step", false},
        {"-T,--horizon", "integration", "T", "time horizon", false},
        {"--seed", "integration", "seed", "random seed (overrides STOCHOSC_SEED)", false},
        {"--r-max", "integration", "r_max", "escape threshold on |z|", false},
        {"--stride", "integration", "record_stride", "record every k-th step", false},
        {"--initial", "integration", "initial", "initial state x_1..x_n,v_1..v_n", false},
        {"--representation", "integration", "representation", "direct or transformed", true},
        {"--paths", "integration", "n_paths", "number of paths", false},
        {"--levels", "integration", "levels", "dyadic levels for the convergence study", false},
        {"--threads", "integration", "threads", "OpenMP threads (0: default)", false},
        {"-o,--out", "output", "csv", "CSV output path (default: stdout)", true},
        {"--svg", "output", "svg", "SVG plot path", true},
        {"--report", "output", "report", "text report path", true},
        {"--json", "output", "json", "JSON output path", true},
        {"--r-check", "verify", "R_check", "verification box radius", false},
        {"--grid", "verify", "grid", "grid points per axis (0: automatic)", false},
        {"--mc-samples", "verify", "mc_samples", "Monte Carlo samples for high dimensions", false},
        {"--lyapunov-c", "verify", "c", "constant c of the Lyapunov inequality", false},
        {"--alpha-max", "verify", "alpha_max", "largest alpha tried for the dissipation bound", false},
    };
    return specs;
}

struct CommandFlags {
    std::string config_path;
    std::vector<std::string> params;
    std::vector<std::string> values;
    std::vector<CLI::Option*> options;
};

void add_common_flags(CLI::App* cmd, CommandFlags& flags) {
    cmd->add_option("-c,--config", flags.config_path, "config file");
    cmd->add_option("-p,--param", flags.params, "model parameter key=value (repeatable)");
    flags.values.resize(flag_specs().size());
    for (std::size_t i = 0; i < flag_specs().size(); ++i)
        flags.options.push_back(cmd->add_option(flag_specs()[i].names, flags.values[i], flag_specs()[i].help));
}

json collect_overrides(const CommandFlags& flags) {
    json o = json::object();
    for (std::size_t i = 0; i < flag_specs().size(); ++i) {
        if (flags.options[i]->count() == 0) continue;
        const auto& spec = flag_specs()[i];
        const std::string& text = flags.values[i];
        json v;
        if (spec.string_valued) {
            v = text;
        } else if (std::string(spec.key) == "seed") {
            v = parse_seed(text, "--seed");
        } else if (std::string(spec.key) == "initial" && !text.empty() && text.front() != '[') {
            v = parse_flag_value("[" + text + "]", "--initial");
        } else {
            v = parse_flag_value(text, spec.names);
        }
        o[spec.section][spec.key] = std::move(v);
    }
    for (const auto& p : flags.params) {
        const auto eq = p.find('=');
        if (eq == std::string::npos || eq == 0) throw ConfigError("--param expects key=value, got '" + p + "'");
        o["model"]["params"][p.substr(0, eq)] = parse_flag_value(p.substr(eq + 1), "--param " + p.substr(0, eq));
    }
    return o;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Stochastic oscillators: simulation and non-explosion verification", "stochosc"};
    app.require_subcommand(1);

    struct Command {
        std::string name;
        std::string help;
        CLI::App* app = nullptr;
        CommandFlags flags;
    };
    const std::array<std::pair<const char*, const char*>, 4> specs{{
        {"simulate", "integrate one path and write a CSV (and SVG)"},
        {"ensemble", "integrate many paths; summary CSV and escape statistics"},
        {"verify", "check the non-explosion criteria and print a certificate"},
        {"convergence", "estimate the strong order of the Euler-Maruyama scheme"},
    }};
    std::vector<Command> commands(specs.size());
    for (std::size_t i = 0; i < specs.size(); ++i) {
        auto& c = commands[i];
        c.name = specs[i].first;
        c.help = specs[i].second;
        c.app = app.add_subcommand(c.name, c.help);
        add_common_flags(c.app, c.flags);
    }
    auto* catalog = app.add_subcommand("catalog", "list built-in models");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        app.exit(e, out, err);
        return 0;
    } catch (const CLI::CallForAllHelp& e) {
        app.exit(e, out, err);
        return 0;
    } catch (const CLI::ParseError& e) {
        app.exit(e, out, err);
        return 1;
    }

    try {
        if (catalog->parsed()) return cmd_catalog(out);
        for (auto& c : commands) {
            if (!c.app->parsed()) continue;
            const json file = c.flags.config_path.empty() ? json::object() : load_config_file(c.flags.config_path);
            const RunConfig rc = resolve_run_config(file, collect_overrides(c.flags), std::getenv("STOCHOSC_SEED"));
#ifdef _OPENMP
            if (rc.threads > 0) omp_set_num_threads(rc.threads);
#endif
            const std::string name = c.name;
            if (name == "simulate") return cmd_simulate(rc, out, err);
            if (name == "ensemble") return cmd_ensemble(rc, out, err);
            if (name == "verify") return cmd_verify(rc, out, err);
            return cmd_convergence(rc, out, err);
        }
    } catch (const ConfigError& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::invalid_argument& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    }
    return 1;
}

}  // namespace stochosc
