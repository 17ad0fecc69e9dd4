#include "bakersim/cli.hpp"

#include "bakersim/chaos.hpp"
#include "bakersim/nmr.hpp"
#include "bakersim/verify.hpp"

#include <CLI11.hpp>
#include <fmt/format.h>

#include <cerrno>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <map>
#include <ostream>
#include <set>
#include <sstream>

namespace bakersim::cli {

namespace {

class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class UsageError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

using KeyValues = std::map<std::string, std::string>;

const std::set<std::string>& known_keys() {
    static const std::set<std::string> keys = {
        "preset", "steps", "seed", "gamma-h", "gamma-c1", "gamma-c2", "hamiltonian", "convention",
        "map", "out", "format", "threads", "perturbation", "sequence",
    };
    return keys;
}

std::string trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return std::string(s.substr(b, e - b + 1));
}

double to_double(const std::string& key, const std::string& v) {
    errno = 0;
    char* end = nullptr;
    const double d = std::strtod(v.c_str(), &end);
    if (v.empty() || end != v.c_str() + v.size() || errno == ERANGE) {
        throw UsageError(fmt::format("{}: '{}' is not a number", key, v));
    }
    return d;
}

long long to_integer(const std::string& key, const std::string& v) {
    errno = 0;
    char* end = nullptr;
    const long long i = std::strtoll(v.c_str(), &end, 10);
    if (v.empty() || end != v.c_str() + v.size() || errno == ERANGE) {
        throw UsageError(fmt::format("{}: '{}' is not an integer", key, v));
    }
    return i;
}

std::string num(double x) { return fmt::format("{:.17g}", x); }

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open '" + path + "' for reading");
    std::ostringstream ss;
    ss << in.rdbuf();
    if (in.bad()) throw IoError("failed reading '" + path + "'");
    return ss.str();
}

void write_output(const KeyValues& kv, const std::string& text, std::ostream& out) {
    auto it = kv.find("out");
    if (it == kv.end() || it->second.empty() || it->second == "-") {
        out << text;
        out.flush();
        return;
    }
    std::ofstream f(it->second, std::ios::binary | std::ios::trunc);
    if (!f) throw IoError("cannot open '" + it->second + "' for writing");
    f << text;
    f.flush();
    if (!f) throw IoError("failed writing '" + it->second + "'");
}

std::string get(const KeyValues& kv, const std::string& key, const std::string& fallback) {
    auto it = kv.find(key);
    return it == kv.end() ? fallback : it->second;
}

template <class F>
auto as_usage(F&& f) -> decltype(f()) {
    try {
        return f();
    } catch (const UsageError&) {
        throw;
    } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
    }
}

// Preset first, then every explicit key on top.
ExperimentConfig resolve_experiment(const KeyValues& kv, const std::string& default_preset) {
    return as_usage([&] {
        ExperimentConfig c = ExperimentConfig::preset_named(get(kv, "preset", default_preset));
        if (kv.count("steps")) {
            const long long s = to_integer("steps", kv.at("steps"));
            if (s < 1 || s > 64) throw UsageError("steps must be in 1..64");
            c.steps = static_cast<int>(s);
        }
        if (kv.count("seed")) {
            const long long s = to_integer("seed", kv.at("seed"));
            if (s < 0) throw UsageError("seed must be >= 0");
            c.seed = static_cast<std::uint64_t>(s);
        }
        if (kv.count("threads")) c.threads = static_cast<int>(to_integer("threads", kv.at("threads")));
        if (kv.count("gamma-h")) c.t_h = to_double("gamma-h", kv.at("gamma-h"));
        if (kv.count("gamma-c1")) c.t_c1 = to_double("gamma-c1", kv.at("gamma-c1"));
        if (kv.count("gamma-c2")) c.t_c2 = to_double("gamma-c2", kv.at("gamma-c2"));
        if (kv.count("hamiltonian")) c.hamiltonian.variant = parse_hamiltonian_variant(kv.at("hamiltonian"));
        if (kv.count("convention")) c.hamiltonian.convention = parse_convention(kv.at("convention"));
        if (kv.count("perturbation")) {
            const std::string& p = kv.at("perturbation");
            if (p == "none") {
                c.perturbation = ArtificialPerturbation::kNone;
            } else if (p == "superoperator") {
                c.perturbation = ArtificialPerturbation::kSuperoperator;
            } else {
                throw UsageError("perturbation must be none or superoperator");
            }
        }
        c.validate();
        return c;
    });
}

std::vector<std::pair<std::string, std::string>> describe_config(const std::string& command,
                                                                 const ExperimentConfig& c,
                                                                 const std::string& maps) {
    return {
        {"command", command},
        {"preset", c.preset},
        {"map", maps},
        {"hamiltonian", to_string(c.hamiltonian.variant)},
        {"convention", to_string(c.hamiltonian.convention)},
        {"j1", num(c.hamiltonian.j1)},
        {"j2", num(c.hamiltonian.j2)},
        {"j3", num(c.hamiltonian.j3)},
        {"delta", num(c.hamiltonian.delta)},
        {"gamma-h", num(c.t_h)},
        {"gamma-c1", num(c.t_c1)},
        {"gamma-c2", num(c.t_c2)},
        {"steps", std::to_string(c.steps)},
        {"perturbation", c.perturbation == ArtificialPerturbation::kNone ? "none" : "superoperator"},
        {"seed", std::to_string(c.seed)},
    };
}

std::string csv_header_block(const std::vector<std::pair<std::string, std::string>>& meta) {
    std::string out;
    for (const auto& [k, v] : meta) out += fmt::format("# {}={}\n", k, v);
    return out;
}

std::string output_format(const KeyValues& kv) {
    const std::string f = get(kv, "format", "csv");
    if (f != "csv" && f != "plot") throw UsageError("format must be csv or plot");
    return f;
}

std::vector<DynamicsMap> selected_maps(const KeyValues& kv, const std::string& fallback) {
    const std::string m = get(kv, "map", fallback);
    if (m == "both") return {DynamicsMap::kChaotic, DynamicsMap::kRegular};
    return {as_usage([&] { return parse_dynamics_map(m); })};
}

std::string run_entropy(const KeyValues& kv) {
    const ExperimentConfig base = resolve_experiment(kv, "fig2");
    const auto maps = selected_maps(kv, "both");
    const std::string format = output_format(kv);
    std::vector<std::vector<double>> series;
    std::vector<std::string> names;
    for (DynamicsMap m : maps) {
        ExperimentConfig c = base;
        c.map = m;
        series.push_back(entropy_experiment(c));
        names.push_back(to_string(m));
    }
    const auto meta = describe_config("entropy", base, get(kv, "map", "both"));

    if (format == "plot") {
        PlotSeries ps;
        ps.meta = meta;
        ps.columns.push_back("step");
        for (const auto& n : names) ps.columns.push_back(n);
        for (int n = 0; n <= base.steps; ++n) {
            std::vector<double> row{static_cast<double>(n)};
            for (const auto& s : series) row.push_back(s[static_cast<std::size_t>(n)]);
            ps.rows.push_back(std::move(row));
        }
        return emit_plot_data(ps);
    }
    std::string out = csv_header_block(meta);
    out += "step,variant,entropy_bits\n";
    for (std::size_t v = 0; v < series.size(); ++v) {
        for (std::size_t n = 0; n < series[v].size(); ++n) {
            out += fmt::format("{},{},{}\n", n, names[v], num(series[v][n]));
        }
    }
    return out;
}

std::string run_hyper(const KeyValues& kv) {
    ExperimentConfig c = resolve_experiment(kv, "fig5");
    if (!kv.count("steps")) c.steps = 3;
    if (c.steps > 3) throw UsageError("hyper: the exhaustive scan supports at most 3 steps (8 histories)");
    const auto maps = selected_maps(kv, "chaotic");
    if (maps.size() != 1) throw UsageError("hyper: choose one map (chaotic or regular)");
    c.map = maps.front();
    const std::string format = output_format(kv);
    const HypersensitivityResult r = hypersensitivity_experiment(c);
    const auto meta = describe_config("hyper", c, to_string(c.map));

    if (format == "plot") {
        PlotSeries ps;
        ps.meta = meta;
        ps.meta.emplace_back("s_max_bits", num(r.s_max));
        ps.meta.emplace_back("slope", num(r.slope));
        ps.columns = {"delta_s_bits", "i_min_bits"};
        for (const auto& p : r.exhaustive.points) ps.rows.push_back({p.delta_s, p.information});
        return emit_plot_data(ps);
    }
    std::string out = csv_header_block(meta);
    out += "delta_s_bits,i_min_bits,provenance\n";
    for (const HypersensitivityCurve* curve : {&r.exhaustive, &r.greedy}) {
        for (const auto& p : curve->points) {
            out += fmt::format("{},{},{}\n", num(p.delta_s), num(p.information), to_string(curve->provenance));
        }
    }
    out += fmt::format("# summary s_max_bits={} slope={}\n", num(r.s_max), num(r.slope));
    return out;
}

std::string run_compile(const KeyValues& kv) {
    HamiltonianModel model;
    as_usage([&] {
        if (kv.count("convention")) model.convention = parse_convention(kv.at("convention"));
        if (kv.count("hamiltonian")) model.variant = parse_hamiltonian_variant(kv.at("hamiltonian"));
        return 0;
    });
    const std::string which = get(kv, "sequence", "all");
    std::vector<PulseSequence> seqs;
    if (which == "t_odd" || which == "all") seqs.push_back(t_odd(model));
    if (which == "t_even" || which == "all") seqs.push_back(t_even(model));
    if (which == "t_regular" || which == "all") seqs.push_back(t_regular(model));
    if (which == "full_baker" || which == "all") seqs.push_back(full_baker_appendix(model));
    if (which == "t_even_as_printed") seqs.push_back(t_even_as_printed(model));
    if (seqs.empty()) throw UsageError("unknown sequence '" + which + "'");
    std::string out;
    for (std::size_t i = 0; i < seqs.size(); ++i) {
        if (i) out += "\n";
        out += format_pulse_sequence(seqs[i], model.convention);
    }
    return out;
}

}  // namespace

std::vector<std::pair<std::string, std::string>> parse_config_text(std::string_view text) {
    std::vector<std::pair<std::string, std::string>> out;
    std::set<std::string> seen;
    std::istringstream in{std::string(text)};
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const std::string t = trim(line);
        if (t.empty() || t[0] == '#' || t[0] == ';') continue;
        const auto eq = t.find('=');
        if (eq == std::string::npos) {
            throw std::invalid_argument(fmt::format("config line {}: expected key = value", line_no));
        }
        std::string key = trim(std::string_view(t).substr(0, eq));
        std::string value = trim(std::string_view(t).substr(eq + 1));
        if (key.empty()) throw std::invalid_argument(fmt::format("config line {}: empty key", line_no));
        if (!seen.insert(key).second) {
            throw std::invalid_argument(fmt::format("config line {}: duplicate key '{}'", line_no, key));
        }
        out.emplace_back(std::move(key), std::move(value));
    }
    return out;
}

std::string emit_plot_data(const PlotSeries& series) {
    if (series.rows.empty() || series.columns.empty()) throw std::invalid_argument("emit_plot_data: empty series");
    std::string out = "#";
    for (const auto& [k, v] : series.meta) {
        if (k.find_first_of(" =") != std::string::npos || v.find(' ') != std::string::npos) {
            throw std::invalid_argument("emit_plot_data: header fields must not contain spaces");
        }
        out += " " + k + "=" + v;
    }
    out += " columns:";
    for (const auto& c : series.columns) out += " " + c;
    out += "\n";
    for (const auto& row : series.rows) {
        if (row.size() != series.columns.size()) throw std::invalid_argument("emit_plot_data: ragged row");
        for (std::size_t i = 0; i < row.size(); ++i) out += (i ? " " : "") + num(row[i]);
        out += "\n";
    }
    return out;
}

PlotSeries parse_plot_data(std::string_view text) {
    PlotSeries s;
    std::istringstream in{std::string(text)};
    std::string line;
    bool header = false;
    while (std::getline(in, line)) {
        if (trim(line).empty()) continue;
        std::istringstream words(line);
        std::string w;
        if (line[0] == '#') {
            if (header) continue;
            header = true;
            words >> w;  // '#'
            bool in_columns = false;
            while (words >> w) {
                if (w == "columns:") {
                    in_columns = true;
                } else if (in_columns) {
                    s.columns.push_back(w);
                } else {
                    const auto eq = w.find('=');
                    if (eq == std::string::npos) throw std::invalid_argument("plot data: bad header field");
                    s.meta.emplace_back(w.substr(0, eq), w.substr(eq + 1));
                }
            }
            continue;
        }
        std::vector<double> row;
        while (words >> w) row.push_back(to_double("plot data", w));
        s.rows.push_back(std::move(row));
    }
    if (!header) throw std::invalid_argument("plot data: missing header");
    return s;
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Three-spin NMR simulator for the quantum baker's map"};
    app.require_subcommand(1);
    app.set_help_all_flag("--help-all");

    KeyValues flags;
    std::string config_path;

    auto common = [&](CLI::App* sub, bool physics) {
        sub->add_option("--config", config_path, "flat key = value file; flags override it");
        sub->add_option_function<std::string>("--out", [&](const std::string& v) { flags["out"] = v; },
                                              "output path (default: stdout)");
        sub->add_option_function<std::string>(
            "--convention", [&](const std::string& v) { flags["convention"] = v; }, "angular | cycles");
        sub->add_option_function<std::string>(
            "--hamiltonian", [&](const std::string& v) { flags["hamiltonian"] = v; }, "full | noxy | simplified");
        if (!physics) return;
        auto str = [&](const char* flag, const char* key, const char* help) {
            sub->add_option_function<std::string>(flag, [&flags, key](const std::string& v) { flags[key] = v; },
                                                  help);
        };
        str("--preset", "preset", "fig2 | fig3 | fig4 | fig5 | custom");
        str("--steps", "steps", "number of map iterations");
        str("--seed", "seed", "seed for randomized grouping");
        str("--gamma-h", "gamma-h", "1/Gamma for H, seconds");
        str("--gamma-c1", "gamma-c1", "1/Gamma for C1, seconds");
        str("--gamma-c2", "gamma-c2", "1/Gamma for C2, seconds");
        str("--map", "map", "chaotic | regular | both");
        str("--perturbation", "perturbation", "none | superoperator");
        str("--format", "format", "csv | plot");
        str("--threads", "threads", "worker threads (0: all cores)");
    };

    CLI::App* entropy = app.add_subcommand("entropy", "entropy S(n) versus step");
    common(entropy, true);
    CLI::App* hyper = app.add_subcommand("hyper", "hypersensitivity frontier I_min versus Delta S");
    common(hyper, true);
    CLI::App* verify = app.add_subcommand("verify", "run the self-check suite");
    verify->add_option_function<std::string>("--out", [&](const std::string& v) { flags["out"] = v; },
                                             "output path (default: stdout)");
    CLI::App* compile = app.add_subcommand("compile", "dump canned pulse sequences");
    common(compile, false);
    compile->add_option_function<std::string>(
        "--sequence", [&](const std::string& v) { flags["sequence"] = v; },
        "t_odd | t_even | t_regular | full_baker | t_even_as_printed | all");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        out << app.help();
        return kOk;
    } catch (const CLI::CallForAllHelp& e) {
        out << app.help("", CLI::AppFormatMode::All);
        return kOk;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n";
        return kUsageError;
    }

    try {
        KeyValues kv;
        if (!config_path.empty()) {
            const std::string text = read_file(config_path);
            for (auto& [k, v] : as_usage([&] { return parse_config_text(text); })) {
                if (!known_keys().count(k)) throw UsageError("unknown config key '" + k + "'");
                kv[k] = v;
            }
        }
        for (const auto& [k, v] : flags) kv[k] = v;

        if (entropy->parsed()) {
            write_output(kv, run_entropy(kv), out);
        } else if (hyper->parsed()) {
            write_output(kv, run_hyper(kv), out);
        } else if (compile->parsed()) {
            write_output(kv, run_compile(kv), out);
        } else if (verify->parsed()) {
            const auto checks = run_verification_suite();
            write_output(kv, format_verification_table(checks), out);
            for (const auto& c : checks) {
                if (!c.pass) return kVerifyFailed;
            }
        }
    } catch (const UsageError& e) {
        err << "error: " << e.what() << "\n";
        return kUsageError;
    } catch (const IoError& e) {
        err << "error: " << e.what() << "\n";
        return kIoError;
    } catch (const PhysicsViolation& e) {
        err << "physics violation: " << e.what() << "\n";
        return kPhysicsViolation;
    } catch (const std::invalid_argument& e) {
        err << "error: " << e.what() << "\n";
        return kUsageError;
    }
    return kOk;
}

}  // namespace bakersim::cli
