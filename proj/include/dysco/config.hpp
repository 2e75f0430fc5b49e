#pragma once

// Structured scenario configuration: a small line-oriented key-value format
// with nested `name { ... }` blocks, SI units carried in key suffixes
// (_hz, _rad_s, _t, _s). Parsing reports every violated guard, not just the
// first one.

#include <cctype>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "dysco/constants.hpp"
#include "dysco/experiments.hpp"
#include "dysco/pulse.hpp"
#include "dysco/waveform.hpp"

namespace dysco {

enum class ExperimentKind {
    map,
    sensitivity,
    dr_ramp,
    spectrogram,
    noise_spectrum,
    filter_function,
    trace,
    baseline,
    export_program
};

inline const char* experiment_name(ExperimentKind k) {
    switch (k) {
        case ExperimentKind::map: return "map";
        case ExperimentKind::sensitivity: return "sensitivity";
        case ExperimentKind::dr_ramp: return "dr-ramp";
        case ExperimentKind::spectrogram: return "spectrogram";
        case ExperimentKind::noise_spectrum: return "noise-spectrum";
        case ExperimentKind::filter_function: return "filter-function";
        case ExperimentKind::trace: return "trace";
        case ExperimentKind::baseline: return "baseline";
        case ExperimentKind::export_program: return "export-program";
    }
    return "?";
}

inline std::optional<ExperimentKind> experiment_from_name(const std::string& s) {
    static const std::map<std::string, ExperimentKind> table = {
        {"map", ExperimentKind::map},
        {"sensitivity", ExperimentKind::sensitivity},
        {"dr-ramp", ExperimentKind::dr_ramp},
        {"spectrogram", ExperimentKind::spectrogram},
        {"noise-spectrum", ExperimentKind::noise_spectrum},
        {"filter-function", ExperimentKind::filter_function},
        {"trace", ExperimentKind::trace},
        {"baseline", ExperimentKind::baseline},
        {"export-program", ExperimentKind::export_program}};
    const auto it = table.find(s);
    if (it == table.end()) return std::nullopt;
    return it->second;
}

/// Raw parse tree: scalar values and repeated nested blocks.
struct ConfigNode {
    std::vector<std::pair<std::string, std::string>> values;
    std::vector<std::pair<std::string, ConfigNode>> blocks;

    const std::string* find(const std::string& key) const {
        for (const auto& [k, v] : values)
            if (k == key) return &v;
        return nullptr;
    }
    const ConfigNode* find_block(const std::string& key) const {
        for (const auto& [k, b] : blocks)
            if (k == key) return &b;
        return nullptr;
    }
    std::vector<const ConfigNode*> find_blocks(const std::string& key) const {
        std::vector<const ConfigNode*> out;
        for (const auto& [k, b] : blocks)
            if (k == key) out.push_back(&b);
        return out;
    }
};

namespace detail {

inline std::string trim(const std::string& s) {
    std::size_t a = 0, b = s.size();
    while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
    while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
    return s.substr(a, b - a);
}

}  // namespace detail

/// Parse the block-structured text. Throws std::invalid_argument with
/// line/column on malformed input.
inline ConfigNode parse_config_tree(const std::string& text) {
    std::vector<ConfigNode*> stack;
    ConfigNode root;
    stack.push_back(&root);
    std::istringstream in(text);
    std::string raw;
    std::size_t line_no = 0;
    while (std::getline(in, raw)) {
        ++line_no;
        const std::size_t hash = raw.find('#');
        std::string line = detail::trim(hash == std::string::npos ? raw : raw.substr(0, hash));
        if (line.empty()) continue;
        if (line == "}") {
            if (stack.size() == 1)
                throw std::invalid_argument("config parse error at line " +
                                            std::to_string(line_no) + ": unmatched '}'");
            stack.pop_back();
            continue;
        }
        if (line.back() == '{') {
            const std::string name = detail::trim(line.substr(0, line.size() - 1));
            if (name.empty() || name.find_first_of("={}") != std::string::npos)
                throw std::invalid_argument("config parse error at line " +
                                            std::to_string(line_no) + ": bad block header");
            stack.back()->blocks.emplace_back(name, ConfigNode{});
            stack.push_back(&stack.back()->blocks.back().second);
            continue;
        }
        const std::size_t eq = line.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument("config parse error at line " + std::to_string(line_no) +
                                        ", column " + std::to_string(raw.find(line) + line.size()) +
                                        ": expected 'key = value' or 'name {'");
        const std::string key = detail::trim(line.substr(0, eq));
        const std::string value = detail::trim(line.substr(eq + 1));
        if (key.empty() || value.empty())
            throw std::invalid_argument("config parse error at line " + std::to_string(line_no) +
                                        ": empty key or value");
        stack.back()->values.emplace_back(key, value);
    }
    if (stack.size() != 1)
        throw std::invalid_argument("config parse error: unterminated block at end of input");
    return root;
}

/// Fully resolved scenario. Grids are stored explicitly so the experiment
/// drivers stay free of config knowledge.
struct ScenarioConfig {
    ExperimentKind experiment = ExperimentKind::map;
    RunParams params;

    std::size_t n_units = 1;
    double phi = 0.0;
    WindowKind window = WindowKind::rectangular;
    std::size_t beta_steps = 10;

    std::vector<double> phi_grid;
    std::vector<double> b_grid;
    std::vector<double> fs_grid;
    std::vector<double> b_values;   // dr-ramp fields
    std::vector<double> tau_grid;   // baseline spacing / hahn tau
    std::size_t xy8_reps = 4;
    std::string baseline = "xy8";

    Waveform waveform;
    std::string out_path;

    // filter-function extras
    std::string ff_sequence = "dysco";
    double ff_tau = 0.0;
    double ff_omega_max = 0.0;
    std::size_t ff_omega_points = 512;
    std::size_t ff_samples = 8192;
};

struct ConfigResult {
    std::optional<ScenarioConfig> config;
    std::vector<std::string> errors;
    bool ok() const { return errors.empty() && config.has_value(); }
};

namespace detail {

struct Reader {
    const ConfigNode& node;
    std::vector<std::string>& errors;

    double number(const std::string& key, double fallback, bool required = false) const {
        const std::string* v = node.find(key);
        if (!v) {
            if (required) errors.push_back("missing required key '" + key + "'");
            return fallback;
        }
        char* end = nullptr;
        const double x = std::strtod(v->c_str(), &end);
        if (end == v->c_str() || *end != '\0' || !std::isfinite(x)) {
            errors.push_back("key '" + key + "': not a finite number: '" + *v + "'");
            return fallback;
        }
        return x;
    }

    std::string text(const std::string& key, const std::string& fallback) const {
        const std::string* v = node.find(key);
        return v ? *v : fallback;
    }
};

inline std::vector<double> linspace(double lo, double hi, std::size_t n) {
    std::vector<double> out(n);
    if (n == 1) {
        out[0] = lo;
        return out;
    }
    for (std::size_t i = 0; i < n; ++i)
        out[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1);
    return out;
}

inline std::vector<double> step_grid(double lo, double hi, double step) {
    std::vector<double> out;
    if (step <= 0.0) return out;
    for (double v = lo; v <= hi + 0.5 * step; v += step) out.push_back(v);
    return out;
}

inline Waveform read_waveform(const ConfigNode& wf, std::vector<std::string>& errors) {
    Waveform w;
    const std::string mode = wf.find("shot_phase_mode") ? *wf.find("shot_phase_mode") : "fixed";
    if (mode == "random")
        w.shot_phase_mode = ShotPhaseMode::random_per_shot;
    else if (mode != "fixed")
        errors.push_back("key 'shot_phase_mode': expected fixed|random, got '" + mode + "'");
    for (const ConfigNode* tn : wf.find_blocks("tone")) {
        Reader r{*tn, errors};
        Tone tone;
        tone.amplitude = r.number("amplitude_t", 0.0, true);
        tone.frequency = r.number("frequency_hz", 0.0, true);
        tone.phase = r.number("phase_rad", 0.0);
        if (tone.amplitude < 0.0) errors.push_back("key 'amplitude_t': must be >= 0");
        if (tone.frequency < 0.0) errors.push_back("key 'frequency_hz': must be >= 0");
        w.tones.push_back(tone);
    }
    if (const ConfigNode* bn = wf.find_block("bath")) {
        Reader r{*bn, errors};
        BathSurrogate bath;
        bath.larmor_center_hz = r.number("larmor_center_hz", 0.0, true);
        bath.larmor_spread_hz = r.number("larmor_spread_hz", 10e3);
        bath.n_oscillators = static_cast<std::size_t>(r.number("n_oscillators", 48));
        bath.rms_amplitude = r.number("rms_amplitude_t", 0.0, true);
        if (bath.n_oscillators < 1) errors.push_back("key 'n_oscillators': must be >= 1");
        if (bath.rms_amplitude < 0.0) errors.push_back("key 'rms_amplitude_t': must be >= 0");
        for (const ConfigNode* cs : bn->find_blocks("coupled_spin")) {
            Reader rc{*cs, errors};
            CoupledSpin pair;
            pair.offset_hz = rc.number("offset_hz", 0.0, true);
            pair.amplitude = rc.number("amplitude_t", 0.0, true);
            bath.coupled_spins.push_back(pair);
        }
        w.bath = bath;
        w.shot_phase_mode = ShotPhaseMode::random_per_shot;
    }
    return w;
}

}  // namespace detail

/// Resolve and validate a scenario from config text. Returns either the
/// config or the full list of violated guards.
inline ConfigResult parse_scenario(const std::string& text) {
    ConfigResult result;
    ConfigNode root;
    try {
        root = parse_config_tree(text);
    } catch (const std::exception& e) {
        result.errors.push_back(e.what());
        return result;
    }
    std::vector<std::string>& errors = result.errors;
    detail::Reader top{root, errors};

    ScenarioConfig cfg;
    const std::string kind_name = top.text("experiment", "map");
    if (auto k = experiment_from_name(kind_name))
        cfg.experiment = *k;
    else
        errors.push_back("key 'experiment': unknown experiment '" + kind_name + "'");

    cfg.params.seed = static_cast<std::uint64_t>(top.number("seed", 0));
    cfg.params.shots = static_cast<int>(top.number("shots", 1));
    cfg.params.substeps = static_cast<int>(top.number("substeps", default_substeps_per_pulse));
    cfg.params.threads = static_cast<unsigned>(top.number("threads", 1));
    cfg.out_path = top.text("out", "");
    if (cfg.params.shots < 1) errors.push_back("key 'shots': must be >= 1");
    if (cfg.params.substeps < 1) errors.push_back("key 'substeps': must be >= 1");

    if (const ConfigNode* spin = root.find_block("spin")) {
        detail::Reader r{*spin, errors};
        cfg.params.rabi = r.number("rabi_rad_s", cfg.params.rabi);
        cfg.params.detuning = r.number("detuning_rad_s", 0.0);
        cfg.params.gamma_nv = r.number("gamma_nv_rad_s_t", gamma_nv_default);
        if (!(cfg.params.rabi > 0.0)) errors.push_back("key 'rabi_rad_s': must be > 0");
        if (cfg.params.gamma_nv == 0.0) errors.push_back("key 'gamma_nv_rad_s_t': must be nonzero");
    }
    if (const ConfigNode* env = root.find_block("envelope")) {
        detail::Reader r{*env, errors};
        ContrastEnvelope e;
        e.tau = r.number("tau_s", 0.0, true);
        e.exponent = r.number("exponent", 1.0);
        if (!(e.tau > 0.0)) errors.push_back("key 'tau_s': must be > 0");
        if (!(e.exponent > 0.0)) errors.push_back("key 'exponent': must be > 0");
        cfg.params.envelope = e;
    }

    const ConfigNode* seq = root.find_block("sequence");
    if (seq) {
        detail::Reader r{*seq, errors};
        cfg.n_units = static_cast<std::size_t>(r.number("n_units", 1));
        cfg.phi = r.number("phi_rad", 0.0);
        cfg.beta_steps = static_cast<std::size_t>(r.number("beta_steps", 10));
        const std::string wname = r.text("window", "rectangular");
        if (wname == "gaussian")
            cfg.window = WindowKind::gaussian;
        else if (wname != "rectangular")
            errors.push_back("key 'window': expected rectangular|gaussian, got '" + wname + "'");
        if (cfg.n_units < 1) errors.push_back("key 'n_units': must be >= 1");

        const double beta_k = r.number("beta_k", 1.0);
        if (!(beta_k >= 0.0 && beta_k <= 1.0))
            errors.push_back("key 'beta_k': must lie in [0, 1], got " + std::to_string(beta_k));

        if (seq->find("phi_points")) {
            cfg.phi_grid = detail::linspace(r.number("phi_min_rad", 0.0),
                                            r.number("phi_max_rad", pi),
                                            static_cast<std::size_t>(r.number("phi_points", 19)));
        } else if (seq->find("phi_rad")) {
            cfg.phi_grid = {cfg.phi};
        }
        if (seq->find("f_s_step_hz")) {
            cfg.fs_grid = detail::step_grid(r.number("f_s_min_hz", 0.0, true),
                                            r.number("f_s_max_hz", 0.0, true),
                                            r.number("f_s_step_hz", 0.0, true));
            if (cfg.fs_grid.empty()) errors.push_back("key 'f_s_step_hz': empty modulation grid");
        } else if (seq->find("f_s_hz")) {
            cfg.fs_grid = {r.number("f_s_hz", 0.0)};
        }
        // bandwidth guards: paper bounds f_s to [1/t_N, rabi/(9*pi)]
        if (!cfg.fs_grid.empty() && cfg.params.rabi > 0.0 && cfg.n_units >= 1) {
            const double limit = bandwidth_limit_hz(cfg.params.rabi);
            const double t_n = (4.0 * static_cast<double>(cfg.n_units) + 0.5) *
                               (two_pi / cfg.params.rabi);
            std::ostringstream msg;
            for (const double f : cfg.fs_grid) {
                if (f > limit) {
                    msg.str("");
                    msg << "key 'f_s': " << f << " Hz exceeds the bandwidth limit rabi/(9*pi) = "
                        << limit << " Hz";
                    errors.push_back(msg.str());
                    break;
                }
            }
            for (const double f : cfg.fs_grid) {
                if (f > 0.0 && f < 0.999 / t_n) {
                    msg.str("");
                    msg << "key 'f_s': " << f << " Hz is below the resolution bound 1/t_N = "
                        << 1.0 / t_n << " Hz";
                    errors.push_back(msg.str());
                    break;
                }
            }
        }
    }

    if (const ConfigNode* map = root.find_block("field")) {
        detail::Reader r{*map, errors};
        const double b_max = r.number("b_max_t", 0.0, true);
        const double b_min = r.number("b_min_t", 0.0);
        const std::size_t n_b = static_cast<std::size_t>(r.number("b_points", 64));
        if (!(b_max > 0.0)) errors.push_back("key 'b_max_t': must be > 0");
        if (n_b < 2) errors.push_back("key 'b_points': must be >= 2");
        cfg.b_grid = detail::linspace(b_min, b_max, n_b);
        for (const ConfigNode* bv : map->find_blocks("value")) {
            detail::Reader rv{*bv, errors};
            cfg.b_values.push_back(rv.number("b_t", 0.0, true));
        }
        if (cfg.b_values.empty()) cfg.b_values = {b_max};
    }

    if (const ConfigNode* base = root.find_block("baseline")) {
        detail::Reader r{*base, errors};
        cfg.baseline = r.text("kind", "xy8");
        cfg.xy8_reps = static_cast<std::size_t>(r.number("reps", 4));
        cfg.tau_grid = detail::step_grid(r.number("tau_min_s", 0.0, true),
                                         r.number("tau_max_s", 0.0, true),
                                         r.number("tau_step_s", 0.0, true));
        if (cfg.baseline != "xy8" && cfg.baseline != "hahn" && cfg.baseline != "dysco")
            errors.push_back("key 'kind': expected xy8|hahn|dysco, got '" + cfg.baseline + "'");
        if (cfg.tau_grid.empty()) errors.push_back("baseline block: empty tau grid");
    }

    if (const ConfigNode* ff = root.find_block("filter")) {
        detail::Reader r{*ff, errors};
        cfg.ff_sequence = r.text("sequence", "dysco");
        cfg.ff_tau = r.number("tau_s", 0.0);
        cfg.ff_omega_max = r.number("omega_max_rad_s", 0.0);
        cfg.ff_omega_points = static_cast<std::size_t>(r.number("omega_points", 512));
        cfg.ff_samples = static_cast<std::size_t>(r.number("g_samples", 8192));
        if (cfg.ff_sequence != "dysco" && cfg.ff_sequence != "xy8" && cfg.ff_sequence != "hahn")
            errors.push_back("key 'sequence': expected dysco|xy8|hahn, got '" + cfg.ff_sequence + "'");
    }

    if (const ConfigNode* wf = root.find_block("waveform"))
        cfg.waveform = detail::read_waveform(*wf, errors);

    if (errors.empty()) result.config = cfg;
    return result;
}

namespace detail {

inline std::uint64_t fnv1a64(const std::string& s) {
    std::uint64_t h = 1469598103934665603ULL;
    for (const unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    return h;
}

}  // namespace dysco::detail

/// Canonical re-emission of a parsed scenario (used for provenance hashing
/// and the parse/emit round-trip guarantee). The output path is not part of
/// the canonical text: it does not affect what is computed.
inline std::string emit_config(const ScenarioConfig& cfg) {
    std::ostringstream os;
    os.precision(17);
    os << "experiment = " << experiment_name(cfg.experiment) << "\n";
    os << "seed = " << cfg.params.seed << "\n";
    os << "shots = " << cfg.params.shots << "\n";
    os << "substeps = " << cfg.params.substeps << "\n";
    os << "threads = " << cfg.params.threads << "\n";
    os << "spin {\n";
    os << "  rabi_rad_s = " << cfg.params.rabi << "\n";
    os << "  detuning_rad_s = " << cfg.params.detuning << "\n";
    os << "  gamma_nv_rad_s_t = " << cfg.params.gamma_nv << "\n";
    os << "}\n";
    if (cfg.params.envelope) {
        os << "envelope {\n";
        os << "  tau_s = " << cfg.params.envelope->tau << "\n";
        os << "  exponent = " << cfg.params.envelope->exponent << "\n";
        os << "}\n";
    }
    os << "sequence {\n";
    os << "  n_units = " << cfg.n_units << "\n";
    os << "  beta_steps = " << cfg.beta_steps << "\n";
    os << "  window = " << window_name(cfg.window) << "\n";
    if (cfg.phi_grid.size() > 1) {
        os << "  phi_min_rad = " << cfg.phi_grid.front() << "\n";
        os << "  phi_max_rad = " << cfg.phi_grid.back() << "\n";
        os << "  phi_points = " << cfg.phi_grid.size() << "\n";
    } else {
        os << "  phi_rad = " << cfg.phi << "\n";
    }
    if (cfg.fs_grid.size() > 1) {
        os << "  f_s_min_hz = " << cfg.fs_grid.front() << "\n";
        os << "  f_s_max_hz = " << cfg.fs_grid.back() << "\n";
        os << "  f_s_step_hz = " << (cfg.fs_grid[1] - cfg.fs_grid[0]) << "\n";
    } else if (cfg.fs_grid.size() == 1) {
        os << "  f_s_hz = " << cfg.fs_grid.front() << "\n";
    }
    os << "}\n";
    if (!cfg.b_grid.empty()) {
        os << "field {\n";
        os << "  b_min_t = " << cfg.b_grid.front() << "\n";
        os << "  b_max_t = " << cfg.b_grid.back() << "\n";
        os << "  b_points = " << cfg.b_grid.size() << "\n";
        for (const double b : cfg.b_values) os << "  value {\n    b_t = " << b << "\n  }\n";
        os << "}\n";
    }
    if (!cfg.tau_grid.empty()) {
        os << "baseline {\n";
        os << "  kind = " << cfg.baseline << "\n";
        os << "  reps = " << cfg.xy8_reps << "\n";
        os << "  tau_min_s = " << cfg.tau_grid.front() << "\n";
        os << "  tau_max_s = " << cfg.tau_grid.back() << "\n";
        os << "  tau_step_s = "
           << (cfg.tau_grid.size() > 1 ? cfg.tau_grid[1] - cfg.tau_grid[0] : cfg.tau_grid[0])
           << "\n";
        os << "}\n";
    }
    if (!cfg.waveform.tones.empty() || cfg.waveform.bath) {
        os << "waveform {\n";
        os << "  shot_phase_mode = "
           << (cfg.waveform.shot_phase_mode == ShotPhaseMode::random_per_shot ? "random" : "fixed")
           << "\n";
        for (const Tone& t : cfg.waveform.tones) {
            os << "  tone {\n";
            os << "    amplitude_t = " << t.amplitude << "\n";
            os << "    frequency_hz = " << t.frequency << "\n";
            os << "    phase_rad = " << t.phase << "\n";
            os << "  }\n";
        }
        if (cfg.waveform.bath) {
            const BathSurrogate& b = *cfg.waveform.bath;
            os << "  bath {\n";
            os << "    larmor_center_hz = " << b.larmor_center_hz << "\n";
            os << "    larmor_spread_hz = " << b.larmor_spread_hz << "\n";
            os << "    n_oscillators = " << b.n_oscillators << "\n";
            os << "    rms_amplitude_t = " << b.rms_amplitude << "\n";
            for (const CoupledSpin& cs : b.coupled_spins) {
                os << "    coupled_spin {\n";
                os << "      offset_hz = " << cs.offset_hz << "\n";
                os << "      amplitude_t = " << cs.amplitude << "\n";
                os << "    }\n";
            }
            os << "  }\n";
        }
        os << "}\n";
    }
    return os.str();
}

/// Provenance hash of the canonical config text.
inline std::string config_hash(const ScenarioConfig& cfg) {
    char buf[20];
    std::snprintf(buf, sizeof(buf), "%016llx",
                  static_cast<unsigned long long>(detail::fnv1a64(emit_config(cfg))));
    return buf;
}

}  // namespace dysco
