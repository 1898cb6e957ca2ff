#include "synovia/config.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <random>
#include <set>
#include <sstream>

#include "synovia/errors.hpp"
#include "synovia/norms.hpp"
#include "synovia/spectral.hpp"

namespace synovia {

namespace {

const std::set<std::string> kKnownKeys = {
    "grid.dim",          "grid.n",            "grid.k",
    "exponent.shape",    "exponent.p_min",    "exponent.p_max",
    "exponent.c_mid",    "exponent.slope",    "exponent.value",
    "exponent.a",        "exponent.b",
    "stress.nu0",
    "time.dt",           "time.t_end",        "time.scheme",
    "monitor.q",         "monitor.delta",     "monitor.blowup_threshold",
    "monitor.analysis_mode",
    "forcing.type",      "forcing.mode",      "forcing.component",
    "forcing.amplitude", "forcing.rate",
    "initial.velocity",  "initial.v_amplitude", "initial.v_axis",
    "initial.v_component", "initial.v_kmax",
    "initial.concentration", "initial.c_mean", "initial.c_amplitude",
    "initial.c_axis",    "initial.c_kmax",
    "twin.eps",          "twin.mode",         "twin.component",
    "sweep.key",         "sweep.values",
    "run.seed",
};

std::string trim(const std::string& s) {
    std::size_t a = s.find_first_not_of(" \t\r");
    std::size_t b = s.find_last_not_of(" \t\r");
    return a == std::string::npos ? std::string{} : s.substr(a, b - a + 1);
}

std::string lower(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return s;
}

std::string env_name(const std::string& dotted) {
    std::string out = "SYNOVIA_";
    for (char c : dotted)
        out += (c == '.') ? '_' : static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
    return out;
}

class KeyMap {
  public:
    explicit KeyMap(std::map<std::string, std::string> kv) : kv_(std::move(kv)) {
        for (const std::string& key : kKnownKeys) {
            if (const char* env = std::getenv(env_name(key).c_str())) kv_[key] = env;
        }
    }

    bool has(const std::string& key) const { return kv_.count(key) > 0; }

    std::string get_str(const std::string& key, const std::string& def) {
        touch(key);
        auto it = kv_.find(key);
        return it == kv_.end() ? def : it->second;
    }

    double get_num(const std::string& key, double def) {
        touch(key);
        auto it = kv_.find(key);
        if (it == kv_.end()) return def;
        char* end = nullptr;
        const double v = std::strtod(it->second.c_str(), &end);
        if (end == it->second.c_str() || *end != '\0')
            throw ConfigError("key '" + key + "': expected a number, got '" + it->second + "'");
        return v;
    }

    double require_num(const std::string& key) {
        if (!has(key)) throw ConfigError("missing required key '" + key + "'");
        return get_num(key, 0.0);
    }

    long get_int(const std::string& key, long def) {
        const double v = get_num(key, static_cast<double>(def));
        if (v != std::floor(v))
            throw ConfigError("key '" + key + "': expected an integer");
        return static_cast<long>(v);
    }

    bool get_bool(const std::string& key, bool def) {
        const std::string s = lower(get_str(key, def ? "true" : "false"));
        if (s == "true" || s == "1" || s == "yes") return true;
        if (s == "false" || s == "0" || s == "no") return false;
        throw ConfigError("key '" + key + "': expected a boolean");
    }

    std::array<int, 3> get_mode(const std::string& key, std::array<int, 3> def) {
        touch(key);
        auto it = kv_.find(key);
        if (it == kv_.end()) return def;
        std::stringstream ss(it->second);
        std::array<int, 3> k{0, 0, 0};
        int count = 0;
        int val;
        while (ss >> val && count < 3) k[static_cast<std::size_t>(count++)] = val;
        if (count == 0) throw ConfigError("key '" + key + "': expected 1-3 integers");
        return k;
    }

    std::vector<double> get_list(const std::string& key) {
        touch(key);
        auto it = kv_.find(key);
        std::vector<double> out;
        if (it == kv_.end()) return out;
        std::stringstream ss(it->second);
        std::string tok;
        while (ss >> tok) {
            // tolerate comma separators
            if (!tok.empty() && tok.back() == ',') tok.pop_back();
            if (tok.empty()) continue;
            out.push_back(std::strtod(tok.c_str(), nullptr));
        }
        return out;
    }

    /// Raw resolved view (post env override).
    const std::map<std::string, std::string>& raw() const { return kv_; }

  private:
    void touch(const std::string& key) {
        if (!kKnownKeys.count(key)) throw ConfigError("internal: unknown key '" + key + "'");
    }
    std::map<std::string, std::string> kv_;
};

std::map<std::string, std::string> tokenize(const std::string& text, const std::string& origin) {
    std::map<std::string, std::string> kv;
    std::istringstream in(text);
    std::string line, section;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const std::size_t comment = line.find_first_of("#;");
        if (comment != std::string::npos) line = line.substr(0, comment);
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']')
                throw ConfigError(origin + ":" + std::to_string(lineno) + ": malformed section");
            section = lower(trim(line.substr(1, line.size() - 2)));
            continue;
        }
        const std::size_t eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError(origin + ":" + std::to_string(lineno) + ": expected key = value");
        const std::string key = lower(trim(line.substr(0, eq)));
        const std::string value = trim(line.substr(eq + 1));
        if (section.empty())
            throw ConfigError(origin + ":" + std::to_string(lineno) + ": key outside any section");
        const std::string dotted = section + "." + key;
        if (!kKnownKeys.count(dotted))
            throw ConfigError(origin + ":" + std::to_string(lineno) + ": unknown key '" + dotted +
                              "'");
        if (kv.count(dotted))
            throw ConfigError(origin + ":" + std::to_string(lineno) + ": duplicate key '" +
                              dotted + "'");
        kv[dotted] = value;
    }
    return kv;
}

std::string fmt_value(double v) {
    std::ostringstream os;
    os.precision(17);
    os << v;
    return os.str();
}

ExperimentSpec build_spec(KeyMap& keys, const std::string& origin) {
    ExperimentSpec spec;

    const int dim = static_cast<int>(keys.get_int("grid.dim", 0));
    const int n = static_cast<int>(keys.get_int("grid.n", 0));
    const int K = static_cast<int>(keys.get_int("grid.k", 0));
    try {
        spec.solver.grid = make_grid(dim, n, K);
    } catch (const InvalidGrid& e) {
        throw ConfigError(origin + ": [grid] " + e.what());
    }

    // exponent
    const std::string shape = lower(keys.get_str("exponent.shape", "logistic"));
    try {
        if (shape == "constant") {
            spec.solver.stress.exponent = ExponentFn::constant(keys.require_num("exponent.value"));
        } else if (shape == "logistic") {
            spec.solver.stress.exponent = ExponentFn::logistic(
                keys.require_num("exponent.p_min"), keys.require_num("exponent.p_max"),
                keys.get_num("exponent.c_mid", 0.5), keys.get_num("exponent.slope", 4.0));
        } else if (shape == "affine") {
            spec.solver.stress.exponent = ExponentFn::affine(
                keys.require_num("exponent.a"), keys.require_num("exponent.b"),
                keys.require_num("exponent.p_min"), keys.require_num("exponent.p_max"));
        } else {
            throw ConfigError("unknown exponent shape '" + shape + "'");
        }
    } catch (const InvalidParameter& e) {
        throw ConfigError(origin + ": [exponent] " + e.what());
    }

    spec.solver.stress.nu0 = keys.get_num("stress.nu0", 1.0);
    spec.solver.dt = keys.get_num("time.dt", 1e-4);
    spec.solver.t_end = keys.require_num("time.t_end");

    const std::string scheme = lower(keys.get_str("time.scheme", "imex_euler"));
    if (scheme == "imex_euler") spec.solver.scheme = Scheme::ImexEuler;
    else if (scheme == "imex_rk2") spec.solver.scheme = Scheme::ImexRk2;
    else throw ConfigError(origin + ": unknown scheme '" + scheme + "'");

    spec.solver.q = keys.get_num("monitor.q", dim == 3 ? 4.0 : 3.0);
    spec.solver.delta = keys.get_num("monitor.delta", 0.05);
    spec.solver.blowup_threshold = keys.get_num("monitor.blowup_threshold", 1e8);
    spec.solver.analysis_mode = keys.get_bool("monitor.analysis_mode", false);

    // forcing
    const std::string ftype = lower(keys.get_str("forcing.type", "zero"));
    const auto fmode = keys.get_mode("forcing.mode", {1, 0, 0});
    const int fcomp = static_cast<int>(keys.get_int("forcing.component", 0));
    const double famp = keys.get_num("forcing.amplitude", 0.0);
    const double frate = keys.get_num("forcing.rate", 0.0);
    if (ftype == "zero") spec.solver.forcing = ForcingSpec::zero();
    else if (ftype == "single_mode")
        spec.solver.forcing = ForcingSpec::single_mode(fmode, famp, fcomp);
    else if (ftype == "time_ramp")
        spec.solver.forcing = ForcingSpec::time_ramp(fmode, famp, frate, fcomp);
    else throw ConfigError(origin + ": unknown forcing type '" + ftype + "'");

    // initial data
    const std::string vinit = lower(keys.get_str("initial.velocity", "zero"));
    if (vinit == "zero") spec.velocity_init = ExperimentSpec::VelocityInit::Zero;
    else if (vinit == "shear_mode") spec.velocity_init = ExperimentSpec::VelocityInit::ShearMode;
    else if (vinit == "taylor_green")
        spec.velocity_init = ExperimentSpec::VelocityInit::TaylorGreen;
    else if (vinit == "random_smooth")
        spec.velocity_init = ExperimentSpec::VelocityInit::RandomSmooth;
    else throw ConfigError(origin + ": unknown initial velocity '" + vinit + "'");
    spec.v_amplitude = keys.get_num("initial.v_amplitude", 1.0);
    spec.v_axis = static_cast<int>(keys.get_int("initial.v_axis", 1));
    spec.v_component = static_cast<int>(keys.get_int("initial.v_component", 0));
    spec.v_kmax = static_cast<int>(keys.get_int("initial.v_kmax", 3));

    const std::string cinit = lower(keys.get_str("initial.concentration", "constant"));
    if (cinit == "constant") spec.concentration_init = ExperimentSpec::ConcentrationInit::Constant;
    else if (cinit == "cosine") spec.concentration_init = ExperimentSpec::ConcentrationInit::Cosine;
    else if (cinit == "random_smooth")
        spec.concentration_init = ExperimentSpec::ConcentrationInit::RandomSmooth;
    else throw ConfigError(origin + ": unknown initial concentration '" + cinit + "'");
    spec.c_mean = keys.get_num("initial.c_mean", 1.0);
    spec.c_amplitude = keys.get_num("initial.c_amplitude", 0.0);
    spec.c_axis = static_cast<int>(keys.get_int("initial.c_axis", 0));
    spec.c_kmax = static_cast<int>(keys.get_int("initial.c_kmax", 3));

    spec.twin_eps = keys.get_num("twin.eps", 1e-5);
    spec.twin_mode = keys.get_mode("twin.mode", {0, 1, 0});
    spec.twin_component = static_cast<int>(keys.get_int("twin.component", 0));

    spec.sweep_key = lower(keys.get_str("sweep.key", ""));
    spec.sweep_values = keys.get_list("sweep.values");

    spec.seed = static_cast<std::uint64_t>(keys.get_int("run.seed", 1));

    // cross-field checks
    if (spec.v_axis < 0 || spec.v_axis >= dim || spec.v_component < 0 ||
        spec.v_component >= dim)
        throw ConfigError(origin + ": initial velocity axis/component out of range for dim");
    if (spec.velocity_init == ExperimentSpec::VelocityInit::ShearMode &&
        spec.v_axis == spec.v_component)
        throw ConfigError(origin + ": shear mode needs axis != component to stay solenoidal");
    if (spec.c_axis < 0 || spec.c_axis >= dim)
        throw ConfigError(origin + ": initial concentration axis out of range");
    if (spec.v_kmax < 1 || spec.v_kmax > spec.solver.grid.K || spec.c_kmax < 1 ||
        spec.c_kmax > spec.solver.grid.K)
        throw ConfigError(origin + ": band limits must satisfy 1 <= kmax <= K");

    try {
        spec.warning = validate_config(spec.solver);
    } catch (const Error& e) {
        throw ConfigError(origin + ": " + e.what());
    }

    // canonical resolved view for hashing
    for (const auto& [k, v] : keys.raw()) spec.resolved[k] = v;
    spec.resolved["grid.dim"] = std::to_string(dim);
    spec.resolved["grid.n"] = std::to_string(n);
    spec.resolved["grid.k"] = std::to_string(K);
    spec.resolved["time.dt"] = fmt_value(spec.solver.dt);
    spec.resolved["time.t_end"] = fmt_value(spec.solver.t_end);
    spec.resolved["time.scheme"] = scheme;
    spec.resolved["monitor.q"] = fmt_value(spec.solver.q);
    spec.resolved["monitor.delta"] = fmt_value(spec.solver.delta);
    spec.resolved["monitor.blowup_threshold"] = fmt_value(spec.solver.blowup_threshold);
    spec.resolved["monitor.analysis_mode"] = spec.solver.analysis_mode ? "true" : "false";
    spec.resolved["stress.nu0"] = fmt_value(spec.solver.stress.nu0);
    spec.resolved["exponent.shape"] = shape;
    spec.resolved["forcing.type"] = ftype;
    spec.resolved["initial.velocity"] = vinit;
    spec.resolved["initial.concentration"] = cinit;
    spec.resolved["run.seed"] = std::to_string(spec.seed);
    return spec;
}

}  // namespace

ExperimentSpec parse_config_text(const std::string& text, const std::string& origin) {
    KeyMap keys(tokenize(text, origin));
    return build_spec(keys, origin);
}

ExperimentSpec parse_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_config_text(ss.str(), path);
}

std::string canonical_config(const ExperimentSpec& spec) {
    std::string out;
    for (const auto& [k, v] : spec.resolved) {
        out += k;
        out += '=';
        out += v;
        out += '\n';
    }
    return out;
}

std::uint64_t config_hash(const ExperimentSpec& spec) {
    // FNV-1a over the canonical text
    std::uint64_t h = 1469598103934665603ULL;
    for (char c : canonical_config(spec)) {
        h ^= static_cast<std::uint64_t>(static_cast<unsigned char>(c));
        h *= 1099511628211ULL;
    }
    return h;
}

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;

VectorField band_limited_noise(const GridSpec& g, int kmax, std::uint64_t seed) {
    VectorField v(g);
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(-1.0, 1.0);
    auto& vals = v.mutable_values();
    for (auto& x : vals) x = unit(rng);
    return truncate(leray_project(v), kmax);
}

}  // namespace

VectorField build_initial_velocity(const ExperimentSpec& spec) {
    const GridSpec& g = spec.solver.grid;
    const double A = spec.v_amplitude;
    switch (spec.velocity_init) {
        case ExperimentSpec::VelocityInit::Zero:
            return VectorField(g);
        case ExperimentSpec::VelocityInit::ShearMode: {
            const int axis = spec.v_axis;
            const int comp = spec.v_component;
            return sample_vector(g, [&](const Point& x) {
                std::array<double, 3> out{0.0, 0.0, 0.0};
                out[static_cast<std::size_t>(comp)] =
                    A * std::sin(kTwoPi * x[static_cast<std::size_t>(axis)]);
                return out;
            });
        }
        case ExperimentSpec::VelocityInit::TaylorGreen: {
            if (g.dim == 2) {
                return sample_vector(g, [&](const Point& x) {
                    return std::array<double, 3>{
                        A * std::sin(kTwoPi * x[0]) * std::cos(kTwoPi * x[1]),
                        -A * std::cos(kTwoPi * x[0]) * std::sin(kTwoPi * x[1]), 0.0};
                });
            }
            return sample_vector(g, [&](const Point& x) {
                return std::array<double, 3>{
                    A * std::sin(kTwoPi * x[0]) * std::cos(kTwoPi * x[1]) * std::cos(kTwoPi * x[2]),
                    -A * std::cos(kTwoPi * x[0]) * std::sin(kTwoPi * x[1]) * std::cos(kTwoPi * x[2]),
                    0.0};
            });
        }
        case ExperimentSpec::VelocityInit::RandomSmooth: {
            VectorField v = band_limited_noise(g, spec.v_kmax, spec.seed);
            const double n2 = lp_norm(v, 2.0);
            if (n2 > 0.0) {
                auto& vals = v.mutable_values();
                for (auto& x : vals) x *= A / n2;
            }
            return v;
        }
    }
    return VectorField(g);
}

ScalarField build_initial_concentration(const ExperimentSpec& spec) {
    const GridSpec& g = spec.solver.grid;
    switch (spec.concentration_init) {
        case ExperimentSpec::ConcentrationInit::Constant:
            return sample_scalar(g, [&](const Point&) { return spec.c_mean; });
        case ExperimentSpec::ConcentrationInit::Cosine:
            return sample_scalar(g, [&](const Point& x) {
                return spec.c_mean +
                       spec.c_amplitude * std::cos(kTwoPi * x[static_cast<std::size_t>(spec.c_axis)]);
            });
        case ExperimentSpec::ConcentrationInit::RandomSmooth: {
            ScalarField c(g);
            std::mt19937_64 rng(spec.seed ^ 0x9e3779b97f4a7c15ULL);
            std::uniform_real_distribution<double> unit(-1.0, 1.0);
            auto& vals = c.mutable_values();
            for (auto& x : vals) x = unit(rng);
            c = truncate(c, spec.c_kmax);
            const double n2 = lp_norm(c, 2.0);
            auto& cv = c.mutable_values();
            const double mean = c.mean();
            for (auto& x : cv) {
                x = (n2 > 0.0 ? (x - mean) * (spec.c_amplitude / n2) : 0.0) + spec.c_mean;
            }
            return c;
        }
    }
    return ScalarField(g);
}

VectorField build_twin_perturbation(const ExperimentSpec& spec) {
    const GridSpec& g = spec.solver.grid;
    const auto k = spec.twin_mode;
    const int comp = spec.twin_component;
    if (comp < 0 || comp >= g.dim)
        throw InvalidParameter("twin perturbation component out of range");
    const int kmax = std::max({std::abs(k[0]), std::abs(k[1]), std::abs(k[2])});
    if (kmax == 0 || kmax > g.K)
        throw InvalidParameter("twin perturbation mode must satisfy 1 <= |k|_inf <= K");
    VectorField w = sample_vector(g, [&](const Point& x) {
        std::array<double, 3> out{0.0, 0.0, 0.0};
        const double phase = kTwoPi * (k[0] * x[0] + k[1] * x[1] + k[2] * x[2]);
        out[static_cast<std::size_t>(comp)] = std::sin(phase);
        return out;
    });
    w = leray_project(w);
    const double n2 = lp_norm(w, 2.0);
    if (n2 == 0.0) throw InvalidParameter("twin perturbation mode projects to zero");
    auto& vals = w.mutable_values();
    for (auto& x : vals) x /= n2;
    return w;
}

ExperimentSpec apply_sweep_value(const ExperimentSpec& spec, double value) {
    ExperimentSpec out = spec;
    out.sweep_key.clear();
    out.sweep_values.clear();
    if (spec.sweep_key == "grid.k") {
        out.solver.grid = make_grid(spec.solver.grid.dim, spec.solver.grid.n,
                                    static_cast<int>(value));
        out.resolved["grid.k"] = std::to_string(static_cast<int>(value));
    } else if (spec.sweep_key == "grid.n") {
        out.solver.grid = make_grid(spec.solver.grid.dim, static_cast<int>(value),
                                    spec.solver.grid.K);
        out.resolved["grid.n"] = std::to_string(static_cast<int>(value));
    } else if (spec.sweep_key == "twin.eps") {
        out.twin_eps = value;
        out.resolved["twin.eps"] = fmt_value(value);
    } else if (spec.sweep_key == "time.dt") {
        out.solver.dt = value;
        out.resolved["time.dt"] = fmt_value(value);
    } else {
        throw ConfigError("unsupported sweep key '" + spec.sweep_key + "'");
    }
    validate_config(out.solver);
    return out;
}

}  // namespace synovia
