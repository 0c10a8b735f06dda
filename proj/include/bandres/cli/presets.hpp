#pragma once

#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <numbers>
#include <set>
#include <string>
#include <vector>

#include "bandres/cli/config.hpp"

namespace bandres::cli {

// One preset run; `label` names the swept parameter value when a preset
// parameter was given a list.
struct LabeledConfig {
    std::string label;
    ProblemConfig config;
};

inline const std::vector<std::string>& preset_names() {
    static const std::vector<std::string> names = {"triple-well-resonance", "triple-well-bound", "pt-cubic",
                                                   "cubic-oscillator",      "unorthodox",        "double-well"};
    return names;
}

namespace detail {

inline double parse_number(const std::string& key, const std::string& text) {
    std::size_t used = 0;
    double v = 0.0;
    try {
        v = std::stod(text, &used);
    } catch (const std::exception&) {
        used = 0;
    }
    if (used == 0 || used != text.size() || !std::isfinite(v))
        throw ConfigError("override '" + key + "': '" + text + "' is not a number");
    return v;
}

inline int parse_int(const std::string& key, const std::string& text) {
    const double v = parse_number(key, text);
    if (v != std::floor(v)) throw ConfigError("override '" + key + "': '" + text + "' is not an integer");
    return static_cast<int>(v);
}

inline bool parse_bool(const std::string& key, const std::string& text) {
    if (text == "true" || text == "1") return true;
    if (text == "false" || text == "0") return false;
    throw ConfigError("override '" + key + "': '" + text + "' is not a boolean");
}

inline std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string cur;
    for (char ch : s) {
        if (ch == sep) {
            out.push_back(cur);
            cur.clear();
        } else {
            cur += ch;
        }
    }
    out.push_back(cur);
    return out;
}

using Params = std::map<std::string, std::string>;

inline double num(const Params& p, const char* key) { return parse_number(key, p.at(key)); }

inline ProblemConfig base_config(const std::string& name) {
    ProblemConfig c;
    c.name = name;
    return c;
}

// Potential x^2 - 2 g^2 x^4 + g^4 x^6.
inline std::vector<PotentialTerm> triple_well(double g) {
    return {{2, 1.0, 0.0}, {4, -2.0 * g * g, 0.0}, {6, g * g * g * g, 0.0}};
}

inline ProblemConfig triple_well_resonance(const Params& p) {
    ProblemConfig c = base_config("triple-well-resonance");
    c.wr = 1.0;
    c.wi = 15.0;
    c.parity = p.at("parity");
    c.dim = 150;
    c.potential = triple_well(num(p, "g"));
    c.scan = {0.5, 4.5, 0.1, 1e-9, 2};
    return c;
}

inline ProblemConfig triple_well_bound(const Params& p) {
    ProblemConfig c = base_config("triple-well-bound");
    c.wr = 1.0;
    c.wi = 0.0;
    c.parity = p.at("parity");
    c.dim = 150;
    c.potential = triple_well(num(p, "g"));
    c.scan = {0.5, 3.0, 0.05, 1e-9, 2};
    c.probes = {{2, 5e-5}};
    return c;
}

// -D^2 + A i x^3 + B i x. A real W is used; the complex conjugate pairs of
// the broken-symmetry region need the shift to follow the estimate.
inline ProblemConfig pt_cubic(const Params& p) {
    ProblemConfig c = base_config("pt-cubic");
    c.wr = 1.0;
    c.wi = 0.0;
    c.parity = "full";
    c.dim = 150;
    c.potential = {{1, 0.0, num(p, "B")}, {3, 0.0, num(p, "A")}};
    c.scan = {0.5, 16.0, 0.25, 1e-9, 2};
    c.iteration.rayleigh_update = true;
    return c;
}

// -1/2 D^2 + 1/2 x^2 + g e^{i phi} x^3. Im W < 0 rotates toward the decaying
// resonance (EI < 0 at phi = 0); Im W > 0 gives the conjugate solution of -phi.
inline ProblemConfig cubic_oscillator(const Params& p) {
    ProblemConfig c = base_config("cubic-oscillator");
    const double g = num(p, "g");
    const double phi = num(p, "phi");
    c.alpha = 0.5;
    c.wr = 0.5;
    c.wi = -0.5;
    c.parity = "full";
    c.dim = 150;
    c.potential = {{2, 0.5, 0.0}, {3, g * std::cos(phi), g * std::sin(phi)}};
    c.scan = {0.4, 0.6, 0.02, 1e-9, 2};
    return c;
}

// -D^2 + x^M - lambda x^N
inline ProblemConfig unorthodox(const Params& p) {
    ProblemConfig c = base_config("unorthodox");
    const int m = parse_int("M", p.at("M"));
    const int n = parse_int("N", p.at("N"));
    if (m == n) throw ConfigError("unorthodox preset: M and N must differ");
    c.wr = 1.0;
    c.wi = 1.0;
    c.parity = p.at("parity");
    c.dim = 150;
    c.potential = {{m, 1.0, 0.0}, {n, -num(p, "lambda"), 0.0}};
    c.scan = {0.5, 4.0, 0.1, 1e-9, 2};
    return c;
}

// -D^2 - x^2 + lambda^2 x^4 / 2 expanded about the right-hand minimum x = 1/lambda.
// Scan window: the 0.2-wide interval ending at the harmonic estimate of the
// lowest level, -1/(2 lambda^2) + sqrt(2), rounded to 0.1.
inline ProblemConfig double_well(const Params& p) {
    ProblemConfig c = base_config("double-well");
    const double lambda = num(p, "lambda");
    if (!(lambda > 0.0)) throw ConfigError("double-well preset: lambda must be > 0");
    c.wr = 2.0;
    c.wi = 0.0;
    c.parity = "full";
    c.dim = 80;
    c.potential = {{2, -1.0, 0.0}, {4, 0.5 * lambda * lambda, 0.0}};
    c.origin_shift = 1.0 / lambda;
    const double top = std::round((-0.5 / (lambda * lambda) + std::numbers::sqrt2) * 10.0) / 10.0;
    c.scan = {top - 0.2, top, 0.02, 1e-9, 2};
    // Grid points sit between the two members of a near-degenerate doublet,
    // so fixed-shift convergence can take thousands of steps.
    c.iteration.max_iters = 20000;
    return c;
}

struct PresetDef {
    Params defaults;
    std::function<ProblemConfig(const Params&)> build;
};

inline const std::map<std::string, PresetDef>& preset_table() {
    static const std::map<std::string, PresetDef> table = {
        {"triple-well-resonance", {{{"g", "0.2"}, {"parity", "even"}}, triple_well_resonance}},
        {"triple-well-bound", {{{"g", "0.2"}, {"parity", "even"}}, triple_well_bound}},
        {"pt-cubic", {{{"A", "1"}, {"B", "0"}}, pt_cubic}},
        {"cubic-oscillator", {{{"g", "0.1"}, {"phi", "0"}}, cubic_oscillator}},
        {"unorthodox", {{{"M", "2"}, {"N", "6"}, {"lambda", "0.02"}, {"parity", "even"}}, unorthodox}},
        {"double-well", {{{"lambda", "0.3"}}, double_well}},
    };
    return table;
}

inline const std::set<std::string>& generic_keys() {
    static const std::set<std::string> keys = {"dim",        "parity",         "alpha",          "wr",
                                               "wi",         "origin_shift",   "e_min",          "e_max",
                                               "de",         "dedupe_tol",     "min_persistence", "max_iters",
                                               "tol",        "reference_row",  "rayleigh_update"};
    return keys;
}

inline void apply_generic(ProblemConfig& c, const std::string& key, const std::string& v) {
    if (key == "dim") c.dim = parse_int(key, v);
    else if (key == "parity") c.parity = v;
    else if (key == "alpha") c.alpha = parse_number(key, v);
    else if (key == "wr") c.wr = parse_number(key, v);
    else if (key == "wi") c.wi = parse_number(key, v);
    else if (key == "origin_shift") c.origin_shift = parse_number(key, v);
    else if (key == "e_min") c.scan.e_min = parse_number(key, v);
    else if (key == "e_max") c.scan.e_max = parse_number(key, v);
    else if (key == "de") c.scan.de = parse_number(key, v);
    else if (key == "dedupe_tol") c.scan.dedupe_tol = parse_number(key, v);
    else if (key == "min_persistence") c.scan.min_persistence = parse_int(key, v);
    else if (key == "max_iters") c.iteration.max_iters = parse_int(key, v);
    else if (key == "tol") c.iteration.tol = parse_number(key, v);
    else if (key == "reference_row") c.iteration.reference_row = parse_int(key, v);
    else if (key == "rayleigh_update") c.iteration.rayleigh_update = parse_bool(key, v);
}

} // namespace detail

/// Builds the configuration(s) for a named preset. Overrides are key=value
/// strings; one key may carry a comma-separated list, producing one run per
/// value. Preset parameters (g, lambda, A, B, phi, M, N, parity) are applied
/// before generic keys (dim, wr, wi, e_min, ...).
inline std::vector<LabeledConfig> make_preset(const std::string& name, const std::vector<std::string>& overrides) {
    const auto& table = detail::preset_table();
    const auto found = table.find(name);
    if (found == table.end()) {
        std::string known;
        for (const std::string& n : preset_names()) known += (known.empty() ? "" : ", ") + n;
        throw ConfigError("unknown preset '" + name + "' (known: " + known + ")");
    }
    const detail::PresetDef& def = found->second;

    std::map<std::string, std::string> given;
    std::vector<std::string> order;
    for (const std::string& o : overrides) {
        const auto eq = o.find('=');
        if (eq == std::string::npos || eq == 0) throw ConfigError("override '" + o + "' is not key=value");
        const std::string key = o.substr(0, eq);
        if (!def.defaults.contains(key) && !detail::generic_keys().contains(key))
            throw ConfigError("unknown override key '" + key + "' for preset '" + name + "'");
        if (!given.contains(key)) order.push_back(key);
        given[key] = o.substr(eq + 1);
    }

    std::string list_key;
    for (const std::string& key : order) {
        if (given[key].find(',') == std::string::npos) continue;
        if (!list_key.empty()) throw ConfigError("only one override may list several values");
        list_key = key;
    }
    const std::vector<std::string> values =
        list_key.empty() ? std::vector<std::string>{""} : detail::split(given[list_key], ',');

    std::vector<LabeledConfig> out;
    for (const std::string& value : values) {
        std::map<std::string, std::string> run = given;
        if (!list_key.empty()) run[list_key] = value;
        detail::Params params = def.defaults;
        // parity doubles as a preset parameter and a generic key
        for (const auto& [k, v] : run)
            if (params.contains(k)) params[k] = v;
        ProblemConfig c = def.build(params);
        for (const std::string& key : order)
            if (!def.defaults.contains(key)) detail::apply_generic(c, key, run[key]);
        c.validate();
        out.push_back({list_key.empty() ? std::string{} : list_key + "=" + value, std::move(c)});
    }
    return out;
}

} // namespace bandres::cli
