#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <fstream>
#include <initializer_list>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "bandres/hamiltonian.hpp"
#include "bandres/observables.hpp"
#include "bandres/oscillator_basis.hpp"
#include "bandres/resonance_engine.hpp"

namespace bandres::cli {

// Any problem with a configuration: unreadable file, bad syntax, unknown
// key, or a value violating an invariant. Maps to exit code 2.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct PotentialTerm {
    int power = 0;
    double re = 0.0;
    double im = 0.0;
    bool operator==(const PotentialTerm&) const = default;
};

struct ScanSettings {
    double e_min = 0.0;
    double e_max = 1.0;
    double de = 0.1;
    double dedupe_tol = 1e-9;
    int min_persistence = 2;
    bool operator==(const ScanSettings&) const = default;
};

struct IterationSettings {
    int max_iters = 200;
    double tol = 1e-13;
    int reference_row = 1;
    bool rayleigh_update = false;
    bool operator==(const IterationSettings&) const = default;
};

struct ProbeSettings {
    int power = 2;
    double delta = 5e-5;
    bool operator==(const ProbeSettings&) const = default;
};

struct ProblemConfig {
    std::string name;
    double alpha = 1.0;
    double wr = 1.0;
    double wi = 0.0;
    std::string parity = "full";
    int dim = 1;
    std::vector<PotentialTerm> potential; // in the original coordinate
    double origin_shift = 0.0;            // basis centred at x = origin_shift
    ScanSettings scan;
    IterationSettings iteration;
    std::vector<ProbeSettings> probes;

    bool operator==(const ProblemConfig&) const = default;

    BasisSpec basis() const { return BasisSpec{alpha, Complex(wr, wi), parity_from_string(parity), dim}; }

    PolynomialPotential polynomial() const {
        PolynomialPotential p;
        for (const PotentialTerm& t : potential) p.add_term(t.power, Complex(t.re, t.im));
        return origin_shift == 0.0 ? p : shift_origin(p, origin_shift);
    }

    ScanConfig scan_config() const {
        ScanConfig c;
        c.e_min = scan.e_min;
        c.e_max = scan.e_max;
        c.de = scan.de;
        c.dedupe_tol = scan.dedupe_tol;
        c.min_persistence = scan.min_persistence;
        c.iteration.max_iters = iteration.max_iters;
        c.iteration.tol = iteration.tol;
        c.iteration.reference_row = iteration.reference_row;
        c.iteration.rayleigh_update = iteration.rayleigh_update;
        return c;
    }

    // Throws ConfigError on any violated invariant.
    void validate() const {
        try {
            basis().validate();
            if (potential.empty()) throw std::invalid_argument("potential has no terms");
            std::set<int> seen;
            for (const PotentialTerm& t : potential) {
                if (t.power < 0 || t.power > kMaxDegree)
                    throw std::invalid_argument("potential power " + std::to_string(t.power) +
                                                " outside [0, " + std::to_string(kMaxDegree) + "]");
                if (!seen.insert(t.power).second)
                    throw std::invalid_argument("potential power " + std::to_string(t.power) + " listed twice");
                if (!std::isfinite(t.re) || !std::isfinite(t.im))
                    throw std::invalid_argument("potential coefficients must be finite");
            }
            if (!std::isfinite(origin_shift)) throw std::invalid_argument("origin_shift must be finite");
            ScanConfig sc = scan_config();
            sc.validate();
            sc.iteration.validate(dim);
            for (const ProbeSettings& p : probes) ShiftProbe{p.power, p.delta}.validate();
            const PolynomialPotential poly = polynomial();
            if (poly.degree() < 1) throw std::invalid_argument("potential degree must be >= 1");
            if (parity != "full" && poly.has_odd_powers())
                throw std::invalid_argument(parity + " parity requires a potential with even powers only");
            for (const ProbeSettings& p : probes)
                if (parity != "full" && p.power % 2 == 1)
                    throw std::invalid_argument("odd probe power " + std::to_string(p.power) + " needs parity full");
        } catch (const std::invalid_argument& ex) {
            throw ConfigError(std::string("invalid configuration: ") + ex.what());
        }
    }
};

namespace detail {

using nlohmann::json;

inline void reject_unknown(const json& obj, const std::string& where, std::initializer_list<const char*> allowed) {
    if (!obj.is_object()) throw ConfigError(where + ": expected an object");
    for (auto it = obj.begin(); it != obj.end(); ++it) {
        bool ok = false;
        for (const char* k : allowed) ok = ok || it.key() == k;
        if (!ok) throw ConfigError("unknown key '" + (where.empty() ? "" : where + ".") + it.key() + "'");
    }
}

template <typename T>
T read(const json& obj, const char* key, const std::string& where) {
    try {
        return obj.at(key).get<T>();
    } catch (const json::exception&) {
        throw ConfigError("missing or ill-typed key '" + (where.empty() ? "" : where + ".") + key + "'");
    }
}

template <typename T>
void read_opt(const json& obj, const char* key, const std::string& where, T& out) {
    if (obj.contains(key)) out = read<T>(obj, key, where);
}

} // namespace detail

/// Parses the JSON-with-comments config format. Unknown keys are rejected.
inline ProblemConfig parse_config(const std::string& text) {
    using nlohmann::json;
    json j;
    try {
        j = json::parse(text, nullptr, true, /*ignore_comments=*/true);
    } catch (const json::parse_error& ex) {
        throw ConfigError(std::string("config syntax error: ") + ex.what());
    }
    detail::reject_unknown(j, "", {"name", "alpha", "w", "parity", "dim", "potential", "origin_shift", "scan",
                                   "iteration", "probes"});
    ProblemConfig c;
    detail::read_opt(j, "name", "", c.name);
    detail::read_opt(j, "alpha", "", c.alpha);
    const auto w = detail::read<std::vector<double>>(j, "w", "");
    if (w.size() != 2) throw ConfigError("key 'w' must be [re, im]");
    c.wr = w[0];
    c.wi = w[1];
    c.parity = detail::read<std::string>(j, "parity", "");
    c.dim = detail::read<int>(j, "dim", "");
    detail::read_opt(j, "origin_shift", "", c.origin_shift);

    if (!j.contains("potential")) throw ConfigError("missing key 'potential'");
    const json& pot = j.at("potential");
    if (!pot.is_array()) throw ConfigError("key 'potential' must be a list of terms");
    for (const json& t : pot) {
        detail::reject_unknown(t, "potential", {"power", "re", "im"});
        PotentialTerm term;
        term.power = detail::read<int>(t, "power", "potential");
        detail::read_opt(t, "re", "potential", term.re);
        detail::read_opt(t, "im", "potential", term.im);
        c.potential.push_back(term);
    }

    if (!j.contains("scan")) throw ConfigError("missing key 'scan'");
    const json& s = j.at("scan");
    detail::reject_unknown(s, "scan", {"e_min", "e_max", "de", "dedupe_tol", "min_persistence"});
    c.scan.e_min = detail::read<double>(s, "e_min", "scan");
    c.scan.e_max = detail::read<double>(s, "e_max", "scan");
    c.scan.de = detail::read<double>(s, "de", "scan");
    detail::read_opt(s, "dedupe_tol", "scan", c.scan.dedupe_tol);
    detail::read_opt(s, "min_persistence", "scan", c.scan.min_persistence);

    if (j.contains("iteration")) {
        const json& it = j.at("iteration");
        detail::reject_unknown(it, "iteration", {"max_iters", "tol", "reference_row", "rayleigh_update"});
        detail::read_opt(it, "max_iters", "iteration", c.iteration.max_iters);
        detail::read_opt(it, "tol", "iteration", c.iteration.tol);
        detail::read_opt(it, "reference_row", "iteration", c.iteration.reference_row);
        detail::read_opt(it, "rayleigh_update", "iteration", c.iteration.rayleigh_update);
    }
    if (j.contains("probes")) {
        const json& probes = j.at("probes");
        if (!probes.is_array()) throw ConfigError("key 'probes' must be a list");
        for (const json& p : probes) {
            detail::reject_unknown(p, "probes", {"power", "delta"});
            ProbeSettings ps;
            ps.power = detail::read<int>(p, "power", "probes");
            detail::read_opt(p, "delta", "probes", ps.delta);
            c.probes.push_back(ps);
        }
    }
    c.validate();
    return c;
}

inline ProblemConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot read config file '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str());
}

/// Canonical serialization: every key written, doubles in round-trip form.
inline std::string emit_config(const ProblemConfig& c) {
    using nlohmann::ordered_json;
    ordered_json j;
    j["name"] = c.name;
    j["alpha"] = c.alpha;
    j["w"] = {c.wr, c.wi};
    j["parity"] = c.parity;
    j["dim"] = c.dim;
    j["origin_shift"] = c.origin_shift;
    ordered_json pot = ordered_json::array();
    for (const PotentialTerm& t : c.potential) {
        ordered_json term;
        term["power"] = t.power;
        term["re"] = t.re;
        term["im"] = t.im;
        pot.push_back(term);
    }
    j["potential"] = pot;
    ordered_json scan;
    scan["e_min"] = c.scan.e_min;
    scan["e_max"] = c.scan.e_max;
    scan["de"] = c.scan.de;
    scan["dedupe_tol"] = c.scan.dedupe_tol;
    scan["min_persistence"] = c.scan.min_persistence;
    j["scan"] = scan;
    ordered_json it;
    it["max_iters"] = c.iteration.max_iters;
    it["tol"] = c.iteration.tol;
    it["reference_row"] = c.iteration.reference_row;
    it["rayleigh_update"] = c.iteration.rayleigh_update;
    j["iteration"] = it;
    ordered_json probes = ordered_json::array();
    for (const ProbeSettings& p : c.probes) {
        ordered_json pj;
        pj["power"] = p.power;
        pj["delta"] = p.delta;
        probes.push_back(pj);
    }
    j["probes"] = probes;
    return j.dump(2) + "\n";
}

// FNV-1a over the canonical serialization.
inline std::string config_hash(const ProblemConfig& c) {
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char ch : emit_config(c)) {
        h ^= ch;
        h *= 1099511628211ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

} // namespace bandres::cli
