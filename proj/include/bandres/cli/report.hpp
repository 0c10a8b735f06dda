#pragma once

#include <chrono>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include "bandres/cli/config.hpp"
#include "bandres/cli/presets.hpp"
#include "bandres/observables.hpp"
#include "bandres/resonance_engine.hpp"

namespace bandres::cli {

struct ProbeValue {
    int power = 0;
    Complex value{std::numeric_limits<double>::quiet_NaN(), 0.0};
    std::string error; // empty on success
};

struct ReportRecord {
    Complex energy;
    int iterations = 0;
    double residual = 0.0;
    int persistence = 0;
    int reference_row = 1;
    std::vector<ProbeValue> probes;
};

// Eigenvalues retained by one scan, plus the parameters that produced them.
struct ReportCase {
    std::string label;
    std::string config_hash;
    int dim = 0;
    Complex w;
    std::string parity;
    int steps = 0;
    int failed_steps = 0;
    std::vector<ReportRecord> records;
};

struct Report {
    std::string name;
    std::string timestamp;
    std::vector<ReportCase> cases;

    std::vector<int> probe_powers() const {
        std::vector<int> powers;
        for (const ReportCase& c : cases)
            for (const ReportRecord& r : c.records)
                for (const ProbeValue& p : r.probes)
                    if (std::find(powers.begin(), powers.end(), p.power) == powers.end()) powers.push_back(p.power);
        return powers;
    }

    // Every grid point of some scan failed: nothing numerical came out.
    bool numerically_failed() const {
        for (const ReportCase& c : cases)
            if (c.steps > 0 && c.failed_steps == c.steps) return true;
        return false;
    }
};

inline std::string utc_timestamp() {
    const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

namespace detail {

inline ReportCase make_case(const std::string& label, const ProblemConfig& cfg, const ScanReport& scan) {
    ReportCase rc;
    rc.label = label;
    rc.config_hash = config_hash(cfg);
    rc.dim = cfg.dim;
    rc.w = Complex(cfg.wr, cfg.wi);
    rc.parity = cfg.parity;
    rc.steps = static_cast<int>(scan.steps.size());
    for (const ScanStep& s : scan.steps)
        if (!s.result || !s.result->converged) ++rc.failed_steps;

    const BasisSpec spec = cfg.basis();
    const PolynomialPotential pot = cfg.polynomial();
    for (const ScanEigenvalue& ev : scan.eigenvalues) {
        ReportRecord rec{ev.result.energy, ev.result.iterations, ev.result.residual, ev.persistence,
                         ev.result.reference_row, {}};
        for (const ProbeSettings& p : cfg.probes) {
            ProbeValue pv;
            pv.power = p.power;
            IterationConfig it = cfg.scan_config().iteration;
            it.e0 = ev.result.energy;
            try {
                pv.value = expectation_by_shift(spec, pot, ShiftProbe{p.power, p.delta}, it);
            } catch (const std::runtime_error& ex) {
                pv.error = ex.what();
            }
            rec.probes.push_back(pv);
        }
        rc.records.push_back(std::move(rec));
    }
    return rc;
}

} // namespace detail

/// assemble -> scan -> probes for each configuration.
inline Report run_configs(const std::vector<LabeledConfig>& configs, bool parallel = false) {
    Report report;
    report.timestamp = utc_timestamp();
    for (const LabeledConfig& lc : configs) {
        if (report.name.empty()) report.name = lc.config.name;
        ScanConfig sc = lc.config.scan_config();
        sc.parallel = parallel;
        const ScanReport scan = bandres::scan(assemble(lc.config.basis(), lc.config.polynomial()), sc);
        report.cases.push_back(detail::make_case(lc.label, lc.config, scan));
    }
    return report;
}

inline Report run_config(const ProblemConfig& cfg, bool parallel = false) {
    return run_configs({LabeledConfig{"", cfg}}, parallel);
}

/// One case per dimension, labelled ND=<dim>.
inline Report run_sweep(const ProblemConfig& cfg, const std::vector<int>& dims, bool parallel = false) {
    ScanConfig sc = cfg.scan_config();
    sc.parallel = parallel;
    for (int d : dims) {
        ProblemConfig probe = cfg;
        probe.dim = d;
        probe.validate();
    }
    const std::vector<SweepEntry> sweep = dimension_sweep(cfg.basis(), cfg.polynomial(), dims, sc);
    Report report;
    report.name = cfg.name;
    report.timestamp = utc_timestamp();
    for (const SweepEntry& e : sweep) {
        ProblemConfig at = cfg;
        at.dim = e.dim;
        report.cases.push_back(detail::make_case("ND=" + std::to_string(e.dim), at, e.report));
    }
    return report;
}

namespace detail {

inline std::string fmt17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

inline std::string json_string(const std::string& s) {
    std::string out = "\"";
    for (char ch : s) {
        if (ch == '"' || ch == '\\') out += '\\';
        out += ch;
    }
    return out + "\"";
}

// JSON has no NaN; failed probes serialize as null.
inline std::string json_number(double v) { return std::isfinite(v) ? fmt17(v) : "null"; }

inline bool labelled(const Report& r) {
    return r.cases.size() > 1 || (r.cases.size() == 1 && !r.cases.front().label.empty());
}

inline std::string emit_csv(const Report& r) {
    const std::vector<int> powers = r.probe_powers();
    const bool with_case = labelled(r);
    std::ostringstream out;
    if (with_case) out << "case,";
    out << "er,ei,iterations,residual,persistence,reference_row";
    for (int p : powers) out << ",x" << p << "_re,x" << p << "_im";
    out << "\n";
    for (const ReportCase& c : r.cases) {
        for (const ReportRecord& rec : c.records) {
            if (with_case) out << c.label << ",";
            out << fmt17(rec.energy.real()) << "," << fmt17(rec.energy.imag()) << "," << rec.iterations << ","
                << fmt17(rec.residual) << "," << rec.persistence << "," << rec.reference_row;
            for (int p : powers) {
                Complex v{std::numeric_limits<double>::quiet_NaN(), std::numeric_limits<double>::quiet_NaN()};
                for (const ProbeValue& pv : rec.probes)
                    if (pv.power == p && pv.error.empty()) v = pv.value;
                out << "," << fmt17(v.real()) << "," << fmt17(v.imag());
            }
            out << "\n";
        }
    }
    return out.str();
}

inline std::string emit_json(const Report& r) {
    std::ostringstream out;
    out << "{\n";
    out << "  \"name\": " << json_string(r.name) << ",\n";
    out << "  \"timestamp\": " << json_string(r.timestamp) << ",\n";
    out << "  \"cases\": [";
    for (std::size_t i = 0; i < r.cases.size(); ++i) {
        const ReportCase& c = r.cases[i];
        out << (i ? "," : "") << "\n    {\n";
        out << "      \"label\": " << json_string(c.label) << ",\n";
        out << "      \"provenance\": {\"config_hash\": " << json_string(c.config_hash)
            << ", \"dimension\": " << c.dim << ", \"parity\": " << json_string(c.parity) << ", \"w\": ["
            << fmt17(c.w.real()) << ", " << fmt17(c.w.imag()) << "]},\n";
        out << "      \"steps\": " << c.steps << ",\n";
        out << "      \"failed_steps\": " << c.failed_steps << ",\n";
        out << "      \"records\": [";
        for (std::size_t k = 0; k < c.records.size(); ++k) {
            const ReportRecord& rec = c.records[k];
            out << (k ? "," : "") << "\n        {\"er\": " << fmt17(rec.energy.real())
                << ", \"ei\": " << fmt17(rec.energy.imag()) << ", \"iterations\": " << rec.iterations
                << ", \"residual\": " << fmt17(rec.residual) << ", \"persistence\": " << rec.persistence
                << ", \"reference_row\": " << rec.reference_row;
            if (!rec.probes.empty()) {
                out << ", \"expectations\": [";
                for (std::size_t p = 0; p < rec.probes.size(); ++p) {
                    const ProbeValue& pv = rec.probes[p];
                    out << (p ? ", " : "") << "{\"power\": " << pv.power << ", \"re\": " << json_number(pv.value.real())
                        << ", \"im\": " << json_number(pv.value.imag());
                    if (!pv.error.empty()) out << ", \"error\": " << json_string(pv.error);
                    out << "}";
                }
                out << "]";
            }
            out << "}";
        }
        out << (c.records.empty() ? "]\n" : "\n      ]\n") << "    }";
    }
    out << (r.cases.empty() ? "]\n" : "\n  ]\n") << "}\n";
    return out.str();
}

inline std::string emit_text(const Report& r) {
    const std::vector<int> powers = r.probe_powers();
    std::ostringstream out;
    char line[256];
    out << "# " << (r.name.empty() ? "report" : r.name) << "\n";
    out << "# timestamp " << r.timestamp << "\n";
    std::snprintf(line, sizeof line, "%-12s %24s %24s %6s %10s %7s", "case", "ER", "EI", "iters", "residual",
                  "persist");
    out << line;
    for (int p : powers) {
        std::snprintf(line, sizeof line, " %24s", ("<x^" + std::to_string(p) + ">").c_str());
        out << line;
    }
    out << "\n";
    for (const ReportCase& c : r.cases) {
        std::snprintf(line, sizeof line, "# %s W=(%s, %s) dim=%d parity=%s hash=%s\n",
                      c.label.empty() ? "-" : c.label.c_str(), fmt17(c.w.real()).c_str(),
                      fmt17(c.w.imag()).c_str(), c.dim, c.parity.c_str(), c.config_hash.c_str());
        out << line;
        bool first = true;
        for (const ReportRecord& rec : c.records) {
            // Like a printed table: the case label only on its first row.
            std::snprintf(line, sizeof line, "%-12s %24s %24s %6d %10.2e %7d",
                          first ? (c.label.empty() ? "-" : c.label.c_str()) : "", fmt17(rec.energy.real()).c_str(),
                          fmt17(rec.energy.imag()).c_str(), rec.iterations, rec.residual, rec.persistence);
            out << line;
            for (int p : powers) {
                std::string v = "n/a";
                for (const ProbeValue& pv : rec.probes)
                    if (pv.power == p && pv.error.empty()) v = fmt17(pv.value.real());
                std::snprintf(line, sizeof line, " %24s", v.c_str());
                out << line;
            }
            out << "\n";
            first = false;
        }
    }
    return out.str();
}

} // namespace detail

enum class Format { Csv, Json, Text };

inline Format format_from_string(const std::string& s) {
    if (s == "csv") return Format::Csv;
    if (s == "json") return Format::Json;
    if (s == "text") return Format::Text;
    throw ConfigError("unknown format '" + s + "' (expected csv, json or text)");
}

/// Column order is fixed: ER, EI, iterations, residual, persistence,
/// reference row, then one re/im pair per probed power.
inline std::string emit_table(const Report& r, Format f) {
    switch (f) {
        case Format::Csv: return detail::emit_csv(r);
        case Format::Json: return detail::emit_json(r);
        case Format::Text: return detail::emit_text(r);
    }
    return {};
}

// Writes to a sibling temporary and renames it over `path`.
inline void write_atomic(const std::string& path, const std::string& content) {
    const std::filesystem::path target(path);
    std::filesystem::path tmp = target;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("cannot write '" + tmp.string() + "'");
        out << content;
        if (!out.flush()) throw std::runtime_error("write to '" + tmp.string() + "' failed");
    }
    std::filesystem::rename(tmp, target);
}

} // namespace bandres::cli
