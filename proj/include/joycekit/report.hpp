#pragma once
// Report plumbing for the check-suite runner: run configuration, per-check
// results, and two serializations (human-readable text and line-delimited
// structured records followed by one aggregate document).  Every volatile
// quantity — the UTC time of day and the per-check wall-clock readings —
// lives inside the single `timestamp` field, so two reports produced with
// the same configuration and seed are byte-identical once that one field
// (one line in text mode, one JSON key in structured mode) is ignored.

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "joycekit/axioms.hpp"
#include "joycekit/errors.hpp"
#include "joycekit/types.hpp"

namespace joycekit::cli {

inline constexpr const char* kToolVersion = "0.1.0";

inline std::vector<cplx> default_eps_list() {
    return {kEpsInf, cplx(1.0), cplx(0.0, 1.0), cplx(-0.5)};
}

struct SuiteConfig {
    std::string model = "flat";
    std::size_t samples = 20;
    std::uint64_t seed = 1;
    std::map<std::string, double> tolerances; // per-check overrides
    std::vector<cplx> eps_list = default_eps_list();
    std::string out_path;         // empty: stdout
    std::string format = "text";  // text | structured

    double tol(const std::string& check, double fallback) const {
        auto it = tolerances.find(check);
        return it == tolerances.end() ? fallback : it->second;
    }

    void validate() const {
        if (samples == 0) throw ConfigError("sample count must be positive");
        if (format != "text" && format != "structured")
            throw ConfigError("format must be 'text' or 'structured'");
        for (const auto& [name, t] : tolerances)
            if (!(t > 0.0))
                throw ConfigError("tolerance for '" + name + "' must be positive");
        bool has_finite = false;
        for (cplx e : eps_list)
            if (!is_inf_eps(e)) {
                if (e == cplx(0.0))
                    throw ConfigError("eps = 0 is not a pencil parameter");
                has_finite = true;
            }
        if (eps_list.empty() || !has_finite)
            throw ConfigError("eps list needs at least one finite nonzero value");
    }
};

struct CheckResult {
    axiomcheck::ResidualReport report;
    double wall_ms = 0.0;
    std::string error; // nonempty when the check aborted with an exception
};

struct SuiteReport {
    std::string version = kToolVersion;
    SuiteConfig config;
    std::vector<CheckResult> checks; // registration order
    bool pass = false;               // summary: true iff every check passed
    std::string utc;                 // volatile, reported inside `timestamp`
};

// --------------------------------------------------------------- formatting
// All numeric output is rounded to 15 significant digits; complex numbers
// are serialized as two-element arrays (re, im).

inline double round_sig(double v) {
    if (!std::isfinite(v)) return v;
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.15g", v);
    return std::strtod(buf, nullptr);
}

inline std::string fmt_num(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.15g", v);
    return buf;
}

inline std::string fmt_cplx(cplx v) {
    if (is_inf_eps(v)) return "(inf)";
    return "(" + fmt_num(v.real()) + ", " + fmt_num(v.imag()) + ")";
}

inline nlohmann::json json_num(double v) {
    if (!std::isfinite(v)) return nullptr;
    return round_sig(v);
}

inline nlohmann::json json_cplx(cplx v) {
    if (is_inf_eps(v)) return "inf";
    return nlohmann::json::array({json_num(v.real()), json_num(v.imag())});
}

inline nlohmann::json json_cvec(const cvec& v) {
    nlohmann::json a = nlohmann::json::array();
    for (cplx c : v) a.push_back(json_cplx(c));
    return a;
}

inline std::string utc_now() {
    std::time_t t = std::time(nullptr);
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[32];
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

// ------------------------------------------------------------ serialization

inline nlohmann::json config_json(const SuiteConfig& c) {
    nlohmann::json eps = nlohmann::json::array();
    for (cplx e : c.eps_list) eps.push_back(json_cplx(e));
    nlohmann::json tol = nlohmann::json::object();
    for (const auto& [k, v] : c.tolerances) tol[k] = json_num(v);
    return {{"model", c.model},   {"samples", c.samples},
            {"seed", c.seed},     {"tolerances", tol},
            {"eps", eps},         {"out", c.out_path},
            {"format", c.format}};
}

inline nlohmann::json check_json(const CheckResult& r) {
    const auto& rep = r.report;
    nlohmann::json j{{"record", "check"},
                     {"name", rep.name},
                     {"anchor", rep.anchor},
                     {"max_abs", json_num(rep.max_abs)},
                     {"tolerance", json_num(rep.tolerance_used)},
                     {"samples", rep.samples},
                     {"pass", rep.pass},
                     {"location",
                      {{"z", json_cvec(rep.location.z)},
                       {"theta", json_cvec(rep.location.theta)}}}};
    if (!r.error.empty()) j["error"] = r.error;
    return j;
}

// The one volatile field: ISO time of day plus the wall-clock reading of
// every check, keyed by check name.
inline nlohmann::json timestamp_json(const SuiteReport& rep) {
    nlohmann::json wall = nlohmann::json::object();
    for (const auto& c : rep.checks)
        wall[c.report.name] = round_sig(c.wall_ms);
    return {{"utc", rep.utc}, {"wall_ms", wall}};
}

inline std::string render_text(const SuiteReport& rep) {
    std::ostringstream os;
    os << "joycekit check-suite report\n";
    os << "version: " << rep.version << "\n";
    os << "model: " << rep.config.model << "  seed: " << rep.config.seed
       << "  samples: " << rep.config.samples << "  format: "
       << rep.config.format << "\n";
    os << "eps:";
    for (cplx e : rep.config.eps_list) os << " " << fmt_cplx(e);
    os << "\n";
    if (!rep.config.tolerances.empty()) {
        os << "tolerance overrides:";
        for (const auto& [k, v] : rep.config.tolerances)
            os << " " << k << "=" << fmt_num(v);
        os << "\n";
    }
    std::ostringstream wall;
    wall << "timestamp: " << rep.utc << " wall_ms";
    for (const auto& c : rep.checks)
        wall << " " << c.report.name << "=" << fmt_num(round_sig(c.wall_ms));
    os << wall.str() << "\n";
    std::size_t passed = 0;
    for (const auto& c : rep.checks) {
        const auto& r = c.report;
        if (r.pass) ++passed;
        os << (r.pass ? "[PASS] " : "[FAIL] ") << r.name << "  [" << r.anchor
           << "]  max_abs=" << fmt_num(r.max_abs)
           << " tol=" << fmt_num(r.tolerance_used) << " samples=" << r.samples;
        if (!r.location.z.empty() || !r.location.theta.empty()) {
            os << " location=z:";
            for (cplx v : r.location.z) os << fmt_cplx(v);
            os << " theta:";
            for (cplx v : r.location.theta) os << fmt_cplx(v);
        }
        if (!c.error.empty()) os << " error=" << c.error;
        os << "\n";
    }
    os << "summary: " << (rep.pass ? "PASS" : "FAIL") << " (" << passed << "/"
       << rep.checks.size() << " checks)\n";
    return os.str();
}

inline std::string render_structured(const SuiteReport& rep) {
    std::ostringstream os;
    nlohmann::json meta{{"record", "meta"},
                        {"version", rep.version},
                        {"config", config_json(rep.config)}};
    os << meta.dump() << "\n";
    nlohmann::json checks = nlohmann::json::array();
    std::size_t passed = 0;
    for (const auto& c : rep.checks) {
        nlohmann::json j = check_json(c);
        if (c.report.pass) ++passed;
        os << j.dump() << "\n";
        checks.push_back(std::move(j));
    }
    nlohmann::json aggregate{{"record", "report"},
                             {"version", rep.version},
                             {"config", config_json(rep.config)},
                             {"checks", std::move(checks)},
                             {"summary",
                              {{"pass", rep.pass},
                               {"checks_passed", passed},
                               {"checks_total", rep.checks.size()}}},
                             {"timestamp", timestamp_json(rep)}};
    os << aggregate.dump() << "\n";
    return os.str();
}

inline std::string render(const SuiteReport& rep) {
    return rep.config.format == "structured" ? render_structured(rep)
                                             : render_text(rep);
}

// Machine-readable error record used by the thin compute wrappers.
inline std::string error_record_json(const std::string& code,
                                     const std::string& message,
                                     const std::string& command) {
    nlohmann::json j{{"record", "error"},
                     {"command", command},
                     {"code", code},
                     {"message", message}};
    return j.dump();
}

} // namespace joycekit::cli
