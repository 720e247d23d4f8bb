// Command-line runner: the registered check suite plus thin compute wrappers
// over the library operations (elliptic periods, fibre coordinates, twistor
// tangency, oscillator monodromy, Hamiltonian extraction).  All numeric
// output uses 15 significant digits with complex numbers as (re, im) pairs;
// errors from wrapped operations surface as machine-readable records with
// exit code 1, configuration problems exit with code 2.

#include <cctype>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "joycekit/a2.hpp"
#include "joycekit/cubic.hpp"
#include "joycekit/elliptic.hpp"
#include "joycekit/errors.hpp"
#include "joycekit/hamilton.hpp"
#include "joycekit/report.hpp"
#include "joycekit/rk45.hpp"
#include "joycekit/suite.hpp"
#include "joycekit/twistor.hpp"
#include "joycekit/types.hpp"
#include "joycekit/wmodels.hpp"

namespace {

using joycekit::cplx;
using joycekit::cvec;
using joycekit::cmat;
using joycekit::ConfigError;
using joycekit::Error;
using joycekit::kEpsInf;
using nlohmann::json;

// Accept "inf", "re", "re,im", or "(re,im)".
cplx parse_complex(std::string s) {
    auto strip = [](std::string& t) {
        while (!t.empty() && std::isspace(static_cast<unsigned char>(t.front())))
            t.erase(t.begin());
        while (!t.empty() && std::isspace(static_cast<unsigned char>(t.back())))
            t.pop_back();
    };
    strip(s);
    if (!s.empty() && s.front() == '(' && s.back() == ')')
        s = s.substr(1, s.size() - 2);
    strip(s);
    if (s == "inf" || s == "INF" || s == "Inf") return kEpsInf;
    auto parse_one = [](const std::string& t) {
        std::size_t pos = 0;
        double v = 0.0;
        try {
            v = std::stod(t, &pos);
        } catch (const std::exception&) {
            throw ConfigError("cannot parse '" + t + "' as a number");
        }
        while (pos < t.size() &&
               std::isspace(static_cast<unsigned char>(t[pos])))
            ++pos;
        if (pos != t.size())
            throw ConfigError("cannot parse '" + t + "' as a number");
        return v;
    };
    std::size_t comma = s.find(',');
    if (comma == std::string::npos) return cplx(parse_one(s), 0.0);
    return cplx(parse_one(s.substr(0, comma)), parse_one(s.substr(comma + 1)));
}

void write_output(const std::string& path, const std::string& text) {
    if (path.empty()) {
        std::fputs(text.c_str(), stdout);
        return;
    }
    std::ofstream os(path, std::ios::binary);
    if (!os) throw ConfigError("cannot open output path '" + path + "'");
    os << text;
}

std::string trimmed(std::string t) {
    while (!t.empty() && std::isspace(static_cast<unsigned char>(t.front())))
        t.erase(t.begin());
    while (!t.empty() && std::isspace(static_cast<unsigned char>(t.back())))
        t.pop_back();
    return t;
}

// Plain 'key = value' configuration file: one setting per line, '#' starts a
// comment, blank lines are ignored.  Returned in file order (later lines win).
std::vector<std::pair<std::string, std::string>>
read_config_file(const std::string& path) {
    std::ifstream is(path);
    if (!is)
        throw ConfigError("cannot open configuration file '" + path + "'");
    std::vector<std::pair<std::string, std::string>> out;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        std::string t = line;
        if (auto hash = t.find('#'); hash != std::string::npos) t.erase(hash);
        t = trimmed(t);
        if (t.empty()) continue;
        auto eq = t.find('=');
        if (eq == std::string::npos)
            throw ConfigError("configuration line " + std::to_string(lineno) +
                              " is not 'key = value': '" + trimmed(line) + "'");
        std::string key = trimmed(t.substr(0, eq));
        std::string value = trimmed(t.substr(eq + 1));
        if (key.empty())
            throw ConfigError("configuration line " + std::to_string(lineno) +
                              " has an empty key");
        out.emplace_back(std::move(key), std::move(value));
    }
    return out;
}

std::uint64_t parse_u64(const std::string& key, const std::string& s) {
    try {
        std::size_t pos = 0;
        unsigned long long v = std::stoull(s, &pos);
        if (pos != s.size()) throw std::invalid_argument(s);
        return v;
    } catch (const std::exception&) {
        throw ConfigError("bad value for configuration key '" + key + "': '" +
                          s + "'");
    }
}

double parse_double(const std::string& key, const std::string& s) {
    try {
        std::size_t pos = 0;
        double v = std::stod(s, &pos);
        if (pos != s.size()) throw std::invalid_argument(s);
        return v;
    } catch (const std::exception&) {
        throw ConfigError("bad value for configuration key '" + key + "': '" +
                          s + "'");
    }
}

std::vector<std::string> split_ws(const std::string& s) {
    std::istringstream is(s);
    std::vector<std::string> out;
    std::string tok;
    while (is >> tok) out.push_back(tok);
    return out;
}

std::string text_of(const json& v);

std::string text_of_array(const json& v) {
    if (v.size() == 2 && v[0].is_number() && v[1].is_number())
        return "(" + joycekit::cli::fmt_num(v[0].get<double>()) + ", " +
               joycekit::cli::fmt_num(v[1].get<double>()) + ")";
    std::string out = "[";
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) out += ", ";
        out += text_of(v[i]);
    }
    return out + "]";
}

std::string text_of(const json& v) {
    if (v.is_null()) return "nan";
    if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
    if (v.is_number_unsigned()) return std::to_string(v.get<std::uint64_t>());
    if (v.is_number_integer()) return std::to_string(v.get<std::int64_t>());
    if (v.is_number()) return joycekit::cli::fmt_num(v.get<double>());
    if (v.is_string()) return v.get<std::string>();
    if (v.is_array()) return text_of_array(v);
    return v.dump();
}

std::string render_records(const std::vector<json>& records,
                           const std::string& format) {
    std::ostringstream os;
    for (const json& rec : records) {
        if (format == "structured") {
            os << rec.dump() << "\n";
            continue;
        }
        os << rec.value("record", "record");
        if (rec.contains("anchor"))
            os << "  [" << rec["anchor"].get<std::string>() << "]";
        os << "\n";
        for (const auto& [key, value] : rec.items()) {
            if (key == "record" || key == "anchor") continue;
            os << "  " << key << " = " << text_of(value) << "\n";
        }
    }
    return os.str();
}

// Shared wrapper for the thin compute subcommands: run the body, print its
// records, and map wrapped-operation errors to exit 1 with a machine-readable
// error record (configuration problems exit 2).
int run_compute(const std::string& command, const std::string& format,
                const std::string& out_path,
                const std::function<std::vector<json>()>& body) {
    try {
        write_output(out_path, render_records(body(), format));
        return 0;
    } catch (const ConfigError& e) {
        std::fputs((joycekit::cli::error_record_json("ConfigError", e.what(),
                                                     command) +
                    "\n")
                       .c_str(),
                   stdout);
        return 2;
    } catch (const Error& e) {
        std::fputs((joycekit::cli::error_record_json(e.code(), e.what(),
                                                     command) +
                    "\n")
                       .c_str(),
                   stdout);
        return 1;
    }
}

json cj(cplx v) { return joycekit::cli::json_cplx(v); }
json nj(double v) { return joycekit::cli::json_num(v); }

json matrix_json(const cmat& m) {
    json rows = json::array();
    for (const auto& row : m) {
        json r = json::array();
        for (cplx v : row) r.push_back(cj(v));
        rows.push_back(std::move(r));
    }
    return rows;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"joycekit: residual checks and computations for "
                 "pencil-of-connections hyperkahler structures"};
    app.require_subcommand(1);
    app.set_version_flag("--version", joycekit::cli::kToolVersion);
    app.fallthrough(); // let --format/--out follow the subcommand

    std::string format = "text";
    std::string out_path;
    app.add_option("--format", format, "report format")
        ->check(CLI::IsMember({"text", "structured"}))
        ->capture_default_str();
    app.add_option("--out", out_path, "output path (default: stdout)");

    // ------------------------------------------------------------- suite
    auto* suite = app.add_subcommand(
        "suite", "run the registered residual checks for one model");
    joycekit::cli::SuiteConfig cfg;
    std::vector<std::string> eps_raw;
    std::string config_path;
    suite->add_option("--config", config_path,
                      "configuration file (plain 'key = value' lines; "
                      "command-line flags take precedence)");
    suite->add_option("--model", cfg.model,
                      "model id: a1 | a2 | flat | synthetic-counterexample")
        ->capture_default_str();
    suite->add_option("--seed", cfg.seed, "sampling seed")
        ->capture_default_str();
    suite->add_option("--samples", cfg.samples, "sample count per check")
        ->capture_default_str();
    suite->add_option("--eps", eps_raw,
                      "pencil members, e.g. --eps inf --eps 1 --eps 0,1");
    const auto& names = joycekit::cli::known_check_names();
    std::vector<double> tol_values(names.size(), 0.0);
    std::vector<CLI::Option*> tol_opts(names.size(), nullptr);
    for (std::size_t i = 0; i < names.size(); ++i)
        tol_opts[i] = suite->add_option("--tol-" + names[i], tol_values[i],
                                        "tolerance override for the '" +
                                            names[i] + "' check");

    // ------------------------------------------------------------ periods
    auto* periods = app.add_subcommand(
        "periods", "periods, quasi-periods, and central charges of a curve");
    std::string p_a = "-1", p_b = "0";
    periods->add_option("--a", p_a, "curve parameter a")->capture_default_str();
    periods->add_option("--b", p_b, "curve parameter b")->capture_default_str();

    // -------------------------------------------------------------- theta
    auto* theta = app.add_subcommand(
        "theta", "fibre coordinates of an on-curve state from abelian "
                 "integrals");
    std::string t_a = "-1", t_b = "0", t_q = "2", t_r = "0.5", t_p;
    theta->add_option("--a", t_a, "curve parameter a")->capture_default_str();
    theta->add_option("--b", t_b, "curve parameter b")->capture_default_str();
    theta->add_option("--q", t_q, "base point x = q")->capture_default_str();
    theta->add_option("--r", t_r, "state coordinate r")->capture_default_str();
    theta->add_option("--p", t_p,
                      "on-curve p = y(q); default: principal square root");

    // ------------------------------------------------------- twistor-line
    auto* twl = app.add_subcommand(
        "twistor-line", "tangency residuals of scaled twistor lines");
    std::string w_model = "a1";
    std::vector<std::string> w_eps;
    std::size_t w_samples = 5;
    std::uint64_t w_seed = 1;
    std::string w_perturb = "0";
    twl->add_option("--model", w_model, "model id: a1 | flat")
        ->check(CLI::IsMember({"a1", "flat"}))
        ->capture_default_str();
    twl->add_option("--eps", w_eps, "pencil members (default: 1 and 0,2)");
    twl->add_option("--samples", w_samples, "number of sample points")
        ->capture_default_str();
    twl->add_option("--seed", w_seed, "sampling seed")->capture_default_str();
    twl->add_option("--perturb", w_perturb,
                    "vertical-field perturbation injected into the check")
        ->capture_default_str();

    // ---------------------------------------------------------- monodromy
    auto* mono = app.add_subcommand(
        "monodromy", "monodromy of the deformed cubic oscillator");
    std::string m_a = "-1", m_b = "0", m_q = "2", m_r = "0.5", m_p,
                m_eps = "1", m_center;
    std::string m_around = "q";
    double m_radius = 0.0;
    mono->add_option("--a", m_a, "curve parameter a")->capture_default_str();
    mono->add_option("--b", m_b, "curve parameter b")->capture_default_str();
    mono->add_option("--q", m_q, "turning point q")->capture_default_str();
    mono->add_option("--r", m_r, "state coordinate r")->capture_default_str();
    mono->add_option("--p", m_p,
                     "on-curve p = y(q); default: principal square root");
    mono->add_option("--eps", m_eps, "pencil member")->capture_default_str();
    mono->add_option("--loop-around", m_around,
                     "which marked point the loop encircles")
        ->check(CLI::IsMember({"q", "nothing"}))
        ->capture_default_str();
    mono->add_option("--center", m_center,
                     "explicit loop center (overrides --loop-around)");
    mono->add_option("--radius", m_radius, "loop radius (0: automatic)")
        ->capture_default_str();

    // -------------------------------------------------------- hamiltonian
    auto* ham = app.add_subcommand(
        "hamiltonian",
        "extract the induced Hamiltonian system on the elliptic base and "
        "compare its first flow with the constrained pencil flow");
    std::string h_a = "-1", h_b = "1", h_u = "-0.8,-0.3", h_beta = "0";
    double h_duration = 1.0;
    ham->add_option("--a", h_a, "curve parameter a")->capture_default_str();
    ham->add_option("--b", h_b, "curve parameter b")->capture_default_str();
    ham->add_option("--u", h_u, "uniformizing fibre parameter")
        ->capture_default_str();
    ham->add_option("--beta", h_beta, "fibre parameter beta")
        ->capture_default_str();
    ham->add_option("--duration", h_duration, "flow duration")
        ->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::fputs((joycekit::cli::error_record_json(
                        "ConfigError", e.what(), "argument parsing") +
                    "\n")
                       .c_str(),
                   stdout);
        return 2;
    }

    // ------------------------------------------------------------- suite
    if (suite->parsed()) {
        try {
            if (!config_path.empty()) {
                for (const auto& [key, value] : read_config_file(config_path)) {
                    if (key == "model") {
                        if (suite->count("--model") == 0) cfg.model = value;
                    } else if (key == "seed") {
                        if (suite->count("--seed") == 0)
                            cfg.seed = parse_u64(key, value);
                    } else if (key == "samples") {
                        if (suite->count("--samples") == 0)
                            cfg.samples = parse_u64(key, value);
                    } else if (key == "eps") {
                        if (eps_raw.empty()) eps_raw = split_ws(value);
                    } else if (key == "format") {
                        if (value != "text" && value != "structured")
                            throw ConfigError(
                                "configuration key 'format' must be 'text' "
                                "or 'structured', got '" + value + "'");
                        if (app.count("--format") == 0) format = value;
                    } else if (key == "out") {
                        if (app.count("--out") == 0) out_path = value;
                    } else if (key.rfind("tol-", 0) == 0) {
                        const std::string name = key.substr(4);
                        bool found = false;
                        for (std::size_t i = 0; i < names.size(); ++i) {
                            if (names[i] != name) continue;
                            found = true;
                            if (tol_opts[i]->count() == 0)
                                cfg.tolerances[name] = parse_double(key, value);
                        }
                        if (!found)
                            throw ConfigError("unknown configuration key '" +
                                              key + "'");
                    } else {
                        throw ConfigError("unknown configuration key '" + key +
                                          "'");
                    }
                }
            }
            cfg.format = format;
            cfg.out_path = out_path;
            for (std::size_t i = 0; i < names.size(); ++i)
                if (tol_opts[i]->count() > 0)
                    cfg.tolerances[names[i]] = tol_values[i];
            if (!eps_raw.empty()) {
                cfg.eps_list.clear();
                for (const std::string& s : eps_raw)
                    cfg.eps_list.push_back(parse_complex(s));
            }
            joycekit::cli::SuiteReport rep = joycekit::cli::run_suite(cfg);
            write_output(out_path, joycekit::cli::render(rep));
            return rep.pass ? 0 : 1;
        } catch (const ConfigError& e) {
            std::fputs((joycekit::cli::error_record_json("ConfigError",
                                                         e.what(), "suite") +
                        "\n")
                           .c_str(),
                       stdout);
            return 2;
        } catch (const Error& e) {
            std::fputs((joycekit::cli::error_record_json(e.code(), e.what(),
                                                         "suite") +
                        "\n")
                           .c_str(),
                       stdout);
            return 1;
        }
    }

    // ------------------------------------------------------------ periods
    if (periods->parsed()) {
        return run_compute("periods", format, out_path, [&]() {
            joycekit::elliptic::Curve c{parse_complex(p_a), parse_complex(p_b)};
            auto pd = joycekit::elliptic::complete_periods(c);
            json rec{{"record", "periods"},
                     {"anchor", "Legendre relation of the elliptic periods"},
                     {"a", cj(c.a)},
                     {"b", cj(c.b)},
                     {"omega1", cj(pd.omega1)},
                     {"omega2", cj(pd.omega2)},
                     {"eta1", cj(pd.eta1)},
                     {"eta2", cj(pd.eta2)},
                     {"z1", cj(pd.z1)},
                     {"z2", cj(pd.z2)},
                     {"cycle_basis", pd.cycle_basis_id},
                     {"legendre_residual", nj(pd.legendre_residual)}};
            return std::vector<json>{rec};
        });
    }

    // -------------------------------------------------------------- theta
    if (theta->parsed()) {
        return run_compute("theta", format, out_path, [&]() {
            joycekit::elliptic::Curve c{parse_complex(t_a), parse_complex(t_b)};
            cplx q = parse_complex(t_q);
            cplx p = t_p.empty() ? joycekit::elliptic::y_on_curve(c, q)
                                 : parse_complex(t_p);
            cplx r = parse_complex(t_r);
            auto pd = joycekit::elliptic::complete_periods(c);
            auto tp = joycekit::elliptic::abel_theta(c, q, p, r, pd);
            cplx u = joycekit::elliptic::u_integral(c, q, p);
            json rec{{"record", "theta"},
                     {"anchor", "fibre coordinates from abelian integrals"},
                     {"a", cj(c.a)},
                     {"b", cj(c.b)},
                     {"q", cj(q)},
                     {"p", cj(p)},
                     {"r", cj(r)},
                     {"theta_a", cj(tp.theta_a)},
                     {"theta_b", cj(tp.theta_b)},
                     {"theta1", cj(tp.theta1)},
                     {"theta2", cj(tp.theta2)},
                     {"u_integral", cj(u)}};
            return std::vector<json>{rec};
        });
    }

    // ------------------------------------------------------- twistor-line
    if (twl->parsed()) {
        return run_compute("twistor-line", format, out_path, [&]() {
            auto model = joycekit::cli::detail::make_wmodel(w_model);
            std::vector<cplx> members;
            for (const std::string& s : w_eps) {
                cplx e = parse_complex(s);
                if (joycekit::is_inf_eps(e) || e == cplx(0.0))
                    throw ConfigError(
                        "tangency needs finite nonzero pencil members");
                members.push_back(e);
            }
            if (members.empty())
                members = {cplx(1.0), cplx(0.0, 2.0)};
            cplx perturb = parse_complex(w_perturb);
            auto pts = joycekit::cli::detail::sample_points(w_model, w_samples,
                                                            w_seed);
            std::vector<json> records;
            double worst = 0.0;
            for (const auto& pt : pts)
                for (cplx eps : members) {
                    double res = joycekit::twistor::twistor_line_residual(
                        *model, pt, eps, perturb);
                    worst = std::max(worst, res);
                    records.push_back(
                        json{{"record", "twistor-line"},
                             {"anchor",
                              "tangency of twistor lines to the pencil leaves"},
                             {"model", w_model},
                             {"z", joycekit::cli::json_cvec(pt.z)},
                             {"theta", joycekit::cli::json_cvec(pt.theta)},
                             {"eps", cj(eps)},
                             {"residual", nj(res)}});
                }
            records.push_back(
                json{{"record", "twistor-line-summary"},
                     {"anchor",
                      "tangency of twistor lines to the pencil leaves"},
                     {"model", w_model},
                     {"samples", pts.size()},
                     {"max_residual", nj(worst)}});
            return records;
        });
    }

    // ---------------------------------------------------------- monodromy
    if (mono->parsed()) {
        return run_compute("monodromy", format, out_path, [&]() {
            joycekit::elliptic::Curve c{parse_complex(m_a), parse_complex(m_b)};
            cplx q = parse_complex(m_q);
            cplx p = m_p.empty() ? joycekit::elliptic::y_on_curve(c, q)
                                 : parse_complex(m_p);
            joycekit::models::A2State st{c.a, c.b, q, parse_complex(m_r), p};
            joycekit::hamilton::OscillatorProblem pr{st, parse_complex(m_eps)};

            auto roots = joycekit::cubic::roots(c.a, c.b);
            double dmin = 1e300;
            cplx nearest = roots[0];
            for (cplx root : roots)
                if (std::abs(q - root) < dmin) {
                    dmin = std::abs(q - root);
                    nearest = root;
                }

            joycekit::hamilton::Loop loop;
            std::string target;
            if (!m_center.empty()) {
                loop.center = parse_complex(m_center);
                loop.radius = m_radius > 0.0 ? m_radius : 0.2;
                target = "explicit";
            } else if (m_around == "q") {
                loop.center = q;
                loop.radius =
                    m_radius > 0.0 ? m_radius : std::min(0.35, 0.45 * dmin);
                target = "q";
            } else {
                cplx dir = dmin > 0.0 ? (q - nearest) / dmin : cplx(1.0);
                loop.center = q + 0.5 * dmin * dir;
                loop.radius = m_radius > 0.0 ? m_radius : 0.15 * dmin;
                target = "nothing";
            }

            cmat m = joycekit::hamilton::oscillator_monodromy(pr, loop);
            cplx det = m[0][0] * m[1][1] - m[0][1] * m[1][0];
            cplx trace = m[0][0] + m[1][1];
            json rec{{"record", "monodromy"},
                     {"anchor",
                      "reflection monodromy around the turning point"},
                     {"a", cj(c.a)},
                     {"b", cj(c.b)},
                     {"q", cj(q)},
                     {"r", cj(parse_complex(m_r))},
                     {"p", cj(p)},
                     {"eps", cj(pr.eps)},
                     {"loop_around", target},
                     {"center", cj(loop.center)},
                     {"radius", nj(loop.radius)},
                     {"matrix", matrix_json(m)},
                     {"det", cj(det)},
                     {"trace", cj(trace)}};
            if (target == "q") {
                double dev = 0.0;
                for (std::size_t i = 0; i < 2; ++i)
                    for (std::size_t j = 0; j < 2; ++j)
                        dev = std::max(dev,
                                       std::abs(m[i][j] - ((i == j)
                                                               ? cplx(-1.0)
                                                               : cplx(0.0))));
                rec["deviation_from_minus_identity"] = nj(dev);
            } else if (target == "nothing") {
                double dev = 0.0;
                for (std::size_t i = 0; i < 2; ++i)
                    for (std::size_t j = 0; j < 2; ++j)
                        dev = std::max(dev,
                                       std::abs(m[i][j] - ((i == j)
                                                               ? cplx(1.0)
                                                               : cplx(0.0))));
                rec["deviation_from_identity"] = nj(dev);
            }
            return std::vector<json>{rec};
        });
    }

    // -------------------------------------------------------- hamiltonian
    if (ham->parsed()) {
        return run_compute("hamiltonian", format, out_path, [&]() {
            joycekit::elliptic::Curve c{parse_complex(h_a), parse_complex(h_b)};
            cplx u = parse_complex(h_u);
            cplx beta = parse_complex(h_beta);
            joycekit::models::A2State seed =
                joycekit::models::a2_state_from_uniformization(c, u, beta);
            joycekit::models::A2ChartModel model;
            joycekit::hamilton::CotangentStructure cot{{0}, {1}};
            cvec packed = seed.pack();

            joycekit::hamilton::LagrangianCut cut =
                joycekit::hamilton::a2_extraction_cut(seed, u);
            joycekit::hamilton::HamiltonianSystem sys =
                joycekit::hamilton::extract_from_joyce(model, cot, cut, packed);
            cvec s0 = {seed.a, cut.seed_Q[0], cut.seed_P[0]};
            cplx h_seed = sys.H[0](s0);
            cplx alpha =
                seed.r * (3.0 * seed.q * seed.q + seed.a) / seed.p - seed.q;

            auto alpha_of = [](const cvec& y) {
                return y[3] * (3.0 * y[2] * y[2] + y[0]) / y[4] - y[2];
            };
            auto field = [&](double, const cvec& y) {
                cvec fa = model.pencil_frame(y, 0, cplx(1.0));
                cvec fb = model.pencil_frame(y, 1, cplx(1.0));
                cplx al = alpha_of(y);
                cvec out(5);
                for (std::size_t k = 0; k < 5; ++k)
                    out[k] = fa[k] + al * fb[k];
                return out;
            };
            joycekit::rk45::Options ro;
            ro.tol = 1e-12;
            cvec y_geo =
                joycekit::rk45::integrate(field, packed, 0.0, h_duration, ro);

            joycekit::hamilton::KFlowOptions ko;
            ko.tol = 1e-9;
            cvec s1 = joycekit::hamilton::k_flow(sys, cplx(1.0), s0, 0,
                                                 h_duration, ko);
            cvec x1 = cut.fibre_point({s1[1]}, {s1[2]});
            cvec dt = {s1[0] - seed.a};
            cvec y_ham = joycekit::hamilton::transport_along_cut(model, cot,
                                                                 cut, x1, dt);
            double mismatch = 0.0;
            for (std::size_t k = 0; k < 5; ++k)
                mismatch = std::max(mismatch, std::abs(y_ham[k] - y_geo[k]));

            json rec{{"record", "hamiltonian"},
                     {"anchor",
                      "Hamiltonian form of the restricted pencil flows"},
                     {"a", cj(seed.a)},
                     {"b", cj(seed.b)},
                     {"u", cj(u)},
                     {"beta", cj(beta)},
                     {"seed_q", cj(seed.q)},
                     {"seed_r", cj(seed.r)},
                     {"seed_p", cj(seed.p)},
                     {"duration", nj(h_duration)},
                     {"H_at_seed", cj(h_seed)},
                     {"lift_coefficient", cj(alpha)},
                     {"endpoint", joycekit::cli::json_cvec(y_ham)},
                     {"flow_mismatch", nj(mismatch)}};
            return std::vector<json>{rec};
        });
    }

    return 0;
}
