#include "svlab/cli.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"

namespace svlab {
namespace cli {

namespace {

using nlohmann::json;

std::string trim(const std::string& s) {
    size_t b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    size_t e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

double parse_double(const std::string& s) {
    try {
        size_t pos = 0;
        double v = std::stod(s, &pos);
        if (pos != s.size()) throw ConfigError("trailing characters in number: " + s);
        return v;
    } catch (const std::exception&) {
        throw ConfigError("cannot parse number: '" + s + "'");
    }
}

ModelSpec parse_model(const std::string& s) {
    if (s == "cubic") return cubic_model();
    if (s == "sine") return sine_model();
    throw ConfigError("--model must be cubic or sine, got '" + s + "'");
}

struct Table {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;
};

void write_table(const Table& t, const RunConfig& cfg, const std::string& json_command,
                 std::ostream& os) {
    if (cfg.format == "csv") {
        for (size_t i = 0; i < t.header.size(); ++i)
            os << t.header[i] << (i + 1 < t.header.size() ? "," : "");
        os << "\n";
        for (const auto& r : t.rows) {
            for (size_t i = 0; i < r.size(); ++i) os << r[i] << (i + 1 < r.size() ? "," : "");
            os << "\n";
        }
        return;
    }
    json arr = json::array();
    for (const auto& r : t.rows) {
        json o = json::object();
        for (size_t i = 0; i < r.size(); ++i) {
            const std::string& cell = r[i];
            // numbers stay numbers so the output re-parses exactly
            char* end = nullptr;
            double v = std::strtod(cell.c_str(), &end);
            if (end && *end == '\0' && !cell.empty() && std::isfinite(v))
                o[t.header[i]] = v;
            else
                o[t.header[i]] = cell;
        }
        arr.push_back(o);
    }
    os << json{{"command", json_command}, {"rows", arr}}.dump(2) << "\n";
}

std::ofstream open_out(const RunConfig& cfg, std::ostream*& os) {
    std::ofstream f;
    if (!cfg.out.empty()) {
        f.open(cfg.out, std::ios::binary);
        if (!f) throw ConfigError("cannot open output file: " + cfg.out);
        os = &f;
    } else {
        os = &std::cout;
    }
    return f;
}

DiscPolicy policy_from(const RunConfig& cfg) {
    DiscPolicy p;
    p.jobs = cfg.jobs;
    p.n_modes_override = cfg.n_modes;
    p.grid_points_override = cfg.grid_points;
    p.half_width_override = cfg.half_width;
    if (cfg.precision == "standard") {
        p.force_precision = true;
        p.precision = Precision::standard;
    } else if (cfg.precision == "extended") {
        p.force_precision = true;
        p.precision = Precision::extended;
    } else if (cfg.precision != "auto") {
        throw ConfigError("--precision must be standard, extended or auto");
    }
    return p;
}

int run_tunneling(const RunConfig& cfg) {
    if (cfg.xi_values.empty() || cfg.h_values.empty())
        throw ConfigError("tunneling requires --xi and --h");
    DiscPolicy policy = policy_from(cfg);
    auto rows = tunneling_experiment(cfg.model, cfg.xi_values, cfg.h_values, policy);

    if (!cfg.dump_matrix.empty()) {
        Problem prob{cfg.model, cfg.xi_values[0], cfg.h_values[0]};
        Banded<double> A = build_matrix_t<double>(prob, auto_discretization(prob, policy));
        std::ofstream f(cfg.dump_matrix, std::ios::binary);
        if (!f) throw ConfigError("cannot open dump file: " + cfg.dump_matrix);
        dump_banded(A, f);
    }

    Table t;
    t.header = {"xi", "h", "t0_numeric", "t0_predicted", "ratio", "t1_numeric", "t1_predicted",
                "regime"};
    int failed = 0;
    for (const auto& r : rows) {
        t.rows.push_back({format_g17(r.xi), format_g17(r.h), format_g17(r.t0_numeric),
                          format_g17(r.t0_predicted), format_g17(r.ratio), format_g17(r.t1_numeric),
                          format_g17(r.t1_predicted), to_string(r.regime_tag)});
        if (r.failed) {
            ++failed;
            std::cerr << "row failed: xi=" << format_g17(r.xi) << " h=" << format_g17(r.h) << ": "
                      << r.error << "\n";
        }
    }
    std::ostream* os;
    auto guard = open_out(cfg, os);
    write_table(t, cfg, "tunneling", *os);
    std::cerr << "tunneling: " << rows.size() << " rows, " << failed << " failed\n";
    return failed == 0 ? 0 : 2;
}

int run_predict(const RunConfig& cfg) {
    if (cfg.xi_values.empty() || cfg.h_values.empty())
        throw ConfigError("predict requires --xi and --h");
    Table t;
    t.header = {"xi", "h", "m_plus", "log_m_plus", "sign", "s0", "t1_predicted", "regime",
                "relative_error_scale"};
    for (double xi : cfg.xi_values) {
        for (double h : cfg.h_values) {
            Problem prob{cfg.model, xi, h};
            Prediction p = m_plus(prob);
            double s0 = has_wells(cfg.model, xi) && !(cfg.model.kind == Model::Sine && xi == 0.0)
                            ? action_S0(cfg.model, xi)
                            : action_S0(cfg.model, xi);
            t.rows.push_back({format_g17(xi), format_g17(h), format_g17(p.value),
                              format_g17(p.log_value), to_string(p.sign), format_g17(s0),
                              format_g17(t1_lower_bound(prob)), to_string(p.regime),
                              format_g17(p.relative_error_scale)});
        }
    }
    std::ostream* os;
    auto guard = open_out(cfg, os);
    write_table(t, cfg, "predict", *os);
    std::cerr << "predict: " << t.rows.size() << " rows\n";
    return 0;
}

int run_overlap(const RunConfig& cfg) {
    if (cfg.xi_values.empty() || cfg.h_values.empty())
        throw ConfigError("overlap requires --xi and --h");
    Table t;
    t.header = {"xi", "h", "eta", "overlap", "m_plus", "rel_dev"};
    int failed = 0;
    for (double xi : cfg.xi_values) {
        for (double h : cfg.h_values) {
            Problem prob{cfg.model, xi, h};
            try {
                double s0 = action_S0(cfg.model, xi);
                double eta = cfg.eta > 0.0 ? cfg.eta : 0.25 * s0;
                double ov = overlap_estimate(prob, eta);
                Prediction p = m_plus(prob);
                double rel = p.value > 0.0 ? ov / p.value - 1.0
                                           : std::numeric_limits<double>::quiet_NaN();
                t.rows.push_back({format_g17(xi), format_g17(h), format_g17(eta), format_g17(ov),
                                  format_g17(p.value), format_g17(rel)});
            } catch (const std::exception& e) {
                ++failed;
                std::cerr << "row failed: xi=" << format_g17(xi) << " h=" << format_g17(h) << ": "
                          << e.what() << "\n";
            }
        }
    }
    std::ostream* os;
    auto guard = open_out(cfg, os);
    write_table(t, cfg, "overlap", *os);
    std::cerr << "overlap: " << t.rows.size() << " rows, " << failed << " failed\n";
    return failed == 0 ? 0 : 2;
}

int run_scaling(const RunConfig& cfg) {
    if (cfg.xi_values.empty() || cfg.h_values.empty())
        throw ConfigError("scaling requires --xi and --h");
    DiscPolicy policy = policy_from(cfg);
    Table t;
    t.header = {"xi", "h", "h_scaled", "lhs_t0", "lhs_t1", "lhs_t2",
                "rhs_t0", "rhs_t1", "rhs_t2", "max_rel_dev"};
    int failed = 0;
    for (double xi : cfg.xi_values) {
        for (double h : cfg.h_values) {
            try {
                ScalingCheckResult r = scaling_check(xi, h, policy);
                t.rows.push_back({format_g17(xi), format_g17(h),
                                  format_g17(h / std::pow(-xi, 1.5)),
                                  format_g17(r.lhs.values[0]), format_g17(r.lhs.values[1]),
                                  format_g17(r.lhs.values[2]), format_g17(r.rhs_scaled.values[0]),
                                  format_g17(r.rhs_scaled.values[1]),
                                  format_g17(r.rhs_scaled.values[2]),
                                  format_g17(r.max_rel_dev)});
            } catch (const std::exception& e) {
                ++failed;
                std::cerr << "row failed: xi=" << format_g17(xi) << " h=" << format_g17(h) << ": "
                          << e.what() << "\n";
            }
        }
    }
    std::ostream* os;
    auto guard = open_out(cfg, os);
    write_table(t, cfg, "scaling", *os);
    std::cerr << "scaling: " << t.rows.size() << " rows, " << failed << " failed\n";
    return failed == 0 ? 0 : 2;
}

int run_resolvent(const RunConfig& cfg) {
    if (cfg.xi_values.empty() || cfg.h_values.empty())
        throw ConfigError("resolvent requires --xi and --h");
    DiscPolicy policy = policy_from(cfg);
    Table t;
    t.header = {"xi", "h", "t0", "bound", "inv_bound", "bound_ok", "empirical_c"};
    int failed = 0;
    for (double h : cfg.h_values) {
        ResolventTable table = resolvent_experiment(cfg.model, h, cfg.xi_values, policy);
        for (const auto& r : table.rows) {
            t.rows.push_back({format_g17(r.xi), format_g17(h), format_g17(r.t0),
                              format_g17(r.bound), format_g17(1.0 / r.bound),
                              r.bound_ok ? "1" : "0", format_g17(r.empirical_c)});
            if (r.failed) {
                ++failed;
                std::cerr << "row failed: xi=" << format_g17(r.xi) << " h=" << format_g17(h)
                          << ": " << r.error << "\n";
            }
        }
        std::cerr << "resolvent h=" << format_g17(h)
                  << ": max empirical C = " << format_g17(table.max_empirical_c) << "\n";
    }
    std::ostream* os;
    auto guard = open_out(cfg, os);
    write_table(t, cfg, "resolvent", *os);
    std::cerr << "resolvent: " << t.rows.size() << " rows, " << failed << " failed\n";
    return failed == 0 ? 0 : 2;
}

int run_weyl(const RunConfig& cfg) {
    if (!(cfg.a > 0.0) || !(cfg.b > 0.0) || cfg.h_values.empty())
        throw ConfigError("weyl requires --a, --b and --h");
    DiscPolicy policy = policy_from(cfg);
    int failed = 0;
    json out = json::array();
    Table t;
    t.header = {"a", "b", "h", "mode", "counted", "predicted", "discrepancy", "xi_grid_size",
                "fallback_count", "failed_count", "skipped_elliptic", "csv21_warning"};
    for (double h : cfg.h_values) {
        WeylWindow w{cfg.a, cfg.b, h};
        WeylReport rep = weyl_experiment(cfg.model, w, cfg.weyl_mode, policy, cfg.normalize_sqrt_h);
        failed += int(rep.failed_count);
        for (const auto& fb : rep.fibers)
            if (fb.source == FiberSource::failed)
                std::cerr << "fiber failed: xi=" << format_g17(fb.xi) << ": " << fb.error << "\n";
        json j{{"window", {{"a", w.a}, {"b", w.b}, {"h", w.h}}},
               {"mode", to_string(rep.mode)},
               {"normalize_sqrt_h", rep.normalize_sqrt_h},
               {"counted", rep.counted},
               {"predicted", rep.predicted},
               {"discrepancy", rep.discrepancy},
               {"xi_grid_size", rep.xi_grid_size},
               {"fallback_count", rep.fallback_count},
               {"failed_count", rep.failed_count},
               {"skipped_elliptic", rep.skipped_elliptic},
               {"csv21_warning", rep.csv21_warning},
               {"csv21_delta", rep.csv21_delta}};
        if (cfg.emit_fibers) {
            json fibers = json::array();
            for (const auto& fb : rep.fibers)
                fibers.push_back({{"xi", fb.xi},
                                  {"log_t0", std::isfinite(fb.log_t0) ? json(fb.log_t0) : json()},
                                  {"counted", fb.counted},
                                  {"source", to_string(fb.source)}});
            j["fibers"] = fibers;
        }
        out.push_back(j);
        t.rows.push_back({format_g17(w.a), format_g17(w.b), format_g17(w.h), to_string(rep.mode),
                          std::to_string(rep.counted), format_g17(rep.predicted),
                          format_g17(rep.discrepancy), std::to_string(rep.xi_grid_size),
                          std::to_string(rep.fallback_count), std::to_string(rep.failed_count),
                          std::to_string(rep.skipped_elliptic), rep.csv21_warning ? "1" : "0"});
        if (rep.csv21_warning)
            std::cerr << "warning: counting gate h <= delta^(3/2)/log(1/delta) violated"
                      << " (delta = " << format_g17(rep.csv21_delta) << ")\n";
        std::cerr << "weyl h=" << format_g17(h) << ": counted " << rep.counted << " vs predicted "
                  << format_g17(rep.predicted) << "\n";
    }
    std::ostream* os;
    auto guard = open_out(cfg, os);
    if (cfg.format == "csv")
        write_table(t, cfg, "weyl", *os);
    else
        *os << (out.size() == 1 ? out[0] : json(out)).dump(2) << "\n";
    return failed == 0 ? 0 : 2;
}

} // namespace

std::vector<double> parse_real_spec(const std::string& spec) {
    std::string s = trim(spec);
    if (s.empty()) return {};
    std::vector<double> vals;
    if (s.find(':') != std::string::npos) {
        std::stringstream ss(s);
        std::string lo_s, hi_s, st_s;
        if (!std::getline(ss, lo_s, ':') || !std::getline(ss, hi_s, ':') ||
            !std::getline(ss, st_s))
            throw ConfigError("range spec must be lo:hi:step, got '" + spec + "'");
        double lo = parse_double(trim(lo_s)), hi = parse_double(trim(hi_s)),
               st = parse_double(trim(st_s));
        if (st == 0.0) throw ConfigError("range step must be nonzero");
        if ((hi - lo) * st < 0.0) st = -st;
        double span = std::abs(hi - lo), astep = std::abs(st);
        long count = long(std::floor(span / astep + 1e-9)) + 1;
        for (long i = 0; i < count; ++i) vals.push_back(lo + double(i) * st);
        return vals;
    }
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (!item.empty()) vals.push_back(parse_double(item));
    }
    if (vals.empty()) throw ConfigError("empty value list: '" + spec + "'");
    return vals;
}

void load_config_file(const std::string& path,
                      std::vector<std::pair<std::string, std::string>>& kv) {
    std::ifstream f(path);
    if (!f) throw ConfigError("cannot open config file: " + path);
    std::string line;
    while (std::getline(f, line)) {
        std::string s = trim(line);
        if (s.empty() || s[0] == '#') continue;
        size_t eq = s.find('=');
        if (eq == std::string::npos)
            throw ConfigError("config line is not key = value: '" + line + "'");
        kv.emplace_back(trim(s.substr(0, eq)), trim(s.substr(eq + 1)));
    }
}

std::string format_g17(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

int run(const RunConfig& cfg_in) {
    RunConfig cfg = cfg_in;
    try {
        if (cfg.jobs < 1) throw ConfigError("--jobs must be >= 1");
        if (cfg.format.empty()) cfg.format = cfg.command == "weyl" ? "json" : "csv";
        if (cfg.format != "csv" && cfg.format != "json")
            throw ConfigError("--format must be csv or json");
        for (double h : cfg.h_values)
            if (!(h > 0.0 && h <= 1.0)) throw ConfigError("--h values must lie in ]0,1]");
        if (cfg.command == "tunneling") return run_tunneling(cfg);
        if (cfg.command == "predict") return run_predict(cfg);
        if (cfg.command == "overlap") return run_overlap(cfg);
        if (cfg.command == "scaling") return run_scaling(cfg);
        if (cfg.command == "resolvent") return run_resolvent(cfg);
        if (cfg.command == "weyl") return run_weyl(cfg);
        throw ConfigError("unknown command: " + cfg.command);
    } catch (const ConfigError& e) {
        std::cerr << "configuration error: " << e.what() << "\n";
        return 1;
    } catch (const DomainError& e) {
        std::cerr << "configuration error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}

int main_entry(int argc, const char* const* argv) {
    CLI::App app{"svlab: singular-value laboratory for semiclassical transport fibers"};
    app.require_subcommand(1);
    app.set_help_flag("--help", "print help"); // frees -h; --h is the semiclassical parameter

    struct Raw {
        std::string model = "cubic", xi, h, precision = "auto", mode = "numeric", format, out,
                    config, dump_matrix;
        double a = -1.0, b = -1.0, eta = -1.0, half_width = -1.0;
        int n_modes = -1, grid_points = -1, jobs = 1;
        bool normalize = false, emit_fibers = false;
    } raw;

    std::vector<CLI::App*> subs;
    for (const char* name : {"tunneling", "overlap", "scaling", "resolvent", "weyl", "predict"}) {
        CLI::App* sub = app.add_subcommand(name);
        sub->set_help_flag("--help", "print help");
        sub->add_option("--model", raw.model, "cubic or sine");
        sub->add_option("--xi", raw.xi, "xi list (comma) or range lo:hi:step");
        sub->add_option("--h", raw.h, "h list (comma) or range lo:hi:step");
        sub->add_option("--a", raw.a, "window exponent a");
        sub->add_option("--b", raw.b, "window exponent b");
        sub->add_option("--n-modes", raw.n_modes, "Fourier mode override (Sine)");
        sub->add_option("--grid-points", raw.grid_points, "grid point override (Cubic)");
        sub->add_option("--half-width", raw.half_width, "grid half-width override (Cubic)");
        sub->add_option("--precision", raw.precision, "standard, extended or auto");
        sub->add_option("--mode", raw.mode, "weyl: numeric or predicted");
        sub->add_flag("--normalize-sqrt-h", raw.normalize, "count log(t0/sqrt(h)) windows");
        sub->add_option("--jobs", raw.jobs, "worker count (default 1, reproducible)");
        sub->add_option("--format", raw.format, "csv or json");
        sub->add_option("--out", raw.out, "output path (default stdout)");
        sub->add_option("--eta", raw.eta, "overlap cut-off margin (Agmon units)");
        sub->add_option("--config", raw.config, "flat key=value config file");
        sub->add_flag("--emit-fibers", raw.emit_fibers, "weyl: include per-fiber rows");
        sub->add_option("--dump-matrix", raw.dump_matrix, "debug: triplet dump path");
        subs.push_back(sub);
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? 0 : 1;
    }

    CLI::App* active = nullptr;
    for (CLI::App* s : subs)
        if (s->parsed()) active = s;
    if (!active) return 1;

    try {
        // config file: flags override file entries; SVLAB_CONFIG is the fallback
        std::string config_path = raw.config;
        if (config_path.empty()) {
            const char* env = std::getenv("SVLAB_CONFIG");
            if (env && *env) config_path = env;
        }
        if (!config_path.empty()) {
            std::vector<std::pair<std::string, std::string>> kv;
            load_config_file(config_path, kv);
            for (const auto& [key, value] : kv) {
                std::string flag = "--" + key;
                if (active->count(flag) > 0) continue; // flag wins
                if (key == "model") raw.model = value;
                else if (key == "xi") raw.xi = value;
                else if (key == "h") raw.h = value;
                else if (key == "a") raw.a = parse_double(value);
                else if (key == "b") raw.b = parse_double(value);
                else if (key == "n-modes") raw.n_modes = int(parse_double(value));
                else if (key == "grid-points") raw.grid_points = int(parse_double(value));
                else if (key == "half-width") raw.half_width = parse_double(value);
                else if (key == "precision") raw.precision = value;
                else if (key == "mode") raw.mode = value;
                else if (key == "normalize-sqrt-h") raw.normalize = value == "true" || value == "1";
                else if (key == "jobs") raw.jobs = int(parse_double(value));
                else if (key == "format") raw.format = value;
                else if (key == "out") raw.out = value;
                else if (key == "eta") raw.eta = parse_double(value);
                else if (key == "emit-fibers") raw.emit_fibers = value == "true" || value == "1";
                else if (key == "dump-matrix") raw.dump_matrix = value;
                else throw ConfigError("unknown config key: " + key);
            }
        }

        RunConfig cfg;
        cfg.command = active->get_name();
        cfg.model = parse_model(raw.model);
        if (!raw.xi.empty()) cfg.xi_values = parse_real_spec(raw.xi);
        if (!raw.h.empty()) cfg.h_values = parse_real_spec(raw.h);
        cfg.a = raw.a;
        cfg.b = raw.b;
        cfg.n_modes = raw.n_modes;
        cfg.grid_points = raw.grid_points;
        cfg.half_width = raw.half_width;
        cfg.eta = raw.eta;
        cfg.precision = raw.precision;
        if (raw.mode == "numeric") cfg.weyl_mode = WeylMode::numeric;
        else if (raw.mode == "predicted" || raw.mode == "predicted_t0")
            cfg.weyl_mode = WeylMode::predicted_t0;
        else throw ConfigError("--mode must be numeric or predicted");
        cfg.normalize_sqrt_h = raw.normalize;
        cfg.jobs = raw.jobs;
        cfg.format = raw.format;
        cfg.out = raw.out;
        cfg.emit_fibers = raw.emit_fibers;
        cfg.dump_matrix = raw.dump_matrix;
        return run(cfg);
    } catch (const std::exception& e) {
        std::cerr << "configuration error: " << e.what() << "\n";
        return 1;
    }
}

} // namespace cli
} // namespace svlab
