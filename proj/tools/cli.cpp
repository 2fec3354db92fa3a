#include "cli.hpp"

#include "monohire/dynamics.hpp"
#include "monohire/equilibrium.hpp"
#include "monohire/errors.hpp"
#include "monohire/estimation.hpp"
#include "monohire/format.hpp"
#include "monohire/io.hpp"
#include "monohire/simulation.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>
#include <thread>

namespace monohire::cli {

namespace {

using nlohmann::json;

const std::vector<std::string> kCommands = {"solve",     "verify",     "dynamics",
                                            "one-turn",  "simulate",   "pons-sweep",
                                            "poa-sweep", "samples",    "flexcap"};

struct OptionSpec {
    const char* name;
    const char* help;
};

const std::vector<OptionSpec> kOptions = {
    {"n", "number of firms N"},
    {"c", "per-firm capacity c in (0, 1]"},
    {"scheme", "decision scheme: correlated | independent"},
    {"dist-file", "distribution file (kind/breakpoints/values)"},
    {"kind", "density kind: uniform | piecewise-constant | piecewise-linear"},
    {"breakpoints", "comma-separated density breakpoints"},
    {"values", "comma-separated density values"},
    {"profile", "strategy profile file (text or JSON)"},
    {"epsilon", "relative deviation tolerance (default 1e-6)"},
    {"max-rounds", "best-response dynamics round limit (default 200)"},
    {"seed", "Monte Carlo seed (default 1)"},
    {"applicants", "Monte Carlo sample size (default 1000000)"},
    {"threads", "worker threads, 0 = hardware (default 0)"},
    {"axis", "sweep axis: n | c"},
    {"grid", "sweep grid: list a,b,c or range a:b or a:b:step"},
    {"grid-size", "cells of the centralized-optimum grid (default 100000)"},
    {"p1", "hire probability of the weaker pool"},
    {"p2", "hire probability of the stronger pool"},
    {"q", "target probability, or a comma-separated list"},
    {"k-max", "largest sample count scanned (default 10000)"},
    {"p2-range", "p2 sweep start:stop:step"},
    {"welfare", "target welfare W for flexcap"},
    {"out", "output file ('-' for stdout); default under $MONOHIRE_OUT_DIR or ."},
    {"profile-out", "second output file (final profile / solution)"},
    {"format", "solution output format: json | text"},
};

std::string normalize_key(std::string key) {
    std::replace(key.begin(), key.end(), '_', '-');
    return key;
}

bool is_option(const std::string& key) {
    return std::any_of(kOptions.begin(), kOptions.end(),
                       [&](const OptionSpec& o) { return key == o.name; });
}

// Typed access to the merged option values.
class Options {
public:
    explicit Options(const std::map<std::string, std::string>& values) : values_(values) {}

    bool has(const std::string& key) const { return values_.count(key) != 0; }

    std::string text(const std::string& key, const std::string& fallback = "") const {
        const auto it = values_.find(key);
        return it == values_.end() ? fallback : it->second;
    }

    std::string required(const std::string& key) const {
        if (!has(key)) throw ArgumentError("missing required option --" + key);
        return text(key);
    }

    double real(const std::string& key) const { return parse_double(required(key), key); }
    double real(const std::string& key, double fallback) const {
        return has(key) ? parse_double(text(key), key) : fallback;
    }

    long long integer(const std::string& key) const { return parse_integer(required(key), key); }
    long long integer(const std::string& key, long long fallback) const {
        return has(key) ? parse_integer(text(key), key) : fallback;
    }

private:
    const std::map<std::string, std::string>& values_;
};

int checked_int(long long v, const std::string& key, long long lo) {
    if (v < lo || v > 1000000) {
        throw ArgumentError("--" + key + " must lie in [" + std::to_string(lo) + ", 1000000]");
    }
    return static_cast<int>(v);
}

ScoreDistribution distribution_from(const Options& opt) {
    if (opt.has("dist-file")) {
        if (opt.has("kind") || opt.has("breakpoints") || opt.has("values")) {
            throw ArgumentError("--dist-file cannot be combined with --kind/--breakpoints/--values");
        }
        return parse_distribution_config(read_text_file(opt.text("dist-file")));
    }
    return make_distribution(opt.text("kind", "uniform"), opt.text("breakpoints"),
                             opt.text("values"));
}

Instance instance_from(const Options& opt) {
    const int n = checked_int(opt.integer("n"), "n", 1);
    return Instance(n, opt.real("c"), distribution_from(opt),
                    parse_scheme(opt.text("scheme", "correlated")));
}

double epsilon_from(const Options& opt) {
    const double eps = opt.real("epsilon", 1e-6);
    if (!(eps > 0.0)) throw ArgumentError("--epsilon must be > 0");
    return eps;
}

std::size_t grid_size_from(const Options& opt) {
    const long long g = opt.integer("grid-size", static_cast<long long>(kDefaultGreedyGrid));
    if (g < 1 || g > 100000000) throw ArgumentError("--grid-size must lie in [1, 1e8]");
    return static_cast<std::size_t>(g);
}

unsigned threads_from(const Options& opt) {
    const long long t = opt.integer("threads", 0);
    if (t < 0 || t > 1024) throw ArgumentError("--threads must lie in [0, 1024]");
    return static_cast<unsigned>(t);
}

std::string output_dir() {
    const char* env = std::getenv("MONOHIRE_OUT_DIR");
    return env != nullptr && *env != '\0' ? std::string(env) : std::string(".");
}

// Resolves an output path: the explicit option, or `name` in the default directory.
std::string output_path(const Options& opt, const std::string& key, const std::string& name) {
    if (opt.has(key)) return opt.text(key);
    return (std::filesystem::path(output_dir()) / name).string();
}

void emit(const std::string& path, const std::string& content, std::ostream& out) {
    if (path == "-") {
        out << content;
        return;
    }
    const auto parent = std::filesystem::path(path).parent_path();
    if (!parent.empty()) std::filesystem::create_directories(parent);
    write_text_file(path, content);
}

std::string format_from(const Options& opt) {
    const std::string f = opt.text("format", "json");
    if (f != "json" && f != "text") throw ArgumentError("--format must be json or text");
    return f;
}

std::string extension(const Options& opt) { return format_from(opt) == "json" ? ".json" : ".txt"; }

std::string tau_list(const std::vector<double>& taus) {
    std::string s = "[";
    for (std::size_t i = 0; i < taus.size(); ++i) {
        if (i != 0) s += ",";
        s += format_number(taus[i]);
    }
    return s + "]";
}

// Grid syntax: "a,b,c", "a:b" (unit step) or "a:b:step".
std::vector<double> parse_grid(const std::string& text) {
    if (text.find(':') == std::string::npos) {
        auto values = parse_double_list(text, "grid");
        if (values.empty()) throw ArgumentError("--grid is empty");
        return values;
    }
    const auto parts = split_list(text, ':');
    if (parts.size() != 2 && parts.size() != 3) {
        throw ArgumentError("--grid range must be a:b or a:b:step");
    }
    const double a = parse_double(parts[0], "grid start");
    const double b = parse_double(parts[1], "grid stop");
    const double step = parts.size() == 3 ? parse_double(parts[2], "grid step") : 1.0;
    if (!(step > 0.0) || !(b >= a)) throw ArgumentError("--grid range needs a <= b and step > 0");
    const auto count = static_cast<long long>(std::floor((b - a) / step + 1e-9));
    if (count > 1000000) throw ArgumentError("--grid has too many points");
    std::vector<double> out;
    for (long long i = 0; i <= count; ++i) {
        out.push_back(round_significant(a + static_cast<double>(i) * step));
    }
    return out;
}

json welfare_json(const WelfareSummary& w) {
    return json{{"sw_naive", round_significant(w.sw_naive)},
                {"sw_ne", round_significant(w.sw_ne)},
                {"sw_max", round_significant(w.sw_max)},
                {"pons", round_significant(w.pons)},
                {"poa", round_significant(w.poa)}};
}

// ---------------------------------------------------------------------------
// Commands

int cmd_solve(const Options& opt, std::ostream& out) {
    const Instance inst = instance_from(opt);
    const ThresholdSet ts = solve_equal_utility_thresholds(inst);
    const EquilibriumSolution sol = assign_firms(ts, inst);
    const VerificationReport report = verify_equilibrium(sol.profile, inst, epsilon_from(opt));
    const std::string path = output_path(opt, "out", "solve" + extension(opt));
    if (format_from(opt) == "text") {
        emit(path, format_profile_text(sol.profile), out);
    } else {
        json doc = solution_to_json(sol, inst, report);
        doc["welfare"] = welfare_json(welfare_summary(inst, grid_size_from(opt)));
        emit(path, dump_json(doc), out);
    }
    out << "solve: level=" << format_number(ts.level) << " tau=" << tau_list(ts.thresholds)
        << " m_max=" << ts.m_max << " kind=" << to_string(sol.kind)
        << " assignment=" << to_string(sol.method)
        << " is_equilibrium=" << (report.is_equilibrium ? "true" : "false") << "\n";
    return kExitOk;
}

// Instance fields missing from the options are taken from a solution file.
std::map<std::string, std::string> with_instance_defaults(const Options& opt,
                                                          std::map<std::string, std::string> values,
                                                          const std::string& profile_text) {
    const std::string_view body = trim(profile_text);
    if (body.empty() || body.front() != '{') return values;
    json doc;
    try {
        doc = json::parse(body);
    } catch (const json::exception& e) {
        throw ValidationError(std::string("profile JSON: ") + e.what());
    }
    if (!opt.has("n") && doc.contains("n")) values["n"] = doc["n"].dump();
    if (!opt.has("c") && doc.contains("c")) values["c"] = format_number(doc["c"].get<double>());
    if (!opt.has("scheme") && doc.contains("scheme")) {
        values["scheme"] = doc["scheme"].get<std::string>();
    }
    const bool dist_given =
        opt.has("dist-file") || opt.has("kind") || opt.has("breakpoints") || opt.has("values");
    if (!dist_given && doc.contains("distribution")) {
        const json& d = doc["distribution"];
        values["kind"] = d.value("kind", "uniform");
        auto join = [](const json& arr) {
            std::string s;
            for (const auto& x : arr) s += (s.empty() ? "" : ",") + format_number(x.get<double>());
            return s;
        };
        if (d.contains("breakpoints")) values["breakpoints"] = join(d["breakpoints"]);
        if (d.contains("values")) values["values"] = join(d["values"]);
    }
    return values;
}

int cmd_verify(const std::map<std::string, std::string>& raw, std::ostream& out) {
    const Options base(raw);
    const std::string profile_text = read_text_file(base.required("profile"));
    const auto merged = with_instance_defaults(base, raw, profile_text);
    const Options opt(merged);
    const Instance inst = instance_from(opt);
    const StrategyProfile profile = parse_profile(profile_text, inst.dist);
    const VerificationReport report = verify_equilibrium(profile, inst, epsilon_from(opt));
    json doc = instance_to_json(inst);
    doc["verification"] = report_to_json(report);
    doc["firms"] = profile_to_json(profile)["firms"];
    emit(output_path(opt, "out", "verify.json"), dump_json(doc), out);
    out << "verify: is_equilibrium=" << (report.is_equilibrium ? "true" : "false")
        << " max_deviation_gain=" << format_number(report.max_deviation_gain)
        << " violations=" << report.condition_violations.size()
        << " kind=" << to_string(classify(report.extracted)) << "\n";
    return kExitOk;
}

void write_profile(const Options& opt, const std::string& name, const EquilibriumSolution& sol,
                   const Instance& inst, const std::optional<VerificationReport>& report,
                   std::ostream& out) {
    const std::string path = output_path(opt, "profile-out", name + extension(opt));
    if (format_from(opt) == "text") {
        emit(path, format_profile_text(sol.profile), out);
    } else {
        emit(path, dump_json(solution_to_json(sol, inst, report)), out);
    }
}

int cmd_dynamics(const Options& opt, std::ostream& out) {
    const Instance inst = instance_from(opt);
    const double eps = epsilon_from(opt);
    const int max_rounds = checked_int(opt.integer("max-rounds", 200), "max-rounds", 1);
    const StrategyProfile init = opt.has("profile")
                                     ? parse_profile(read_text_file(opt.text("profile")), inst.dist)
                                     : naive_profile(inst);
    const DynamicsResult result = run_best_response_dynamics(inst, init, eps, max_rounds);
    emit(output_path(opt, "out", "dynamics_trace.csv"), format_trace_csv(result.trace), out);

    EquilibriumSolution sol;
    sol.profile = result.profile;
    sol.thresholds = extract_thresholds(result.profile, inst);
    sol.kind = classify(sol.thresholds);
    const VerificationReport report = verify_equilibrium(result.profile, inst, eps);
    write_profile(opt, "dynamics_profile", sol, inst, report, out);

    out << "dynamics: converged=" << (result.trace.converged ? "true" : "false")
        << " rounds=" << result.trace.rounds_used << " updates=" << result.trace.steps.size()
        << " is_equilibrium=" << (report.is_equilibrium ? "true" : "false")
        << " tau=" << tau_list(sol.thresholds.thresholds) << "\n";
    return result.trace.converged ? kExitOk : kExitNumerical;
}

int cmd_one_turn(const Options& opt, std::ostream& out) {
    const Instance inst = instance_from(opt);
    const OneTurnResult result = run_one_turn_dynamics(inst);
    emit(output_path(opt, "out", "one_turn_trace.csv"), format_trace_csv(result.trace), out);
    write_profile(opt, "one_turn_solution", result.solution, inst, result.report, out);
    out << "one-turn: level=" << format_number(result.solution.thresholds.level)
        << " tau=" << tau_list(result.solution.thresholds.thresholds)
        << " max_threshold_gap=" << format_number(result.max_threshold_gap)
        << " is_equilibrium=" << (result.report.is_equilibrium ? "true" : "false") << "\n";
    return kExitOk;
}

int cmd_simulate(const Options& opt, std::ostream& out) {
    const Instance inst = instance_from(opt);
    const StrategyProfile profile =
        opt.has("profile") ? parse_profile(read_text_file(opt.text("profile")), inst.dist)
                           : assign_firms(solve_equal_utility_thresholds(inst), inst).profile;
    const long long applicants = opt.integer("applicants", 1000000);
    if (applicants < 1 || applicants > 10000000000LL) {
        throw ArgumentError("--applicants must lie in [1, 1e10]");
    }
    const long long seed = opt.integer("seed", 1);
    if (seed < 0) throw ArgumentError("--seed must be >= 0");
    const SimulationResult sim = simulate_hiring(profile, inst, applicants,
                                                 static_cast<std::uint64_t>(seed),
                                                 threads_from(opt));
    json firms = json::array();
    double max_z = 0.0;
    for (std::size_t i = 0; i < profile.size(); ++i) {
        const double analytic = firm_utility(profile, i, inst);
        const double z = sim.hire_se[i] > 0.0 ? (sim.hire_rate[i] - analytic) / sim.hire_se[i] : 0.0;
        max_z = std::max(max_z, std::abs(z));
        firms.push_back({{"firm", i},
                         {"hire_rate", round_significant(sim.hire_rate[i])},
                         {"standard_error", round_significant(sim.hire_se[i])},
                         {"analytic", round_significant(analytic)},
                         {"z", round_significant(z)}});
    }
    json doc = instance_to_json(inst);
    doc["applicants"] = applicants;
    doc["seed"] = seed;
    doc["firms"] = std::move(firms);
    doc["welfare"] = round_significant(sim.welfare);
    doc["welfare_se"] = round_significant(sim.welfare_se);
    doc["analytic_welfare"] = round_significant(social_welfare(profile, inst));
    emit(output_path(opt, "out", "simulate.json"), dump_json(doc), out);
    out << "simulate: applicants=" << applicants << " welfare=" << format_number(sim.welfare)
        << " se=" << format_number(sim.welfare_se)
        << " analytic=" << format_number(social_welfare(profile, inst))
        << " max_abs_z=" << format_number(max_z) << "\n";
    return kExitOk;
}

struct SweepRow {
    int n = 0;
    double c = 0.0;
    WelfareSummary w;
    std::string status = "ok";
};

int cmd_sweep(const Options& opt, const std::string& command, std::ostream& out,
              std::ostream& err) {
    const std::string axis = opt.required("axis");
    if (axis != "n" && axis != "c") throw ArgumentError("--axis must be n or c");
    const std::vector<double> grid = parse_grid(opt.required("grid"));
    const ScoreDistribution dist = distribution_from(opt);
    const DecisionScheme scheme = parse_scheme(opt.text("scheme", "correlated"));
    const std::size_t cells = grid_size_from(opt);

    std::vector<SweepRow> rows(grid.size());
    for (std::size_t k = 0; k < grid.size(); ++k) {
        if (axis == "n") {
            const double v = grid[k];
            if (v != std::floor(v)) throw ArgumentError("--grid values must be integers on axis n");
            rows[k].n = checked_int(static_cast<long long>(v), "grid", 1);
            rows[k].c = opt.real("c");
        } else {
            rows[k].n = checked_int(opt.integer("n"), "n", 1);
            rows[k].c = grid[k];
        }
    }

    auto evaluate = [&](SweepRow& row) {
        try {
            row.w = welfare_summary(Instance(row.n, row.c, dist, scheme), cells);
        } catch (const ArgumentError& e) {
            row.status = std::string("argument_error: ") + e.what();
        } catch (const std::exception& e) {
            row.status = std::string("numerical_error: ") + e.what();
        }
    };
    unsigned threads = threads_from(opt);
    if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
    threads = static_cast<unsigned>(std::min<std::size_t>(threads, rows.size()));
    if (threads <= 1) {
        for (auto& row : rows) evaluate(row);
    } else {
        std::vector<std::jthread> workers;
        for (unsigned t = 0; t < threads; ++t) {
            workers.emplace_back([&, t] {
                for (std::size_t k = t; k < rows.size(); k += threads) evaluate(rows[k]);
            });
        }
    }

    std::string csv = "n,c,scheme,sw_naive,sw_ne,sw_max,pons,poa,status\n";
    std::size_t failed = 0;
    for (const auto& row : rows) {
        const bool ok = row.status == "ok";
        auto cell = [&](double v) { return ok ? format_number(v) : std::string("NA"); };
        std::string status = row.status;
        std::replace(status.begin(), status.end(), ',', ';');
        csv += std::to_string(row.n) + "," + format_number(row.c) + "," + to_string(scheme) + "," +
               cell(row.w.sw_naive) + "," + cell(row.w.sw_ne) + "," + cell(row.w.sw_max) + "," +
               cell(row.w.pons) + "," + cell(row.w.poa) + "," + status + "\n";
        if (!ok) {
            ++failed;
            err << command << ": row n=" << row.n << " c=" << format_number(row.c) << ": "
                << row.status << "\n";
        }
    }
    const std::string name = command == "pons-sweep" ? "pons_sweep.csv" : "poa_sweep.csv";
    emit(output_path(opt, "out", name), csv, out);

    const SweepRow& last = rows.back();
    out << command << ": rows=" << rows.size() << " failed=" << failed << " last n=" << last.n
        << " c=" << format_number(last.c);
    if (last.status == "ok") {
        out << (command == "pons-sweep" ? " pons=" : " poa=")
            << format_number(command == "pons-sweep" ? last.w.pons : last.w.poa);
    }
    out << "\n";
    return kExitOk;
}

int cmd_samples(const Options& opt, std::ostream& out) {
    const double p1 = opt.real("p1");
    const std::vector<double> qs = parse_double_list(opt.required("q"), "q");
    const long long k_max = opt.integer("k-max", kDefaultSampleLimit);
    if (qs.empty()) throw ArgumentError("--q needs at least one value");

    if (!opt.has("p2-range") && qs.size() == 1) {
        const long long k = min_samples(p1, opt.real("p2"), qs.front(), k_max);
        out << k << "\n";
        return kExitOk;
    }
    std::vector<SampleRow> rows;
    if (opt.has("p2-range")) {
        const auto parts = split_list(opt.text("p2-range"), ':');
        if (parts.size() != 3) throw ArgumentError("--p2-range must be start:stop:step");
        rows = sweep_sample_complexity(p1, parse_double(parts[0], "p2-range start"),
                                       parse_double(parts[1], "p2-range stop"),
                                       parse_double(parts[2], "p2-range step"), qs, k_max);
    } else {
        const double p2 = opt.real("p2");
        rows = sweep_sample_complexity(p1, p2, p2, 1.0, qs, k_max);
    }
    emit(output_path(opt, "out", "samples.csv"), format_sample_table(rows), out);
    const auto unresolved = std::count_if(rows.begin(), rows.end(),
                                          [](const SampleRow& r) { return !r.resolved(); });
    out << "samples: rows=" << rows.size() << " unresolved=" << unresolved << "\n";
    return kExitOk;
}

int cmd_flexcap(const Options& opt, std::ostream& out) {
    const int n = checked_int(opt.integer("n"), "n", 1);
    const double w = opt.real("welfare");
    const ScoreDistribution dist = distribution_from(opt);
    const DecisionScheme scheme = parse_scheme(opt.text("scheme", "correlated"));
    const FlexCapacityResult r = ne_with_capacity_over_n(w, n, dist, scheme);
    json doc = solution_to_json(r.solution, r.instance, r.report);
    doc["target_welfare"] = round_significant(w);
    doc["welfare"] = round_significant(r.welfare);
    doc["threshold"] = round_significant(r.threshold);
    doc["total_capacity"] = round_significant(r.total_capacity);
    doc["naive_capacity"] = round_significant(r.naive_capacity);
    doc["naive_total_capacity"] = round_significant(r.naive_capacity * n);
    emit(output_path(opt, "out", "flexcap.json"), dump_json(doc), out);
    out << "flexcap: threshold=" << format_number(r.threshold)
        << " total_capacity=" << format_number(r.total_capacity)
        << " firm_capacity=" << format_number(r.instance.capacity)
        << " naive_total_capacity=" << format_number(r.naive_capacity * n)
        << " welfare=" << format_number(r.welfare) << "\n";
    return kExitOk;
}

}  // namespace

const std::vector<std::string>& command_names() { return kCommands; }

const std::vector<std::string>& option_names() {
    static const std::vector<std::string> names = [] {
        std::vector<std::string> out;
        for (const auto& o : kOptions) out.emplace_back(o.name);
        return out;
    }();
    return names;
}

std::map<std::string, std::string> parse_config_text(const std::string& text) {
    std::map<std::string, std::string> out;
    std::istringstream in(text);
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        std::string_view body = line;
        if (const auto hash = body.find('#'); hash != std::string_view::npos) {
            body = body.substr(0, hash);
        }
        body = trim(body);
        if (body.empty()) continue;
        const auto eq = body.find('=');
        if (eq == std::string_view::npos) {
            throw ArgumentError("config line " + std::to_string(line_no) + ": expected key = value");
        }
        const std::string key = normalize_key(std::string(trim(body.substr(0, eq))));
        if (key == "command") {
            // Allowed so a config file can name its command.
        } else if (!is_option(key)) {
            throw ArgumentError("config line " + std::to_string(line_no) + ": unknown key '" +
                                key + "'");
        }
        if (out.count(key) != 0) {
            throw ArgumentError("config line " + std::to_string(line_no) + ": duplicate key '" +
                                key + "'");
        }
        out[key] = std::string(trim(body.substr(eq + 1)));
    }
    return out;
}

int run(const RunConfig& config, std::ostream& out, std::ostream& err) {
    try {
        for (const auto& [key, value] : config.values) {
            if (!is_option(key)) throw ArgumentError("unknown option '" + key + "'");
        }
        const Options opt(config.values);
        const std::string& cmd = config.command;
        if (cmd == "solve") return cmd_solve(opt, out);
        if (cmd == "verify") return cmd_verify(config.values, out);
        if (cmd == "dynamics") return cmd_dynamics(opt, out);
        if (cmd == "one-turn") return cmd_one_turn(opt, out);
        if (cmd == "simulate") return cmd_simulate(opt, out);
        if (cmd == "pons-sweep" || cmd == "poa-sweep") return cmd_sweep(opt, cmd, out, err);
        if (cmd == "samples") return cmd_samples(opt, out);
        if (cmd == "flexcap") return cmd_flexcap(opt, out);
        throw ArgumentError("unknown command '" + cmd + "'");
    } catch (const ArgumentError& e) {
        err << "error: " << e.what() << "\n";
        return kExitArgument;
    } catch (const ConvergenceError& e) {
        err << "error: " << e.what() << "\n";
        err << "best profile:\n" << format_profile_text(e.best_profile());
        return kExitNumerical;
    } catch (const std::filesystem::filesystem_error& e) {
        err << "error: " << e.what() << "\n";
        return kExitArgument;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kExitNumerical;
    }
}

int main_entry(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Equilibria, welfare ratios, dynamics and sample complexity for "
                 "capacity-constrained hiring under a shared scoring algorithm"};
    app.name("monohire");
    std::string command;
    std::string config_path;
    app.add_option("command", command, "one of: solve, verify, dynamics, one-turn, simulate, "
                                       "pons-sweep, poa-sweep, samples, flexcap")
        ->check(CLI::IsMember(kCommands));
    app.add_option("--config", config_path, "flat key = value file; flags override it");

    std::map<std::string, std::string> flags;
    std::map<std::string, CLI::Option*> handles;
    for (const auto& o : kOptions) {
        handles[o.name] = app.add_option(std::string("--") + o.name, flags[o.name], o.help);
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitArgument;
    }

    RunConfig config;
    try {
        if (!config_path.empty()) config.values = parse_config_text(read_text_file(config_path));
    } catch (const ArgumentError& e) {
        err << "error: " << e.what() << "\n";
        return kExitArgument;
    }
    for (const auto& [name, handle] : handles) {
        if (handle->count() > 0) config.values[name] = flags[name];
    }
    auto from_file = config.values.find("command");
    if (command.empty() && from_file != config.values.end()) command = from_file->second;
    if (from_file != config.values.end()) config.values.erase(from_file);
    if (command.empty()) {
        err << "error: a command is required (" << app.get_option("command")->get_description()
            << ")\n";
        return kExitArgument;
    }
    config.command = command;
    return run(config, out, err);
}

}  // namespace monohire::cli
