#include "monohire/io.hpp"

#include "monohire/errors.hpp"
#include "monohire/format.hpp"

#include <cctype>
#include <fstream>
#include <map>
#include <sstream>

namespace monohire {

namespace {

using nlohmann::json;

double rounded(double x) { return round_significant(x); }

json rounded_array(const std::vector<double>& xs) {
    json out = json::array();
    for (double x : xs) out.push_back(rounded(x));
    return out;
}

// Splits "a-b" at the dash that separates the endpoints; a dash right after
// an exponent marker belongs to the number (1e-05-0.2).
Interval parse_interval(std::string_view text, std::size_t line_no) {
    text = trim(text);
    for (std::size_t p = 1; p < text.size(); ++p) {
        if (text[p] != '-' || text[p - 1] == 'e' || text[p - 1] == 'E') continue;
        const std::string what = "profile line " + std::to_string(line_no) + " interval";
        return {parse_double(text.substr(0, p), what), parse_double(text.substr(p + 1), what)};
    }
    throw ValidationError("profile line " + std::to_string(line_no) + ": interval '" +
                          std::string(text) + "' is not of the form lo-hi");
}

StrategyProfile assemble(std::map<long long, std::vector<Interval>> firms,
                         const ScoreDistribution& dist) {
    std::vector<Strategy> strategies;
    long long expected = 0;
    for (auto& [id, intervals] : firms) {
        if (id != expected) {
            throw ValidationError("profile firm ids must be 0..N-1; missing firm " +
                                  std::to_string(expected));
        }
        strategies.emplace_back(std::move(intervals), dist);
        ++expected;
    }
    return StrategyProfile(std::move(strategies));
}

}  // namespace

std::string format_profile_text(const StrategyProfile& profile) {
    std::string out;
    for (std::size_t i = 0; i < profile.size(); ++i) {
        out += std::to_string(i) + ":";
        bool first = true;
        for (const auto& iv : profile.strategy(i).intervals()) {
            out += first ? " " : ", ";
            out += format_number(iv.lo) + "-" + format_number(iv.hi);
            first = false;
        }
        out += "\n";
    }
    return out;
}

StrategyProfile parse_profile_text(std::string_view text, const ScoreDistribution& dist) {
    std::map<long long, std::vector<Interval>> firms;
    std::istringstream in{std::string(text)};
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
        const auto colon = body.find(':');
        if (colon == std::string_view::npos) {
            throw ValidationError("profile line " + std::to_string(line_no) +
                                  ": expected 'firm_id: lo-hi, ...'");
        }
        const long long id = parse_integer(body.substr(0, colon), "firm id");
        if (id < 0) throw ValidationError("profile firm ids must be >= 0");
        if (firms.count(id) != 0) {
            throw ValidationError("profile lists firm " + std::to_string(id) + " twice");
        }
        auto& intervals = firms[id];
        for (const auto& piece : split_list(body.substr(colon + 1))) {
            intervals.push_back(parse_interval(piece, line_no));
        }
    }
    if (firms.empty()) throw ValidationError("profile is empty");
    return assemble(std::move(firms), dist);
}

json profile_to_json(const StrategyProfile& profile) {
    json firms = json::array();
    for (const auto& s : profile.strategies()) {
        json ivs = json::array();
        for (const auto& iv : s.intervals()) ivs.push_back({rounded(iv.lo), rounded(iv.hi)});
        firms.push_back(std::move(ivs));
    }
    return json{{"firms", std::move(firms)}};
}

StrategyProfile profile_from_json(const json& doc, const ScoreDistribution& dist) {
    if (!doc.is_object() || !doc.contains("firms") || !doc["firms"].is_array()) {
        throw ValidationError("profile JSON needs a 'firms' array");
    }
    std::map<long long, std::vector<Interval>> firms;
    long long id = 0;
    for (const auto& f : doc["firms"]) {
        if (!f.is_array()) throw ValidationError("each firm must be an array of [lo, hi] pairs");
        auto& intervals = firms[id++];
        for (const auto& iv : f) {
            if (!iv.is_array() || iv.size() != 2 || !iv[0].is_number() || !iv[1].is_number()) {
                throw ValidationError("each interval must be a [lo, hi] pair of numbers");
            }
            intervals.push_back({iv[0].get<double>(), iv[1].get<double>()});
        }
    }
    if (firms.empty()) throw ValidationError("profile is empty");
    return assemble(std::move(firms), dist);
}

StrategyProfile parse_profile(std::string_view text, const ScoreDistribution& dist) {
    const std::string_view body = trim(text);
    if (!body.empty() && body.front() == '{') {
        json doc;
        try {
            doc = json::parse(body);
        } catch (const json::exception& e) {
            throw ValidationError(std::string("profile JSON: ") + e.what());
        }
        return profile_from_json(doc, dist);
    }
    return parse_profile_text(text, dist);
}

json distribution_to_json(const ScoreDistribution& dist) {
    json out{{"kind", to_string(dist.kind())}};
    if (dist.kind() != DensityKind::uniform) {
        out["breakpoints"] = rounded_array({dist.breakpoints().begin(), dist.breakpoints().end()});
        out["values"] =
            rounded_array({dist.density_values().begin(), dist.density_values().end()});
    }
    return out;
}

ScoreDistribution distribution_from_json(const json& doc) {
    if (!doc.is_object() || !doc.contains("kind") || !doc["kind"].is_string()) {
        throw ValidationError("distribution JSON needs a 'kind' string");
    }
    const DensityKind kind = parse_density_kind(doc["kind"].get<std::string>());
    if (kind == DensityKind::uniform) return ScoreDistribution::uniform();
    try {
        auto bp = doc.at("breakpoints").get<std::vector<double>>();
        auto vals = doc.at("values").get<std::vector<double>>();
        return kind == DensityKind::piecewise_constant
                   ? ScoreDistribution::piecewise_constant(std::move(bp), std::move(vals))
                   : ScoreDistribution::piecewise_linear(std::move(bp), std::move(vals));
    } catch (const json::exception& e) {
        throw ValidationError(std::string("distribution JSON: ") + e.what());
    }
}

json instance_to_json(const Instance& inst) {
    return json{{"n", inst.n_firms},
                {"c", rounded(inst.capacity)},
                {"scheme", to_string(inst.scheme)},
                {"distribution", distribution_to_json(inst.dist)}};
}

json report_to_json(const VerificationReport& report) {
    json violations = json::array();
    for (const auto& v : report.condition_violations) {
        violations.push_back(
            {{"condition", v.condition}, {"location", rounded(v.location)}, {"detail", v.detail}});
    }
    json out{{"is_equilibrium", report.is_equilibrium},
             {"behavioral_checked", report.behavioral_checked},
             {"max_deviation_gain", rounded(report.max_deviation_gain)},
             {"deviation_gains", rounded_array(report.deviation_gains)},
             {"condition_violations", std::move(violations)},
             {"notes", report.notes},
             {"tau", rounded_array(report.extracted.thresholds)},
             {"m_max", report.extracted.m_max},
             {"kind", to_string(classify(report.extracted))}};
    return out;
}

json solution_to_json(const EquilibriumSolution& sol, const Instance& inst,
                      const std::optional<VerificationReport>& report) {
    json out = instance_to_json(inst);
    out["level"] = rounded(sol.thresholds.level);
    out["tau"] = rounded_array(sol.thresholds.thresholds);
    out["m_max"] = sol.thresholds.m_max;
    out["kind"] = to_string(sol.kind);
    out["assignment"] = to_string(sol.method);
    out["firms"] = profile_to_json(sol.profile)["firms"];
    if (report) out["verification"] = report_to_json(*report);
    return out;
}

std::string format_trace_csv(const DynamicsTrace& trace) {
    std::string out = "round,firm,u_before,u_after,p_before,p_after\n";
    for (const auto& s : trace.steps) {
        out += std::to_string(s.round) + "," + std::to_string(s.firm) + "," +
               format_number(s.utility_before) + "," + format_number(s.utility_after) + "," +
               format_number(s.potential_before) + "," + format_number(s.potential_after) + "\n";
    }
    return out;
}

std::string dump_json(const json& doc) { return doc.dump(2) + "\n"; }

std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ArgumentError("cannot open '" + path + "' for reading");
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void write_text_file(const std::string& path, std::string_view content) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw ArgumentError("cannot open '" + path + "' for writing");
    out << content;
    if (!out) throw ArgumentError("failed writing '" + path + "'");
}

}  // namespace monohire
