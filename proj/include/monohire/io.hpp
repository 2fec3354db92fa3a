// Profile text/JSON formats and result serializers.
//
// Profile text format, one firm per line with 0-based ids:
//
//   0: 0.8-1
//   1: 0.6-0.8
//   2: 0.4-0.55, 0.8-1
//
// A line with nothing after the colon is an empty strategy. The JSON form is
// {"firms": [[[lo, hi], ...], ...]}; solution files written by `solve` are
// accepted as profiles.
#pragma once

#include "monohire/dynamics.hpp"
#include "monohire/equilibrium.hpp"
#include "monohire/market_model.hpp"

#include <json.hpp>

#include <optional>
#include <string>
#include <string_view>

namespace monohire {

std::string format_profile_text(const StrategyProfile& profile);
StrategyProfile parse_profile_text(std::string_view text, const ScoreDistribution& dist);

nlohmann::json profile_to_json(const StrategyProfile& profile);
StrategyProfile profile_from_json(const nlohmann::json& doc, const ScoreDistribution& dist);

// Dispatches on the first non-blank character: '{' means JSON.
StrategyProfile parse_profile(std::string_view text, const ScoreDistribution& dist);

nlohmann::json distribution_to_json(const ScoreDistribution& dist);
ScoreDistribution distribution_from_json(const nlohmann::json& doc);

nlohmann::json instance_to_json(const Instance& inst);

nlohmann::json report_to_json(const VerificationReport& report);

// Instance, thresholds, per-firm intervals, kind and, when given, the
// verification report. Every number is rounded to 12 significant digits.
nlohmann::json solution_to_json(const EquilibriumSolution& sol, const Instance& inst,
                                const std::optional<VerificationReport>& report = std::nullopt);

// Header `round,firm,u_before,u_after,p_before,p_after`.
std::string format_trace_csv(const DynamicsTrace& trace);

// Pretty-printed JSON with a trailing newline.
std::string dump_json(const nlohmann::json& doc);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, std::string_view content);

}  // namespace monohire
