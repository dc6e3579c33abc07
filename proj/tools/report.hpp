#pragma once

// Text and JSON renderings of analysis results. Every JSON document starts
// with "format": 1 and uses a fixed key order.

#include <json.hpp>
#include <string>
#include <vector>

#include "dramv/analysis.hpp"
#include "dramv/petri.hpp"
#include "dramv/trace.hpp"

namespace dramv::report {

using Json = nlohmann::ordered_json;

Json check_json(const VerdictReport& r, const std::vector<std::string>& trace_names);
std::string check_text(const VerdictReport& r, const std::vector<std::string>& trace_names, bool color);

Json coverage_json(const VerdictReport& r, const FeatureCoverageSummary& c);
std::string coverage_text(const VerdictReport& r, const FeatureCoverageSummary& c);

Json sweep_json(const SlackSweepResult& s);
std::string sweep_text(const SlackSweepResult& s);

Json diff_json(const UpgradeDiff& d, const std::string& base, const std::string& target);

Json explore_json(const ReachabilitySummary& s);
std::string explore_text(const ReachabilitySummary& s);

/// True unless NO_COLOR is set or stdout is not a terminal.
bool use_color();

}  // namespace dramv::report
