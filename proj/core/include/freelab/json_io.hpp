// File formats: spaces, systems and measures as JSON (rationals as exact
// "p/q" strings), search certificates and resumable frontiers, and the
// experiment report JSON/CSV pair.
#pragma once

#include "freelab/circle_search.hpp"
#include "freelab/measure.hpp"
#include "freelab/metric_space.hpp"
#include "freelab/retraction.hpp"

#include <json.hpp>

#include <iosfwd>
#include <string>
#include <vector>

namespace freelab {

using Json = nlohmann::json;

Json space_to_json(const PointedMetricSpace& s);
PointedMetricSpace space_from_json(const Json& j);

Json system_to_json(const RetractionSystem& sys);
RetractionSystem system_from_json(const PointedMetricSpace& space, const Json& j);

/// Inline form "x1:1,x2:1,x3:-2" with exact rational coefficients.
Measure measure_from_string(const PointedMetricSpace& space, const std::string& text);
/// {"x1": "1", ...} or [["x1", "1"], ...].
Measure measure_from_json(const PointedMetricSpace& space, const Json& j);
/// CSV lines "label,coeff" (a "label,coeff" header row is skipped).
Measure measure_from_csv(const PointedMetricSpace& space, std::istream& in);
Json measure_to_json(const Measure& mu);

Json target_to_json(const LipTarget& t);
LipTarget target_from_json(const Json& j);

Json certificate_to_json(const SearchCertificate& cert);
/// Resumable frontier checkpoint (format documented in the README).
Json frontier_to_json(const SearchCertificate& cert);
std::vector<SearchPrefix> frontier_from_json(const Json& j, int expect_n);

Json load_json_file(const std::string& path);
void save_json_file(const std::string& path, const Json& j);

struct ExperimentReport {
  std::string id;
  Json inputs;  // echo of everything needed to reproduce, seeds included
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;
  std::string version;
  double wall_seconds = 0;
};

Json report_to_json(const ExperimentReport& rep);
std::string report_to_csv(const ExperimentReport& rep);
/// Writes <outdir>/<id>.json and <outdir>/<id>.csv, returns the JSON path.
std::string write_report_files(const ExperimentReport& rep, const std::string& outdir);

}  // namespace freelab
