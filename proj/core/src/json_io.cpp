#include "freelab/json_io.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>

namespace freelab {

Json space_to_json(const PointedMetricSpace& s) {
  Json j;
  j["points"] = s.labels();
  j["base"] = s.base();
  j["exact"] = s.exact();
  Json rows = Json::array();
  for (int i = 0; i < s.size(); ++i) {
    Json row = Json::array();
    for (int k = 0; k < s.size(); ++k) {
      if (s.exact()) row.push_back(rational_str(s.dist_q(i, k)));
      else row.push_back(s.dist_d(i, k));
    }
    rows.push_back(std::move(row));
  }
  j["dist"] = std::move(rows);
  return j;
}

PointedMetricSpace space_from_json(const Json& j) {
  if (!j.is_object() || !j.contains("points") || !j.contains("dist") || !j.contains("base"))
    throw std::invalid_argument("space JSON needs 'points', 'base' and 'dist'");
  std::vector<std::string> labels = j.at("points").get<std::vector<std::string>>();
  const int base = j.at("base").get<int>();
  const bool exact = j.value("exact", true);
  const auto& rows = j.at("dist");
  const std::size_t n = labels.size();
  if (!rows.is_array() || rows.size() != n)
    throw std::invalid_argument("space JSON: 'dist' must be an n-by-n matrix");
  if (exact) {
    std::vector<Rational> d;
    d.reserve(n * n);
    for (std::size_t r = 0; r < n; ++r) {
      const auto& row = rows[r];
      if (!row.is_array() || row.size() != n)
        throw std::invalid_argument("space JSON: row " + std::to_string(r) + " has wrong length");
      for (const auto& cell : row) {
        if (cell.is_string()) d.push_back(parse_rational(cell.get<std::string>()));
        else if (cell.is_number_integer()) d.push_back(Rational(cell.get<long long>()));
        else
          throw std::invalid_argument(
              "space JSON: exact distances must be 'p/q' strings or integers");
      }
    }
    return PointedMetricSpace(std::move(labels), std::move(d), base);
  }
  std::vector<double> d;
  d.reserve(n * n);
  for (std::size_t r = 0; r < n; ++r) {
    const auto& row = rows[r];
    if (!row.is_array() || row.size() != n)
      throw std::invalid_argument("space JSON: row " + std::to_string(r) + " has wrong length");
    for (const auto& cell : row) {
      if (!cell.is_number()) throw std::invalid_argument("space JSON: float distances must be numbers");
      d.push_back(cell.get<double>());
    }
  }
  return PointedMetricSpace(std::move(labels), std::move(d), base);
}

Json system_to_json(const RetractionSystem& sys) {
  Json j;
  Json order = Json::array();
  for (int k = 0; k < sys.points(); ++k) order.push_back(sys.space().label(sys.point_at(k)));
  j["order"] = std::move(order);
  Json parent = Json::object();
  for (int k = 1; k < sys.points(); ++k)
    parent[sys.space().label(sys.point_at(k))] =
        sys.space().label(sys.point_at(sys.parent_pos(k)));
  j["parent"] = std::move(parent);
  return j;
}

RetractionSystem system_from_json(const PointedMetricSpace& space, const Json& j) {
  if (!j.is_object() || !j.contains("order") || !j.contains("parent"))
    throw std::invalid_argument("system JSON needs 'order' and 'parent'");
  std::vector<int> order;
  for (const auto& lbl : j.at("order")) {
    const int idx = space.index_of(lbl.get<std::string>());
    if (idx < 0) throw std::invalid_argument("system JSON: unknown point '" + lbl.get<std::string>() + "'");
    order.push_back(idx);
  }
  std::vector<std::pair<int, int>> parents;
  for (const auto& [child, parent] : j.at("parent").items()) {
    const int c = space.index_of(child);
    const int p = space.index_of(parent.get<std::string>());
    if (c < 0 || p < 0)
      throw std::invalid_argument("system JSON: unknown point in parent map");
    parents.emplace_back(c, p);
  }
  return build_system(space, order, parents);
}

namespace {

std::pair<std::string, std::string> split_once(const std::string& s, char sep) {
  const auto pos = s.find(sep);
  if (pos == std::string::npos)
    throw std::invalid_argument("expected '" + std::string(1, sep) + "' in '" + s + "'");
  return {s.substr(0, pos), s.substr(pos + 1)};
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

int label_index(const PointedMetricSpace& space, const std::string& label) {
  const int idx = space.index_of(label);
  if (idx < 0) throw std::invalid_argument("unknown point '" + label + "'");
  return idx;
}

}  // namespace

Measure measure_from_string(const PointedMetricSpace& space, const std::string& text) {
  SparseVec coeffs;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (item.empty()) continue;
    auto [label, coeff] = split_once(item, ':');
    coeffs.emplace_back(label_index(space, trim(label)), parse_rational(trim(coeff)));
  }
  return Measure(space, std::move(coeffs));
}

Measure measure_from_json(const PointedMetricSpace& space, const Json& j) {
  SparseVec coeffs;
  auto parse_coeff = [](const Json& v) {
    if (v.is_string()) return parse_rational(v.get<std::string>());
    if (v.is_number_integer()) return Rational(v.get<long long>());
    throw std::invalid_argument("measure coefficients must be 'p/q' strings or integers");
  };
  if (j.is_object()) {
    for (const auto& [label, v] : j.items())
      coeffs.emplace_back(label_index(space, label), parse_coeff(v));
  } else if (j.is_array()) {
    for (const auto& entry : j) {
      if (!entry.is_array() || entry.size() != 2)
        throw std::invalid_argument("measure entries must be [label, coeff] pairs");
      coeffs.emplace_back(label_index(space, entry[0].get<std::string>()), parse_coeff(entry[1]));
    }
  } else {
    throw std::invalid_argument("measure JSON must be an object or an array of pairs");
  }
  return Measure(space, std::move(coeffs));
}

Measure measure_from_csv(const PointedMetricSpace& space, std::istream& in) {
  SparseVec coeffs;
  std::string line;
  bool first = true;
  while (std::getline(in, line)) {
    line = trim(line);
    if (line.empty()) continue;
    if (first && line == "label,coeff") {
      first = false;
      continue;
    }
    first = false;
    auto [label, coeff] = split_once(line, ',');
    coeffs.emplace_back(label_index(space, trim(label)), parse_rational(trim(coeff)));
  }
  return Measure(space, std::move(coeffs));
}

Json measure_to_json(const Measure& mu) {
  Json j = Json::object();
  for (const auto& [i, v] : mu.coeffs()) j[mu.space().label(i)] = rational_str(v);
  return j;
}

Json target_to_json(const LipTarget& t) {
  Json j;
  if (t.kind == LipTarget::Kind::SqrtForm) {
    j["kind"] = "sqrt-form";
    j["radicand"] = t.radicand;
  } else {
    j["kind"] = "rational";
    j["value"] = rational_str(t.value);
  }
  j["approx"] = t.approx();
  return j;
}

LipTarget target_from_json(const Json& j) {
  const std::string kind = j.at("kind").get<std::string>();
  if (kind == "sqrt-form") return LipTarget::sqrt_form(j.at("radicand").get<long long>());
  if (kind == "rational") return LipTarget::exact(parse_rational(j.at("value").get<std::string>()));
  throw std::invalid_argument("unknown target kind '" + kind + "'");
}

namespace {

Json prefix_to_json(const SearchPrefix& p) {
  Json a = Json::array();
  for (const auto& [pt, par] : p) a.push_back(Json::array({pt, par}));
  return a;
}

SearchPrefix prefix_from_json(const Json& j) {
  SearchPrefix p;
  for (const auto& e : j) {
    if (!e.is_array() || e.size() != 2) throw std::invalid_argument("bad frontier entry");
    p.emplace_back(e[0].get<int>(), e[1].get<int>());
  }
  return p;
}

}  // namespace

Json certificate_to_json(const SearchCertificate& cert) {
  Json j;
  j["n"] = cert.n;
  j["target"] = target_to_json(cert.target);
  switch (cert.outcome) {
    case SearchOutcome::Certified: j["outcome"] = "certified"; break;
    case SearchOutcome::Counterexample: j["outcome"] = "counterexample"; break;
    case SearchOutcome::Indeterminate: j["outcome"] = "indeterminate"; break;
  }
  j["nodes_explored"] = cert.nodes_explored;
  j["wall_seconds"] = cert.wall_seconds;
  if (cert.outcome == SearchOutcome::Counterexample) {
    j["counterexample"] = prefix_to_json(cert.counterexample);
  }
  j["frontier_size"] = cert.frontier.size();
  return j;
}

Json frontier_to_json(const SearchCertificate& cert) {
  Json j;
  j["format"] = "freelab-search-frontier";
  j["version"] = 1;
  j["n"] = cert.n;
  j["target"] = target_to_json(cert.target);
  Json jobs = Json::array();
  for (const auto& p : cert.frontier) jobs.push_back(prefix_to_json(p));
  j["jobs"] = std::move(jobs);
  return j;
}

std::vector<SearchPrefix> frontier_from_json(const Json& j, int expect_n) {
  if (j.value("format", "") != "freelab-search-frontier")
    throw std::invalid_argument("not a freelab search frontier file");
  if (j.at("n").get<int>() != expect_n)
    throw std::invalid_argument("frontier file is for a different circle size");
  std::vector<SearchPrefix> jobs;
  for (const auto& e : j.at("jobs")) jobs.push_back(prefix_from_json(e));
  return jobs;
}

Json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open '" + path + "'");
  Json j;
  try {
    in >> j;
  } catch (const std::exception& e) {
    throw std::invalid_argument("parse error in '" + path + "': " + e.what());
  }
  return j;
}

void save_json_file(const std::string& path, const Json& j) {
  std::ofstream out(path);
  if (!out) throw std::invalid_argument("cannot write '" + path + "'");
  out << j.dump(2) << "\n";
}

Json report_to_json(const ExperimentReport& rep) {
  Json j;
  j["experiment"] = rep.id;
  j["inputs"] = rep.inputs;
  j["columns"] = rep.columns;
  j["rows"] = rep.rows;
  j["version"] = rep.version;
  j["wall_seconds"] = rep.wall_seconds;
  return j;
}

namespace {

std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += "\"\"";
    else out += c;
  }
  out += "\"";
  return out;
}

}  // namespace

std::string report_to_csv(const ExperimentReport& rep) {
  std::ostringstream os;
  for (std::size_t c = 0; c < rep.columns.size(); ++c) {
    if (c) os << ",";
    os << csv_escape(rep.columns[c]);
  }
  os << "\n";
  for (const auto& row : rep.rows) {
    for (std::size_t c = 0; c < row.size(); ++c) {
      if (c) os << ",";
      os << csv_escape(row[c]);
    }
    os << "\n";
  }
  return os.str();
}

std::string write_report_files(const ExperimentReport& rep, const std::string& outdir) {
  std::filesystem::create_directories(outdir);
  const std::string stem = (std::filesystem::path(outdir) / rep.id).string();
  save_json_file(stem + ".json", report_to_json(rep));
  std::ofstream csv(stem + ".csv");
  if (!csv) throw std::invalid_argument("cannot write '" + stem + ".csv'");
  csv << report_to_csv(rep);
  return stem + ".json";
}

}  // namespace freelab
