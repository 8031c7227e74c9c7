#include "rscale/lab.hpp"

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "rscale/serialize.hpp"

namespace rscale::lab {

namespace {

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return "";
  const auto b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}

}  // namespace

ExperimentConfig ExperimentConfig::parse(std::istream& in) {
  ExperimentConfig config;
  bool saw_bvp = false;
  std::string section;
  std::string line;
  while (std::getline(in, line)) {
    const auto hash_pos = line.find('#');
    if (hash_pos != std::string::npos) line.erase(hash_pos);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') throw std::invalid_argument("config: bad section '" + line + "'");
      section = trim(line.substr(1, line.size() - 2));
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw std::invalid_argument("config: expected key = value, got '" + line + "'");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));

    if (section.empty()) {
      if (key == "suite") {
        config.suite = value;
      } else if (key == "seed") {
        config.seed = std::stoull(value);
      } else if (key == "sample") {
        config.sample = std::stoi(value);
      } else if (key == "truncations") {
        config.truncations.clear();
        std::istringstream vs(value);
        int k = 0;
        while (vs >> k) config.truncations.push_back(k);
      } else if (key == "indices") {
        config.indices.clear();
        std::size_t pos = 0;
        while (pos <= value.size()) {
          auto bar = value.find('|', pos);
          if (bar == std::string::npos) bar = value.size();
          const std::string one = trim(value.substr(pos, bar - pos));
          if (!one.empty()) config.indices.push_back(SpaceIndex::parse(one));
          pos = bar + 1;
        }
      } else if (key == "output") {
        config.output = value;
      } else {
        throw std::invalid_argument("config: unknown key '" + key + "'");
      }
    } else if (section == "bvp") {
      saw_bvp = true;
      if (key == "q") {
        config.bvp.q = std::stoi(value);
        config.bvp.boundary_orders.resize(config.bvp.q);
        for (int j = 0; j < config.bvp.q; ++j) config.bvp.boundary_orders[j] = j;
      } else if (key == "c") {
        config.bvp.c = std::stod(value);
      } else if (key == "m") {
        config.bvp.boundary_orders.clear();
        std::istringstream vs(value);
        std::string tok;
        while (std::getline(vs, tok, ',')) config.bvp.boundary_orders.push_back(std::stoi(tok));
      } else {
        throw std::invalid_argument("config: unknown [bvp] key '" + key + "'");
      }
    } else if (section == "tolerances") {
      config.tolerances[key] = std::stod(value);
    } else {
      throw std::invalid_argument("config: unknown section '" + section + "'");
    }
  }
  (void)saw_bvp;
  config.validate();
  return config;
}

ExperimentConfig ExperimentConfig::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("config: cannot open '" + path + "'");
  return parse(in);
}

void ExperimentConfig::validate() const {
  if (suite.empty()) throw std::invalid_argument("config: missing suite name");
  if (sample < 1) throw std::invalid_argument("config: sample must be >= 1");
  if (truncations.empty()) throw std::invalid_argument("config: need at least one truncation");
  for (std::size_t i = 1; i < truncations.size(); ++i)
    if (truncations[i] <= truncations[i - 1])
      throw std::invalid_argument("config: truncations must increase");
  for (const auto& [key, value] : tolerances)
    if (value < 1e-15)
      throw std::invalid_argument("config: tolerance '" + key + "' below machine floor");
  bvp.validate();
}

std::string ExperimentConfig::canonical() const {
  std::ostringstream out;
  out << "suite=" << suite << ";seed=" << seed << ";sample=" << sample << ";truncations=";
  for (int k : truncations) out << k << ",";
  out << ";indices=";
  for (const SpaceIndex& idx : indices) out << idx.format() << "|";
  out << ";bvp=" << bvp.format() << ";output=" << output_name() << ";tol=";
  for (const auto& [key, value] : tolerances) out << key << ":" << format_double(value) << ",";
  return out.str();
}

std::uint64_t ExperimentConfig::hash() const {
  // FNV-1a.
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char ch : canonical()) {
    h ^= ch;
    h *= 1099511628211ull;
  }
  return h;
}

double ExperimentConfig::tol(const std::string& key, double fallback) const {
  const auto it = tolerances.find(key);
  return it == tolerances.end() ? fallback : it->second;
}

std::string ExperimentConfig::output_name() const {
  return output.empty() ? suite + ".csv" : output;
}

bool SuiteResult::all_pass() const {
  return std::all_of(rows.begin(), rows.end(), [](const ReportRow& r) { return r.pass; });
}

ReportRow make_row(std::string suite, std::string case_name, std::string param, double measured,
                   double lo, double hi) {
  ReportRow row;
  row.suite = std::move(suite);
  row.case_name = std::move(case_name);
  row.param = std::move(param);
  row.measured = measured;
  row.bound_lo = lo;
  row.bound_hi = hi;
  row.pass = measured >= lo && measured <= hi;
  return row;
}

int run_suite_to_files(const ExperimentConfig& config, const std::string& out_dir,
                       std::ostream& log) {
  config.validate();
  // Resolve the suite before touching the filesystem: unknown suites must not
  // leave partial output behind.
  const SuiteResult result = run_suite(config);

  namespace fs = std::filesystem;
  fs::create_directories(out_dir);
  const fs::path csv_path = fs::path(out_dir) / config.output_name();
  const fs::path summary_path = csv_path.string() + ".summary";

  std::ofstream csv(csv_path);
  if (!csv) throw std::runtime_error("cannot write '" + csv_path.string() + "'");
  csv << "suite,case,param,measured,bound_lo,bound_hi,pass,seed,config_hash\n";
  char hash_buf[32];
  std::snprintf(hash_buf, sizeof(hash_buf), "%016llx",
                static_cast<unsigned long long>(config.hash()));
  const auto sanitized = [](std::string text) {
    for (char& ch : text)
      if (ch == ',' || ch == '\n') ch = ';';
    return text;
  };
  int failures = 0;
  for (const ReportRow& row : result.rows) {
    csv << sanitized(row.suite) << "," << sanitized(row.case_name) << ","
        << sanitized(row.param) << "," << format_double(row.measured) << ","
        << format_double(row.bound_lo) << "," << format_double(row.bound_hi) << ","
        << (row.pass ? "pass" : "FAIL") << "," << config.seed << "," << hash_buf << "\n";
    if (!row.pass) ++failures;
  }
  csv.close();

  std::ofstream summary(summary_path);
  summary << "suite = " << config.suite << "\n"
          << "config_hash = " << hash_buf << "\n"
          << "seed = " << config.seed << "\n"
          << "rows = " << result.rows.size() << "\n"
          << "failures = " << failures << "\n"
          << "status = " << (failures == 0 ? "pass" : "fail") << "\n";
  summary.close();

  log << config.suite << ": " << result.rows.size() << " rows, " << failures << " failures -> "
      << csv_path.string() << "\n";
  return failures == 0 ? 0 : 1;
}

int check_report(const std::string& csv_path, std::ostream& log) {
  std::ifstream in(csv_path);
  if (!in) throw std::runtime_error("check: cannot open '" + csv_path + "'");
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error("check: empty report");
  int rows = 0, failures = 0, mismatches = 0;
  while (std::getline(in, line)) {
    if (trim(line).empty()) continue;
    std::vector<std::string> fields;
    std::size_t pos = 0;
    while (pos <= line.size()) {
      auto comma = line.find(',', pos);
      if (comma == std::string::npos) comma = line.size();
      fields.push_back(line.substr(pos, comma - pos));
      pos = comma + 1;
    }
    if (fields.size() < 9) throw std::runtime_error("check: malformed row '" + line + "'");
    const double measured = std::stod(fields[3]);
    const double lo = std::stod(fields[4]);
    const double hi = std::stod(fields[5]);
    const bool recorded_pass = fields[6] == "pass";
    const bool recomputed = measured >= lo && measured <= hi;
    ++rows;
    if (!recomputed) ++failures;
    if (recomputed != recorded_pass) ++mismatches;
  }
  log << "check: " << rows << " rows, " << failures << " failing, " << mismatches
      << " verdict mismatches\n";
  return (failures == 0 && mismatches == 0) ? 0 : 1;
}

}  // namespace rscale::lab
