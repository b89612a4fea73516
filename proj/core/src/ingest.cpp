#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdlib>
#include <istream>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "cbai/errors.hpp"
#include "cbai/harness.hpp"
#include "fmt_compat.hpp"

namespace cbai {
namespace {

std::string trim(const std::string& s) {
  std::size_t b = 0;
  std::size_t e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

bool parse_real(const std::string& s, double* out) {
  if (s.empty()) return false;
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (end != s.c_str() + s.size()) return false;
  *out = v;
  return true;
}

struct Row {
  std::string id;
  std::string value;
};

// Reads (id, value) rows. Blank lines and '#' comments are skipped; a first
// line whose second field is not numeric is treated as a header.
std::vector<Row> read_rows(std::istream& in) {
  std::vector<Row> rows;
  std::string line;
  bool first_data_line = true;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const std::string stripped = trim(line);
    if (stripped.empty() || stripped.front() == '#') continue;
    const auto comma = stripped.find(',');
    Row row;
    if (comma == std::string::npos) {
      row.id = trim(stripped);
    } else {
      row.id = trim(stripped.substr(0, comma));
      auto rest = stripped.substr(comma + 1);
      const auto second = rest.find(',');
      row.value = trim(second == std::string::npos ? rest : rest.substr(0, second));
    }
    double ignored;
    if (first_data_line && !parse_real(row.value, &ignored)) {
      first_data_line = false;
      continue;
    }
    first_data_line = false;
    rows.push_back(std::move(row));
  }
  return rows;
}

InstanceSpec gaussian_spec(std::vector<double> means, double sigma) {
  if (sigma <= 0.0) throw ConfigValueError("sigma must be positive");
  InstanceSpec spec;
  spec.kind = DistKind::gaussian;
  spec.means = std::move(means);
  spec.sigmas = {sigma};
  return spec;
}

}  // namespace

InstanceSpec ingest_ratings(std::istream& in, double sigma) {
  const auto rows = read_rows(in);
  std::vector<std::string> order;
  std::unordered_map<std::string, std::pair<double, std::int64_t>> totals;
  for (const auto& row : rows) {
    if (row.id.empty()) throw ConfigValueError("ratings row with empty item id");
    double rating;
    if (!parse_real(row.value, &rating)) {
      throw ConfigValueError(
          fmt_msg("item '%s' has no usable rating", row.id.c_str()));
    }
    auto [it, inserted] = totals.try_emplace(row.id, 0.0, 0);
    if (inserted) order.push_back(row.id);
    it->second.first += rating;
    it->second.second += 1;
  }
  if (order.size() < 2) {
    throw ConfigValueError("ratings ingestion needs at least 2 items");
  }
  std::vector<double> means;
  means.reserve(order.size());
  for (const auto& id : order) {
    const auto& [sum, count] = totals.at(id);
    means.push_back(sum / static_cast<double>(count));
  }
  return gaussian_spec(std::move(means), sigma);
}

InstanceSpec ingest_pkis2(std::istream& in, double sigma) {
  const auto rows = read_rows(in);
  std::vector<std::string> order;
  std::unordered_map<std::string, std::pair<double, std::int64_t>> totals;
  for (const auto& row : rows) {
    if (row.id.empty()) throw ConfigValueError("inhibition row with empty compound id");
    double value;
    if (!parse_real(row.value, &value)) {
      throw ConfigValueError(
          fmt_msg("compound '%s' has no usable inhibition value", row.id.c_str()));
    }
    auto [it, inserted] = totals.try_emplace(row.id, 0.0, 0);
    if (inserted) order.push_back(row.id);
    it->second.first += value;
    it->second.second += 1;
  }
  if (order.size() < 2) {
    throw ConfigValueError("inhibition ingestion needs at least 2 compounds");
  }
  std::vector<double> raw;
  raw.reserve(order.size());
  for (const auto& id : order) {
    const auto& [sum, count] = totals.at(id);
    raw.push_back(sum / static_cast<double>(count));
  }
  const auto [lo_it, hi_it] = std::minmax_element(raw.begin(), raw.end());
  if (*lo_it == *hi_it) {
    throw ConfigValueError("all inhibition values are equal; min-max range is zero");
  }
  const double lo = *lo_it;
  const double span = *hi_it - lo;
  std::vector<double> means;
  means.reserve(raw.size());
  for (double v : raw) {
    const double control = 1.0 - (v - lo) / span;
    means.push_back(std::log(std::max(control, 1e-6)));
  }
  return gaussian_spec(std::move(means), sigma);
}

}  // namespace cbai
