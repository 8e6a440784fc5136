#include "torsion/report.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cstdio>
#include <sstream>
#include <stdexcept>

namespace torsion {

namespace {

std::string fmt17(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace

void SweepReport::add_row(std::vector<double> row) {
  if (row.size() != columns.size())
    throw std::invalid_argument("SweepReport: row width does not match schema");
  rows.push_back(std::move(row));
}

void SweepReport::sort_rows() {
  std::stable_sort(rows.begin(), rows.end(),
                   [](const auto& a, const auto& b) { return a[0] < b[0]; });
}

std::string SweepReport::to_csv() const {
  std::ostringstream os;
  for (size_t i = 0; i < columns.size(); ++i)
    os << columns[i] << (i + 1 < columns.size() ? "," : "");
  os << "\r\n";
  for (const auto& row : rows) {
    for (size_t i = 0; i < row.size(); ++i)
      os << fmt17(row[i]) << (i + 1 < row.size() ? "," : "");
    os << "\r\n";
  }
  return os.str();
}

std::string SweepReport::to_json() const {
  nlohmann::ordered_json doc;
  doc["name"] = name;
  doc["rows"] = nlohmann::ordered_json::array();
  for (const auto& row : rows) {
    nlohmann::ordered_json rec;
    for (size_t i = 0; i < columns.size(); ++i) rec[columns[i]] = row[i];
    doc["rows"].push_back(rec);
  }
  doc["provenance"] = provenance;
  return doc.dump(2) + "\n";
}

}  // namespace torsion
