#pragma once

#include <map>
#include <string>
#include <vector>

namespace torsion {

// Keyed table of computed scalars for one parameter sweep.  Rows are kept
// sorted by the first column; serialization is deterministic.
struct SweepReport {
  std::string name;
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
  std::map<std::string, std::string> provenance;  // levels, tolerances, version

  void add_row(std::vector<double> row);
  void sort_rows();

  // RFC 4180, '.' decimal separator, 17 significant digits.
  std::string to_csv() const;
  // array of records plus a provenance block
  std::string to_json() const;
};

}  // namespace torsion
