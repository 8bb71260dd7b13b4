#pragma once

#include <complex>
#include <ostream>
#include <string>
#include <vector>

#include <json.hpp>

namespace chfn::cli {

using Json = nlohmann::ordered_json;

/// A numeric table for CSV output.
struct Table {
  std::string name;
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
};

/// Everything a subcommand produces.
struct Report {
  Json json;
  std::vector<Table> tables;
  bool pass = true;
};

/// JSON with every double printed as %.17g; non-finite values become null.
void write_json(std::ostream& os, const Json& j);

/// One table: header and rows. Several: each preceded by "# name" and
/// separated by a blank line.
void write_csv(std::ostream& os, const std::vector<Table>& tables);

/// Flattens a JSON object to "key,value" lines with dotted paths, for
/// results that have no table.
void write_csv_fields(std::ostream& os, const Json& j);

/// Tables are embedded in JSON under "tables" as {columns, rows}.
Json tables_json(const std::vector<Table>& tables);

std::string fmt17(double v);

inline Json complex_json(std::complex<double> z) {
  return Json::array({z.real(), z.imag()});
}

}  // namespace chfn::cli
