#include "report.hpp"

#include <cmath>
#include <cstdio>

namespace chfn::cli {

std::string fmt17(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

namespace {

void indent(std::ostream& os, int level) {
  for (int i = 0; i < level; ++i) os << "  ";
}

bool is_flat(const Json& j) {
  for (const auto& v : j)
    if (v.is_structured()) return false;
  return true;
}

void emit(std::ostream& os, const Json& j, int level) {
  switch (j.type()) {
    case Json::value_t::object: {
      if (j.empty()) {
        os << "{}";
        return;
      }
      os << "{\n";
      bool first = true;
      for (auto it = j.begin(); it != j.end(); ++it) {
        if (!first) os << ",\n";
        first = false;
        indent(os, level + 1);
        os << Json(it.key()).dump() << ": ";
        emit(os, it.value(), level + 1);
      }
      os << "\n";
      indent(os, level);
      os << "}";
      return;
    }
    case Json::value_t::array: {
      // Arrays of scalars stay on one line.
      if (j.empty() || is_flat(j)) {
        os << "[";
        bool first = true;
        for (const auto& v : j) {
          if (!first) os << ", ";
          first = false;
          emit(os, v, level + 1);
        }
        os << "]";
        return;
      }
      os << "[\n";
      bool first = true;
      for (const auto& v : j) {
        if (!first) os << ",\n";
        first = false;
        indent(os, level + 1);
        emit(os, v, level + 1);
      }
      os << "\n";
      indent(os, level);
      os << "]";
      return;
    }
    case Json::value_t::number_float: {
      const double v = j.get<double>();
      if (std::isfinite(v))
        os << fmt17(v);
      else
        os << "null";
      return;
    }
    default: os << j.dump();
  }
}

}  // namespace

void write_json(std::ostream& os, const Json& j) {
  emit(os, j, 0);
  os << "\n";
}

void write_csv(std::ostream& os, const std::vector<Table>& tables) {
  const bool many = tables.size() > 1;
  bool first = true;
  for (const auto& t : tables) {
    if (!first) os << "\n";
    first = false;
    if (many) os << "# " << t.name << "\n";
    for (std::size_t i = 0; i < t.columns.size(); ++i) os << (i ? "," : "") << t.columns[i];
    os << "\n";
    for (const auto& row : t.rows) {
      for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << fmt17(row[i]);
      os << "\n";
    }
  }
}

namespace {

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string q = "\"";
  for (char c : s) q += c == '"' ? std::string("\"\"") : std::string(1, c);
  return q + "\"";
}

void flatten(std::ostream& os, const std::string& path, const Json& j) {
  if (j.is_object()) {
    for (const auto& [k, v] : j.items()) flatten(os, path.empty() ? k : path + "." + k, v);
  } else if (j.is_array()) {
    for (std::size_t i = 0; i < j.size(); ++i) flatten(os, path + "." + std::to_string(i), j[i]);
  } else {
    os << csv_field(path) << ",";
    if (j.is_number_float())
      os << fmt17(j.get<double>());
    else if (j.is_string())
      os << csv_field(j.get<std::string>());
    else if (!j.is_null())
      os << j.dump();
    os << "\n";
  }
}

}  // namespace

void write_csv_fields(std::ostream& os, const Json& j) {
  os << "key,value\n";
  flatten(os, "", j);
}

Json tables_json(const std::vector<Table>& tables) {
  Json out = Json::object();
  for (const auto& t : tables) out[t.name] = {{"columns", t.columns}, {"rows", t.rows}};
  return out;
}

}  // namespace chfn::cli
