#include "cocycle_lab/io.hpp"

#include "cocycle_lab/error.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

namespace cocycle_lab::io {

json group_to_json(const FiniteGroup& g) {
  json j;
  j["name"] = g.name();
  j["order"] = g.order();
  std::vector<std::string> labels;
  for (Index i = 0; i < g.order(); ++i) labels.push_back(g.label(i));
  j["labels"] = labels;
  j["table"] = g.table();
  return j;
}

FiniteGroup group_from_json(const json& j) {
  try {
    const Index n = j.at("order").get<Index>();
    std::vector<std::uint32_t> table = j.at("table").get<std::vector<std::uint32_t>>();
    std::vector<std::string> labels;
    if (j.contains("labels")) labels = j.at("labels").get<std::vector<std::string>>();
    const std::string name = j.value("name", std::string{});
    return FiniteGroup::from_table(n, std::move(table), std::move(labels), name);
  } catch (const json::exception& e) {
    throw Error(ErrorKind::validation, std::string("malformed group JSON: ") + e.what());
  }
}

json length_to_json(const LengthFunction& psi) {
  json j;
  j["group"] = psi.group().describe();
  j["values"] = psi.values();
  return j;
}

json cocycle_to_json(const Cocycle& c) {
  json j;
  j["group"] = c.group.describe();
  j["kind"] = c.kind;
  j["side"] = to_string(c.side);
  j["dim"] = c.dim;
  j["partial"] = c.partial;
  json b = json::array();
  for (Eigen::Index g = 0; g < c.b.rows(); ++g) {
    std::vector<double> row(c.b.cols());
    for (Eigen::Index k = 0; k < c.b.cols(); ++k) row[k] = c.b(g, k);
    b.push_back(row);
  }
  j["b"] = b;
  if (c.has_action()) {
    json alpha = json::array();
    for (const auto& a : c.alpha) {
      json m = json::array();
      for (Eigen::Index r = 0; r < a.rows(); ++r) {
        std::vector<double> row(a.cols());
        for (Eigen::Index k = 0; k < a.cols(); ++k) row[k] = a(r, k);
        m.push_back(row);
      }
      alpha.push_back(m);
    }
    j["alpha"] = alpha;
  }
  return j;
}

json complex_array(const Eigen::VectorXcd& v) {
  json a = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back({v[i].real(), v[i].imag()});
  return a;
}

Eigen::VectorXcd complex_vector(const json& j) {
  if (!j.is_array()) throw Error(ErrorKind::validation, "expected an array of [re, im] pairs");
  Eigen::VectorXcd v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) {
    const json& e = j[i];
    if (e.is_number()) {
      v[static_cast<Eigen::Index>(i)] = e.get<double>();
    } else if (e.is_array() && e.size() == 2 && e[0].is_number() && e[1].is_number()) {
      v[static_cast<Eigen::Index>(i)] = cplx(e[0].get<double>(), e[1].get<double>());
    } else {
      throw Error(ErrorKind::validation, "entry " + std::to_string(i) + " is not a number or an [re, im] pair");
    }
  }
  return v;
}

json element_to_json(const AlgebraElement& f, const std::string& group_id) {
  return json{{"group_id", group_id}, {"coeffs", complex_array(f.coeffs())}};
}

AlgebraElement element_from_json(const json& j, std::shared_ptr<const FiniteGroup> group) {
  if (!j.is_object() || !j.contains("coeffs")) throw Error(ErrorKind::validation, "element JSON needs a coeffs field");
  return AlgebraElement(std::move(group), complex_vector(j.at("coeffs")));
}

json symbol_to_json(const MultiplierSymbol& m) {
  json j;
  j["group"] = m.group.describe();
  j["kind"] = to_string(m.kind);
  j["description"] = m.description;
  j["params"] = m.params;
  j["values"] = complex_array(m.m);
  return j;
}

json read_json_file(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw Error(ErrorKind::io, "cannot read " + path);
  try {
    return json::parse(is);
  } catch (const json::parse_error& e) {
    throw Error(ErrorKind::usage, path + " is not valid JSON: " + e.what());
  }
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw Error(ErrorKind::io, "cannot write " + path);
  os << text;
  if (!os) throw Error(ErrorKind::io, "write failed for " + path);
}

void CsvTable::add_row(std::vector<std::string> row) {
  if (row.size() != header_.size()) throw Error(ErrorKind::invalid_parameter, "CSV row width differs from the header");
  rows_.push_back(std::move(row));
}

namespace {

std::string quote(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + '"';
}

void put_row(std::ostringstream& os, const std::vector<std::string>& row) {
  for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << quote(row[i]);
  os << '\n';
}

}  // namespace

std::string CsvTable::str() const {
  std::ostringstream os;
  put_row(os, header_);
  for (const auto& r : rows_) put_row(os, r);
  return os.str();
}

void CsvTable::write(const std::string& path) const { write_text_file(path, str()); }

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

}  // namespace cocycle_lab::io
