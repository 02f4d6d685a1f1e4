#pragma once

#include "cocycle_lab/algebra.hpp"
#include "cocycle_lab/cocycle.hpp"
#include "cocycle_lab/group.hpp"
#include "cocycle_lab/multiplier.hpp"

#include <json.hpp>

#include <memory>
#include <string>
#include <vector>

namespace cocycle_lab::io {

using json = nlohmann::json;

// {"name", "order", "labels", "table"} with the row-major Cayley table.
json group_to_json(const FiniteGroup& g);
FiniteGroup group_from_json(const json& j);

json length_to_json(const LengthFunction& psi);
json cocycle_to_json(const Cocycle& c);

// {"group_id", "coeffs": [[re, im], ...]}
json element_to_json(const AlgebraElement& f, const std::string& group_id);
AlgebraElement element_from_json(const json& j, std::shared_ptr<const FiniteGroup> group);

json symbol_to_json(const MultiplierSymbol& m);

json complex_array(const Eigen::VectorXcd& v);
Eigen::VectorXcd complex_vector(const json& j);

json read_json_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);

// Table with a header row, written as RFC 4180 CSV.
class CsvTable {
 public:
  explicit CsvTable(std::vector<std::string> header) : header_(std::move(header)) {}

  void add_row(std::vector<std::string> row);
  const std::vector<std::string>& header() const { return header_; }
  const std::vector<std::vector<std::string>>& rows() const { return rows_; }
  std::string str() const;
  void write(const std::string& path) const;

 private:
  std::vector<std::string> header_;
  std::vector<std::vector<std::string>> rows_;
};

// Shortest text that round-trips the double.
std::string format_double(double v);

}  // namespace cocycle_lab::io
