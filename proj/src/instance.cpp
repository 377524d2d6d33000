#include "treecomp/instance.hpp"

#include <json.hpp>

#include "treecomp/json_util.hpp"

namespace treecomp {

using nlohmann::json;

bool operator==(const Instance& a, const Instance& b) {
  if (a.name != b.name || a.negated_from_max != b.negated_from_max) return false;
  if (a.system.num_vars != b.system.num_vars) return false;
  if (a.objective.size() != b.objective.size()) return false;
  for (Index j = 0; j < a.objective.size(); ++j)
    if (a.objective(j) != b.objective(j)) return false;
  if (a.system.rows.size() != b.system.rows.size()) return false;
  for (std::size_t i = 0; i < a.system.rows.size(); ++i) {
    if (a.system.rows[i].coeffs != b.system.rows[i].coeffs) return false;
    if (a.system.rows[i].rhs != b.system.rows[i].rhs) return false;
  }
  if (a.system.lower != b.system.lower || a.system.upper != b.system.upper) return false;
  if (a.integrality != b.integrality) return false;
  if (a.known_optimal.has_value() != b.known_optimal.has_value()) return false;
  if (a.known_optimal && *a.known_optimal != *b.known_optimal) return false;
  return true;
}

namespace {

json bounds_to_json(const std::vector<ExtValue>& bounds) {
  json arr = json::array();
  for (const auto& b : bounds) arr.push_back(b.str());
  return arr;
}

std::vector<ExtValue> bounds_from_json(const json& arr, const char* what, std::size_t n) {
  if (!arr.is_array() || arr.size() != n) throw SchemaError(std::string(what) + ": bad array");
  std::vector<ExtValue> out;
  out.reserve(n);
  for (const auto& e : arr) {
    if (!e.is_string()) throw SchemaError(std::string(what) + ": entries must be strings");
    out.push_back(ExtValue::parse(e.get<std::string>()));
  }
  return out;
}

}  // namespace

std::string write_json_instance(const Instance& inst) {
  inst.validate();
  json j;
  j["name"] = inst.name;
  j["n"] = inst.system.num_vars;
  j["m"] = inst.system.num_rows();
  json obj = json::array();
  for (Index i = 0; i < inst.objective.size(); ++i) obj.push_back(inst.objective(i).str());
  j["objective"] = obj;
  json rows = json::array();
  for (const auto& row : inst.system.rows) {
    json coeffs = json::object();
    for (const auto& [idx, v] : row.coeffs) coeffs[std::to_string(idx)] = v.str();
    rows.push_back(json{{"coeffs", coeffs}, {"rhs", row.rhs.str()}});
  }
  j["rows"] = rows;
  j["lb"] = bounds_to_json(inst.system.lower);
  j["ub"] = bounds_to_json(inst.system.upper);
  json integer = json::array();
  for (bool b : inst.integrality) integer.push_back(b);
  j["integer"] = integer;
  if (inst.known_optimal) j["optimal_value"] = inst.known_optimal->str();
  if (inst.negated_from_max) j["negated_from_max"] = true;
  return j.dump(2);
}

Instance parse_json_instance(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw SchemaError(std::string("invalid JSON: ") + e.what());
  }
  try {
    Instance inst;
    if (!j.is_object()) throw SchemaError("top level must be an object");
    if (!j.contains("objective")) throw SchemaError("missing objective");
    if (!j.contains("n")) throw SchemaError("missing n");
    inst.name = j.value("name", "");
    const auto n = j.at("n").get<Index>();
    if (n < 1) throw SchemaError("n must be >= 1");
    const auto& obj = j.at("objective");
    if (!obj.is_array() || static_cast<Index>(obj.size()) != n)
      throw SchemaError("objective: bad array");
    inst.objective.resize(n);
    for (Index i = 0; i < n; ++i) inst.objective(i) = Rational::parse(obj.at(i).get<std::string>());
    inst.system.num_vars = n;
    inst.system.lower = bounds_from_json(j.at("lb"), "lb", static_cast<std::size_t>(n));
    inst.system.upper = bounds_from_json(j.at("ub"), "ub", static_cast<std::size_t>(n));
    for (const auto& row : j.at("rows")) {
      std::vector<std::pair<Index, Rational>> coeffs;
      for (const auto& [key, val] : row.at("coeffs").items()) {
        coeffs.emplace_back(static_cast<Index>(std::stoll(key)),
                            Rational::parse(val.get<std::string>()));
      }
      inst.system.add_row(make_row(std::move(coeffs), Rational::parse(row.at("rhs").get<std::string>())));
    }
    const auto& integer = j.at("integer");
    if (!integer.is_array() || static_cast<Index>(integer.size()) != n)
      throw SchemaError("integer: bad array");
    for (const auto& b : integer) inst.integrality.push_back(b.get<bool>());
    if (j.contains("optimal_value"))
      inst.known_optimal = ExtValue::parse(j.at("optimal_value").get<std::string>());
    inst.negated_from_max = j.value("negated_from_max", false);
    inst.validate();
    return inst;
  } catch (const SchemaError&) {
    throw;
  } catch (const std::exception& e) {
    throw SchemaError(std::string("schema violation: ") + e.what());
  }
}

std::string instance_hash(const Instance& inst) { return hex64(fnv1a64(write_json_instance(inst))); }

}  // namespace treecomp
