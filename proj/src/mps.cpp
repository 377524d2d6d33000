#include <algorithm>
#include <map>
#include <sstream>

#include "treecomp/instance.hpp"

namespace treecomp {

namespace {

// Bound magnitudes at or above this threshold are treated as infinite,
// matching the 1e30 convention used by common MPS writers.
const Rational kInfThreshold(Rational::parse("1e20"));

struct RowData {
  char type = 'N';  // N, L, G, E
  std::vector<std::pair<Index, Rational>> coeffs;
  Rational rhs;
  bool has_rhs = false;
  Rational range;
  bool has_range = false;
  long declared_at = 0;
};

struct VarData {
  std::string name;
  bool integer = false;
  bool lo_set = false, hi_set = false;
  ExtValue lo = ExtValue::of(Rational(0));
  ExtValue hi = ExtValue::pos_inf();
};

std::vector<std::string> tokenize(const std::string& line) {
  std::vector<std::string> toks;
  std::istringstream ss(line);
  std::string t;
  while (ss >> t) toks.push_back(t);
  return toks;
}

bool is_marker(const std::vector<std::string>& toks) {
  for (const auto& t : toks)
    if (t == "'MARKER'" || t == "MARKER") return true;
  return false;
}

Rational parse_value(const std::string& tok, long line) {
  try {
    return Rational::parse(tok);
  } catch (const std::exception& e) {
    throw MpsError(line, std::string("bad numeric literal '") + tok + "': " + e.what());
  }
}

ExtValue classify_bound_value(const Rational& v) {
  if (v.abs() >= kInfThreshold) return v.sign() > 0 ? ExtValue::pos_inf() : ExtValue::neg_inf();
  return ExtValue::of(v);
}

}  // namespace

MpsParseOutput parse_mps(const std::string& text) {
  MpsParseOutput out;
  Instance& inst = out.instance;

  std::vector<std::string> row_order;
  std::map<std::string, RowData> rows;
  std::vector<VarData> vars;
  std::map<std::string, Index> var_index;
  std::string obj_row_name;
  std::vector<std::string> ignored_free_rows;
  RatVec dummy;
  std::map<Index, Rational> objective;
  bool maximize = false;
  bool saw_endata = false;
  bool in_integer_block = false;
  std::optional<ExtValue> optimal_from_comment;

  enum class Section { none, name, objsense, rows, columns, rhs, ranges, bounds };
  Section section = Section::none;

  auto var_of = [&](const std::string& name, long line) -> Index {
    auto it = var_index.find(name);
    if (it != var_index.end()) return it->second;
    (void)line;
    VarData v;
    v.name = name;
    v.integer = in_integer_block;
    vars.push_back(v);
    Index idx = static_cast<Index>(vars.size()) - 1;
    var_index.emplace(name, idx);
    return idx;
  };

  std::istringstream input(text);
  std::string raw;
  long line_no = 0;
  while (std::getline(input, raw)) {
    ++line_no;
    if (!raw.empty() && raw.back() == '\r') raw.pop_back();
    if (raw.empty()) continue;
    if (raw[0] == '*') {
      auto toks = tokenize(raw.substr(1));
      if (toks.size() >= 2 && toks[0] == "OPTIMAL_VALUE") optimal_from_comment = ExtValue::parse(toks[1]);
      continue;
    }
    const bool header = raw[0] != ' ' && raw[0] != '\t';
    auto toks = tokenize(raw);
    if (toks.empty()) continue;

    if (header) {
      const std::string& sec = toks[0];
      if (sec == "NAME") {
        if (toks.size() > 1) inst.name = toks[1];
        section = Section::name;
      } else if (sec == "OBJSENSE") {
        section = Section::objsense;
        if (toks.size() > 1) maximize = (toks[1] == "MAX" || toks[1] == "MAXIMIZE");
      } else if (sec == "ROWS") {
        section = Section::rows;
      } else if (sec == "COLUMNS") {
        section = Section::columns;
      } else if (sec == "RHS") {
        section = Section::rhs;
      } else if (sec == "RANGES") {
        section = Section::ranges;
      } else if (sec == "BOUNDS") {
        section = Section::bounds;
      } else if (sec == "ENDATA") {
        saw_endata = true;
        break;
      } else if (sec == "SOS" || sec == "QUADOBJ" || sec == "QMATRIX" || sec == "INDICATORS" ||
                 sec == "QSECTION" || sec == "CSECTION") {
        throw UnsupportedFeature("MPS section '" + sec + "' is not supported");
      } else {
        throw MpsError(line_no, "unknown section '" + sec + "'");
      }
      continue;
    }

    switch (section) {
      case Section::objsense: {
        maximize = (toks[0] == "MAX" || toks[0] == "MAXIMIZE");
        break;
      }
      case Section::rows: {
        if (toks.size() < 2) throw MpsError(line_no, "ROWS entry needs a type and a name");
        const std::string& type = toks[0];
        const std::string& name = toks[1];
        if (type == "N") {
          if (obj_row_name.empty()) {
            obj_row_name = name;
          } else {
            ignored_free_rows.push_back(name);
            out.warnings.push_back("ignoring extra free row '" + name + "'");
          }
        } else if (type == "L" || type == "G" || type == "E") {
          if (rows.count(name)) throw MpsError(line_no, "duplicate row '" + name + "'");
          RowData rd;
          rd.type = type[0];
          rd.declared_at = line_no;
          rows.emplace(name, rd);
          row_order.push_back(name);
        } else {
          throw MpsError(line_no, "unknown row type '" + type + "'");
        }
        break;
      }
      case Section::columns: {
        if (is_marker(toks)) {
          bool org = false, end = false;
          for (const auto& t : toks) {
            if (t == "'INTORG'" || t == "INTORG") org = true;
            if (t == "'INTEND'" || t == "INTEND") end = true;
          }
          if (org) in_integer_block = true;
          if (end) in_integer_block = false;
          if (!org && !end) throw MpsError(line_no, "marker without INTORG/INTEND");
          break;
        }
        if (toks.size() < 3 || toks.size() % 2 == 0)
          throw MpsError(line_no, "COLUMNS entry needs name plus row/value pairs");
        Index j = var_of(toks[0], line_no);
        for (std::size_t k = 1; k + 1 < toks.size(); k += 2) {
          const std::string& row_name = toks[k];
          Rational v = parse_value(toks[k + 1], line_no);
          if (row_name == obj_row_name) {
            auto [it, fresh] = objective.emplace(j, v);
            if (!fresh) {
              it->second += v;
              out.warnings.push_back("duplicate objective entry for column '" + toks[0] + "' summed");
            }
          } else if (std::find(ignored_free_rows.begin(), ignored_free_rows.end(), row_name) !=
                     ignored_free_rows.end()) {
            // Entry on an ignored free row.
          } else {
            auto it = rows.find(row_name);
            if (it == rows.end()) throw MpsError(line_no, "unknown row '" + row_name + "'");
            it->second.coeffs.emplace_back(j, v);
          }
        }
        break;
      }
      case Section::rhs: {
        if (toks.size() < 3) throw MpsError(line_no, "RHS entry needs row/value pairs");
        // First token is the RHS set name unless the line has an even token
        // count (some files omit the set name).
        std::size_t start = (toks.size() % 2 == 1) ? 1 : 0;
        for (std::size_t k = start; k + 1 < toks.size(); k += 2) {
          const std::string& row_name = toks[k];
          Rational v = parse_value(toks[k + 1], line_no);
          if (row_name == obj_row_name) {
            out.warnings.push_back("objective-row RHS constant ignored");
            continue;
          }
          auto it = rows.find(row_name);
          if (it == rows.end()) throw MpsError(line_no, "unknown row '" + row_name + "' in RHS");
          it->second.rhs = v;
          it->second.has_rhs = true;
        }
        break;
      }
      case Section::ranges: {
        if (toks.size() < 3) throw MpsError(line_no, "RANGES entry needs row/value pairs");
        std::size_t start = (toks.size() % 2 == 1) ? 1 : 0;
        for (std::size_t k = start; k + 1 < toks.size(); k += 2) {
          auto it = rows.find(toks[k]);
          if (it == rows.end()) throw MpsError(line_no, "unknown row '" + toks[k] + "' in RANGES");
          it->second.range = parse_value(toks[k + 1], line_no);
          it->second.has_range = true;
        }
        break;
      }
      case Section::bounds: {
        if (toks.size() < 3) throw MpsError(line_no, "BOUNDS entry needs type, set and column");
        const std::string& type = toks[0];
        const std::string& col = toks[2];
        auto it = var_index.find(col);
        if (it == var_index.end()) throw MpsError(line_no, "bound on unknown column '" + col + "'");
        VarData& v = vars[static_cast<std::size_t>(it->second)];
        auto need_value = [&]() -> Rational {
          if (toks.size() < 4) throw MpsError(line_no, "bound type '" + type + "' needs a value");
          return parse_value(toks[3], line_no);
        };
        if (type == "LO" || type == "LI") {
          v.lo = classify_bound_value(need_value());
          v.lo_set = true;
          if (type == "LI") v.integer = true;
        } else if (type == "UP" || type == "UI") {
          Rational val = need_value();
          v.hi = classify_bound_value(val);
          v.hi_set = true;
          if (type == "UI") v.integer = true;
          if (val.sign() < 0 && !v.lo_set) {
            v.lo = ExtValue::neg_inf();
            out.warnings.push_back("negative UP bound on '" + col + "' frees its lower bound");
          }
        } else if (type == "FX") {
          Rational val = need_value();
          v.lo = ExtValue::of(val);
          v.hi = ExtValue::of(val);
          v.lo_set = v.hi_set = true;
        } else if (type == "FR") {
          v.lo = ExtValue::neg_inf();
          v.hi = ExtValue::pos_inf();
          v.lo_set = v.hi_set = true;
        } else if (type == "MI") {
          v.lo = ExtValue::neg_inf();
          v.lo_set = true;
        } else if (type == "PL") {
          v.hi = ExtValue::pos_inf();
          v.hi_set = true;
        } else if (type == "BV") {
          v.lo = ExtValue::of(Rational(0));
          v.hi = ExtValue::of(Rational(1));
          v.integer = true;
          v.lo_set = v.hi_set = true;
        } else {
          throw MpsError(line_no, "unknown bound type '" + type + "'");
        }
        break;
      }
      case Section::name:
        break;
      default:
        throw MpsError(line_no, "data line outside any section");
    }
  }

  if (!saw_endata) throw MpsError(line_no, "missing ENDATA");
  if (obj_row_name.empty()) throw MpsError(line_no, "no objective (N) row declared");
  if (vars.empty()) throw MpsError(line_no, "no columns declared");

  const Index n = static_cast<Index>(vars.size());
  inst.system.num_vars = n;
  inst.objective.setConstant(n, Rational(0));
  for (const auto& [j, v] : objective) inst.objective(j) = maximize ? -v : v;
  inst.negated_from_max = maximize;
  for (const auto& v : vars) {
    inst.system.lower.push_back(v.lo);
    inst.system.upper.push_back(v.hi);
    inst.integrality.push_back(v.integer);
  }

  auto push_row = [&](const std::vector<std::pair<Index, Rational>>& coeffs, const Rational& rhs,
                      bool negate, long declared_at, const std::string& row_name) {
    std::map<Index, Rational> merged;
    for (const auto& [j, a] : coeffs) {
      auto [it, fresh] = merged.emplace(j, a);
      if (!fresh) {
        it->second += a;
        out.warnings.push_back("duplicate entry in row '" + row_name + "' summed");
      }
    }
    std::vector<std::pair<Index, Rational>> final_coeffs;
    for (auto& [j, a] : merged) {
      if (a.is_zero()) continue;
      final_coeffs.emplace_back(j, negate ? -a : a);
    }
    if (final_coeffs.empty()) {
      const Rational effective = negate ? -rhs : rhs;
      if (Rational(0) > effective)
        throw MpsError(declared_at, "empty row '" + row_name + "' is trivially infeasible");
      out.warnings.push_back("dropping satisfied empty row '" + row_name + "'");
      return;
    }
    inst.system.add_row(make_row(std::move(final_coeffs), negate ? -rhs : rhs));
  };

  for (const auto& name : row_order) {
    const RowData& rd = rows.at(name);
    const Rational b = rd.has_rhs ? rd.rhs : Rational(0);
    if (rd.type == 'L') {
      push_row(rd.coeffs, b, false, rd.declared_at, name);
      if (rd.has_range) push_row(rd.coeffs, b - rd.range.abs(), true, rd.declared_at, name);
    } else if (rd.type == 'G') {
      push_row(rd.coeffs, b, true, rd.declared_at, name);
      if (rd.has_range) push_row(rd.coeffs, b + rd.range.abs(), false, rd.declared_at, name);
    } else {  // E row: split into <= pair (range widens it into an interval)
      Rational lo = b, hi = b;
      if (rd.has_range) {
        if (rd.range.sign() >= 0)
          hi = b + rd.range;
        else
          lo = b + rd.range;
      }
      push_row(rd.coeffs, hi, false, rd.declared_at, name);
      push_row(rd.coeffs, lo, true, rd.declared_at, name);
    }
  }

  if (optimal_from_comment) inst.known_optimal = *optimal_from_comment;
  inst.validate();
  return out;
}

std::string write_mps(const Instance& inst) {
  inst.validate();
  std::ostringstream os;
  os << "NAME " << (inst.name.empty() ? "instance" : inst.name) << "\n";
  if (inst.known_optimal) os << "* OPTIMAL_VALUE " << inst.known_optimal->str() << "\n";
  if (inst.negated_from_max) os << "OBJSENSE\n    MAX\n";
  os << "ROWS\n N  OBJ\n";
  const Index m = inst.system.num_rows();
  for (Index i = 0; i < m; ++i) os << " L  r" << i << "\n";
  os << "COLUMNS\n";
  // Column-major entries; integer variables wrapped in marker pairs.
  std::vector<std::vector<std::pair<Index, Rational>>> by_col(
      static_cast<std::size_t>(inst.system.num_vars));
  for (Index i = 0; i < m; ++i)
    for (const auto& [j, a] : inst.system.rows[static_cast<std::size_t>(i)].coeffs)
      by_col[static_cast<std::size_t>(j)].emplace_back(i, a);
  bool in_int = false;
  for (Index j = 0; j < inst.system.num_vars; ++j) {
    const bool want_int = inst.integrality[static_cast<std::size_t>(j)];
    if (want_int && !in_int) {
      os << "    MK" << j << " 'MARKER' 'INTORG'\n";
      in_int = true;
    } else if (!want_int && in_int) {
      os << "    MK" << j << " 'MARKER' 'INTEND'\n";
      in_int = false;
    }
    const Rational obj = inst.negated_from_max ? -inst.objective(j) : inst.objective(j);
    if (!obj.is_zero()) os << "    x" << j << " OBJ " << obj.str() << "\n";
    for (const auto& [i, a] : by_col[static_cast<std::size_t>(j)])
      os << "    x" << j << " r" << i << " " << a.str() << "\n";
    if (obj.is_zero() && by_col[static_cast<std::size_t>(j)].empty())
      os << "    x" << j << " OBJ 0\n";  // keep the column declared
  }
  if (in_int) os << "    MKEND 'MARKER' 'INTEND'\n";
  os << "RHS\n";
  for (Index i = 0; i < m; ++i)
    os << "    RHS r" << i << " " << inst.system.rows[static_cast<std::size_t>(i)].rhs.str() << "\n";
  os << "BOUNDS\n";
  for (Index j = 0; j < inst.system.num_vars; ++j) {
    const auto ju = static_cast<std::size_t>(j);
    const ExtValue& lo = inst.system.lower[ju];
    const ExtValue& hi = inst.system.upper[ju];
    if (lo.is_finite() && hi.is_finite() && lo.finite() == hi.finite()) {
      os << " FX BND x" << j << " " << lo.finite().str() << "\n";
      continue;
    }
    if (lo.is_neg_inf() && hi.is_pos_inf()) {
      os << " FR BND x" << j << "\n";
      continue;
    }
    if (lo.is_neg_inf())
      os << " MI BND x" << j << "\n";
    else if (!(lo.finite() == Rational(0)) || (hi.is_finite() && hi.finite().sign() < 0))
      os << " LO BND x" << j << " " << lo.finite().str() << "\n";
    if (hi.is_finite()) os << " UP BND x" << j << " " << hi.finite().str() << "\n";
  }
  os << "ENDATA\n";
  return os.str();
}

}  // namespace treecomp
