#pragma once

#include <optional>
#include <string>
#include <vector>

#include "treecomp/lp.hpp"

namespace treecomp {

struct SchemaError : std::runtime_error {
  explicit SchemaError(const std::string& what) : std::runtime_error(what) {}
};

/// A minimization instance min c.x over {Ax <= b, l <= x <= u} with an
/// integrality mask. Rows are always normalized to <= at parse time.
struct Instance {
  std::string name;
  RatVec objective;
  LinearSystem system;
  std::vector<bool> integrality;
  std::optional<ExtValue> known_optimal;
  /// Set when the source declared a maximization objective that was
  /// negated on input; reporting restores the sign.
  bool negated_from_max = false;

  Index num_vars() const { return system.num_vars; }
  Index num_rows() const { return system.num_rows(); }

  bool has_integer_vars() const {
    for (bool b : integrality)
      if (b) return true;
    return false;
  }

  void validate() const {
    system.validate();
    if (objective.size() != system.num_vars) throw SchemaError("objective length mismatch");
    if (integrality.size() != static_cast<std::size_t>(system.num_vars))
      throw SchemaError("integrality mask length mismatch");
  }
};

bool operator==(const Instance& a, const Instance& b);

/// Native JSON schema:
/// { name, n, m, objective: ["p/q"...], rows: [{coeffs: {idx: "p/q"}, rhs}],
///   lb, ub, integer: [bool], optimal_value? }
Instance parse_json_instance(const std::string& text);
std::string write_json_instance(const Instance& inst);

/// Stable content hash of an instance (FNV-1a over the canonical JSON form).
std::string instance_hash(const Instance& inst);

struct MpsError : std::runtime_error {
  long line;
  MpsError(long line_, const std::string& reason)
      : std::runtime_error("MPS line " + std::to_string(line_) + ": " + reason), line(line_) {}
};

struct UnsupportedFeature : std::runtime_error {
  explicit UnsupportedFeature(const std::string& what) : std::runtime_error(what) {}
};

struct MpsParseOutput {
  Instance instance;
  std::vector<std::string> warnings;
};

/// Fixed- or free-format MPS with NAME/ROWS/COLUMNS/RHS/RANGES/BOUNDS/ENDATA
/// and INTORG/INTEND markers. G rows are negated, E rows split into a <=
/// pair, RANGES expanded, OBJSENSE MAX negated into minimization.
MpsParseOutput parse_mps(const std::string& text);

/// Free-format emitter; parse_mps(write_mps(x)) reproduces x.
std::string write_mps(const Instance& inst);

}  // namespace treecomp
