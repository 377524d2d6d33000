#include "doctest.h"
#include "treecomp/fixtures.hpp"
#include "treecomp/instance.hpp"

using namespace treecomp;

namespace {
const char* kBoxFifthMps = R"(NAME boxfifth
ROWS
 N  COST
COLUMNS
    MK1 'MARKER' 'INTORG'
    x1 COST -1
    x2 COST -1
    MK2 'MARKER' 'INTEND'
RHS
BOUNDS
 UP BND x1 0.2
 UP BND x2 0.2
ENDATA
)";
}

TEST_CASE("MPS box instance parses with exact fractional bounds") {
  auto out = parse_mps(kBoxFifthMps);
  const Instance& inst = out.instance;
  CHECK(inst.name == "boxfifth");
  CHECK(inst.num_vars() == 2);
  CHECK(inst.num_rows() == 0);
  CHECK(inst.objective(0) == Rational(-1));
  CHECK(inst.system.lower[0] == ExtValue::of(Rational(0)));
  CHECK(inst.system.upper[0] == ExtValue::of(Rational(1, 5)));  // 0.2 read exactly
  CHECK(inst.system.upper[1] == ExtValue::of(Rational(1, 5)));
  CHECK(inst.integrality == std::vector<bool>{true, true});
}

TEST_CASE("MPS equality rows split into a <= pair") {
  const char* text = R"(NAME eq
ROWS
 N  obj
 E  r1
COLUMNS
    x1 obj 1 r1 2
    x2 r1 1
RHS
    RHS r1 3
ENDATA
)";
  auto inst = parse_mps(text).instance;
  REQUIRE(inst.num_rows() == 2);
  CHECK(inst.system.rows[0].rhs == Rational(3));
  CHECK(inst.system.rows[1].rhs == Rational(-3));
  CHECK(inst.system.rows[0].coeffs[0].second == Rational(2));
  CHECK(inst.system.rows[1].coeffs[0].second == Rational(-2));
}

TEST_CASE("MPS G rows negate and RANGES expand") {
  const char* text = R"(NAME rng
ROWS
 N  obj
 G  r1
 L  r2
COLUMNS
    x1 obj 1 r1 1
    x1 r2 1
RHS
    RHS r1 2 r2 5
RANGES
    RNG r2 3
ENDATA
)";
  auto inst = parse_mps(text).instance;
  REQUIRE(inst.num_rows() == 3);
  // G row r1: x1 >= 2 -> -x1 <= -2
  CHECK(inst.system.rows[0].coeffs[0].second == Rational(-1));
  CHECK(inst.system.rows[0].rhs == Rational(-2));
  // L row r2 with range 3: 2 <= x1 <= 5
  CHECK(inst.system.rows[1].rhs == Rational(5));
  CHECK(inst.system.rows[2].rhs == Rational(-2));
}

TEST_CASE("MPS OBJSENSE MAX negates the objective and records it") {
  const char* text = R"(NAME mx
OBJSENSE
    MAX
ROWS
 N  obj
COLUMNS
    x1 obj 3
BOUNDS
 UP B x1 7
ENDATA
)";
  auto inst = parse_mps(text).instance;
  CHECK(inst.objective(0) == Rational(-3));
  CHECK(inst.negated_from_max);
  // Round-trip keeps the original orientation.
  auto again = parse_mps(write_mps(inst)).instance;
  CHECK(again.objective(0) == Rational(-3));
  CHECK(again.negated_from_max);
}

TEST_CASE("MPS rejects unsupported sections and bad syntax") {
  CHECK_THROWS_AS(parse_mps("NAME x\nSOS\nENDATA\n"), UnsupportedFeature);
  try {
    parse_mps("NAME x\nROWS\n Z  r1\nCOLUMNS\nENDATA\n");
    FAIL("expected MpsError");
  } catch (const MpsError& e) {
    CHECK(e.line == 3);
  }
  CHECK_THROWS_AS(parse_mps("NAME x\nROWS\n N obj\nCOLUMNS\n    x1 obj 1\n"), MpsError);  // no ENDATA
}

TEST_CASE("MPS bound types behave") {
  const char* text = R"(NAME b
ROWS
 N  obj
COLUMNS
    x1 obj 1
    x2 obj 1
    x3 obj 1
    x4 obj 1
BOUNDS
 FX BND x1 2
 FR BND x2
 MI BND x3
 UP BND x3 4
 BV BND x4
ENDATA
)";
  auto inst = parse_mps(text).instance;
  CHECK(inst.system.lower[0] == ExtValue::of(Rational(2)));
  CHECK(inst.system.upper[0] == ExtValue::of(Rational(2)));
  CHECK(inst.system.lower[1].is_neg_inf());
  CHECK(inst.system.upper[1].is_pos_inf());
  CHECK(inst.system.lower[2].is_neg_inf());
  CHECK(inst.system.upper[2] == ExtValue::of(Rational(4)));
  CHECK(inst.integrality[3]);
  CHECK(inst.system.upper[3] == ExtValue::of(Rational(1)));
}

TEST_CASE("negative UP bound frees the default lower bound with a warning") {
  const char* text = R"(NAME nb
ROWS
 N  obj
COLUMNS
    x1 obj 1
BOUNDS
 UP BND x1 -2
ENDATA
)";
  auto out = parse_mps(text);
  CHECK(out.instance.system.lower[0].is_neg_inf());
  CHECK(out.instance.system.upper[0] == ExtValue::of(Rational(-2)));
  CHECK(!out.warnings.empty());
}

TEST_CASE("JSON instance round-trips exactly") {
  auto inst = fixtures::random_ip(42, 4, 5, 3);
  inst.known_optimal = ExtValue::of(Rational(-7, 3));
  auto text = write_json_instance(inst);
  auto back = parse_json_instance(text);
  CHECK(back == inst);
  CHECK(instance_hash(back) == instance_hash(inst));
}

TEST_CASE("JSON accepts fractional bounds on integer variables") {
  auto inst = fixtures::box_instance(Rational(1, 5), "b");
  auto back = parse_json_instance(write_json_instance(inst));
  CHECK(back == inst);
  CHECK(back.integrality[0]);
  CHECK(back.system.upper[0] == ExtValue::of(Rational(1, 5)));
}

TEST_CASE("JSON schema violations raise SchemaError") {
  CHECK_THROWS_AS(parse_json_instance("{}"), SchemaError);
  CHECK_THROWS_AS(parse_json_instance("not json"), SchemaError);
  // missing objective
  CHECK_THROWS_AS(parse_json_instance(R"({"n":1,"m":0,"rows":[],"lb":["0"],"ub":["1"],"integer":[true]})"),
                  SchemaError);
}

TEST_CASE("writer-emitted MPS parses back to the source instance") {
  for (std::uint64_t seed : {1ull, 2ull, 3ull, 9ull}) {
    auto inst = fixtures::random_ip(seed, 3, 4, 3);
    auto back = parse_mps(write_mps(inst)).instance;
    back.name = inst.name;  // writer normalizes the name only
    CHECK(back == inst);
  }
  auto tri = fixtures::triangle_instance();
  auto back = parse_mps(write_mps(tri)).instance;
  CHECK(back == tri);
}
