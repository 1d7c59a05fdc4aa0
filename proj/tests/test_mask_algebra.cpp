#include <doctest.h>

#include <algorithm>
#include <random>

#include "lungkit/mask_algebra.hpp"
#include "test_support.hpp"

using namespace lungkit;
using lungkit::testing::error_code_of;
using lungkit::testing::random_mask;

namespace {

Mask3D from_bits(const Geometry& g, std::vector<std::uint8_t> bits) { return Mask3D(g, std::move(bits)); }

Mask3D complement(const Mask3D& m) {
  Mask3D out(m.geometry());
  for (std::size_t i = 0; i < m.size(); ++i) out.set(i, !m[i]);
  return out;
}

bool subset(const Mask3D& a, const Mask3D& b) {
  for (std::size_t i = 0; i < a.size(); ++i)
    if (a[i] && !b[i]) return false;
  return true;
}

}  // namespace

TEST_CASE("combine_masks truth table") {
  const Geometry g({8, 1, 1});
  const Mask3D lung = from_bits(g, {0, 0, 0, 0, 1, 1, 1, 1});
  const Mask3D healthy = from_bits(g, {0, 0, 1, 1, 0, 0, 1, 1});
  const Mask3D air = from_bits(g, {0, 1, 0, 1, 0, 1, 0, 1});
  const Mask3D s = combine_masks(lung, healthy, air);
  CHECK(lungkit::testing::bit_vector(s) == std::vector<std::uint8_t>{0, 0, 0, 0, 1, 0, 0, 0});
}

TEST_CASE("combine_masks: identical lung and healthy with empty air is empty") {
  std::mt19937_64 gen(1);
  const Geometry g({6, 6, 6});
  const Mask3D lung = random_mask(g, 0.6, gen);
  CHECK(combine_masks(lung, lung, Mask3D(g)).empty());
}

TEST_CASE("combine_masks: everything unhealthy and no air gives the lung") {
  std::mt19937_64 gen(2);
  const Geometry g({6, 6, 6});
  const Mask3D lung = random_mask(g, 0.6, gen);
  CHECK(combine_masks(lung, Mask3D(g), Mask3D(g)) == lung);
}

TEST_CASE("combine_masks: geometry mismatch") {
  const Geometry g({4, 4, 4});
  const Geometry other({4, 4, 4}, {1.0, 1.0, 2.0});
  CHECK(error_code_of([&] { combine_masks(Mask3D(g), Mask3D(other), Mask3D(g)); }) == ErrorCode::GeometryMismatch);
  CHECK(error_code_of([&] { combine_masks(Mask3D(g), Mask3D(g), Mask3D(Geometry({4, 4, 3}))); }) ==
        ErrorCode::GeometryMismatch);
  // Origin alone does not make grids incompatible.
  const Geometry shifted({4, 4, 4}, {1.0, 1.0, 1.0}, {10.0, 0.0, 0.0});
  CHECK_NOTHROW(combine_masks(Mask3D(g), Mask3D(shifted), Mask3D(g)));
}

TEST_CASE("combine_masks is De Morgan and matches the boolean ops") {
  std::mt19937_64 gen(3);
  const Geometry g({8, 8, 8});
  for (int trial = 0; trial < 100; ++trial) {
    const Mask3D m = random_mask(g, 0.5, gen);
    const Mask3D h = random_mask(g, 0.5, gen);
    const Mask3D a = random_mask(g, 0.3, gen);
    const Mask3D s = combine_masks(m, h, a);
    const Mask3D via_or = boolean_op(m, boolean_op(h, a, BoolOp::Or), BoolOp::AndNot);
    const Mask3D via_and = boolean_op(m, boolean_op(complement(h), complement(a), BoolOp::And), BoolOp::And);
    REQUIRE(s == via_or);
    REQUIRE(s == via_and);
    REQUIRE(subset(s, m));
  }
}

TEST_CASE("boolean_op identities") {
  std::mt19937_64 gen(4);
  const Geometry g({8, 8, 8});
  for (int trial = 0; trial < 100; ++trial) {
    const Mask3D a = random_mask(g, 0.4, gen);
    const Mask3D b = random_mask(g, 0.4, gen);
    const Mask3D x = boolean_op(a, b, BoolOp::Xor);
    const Mask3D expected =
        boolean_op(boolean_op(a, b, BoolOp::Or), boolean_op(a, b, BoolOp::And), BoolOp::AndNot);
    REQUIRE(x == expected);
    REQUIRE(boolean_op(a, a, BoolOp::Xor).empty());
    REQUIRE(boolean_op(a, b, BoolOp::And) == boolean_op(b, a, BoolOp::And));
    REQUIRE(boolean_op(a, b, BoolOp::Or).count() + boolean_op(a, b, BoolOp::And).count() ==
            a.count() + b.count());
  }
}

TEST_CASE("combine_masks is monotone in the lung and antitone in healthy and air") {
  std::mt19937_64 gen(5);
  const Geometry g({7, 7, 7});
  for (int trial = 0; trial < 50; ++trial) {
    const Mask3D m = random_mask(g, 0.5, gen);
    const Mask3D h = random_mask(g, 0.4, gen);
    const Mask3D a = random_mask(g, 0.2, gen);
    const Mask3D extra = random_mask(g, 0.2, gen);
    const Mask3D base = combine_masks(m, h, a);
    REQUIRE(subset(base, combine_masks(boolean_op(m, extra, BoolOp::Or), h, a)));
    REQUIRE(subset(combine_masks(m, boolean_op(h, extra, BoolOp::Or), a), base));
    REQUIRE(subset(combine_masks(m, h, boolean_op(a, extra, BoolOp::Or)), base));
  }
}

TEST_CASE("connected_components: small cases") {
  const Geometry g({3, 3, 1});
  // Diagonal pair: two components under faces, one under vertices.
  const Mask3D diag = from_bits(g, {1, 0, 0, 0, 1, 0, 0, 0, 0});
  CHECK(connected_components(diag, Connectivity::Face6).component_count == 2);
  CHECK(connected_components(diag, Connectivity::Vertex26).component_count == 1);
  CHECK(connected_components(Mask3D(g), Connectivity::Face6).component_count == 0);

  const Mask3D full = from_bits(g, {1, 1, 1, 1, 1, 1, 1, 1, 1});
  const LabelMap lm = connected_components(full, Connectivity::Face6);
  CHECK(lm.component_count == 1);
  CHECK(std::all_of(lm.labels.begin(), lm.labels.end(), [](auto l) { return l == 1; }));
}

TEST_CASE("connected_components: labels ordered by smallest linear index") {
  const Geometry g({5, 3, 1});
  // Row 0: a component starting at x=4 whose body reaches row 2, and one at x=0.
  const Mask3D m = from_bits(g, {1, 0, 0, 0, 1,
                                 1, 0, 0, 0, 1,
                                 0, 0, 1, 1, 1});
  const LabelMap lm = connected_components(m, Connectivity::Face6);
  REQUIRE(lm.component_count == 2);
  CHECK(lm.labels[0] == 1);
  CHECK(lm.labels[5] == 1);
  CHECK(lm.labels[4] == 2);
  CHECK(lm.labels[12] == 2);
  CHECK(lm.labels[1] == 0);
}

TEST_CASE("connected_components: U shape merges late") {
  const Geometry g({3, 3, 1});
  const Mask3D u = from_bits(g, {1, 0, 1, 1, 0, 1, 1, 1, 1});
  const LabelMap lm = connected_components(u, Connectivity::Face6);
  CHECK(lm.component_count == 1);
  for (std::size_t i = 0; i < u.size(); ++i) CHECK(lm.labels[i] == (u[i] ? 1u : 0u));
}

TEST_CASE("connected_components agrees with flood fill") {
  std::mt19937_64 gen(6);
  for (int trial = 0; trial < 100; ++trial) {
    const Geometry g({9, 8, 7});
    const Mask3D m = random_mask(g, trial % 2 ? 0.25 : 0.45, gen);
    for (bool faces : {true, false}) {
      const LabelMap lm = connected_components(m, faces ? Connectivity::Face6 : Connectivity::Vertex26);
      REQUIRE(static_cast<int>(lm.component_count) == lungkit::testing::flood_fill_components(m, faces));
      std::uint32_t highest_seen = 0;
      for (std::size_t i = 0; i < m.size(); ++i) {
        REQUIRE((lm.labels[i] != 0) == m[i]);
        if (lm.labels[i] > highest_seen) {
          REQUIRE(lm.labels[i] == highest_seen + 1);
          highest_seen = lm.labels[i];
        }
      }
    }
  }
}
