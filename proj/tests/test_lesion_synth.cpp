#include <doctest.h>

#include <algorithm>
#include <random>
#include <set>

#include "lungkit/lesion_synth.hpp"
#include "lungkit/mask_algebra.hpp"
#include "lungkit/phantom.hpp"
#include "test_support.hpp"

using namespace lungkit;
using lungkit::testing::brute_boundary;
using lungkit::testing::error_code_of;
using lungkit::testing::flood_fill_components;

namespace {

Mask3D solid_block(Index3 grid, Index3 lo, Index3 hi) {
  Mask3D m{Geometry(grid)};
  for (auto z = lo.z; z < hi.z; ++z)
    for (auto y = lo.y; y < hi.y; ++y)
      for (auto x = lo.x; x < hi.x; ++x) m.set(Index3{x, y, z});
  return m;
}

Mask3D sphere(std::int64_t n, double radius) {
  Mask3D m{Geometry({n, n, n})};
  const double c = 0.5 * static_cast<double>(n - 1);
  for (std::int64_t z = 0; z < n; ++z)
    for (std::int64_t y = 0; y < n; ++y)
      for (std::int64_t x = 0; x < n; ++x) {
        const double dx = static_cast<double>(x) - c, dy = static_cast<double>(y) - c, dz = static_cast<double>(z) - c;
        if (dx * dx + dy * dy + dz * dz <= radius * radius) m.set(Index3{x, y, z});
      }
  return m;
}

bool subset(const Mask3D& a, const Mask3D& b) {
  for (std::size_t i = 0; i < a.size(); ++i)
    if (a[i] && !b[i]) return false;
  return true;
}

PhantomSpec small_phantom(std::uint64_t seed, LungShape shape = LungShape::EllipsoidPair) {
  PhantomSpec spec;
  spec.dims = {24, 24, 20};
  spec.lung_shape = shape;
  spec.rng_seed = seed;
  return spec;
}

}  // namespace

TEST_CASE("boundary_voxels: an isolated voxel is its own boundary") {
  Mask3D m{Geometry({3, 3, 3})};
  m.set(Index3{1, 1, 1});
  for (auto c : {Connectivity::Face6, Connectivity::Vertex26}) {
    const auto b = boundary_voxels(m, c);
    REQUIRE(b.size() == 1);
    CHECK(b[0] == Index3{1, 1, 1});
  }
}

TEST_CASE("boundary_voxels: solid 3^3 block in 5^3 has 26 boundary voxels") {
  const Mask3D block = solid_block({5, 5, 5}, {1, 1, 1}, {4, 4, 4});
  REQUIRE(brute_boundary(block, true).size() == 26);
  REQUIRE(brute_boundary(block, false).size() == 26);
  for (auto c : {Connectivity::Face6, Connectivity::Vertex26}) {
    const auto b = boundary_voxels(block, c);
    CHECK(b.size() == 26);
    CHECK(std::find(b.begin(), b.end(), Index3{2, 2, 2}) == b.end());
  }
}

TEST_CASE("boundary_voxels: the grid border counts as outside") {
  const Mask3D full = solid_block({2, 2, 2}, {0, 0, 0}, {2, 2, 2});
  CHECK(boundary_voxels(full, Connectivity::Face6).size() == 8);
}

TEST_CASE("boundary_voxels: empty mask is an error") {
  CHECK(error_code_of([] { boundary_voxels(Mask3D{Geometry({3, 3, 3})}, Connectivity::Face6); }) ==
        ErrorCode::EmptyMask);
}

TEST_CASE("boundary_voxels agrees with neighbour enumeration on random masks") {
  std::mt19937_64 gen(1);
  for (int trial = 0; trial < 60; ++trial) {
    const Mask3D m = lungkit::testing::random_mask(Geometry({7, 6, 5}), 0.55 + 0.005 * trial, gen);
    if (m.empty()) continue;
    CHECK(boundary_voxels(m, Connectivity::Face6) == brute_boundary(m, true));
    CHECK(boundary_voxels(m, Connectivity::Vertex26) == brute_boundary(m, false));
  }
}

TEST_CASE("grow_lesion: zero steps gives the seed alone") {
  const Mask3D lung = sphere(8, 3.5);
  CounterRng rng(1);
  const Index3 seed{4, 4, 4};
  const Mask3D l = grow_lesion(lung, seed, 0, Connectivity::Face6, rng);
  CHECK(l.count() == 1);
  CHECK(l.test(seed));
}

TEST_CASE("grow_lesion: a one-voxel lung caps growth") {
  Mask3D lung{Geometry({5, 5, 5})};
  lung.set(Index3{2, 2, 2});
  CounterRng rng(2);
  const Mask3D l = grow_lesion(lung, {2, 2, 2}, 1000, Connectivity::Vertex26, rng);
  CHECK(l.count() == 1);
}

TEST_CASE("grow_lesion: seed outside the lung") {
  const Mask3D lung = sphere(8, 2.0);
  CounterRng rng(3);
  CHECK(error_code_of([&] { grow_lesion(lung, {0, 0, 0}, 5, Connectivity::Face6, rng); }) ==
        ErrorCode::SeedOutsideLung);
  CHECK(error_code_of([&] { grow_lesion(lung, {-1, 0, 0}, 5, Connectivity::Face6, rng); }) ==
        ErrorCode::SeedOutsideLung);
}

TEST_CASE("grow_lesion is deterministic for a fixed seed") {
  const Mask3D lung = sphere(8, 3.6);
  CounterRng a(42), b(42);
  const Mask3D first = grow_lesion(lung, {4, 4, 4}, 50, Connectivity::Face6, a);
  const Mask3D second = grow_lesion(lung, {4, 4, 4}, 50, Connectivity::Face6, b);
  CHECK(first == second);
  CHECK(first.count() > 1);
  CHECK(a.counter() == b.counter());
}

TEST_CASE("grow_lesion invariants over random walks") {
  const auto [ct, lung] = make_phantom(small_phantom(8));
  const auto boundary = boundary_voxels(lung, Connectivity::Face6);
  std::mt19937_64 gen(77);
  std::uniform_int_distribution<std::int64_t> steps(0, 3000);
  for (int trial = 0; trial < 200; ++trial) {
    const bool face = trial % 2 == 0;
    const Connectivity c = face ? Connectivity::Face6 : Connectivity::Vertex26;
    const Index3 seed = boundary[gen() % boundary.size()];
    const std::int64_t n = steps(gen);
    CounterRng rng(gen());
    const Mask3D l = grow_lesion(lung, seed, n, c, rng);
    REQUIRE(l.test(seed));
    REQUIRE(subset(l, lung));
    REQUIRE(static_cast<std::int64_t>(l.count()) <= n + 1);
    REQUIRE(flood_fill_components(l, face) == 1);
  }
}

TEST_CASE("synthesize: degenerate budget gives one boundary voxel") {
  const auto [ct, lung] = make_phantom(small_phantom(5));
  LesionSynthesisParams p;
  p.num_lesions = {1, 1};
  p.steps = {0, 0};
  p.rng_seed = 9;
  const SynthesisResult r = synthesize(ct, lung, p);
  REQUIRE(r.lesion_mask.count() == 1);
  REQUIRE(r.seeds.size() == 1);
  CHECK(r.lesion_count == 1);
  CHECK(r.lesion_mask.test(r.seeds[0]));
  const auto boundary = boundary_voxels(lung, Connectivity::Face6);
  CHECK(std::find(boundary.begin(), boundary.end(), r.seeds[0]) != boundary.end());
  const float hu = r.synthetic_ct.at(r.seeds[0]);
  CHECK(hu > -650.0f);
  CHECK(hu < -180.0f);
}

TEST_CASE("synthesize: randomized runs respect lung, HU range and partition") {
  const auto [ct, lung] = make_phantom(small_phantom(6));
  std::mt19937_64 gen(1000);
  for (int trial = 0; trial < 1000; ++trial) {
    LesionSynthesisParams p;
    p.num_lesions = {1, 1 + static_cast<std::int64_t>(gen() % 5)};
    p.steps = {0, static_cast<std::int64_t>(gen() % 1500)};
    p.connectivity = trial % 3 == 0 ? Connectivity::Vertex26 : Connectivity::Face6;
    p.rng_seed = gen();
    const SynthesisResult r = synthesize(ct, lung, p);
    for (std::size_t i = 0; i < lung.size(); ++i) {
      if (r.lesion_mask[i]) {
        REQUIRE(lung[i]);
        REQUIRE(static_cast<double>(r.synthetic_ct[i]) > -650.0);
        REQUIRE(static_cast<double>(r.synthetic_ct[i]) < -180.0);
        REQUIRE_FALSE(r.healthy_mask[i]);
      } else {
        REQUIRE(r.synthetic_ct[i] == ct[i]);
        REQUIRE(r.healthy_mask[i] == lung[i]);
      }
    }
    REQUIRE(r.lesion_count >= 1);
    REQUIRE(r.lesion_count <= p.num_lesions.max);
    REQUIRE(static_cast<std::int64_t>(r.seeds.size()) == r.lesion_count);
  }
}

TEST_CASE("synthesize is a pure function of its inputs") {
  const auto [ct, lung] = make_phantom(small_phantom(7, LungShape::Box));
  LesionSynthesisParams p;
  p.rng_seed = 1234;
  p.steps = {100, 800};
  const SynthesisResult a = synthesize(ct, lung, p);
  const SynthesisResult b = synthesize(ct, lung, p);
  CHECK(a == b);
  p.rng_seed = 1235;
  CHECK_FALSE(synthesize(ct, lung, p).lesion_mask == a.lesion_mask);
}

TEST_CASE("synthesize: seeds are distinct when the boundary is large enough") {
  const auto [ct, lung] = make_phantom(small_phantom(3));
  LesionSynthesisParams p;
  p.num_lesions = {5, 5};
  p.steps = {0, 0};
  for (std::uint64_t s = 0; s < 50; ++s) {
    p.rng_seed = s;
    const auto r = synthesize(ct, lung, p);
    std::set<std::size_t> unique;
    for (const auto& seed : r.seeds) unique.insert(lung.geometry().linear(seed));
    CHECK(unique.size() == 5);
    CHECK(r.lesion_mask.count() == 5);
  }
}

TEST_CASE("synthesize: every lesion component holds a seed; isolated lesions hold exactly one") {
  const auto [ct, lung] = make_phantom(small_phantom(4));
  for (std::uint64_t s = 0; s < 40; ++s) {
    LesionSynthesisParams p;
    p.num_lesions = {1, 4};
    p.steps = {0, 400};
    p.rng_seed = s;
    const auto r = synthesize(ct, lung, p);
    const LabelMap labels = connected_components(r.lesion_mask, p.connectivity);
    std::vector<int> seeds_per_component(labels.component_count + 1, 0);
    std::set<std::size_t> unique;
    for (const auto& seed : r.seeds)
      if (unique.insert(lung.geometry().linear(seed)).second)
        ++seeds_per_component[labels.labels[lung.geometry().linear(seed)]];
    for (std::uint32_t c = 1; c <= labels.component_count; ++c) CHECK(seeds_per_component[c] >= 1);
    if (labels.component_count == unique.size())
      for (std::uint32_t c = 1; c <= labels.component_count; ++c) CHECK(seeds_per_component[c] == 1);
  }
}

TEST_CASE("synthesize: a lung with fewer boundary voxels than lesions draws with replacement") {
  Mask3D lung{Geometry({4, 4, 4})};
  lung.set(Index3{1, 1, 1});
  lung.set(Index3{2, 1, 1});
  const Volume3D ct(lung.geometry());
  LesionSynthesisParams p;
  p.num_lesions = {5, 5};
  p.steps = {0, 3};
  const auto r = synthesize(ct, lung, p);
  CHECK(r.seeds.size() == 5);
  CHECK(r.lesion_mask.count() <= 2);
}

TEST_CASE("synthesize: optional blur keeps lesion HU inside the range and leaves the rest alone") {
  const auto [ct, lung] = make_phantom(small_phantom(2));
  LesionSynthesisParams p;
  p.rng_seed = 5;
  p.steps = {300, 600};
  p.blur_radius = 1;
  const auto blurred = synthesize(ct, lung, p);
  p.blur_radius = 0;
  const auto plain = synthesize(ct, lung, p);
  CHECK(blurred.lesion_mask == plain.lesion_mask);
  bool changed = false;
  for (std::size_t i = 0; i < ct.size(); ++i) {
    if (!blurred.lesion_mask[i]) {
      REQUIRE(blurred.synthetic_ct[i] == ct[i]);
      continue;
    }
    REQUIRE(blurred.synthetic_ct[i] >= -650.0f);
    REQUIRE(blurred.synthetic_ct[i] <= -180.0f);
    changed |= blurred.synthetic_ct[i] != plain.synthetic_ct[i];
  }
  CHECK(changed);
}

TEST_CASE("synthesize: error paths") {
  const auto [ct, lung] = make_phantom(small_phantom(1));
  const Volume3D other(Geometry({24, 24, 21}));
  CHECK(error_code_of([&] { synthesize(other, lung, {}); }) == ErrorCode::GeometryMismatch);
  CHECK(error_code_of([&] { synthesize(ct, Mask3D(lung.geometry()), {}); }) == ErrorCode::EmptyMask);

  LesionSynthesisParams bad;
  bad.num_lesions = {0, 2};
  CHECK(error_code_of([&] { synthesize(ct, lung, bad); }) == ErrorCode::InvalidArgument);
  bad = {};
  bad.steps = {10, 5};
  CHECK(error_code_of([&] { bad.validate(); }) == ErrorCode::InvalidArgument);
  bad = {};
  bad.hu_range = {-180, -650};
  CHECK(error_code_of([&] { bad.validate(); }) == ErrorCode::InvalidArgument);
}

TEST_CASE("default parameters carry the pseudo-lesion HU interval") {
  const LesionSynthesisParams p;
  CHECK(p.hu_range.low == -650.0);
  CHECK(p.hu_range.high == -180.0);
  CHECK(p.connectivity == Connectivity::Face6);
  CHECK(p.num_lesions == IntRange{1, 5});
  CHECK(p.steps == IntRange{500, 20000});
}

TEST_CASE("make_phantom: box lung geometry and near-constant air") {
  PhantomSpec spec;
  spec.dims = {8, 8, 8};
  spec.lung_shape = LungShape::Box;
  spec.air_sd = 1e-9;
  const auto [ct, lung] = make_phantom(spec);
  CHECK(lung.count() == 64);
  for (std::size_t i = 0; i < ct.size(); ++i) {
    if (lung[i]) REQUIRE(ct[i] == doctest::Approx(-900.0).epsilon(1e-9));
    else REQUIRE(ct[i] == 0.0f);
  }
  CHECK(lung.test(Index3{2, 2, 2}));
  CHECK(lung.test(Index3{5, 5, 5}));
  CHECK_FALSE(lung.test(Index3{6, 5, 5}));
}

TEST_CASE("make_phantom: lung sample mean over a 64^3 box") {
  PhantomSpec spec;
  spec.dims = {128, 128, 128};
  spec.rng_seed = 64;
  const auto [ct, lung] = make_phantom(spec);
  REQUIRE(lung.count() == 64u * 64u * 64u);
  double sum = 0.0;
  for (std::size_t i = 0; i < ct.size(); ++i)
    if (lung[i]) sum += ct[i];
  CHECK(std::abs(sum / static_cast<double>(lung.count()) + 900.0) <= 0.5);
}

TEST_CASE("make_phantom: ellipsoid pair stays inside the grid and forms two lungs") {
  for (Index3 dims : {Index3{8, 8, 8}, Index3{24, 24, 20}, Index3{64, 48, 40}}) {
    PhantomSpec spec;
    spec.dims = dims;
    spec.lung_shape = LungShape::EllipsoidPair;
    const auto [ct, lung] = make_phantom(spec);
    REQUIRE_FALSE(lung.empty());
    for (std::size_t i = 0; i < lung.size(); ++i) {
      if (!lung[i]) continue;
      const Index3 v = lung.geometry().index(i);
      REQUIRE(v.x > 0);
      REQUIRE(v.y > 0);
      REQUIRE(v.z > 0);
      REQUIRE(v.x < dims.x - 1);
      REQUIRE(v.y < dims.y - 1);
      REQUIRE(v.z < dims.z - 1);
    }
    if (dims.x >= 24) CHECK(flood_fill_components(lung) == 2);
  }
}

TEST_CASE("make_phantom is deterministic and validates its spec") {
  PhantomSpec spec;
  spec.dims = {16, 16, 16};
  spec.rng_seed = 3;
  CHECK(make_phantom(spec) == make_phantom(spec));
  spec.air_sd = 0.0;
  CHECK(error_code_of([&] { make_phantom(spec); }) == ErrorCode::InvalidArgument);
  spec.air_sd = 20.0;
  spec.dims = {3, 16, 16};
  CHECK(error_code_of([&] { make_phantom(spec); }) == ErrorCode::InvalidArgument);
}
