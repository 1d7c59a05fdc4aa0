#pragma once

#include <cstdint>
#include <vector>

#include "lungkit/rng.hpp"
#include "lungkit/volume.hpp"

namespace lungkit {

struct IntRange {
  std::int64_t min = 0;
  std::int64_t max = 0;

  friend bool operator==(const IntRange&, const IntRange&) = default;
};

struct HuRange {
  double low = -650.0;
  double high = -180.0;

  friend bool operator==(const HuRange&, const HuRange&) = default;
};

struct LesionSynthesisParams {
  IntRange num_lesions{1, 5};
  IntRange steps{500, 20000};  // attempted walk steps per lesion
  HuRange hu_range{};
  Connectivity connectivity = Connectivity::Face6;
  std::uint64_t rng_seed = 0;
  /// Half-width of an optional box blur applied to lesion HU after filling,
  /// averaging only over lesion voxels. 0 disables it.
  int blur_radius = 0;

  /// Throws InvalidArgument on an empty range, k_min < 1, n_min < 0,
  /// hu_range.low >= hu_range.high or a negative blur radius.
  void validate() const;

  friend bool operator==(const LesionSynthesisParams&, const LesionSynthesisParams&) = default;
};

struct SynthesisResult {
  Volume3D synthetic_ct;
  Mask3D lesion_mask;
  Mask3D healthy_mask;  // lung and not lesion
  std::int64_t lesion_count = 0;
  std::vector<Index3> seeds;

  friend bool operator==(const SynthesisResult&, const SynthesisResult&) = default;
};

/// Mask voxels with at least one neighbour (under `connectivity`) that is
/// unset or outside the grid, in ascending linear (z, y, x) order.
/// Throws EmptyMask.
std::vector<Index3> boundary_voxels(const Mask3D& mask, Connectivity connectivity);

/// Seeded random-walk growth confined to `lung`.
///
/// Starting from {seed}, each of `steps` iterations picks a uniformly random
/// voxel already in the lesion, then a uniformly random neighbour offset; the
/// neighbour joins when it lies in the lung and is new. The result is connected
/// and has at most min(steps + 1, |lung|) voxels. Throws SeedOutsideLung.
Mask3D grow_lesion(const Mask3D& lung, const Index3& seed, std::int64_t steps,
                   Connectivity connectivity, CounterRng& rng);

/// Builds a synthetic CT with pseudo-lesions grown from lung boundary seeds.
///
/// Draw order from CounterRng(params.rng_seed), which makes the result a pure
/// function of the inputs:
///   1. lesion count k = uniform_int(k_min, k_max)
///   2. k seeds from boundary_voxels(lung): partial Fisher-Yates
///      (j = i + uniform_below(B - i)) when k <= B, else k uniform_below(B)
///   3. per lesion i in order: budget uniform_int(n_min, n_max), then its walk
///   4. HU for every lesion voxel in ascending linear index:
///      low + uniform_open01() * (high - low), kept strictly inside the range
///      after rounding to float
SynthesisResult synthesize(const Volume3D& ct, const Mask3D& lung,
                           const LesionSynthesisParams& params);

}  // namespace lungkit
