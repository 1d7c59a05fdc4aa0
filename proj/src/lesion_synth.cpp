#include "lungkit/lesion_synth.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace lungkit {

namespace {

float strictly_inside(double value, const HuRange& range) {
  auto f = static_cast<float>(value);
  if (static_cast<double>(f) <= range.low) f = std::nextafter(f, std::numeric_limits<float>::infinity());
  if (static_cast<double>(f) >= range.high) f = std::nextafter(f, -std::numeric_limits<float>::infinity());
  return f;
}

// Mean of lesion HU over a (2r+1)^3 box, restricted to lesion voxels.
void box_blur_lesion(Volume3D& ct, const Mask3D& lesion, int radius) {
  const Geometry& g = ct.geometry();
  const Volume3D source = ct;
  for (std::size_t i = 0; i < lesion.size(); ++i) {
    if (!lesion[i]) continue;
    const Index3 c = g.index(i);
    double sum = 0.0;
    std::size_t n = 0;
    for (std::int64_t dz = -radius; dz <= radius; ++dz)
      for (std::int64_t dy = -radius; dy <= radius; ++dy)
        for (std::int64_t dx = -radius; dx <= radius; ++dx) {
          const Index3 q{c.x + dx, c.y + dy, c.z + dz};
          if (!g.contains(q) || !lesion.test(q)) continue;
          sum += source.at(q);
          ++n;
        }
    ct[i] = static_cast<float>(sum / static_cast<double>(n));
  }
}

}  // namespace

void LesionSynthesisParams::validate() const {
  if (num_lesions.min < 1 || num_lesions.min > num_lesions.max)
    throw Error(ErrorCode::InvalidArgument, "num_lesions must satisfy 1 <= min <= max");
  if (steps.min < 0 || steps.min > steps.max)
    throw Error(ErrorCode::InvalidArgument, "steps must satisfy 0 <= min <= max");
  if (!(hu_range.low < hu_range.high) || !std::isfinite(hu_range.low) || !std::isfinite(hu_range.high))
    throw Error(ErrorCode::InvalidArgument, "hu_range must satisfy low < high");
  const float above_low = strictly_inside(hu_range.low, hu_range);
  if (!(static_cast<double>(above_low) > hu_range.low && static_cast<double>(above_low) < hu_range.high))
    throw Error(ErrorCode::InvalidArgument, "hu_range is too narrow to hold a float value");
  if (blur_radius < 0) throw Error(ErrorCode::InvalidArgument, "blur_radius must be >= 0");
}

std::vector<Index3> boundary_voxels(const Mask3D& mask, Connectivity connectivity) {
  const Geometry& g = mask.geometry();
  const Index3 d = g.dims();
  const auto offsets = neighbor_offsets(connectivity);
  std::vector<std::ptrdiff_t> linear_offsets;
  for (const auto& o : offsets) linear_offsets.push_back(o.x + d.x * (o.y + d.y * o.z));

  const auto bits = mask.bits();
  std::vector<Index3> out;
  bool any = false;
  std::size_t i = 0;
  for (std::int64_t z = 0; z < d.z; ++z) {
    const bool z_edge = z == 0 || z == d.z - 1;
    for (std::int64_t y = 0; y < d.y; ++y) {
      const bool yz_edge = z_edge || y == 0 || y == d.y - 1;
      for (std::int64_t x = 0; x < d.x; ++x, ++i) {
        if (!bits[i]) continue;
        any = true;
        // Outside the grid counts as background, so every set voxel on the border is boundary.
        bool boundary = yz_edge || x == 0 || x == d.x - 1;
        if (!boundary)
          for (auto off : linear_offsets)
            if (!bits[static_cast<std::size_t>(static_cast<std::ptrdiff_t>(i) + off)]) {
              boundary = true;
              break;
            }
        if (boundary) out.push_back({x, y, z});
      }
    }
  }
  if (!any) throw Error(ErrorCode::EmptyMask, "boundary_voxels: mask has no set voxels");
  return out;
}

Mask3D grow_lesion(const Mask3D& lung, const Index3& seed, std::int64_t steps, Connectivity connectivity,
                   CounterRng& rng) {
  const Geometry& g = lung.geometry();
  if (!g.contains(seed) || !lung.test(seed))
    throw Error(ErrorCode::SeedOutsideLung, "grow_lesion: seed is not a lung voxel");
  if (steps < 0) throw Error(ErrorCode::InvalidArgument, "grow_lesion: steps must be >= 0");

  const auto offsets = neighbor_offsets(connectivity);
  Mask3D lesion(g);
  std::vector<Index3> members{seed};
  lesion.set(seed);
  for (std::int64_t step = 0; step < steps; ++step) {
    const Index3& v = members[rng.uniform_below(members.size())];
    const Index3& o = offsets[rng.uniform_below(offsets.size())];
    const Index3 u{v.x + o.x, v.y + o.y, v.z + o.z};
    if (!g.contains(u)) continue;
    const std::size_t lu = g.linear(u);
    if (!lung[lu] || lesion[lu]) continue;
    lesion.set(lu);
    members.push_back(u);
  }
  return lesion;
}

SynthesisResult synthesize(const Volume3D& ct, const Mask3D& lung, const LesionSynthesisParams& params) {
  require_compatible(ct.geometry(), lung.geometry(), "synthesize");
  params.validate();
  const std::vector<Index3> boundary = boundary_voxels(lung, params.connectivity);

  CounterRng rng(params.rng_seed);
  SynthesisResult result;
  result.lesion_count = rng.uniform_int(params.num_lesions.min, params.num_lesions.max);

  const auto k = static_cast<std::size_t>(result.lesion_count);
  if (k <= boundary.size()) {
    std::vector<Index3> pool = boundary;
    for (std::size_t i = 0; i < k; ++i) {
      const std::size_t j = i + rng.uniform_below(pool.size() - i);
      std::swap(pool[i], pool[j]);
      result.seeds.push_back(pool[i]);
    }
  } else {
    for (std::size_t i = 0; i < k; ++i) result.seeds.push_back(boundary[rng.uniform_below(boundary.size())]);
  }

  Mask3D lesions(lung.geometry());
  auto lesion_bits = lesions.bits();
  for (const Index3& seed : result.seeds) {
    const std::int64_t budget = rng.uniform_int(params.steps.min, params.steps.max);
    const Mask3D grown = grow_lesion(lung, seed, budget, params.connectivity, rng);
    const auto grown_bits = grown.bits();
    for (std::size_t i = 0; i < grown_bits.size(); ++i) lesion_bits[i] |= grown_bits[i];
  }

  Volume3D synthetic = ct;
  const double width = params.hu_range.high - params.hu_range.low;
  for (std::size_t i = 0; i < lesions.size(); ++i)
    if (lesions[i]) synthetic[i] = strictly_inside(params.hu_range.low + rng.uniform_open01() * width, params.hu_range);
  if (params.blur_radius > 0) box_blur_lesion(synthetic, lesions, params.blur_radius);

  Mask3D healthy(lung.geometry());
  for (std::size_t i = 0; i < lung.size(); ++i) healthy.set(i, lung[i] && !lesions[i]);

  result.synthetic_ct = std::move(synthetic);
  result.lesion_mask = std::move(lesions);
  result.healthy_mask = std::move(healthy);
  return result;
}

}  // namespace lungkit
