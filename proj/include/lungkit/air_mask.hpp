#pragma once

#include <cstdint>
#include <vector>

#include "lungkit/volume.hpp"

namespace lungkit {

/// Multiplier on sigma for the pulmonary-air cut-off (one-sided 99.5 %).
inline constexpr double kAirSigmaFactor = 2.58;

/// Uniform-width HU histogram whose edges are integer multiples of bin_width.
struct HuHistogram {
  double bin_width = 2.0;
  /// Index of the first bin: its lower edge is first_bin * bin_width.
  std::int64_t first_bin = 0;
  std::vector<std::uint64_t> counts;
  std::uint64_t total = 0;

  double lower_edge(std::size_t bin) const noexcept {
    return static_cast<double>(first_bin + static_cast<std::int64_t>(bin)) * bin_width;
  }
  double center(std::size_t bin) const noexcept {
    return (static_cast<double>(first_bin + static_cast<std::int64_t>(bin)) + 0.5) * bin_width;
  }
  std::vector<double> edges() const;
};

struct PeakFit {
  double mu = 0.0;
  double sigma = 0.0;
  double peak_bin_center = 0.0;
  int fit_bin_count = 0;
  double threshold = 0.0;  // mu + 2.58 * sigma
};

/// Histogram of the HU values under `lung`. A value on an edge falls into the
/// higher bin. Throws GeometryMismatch, EmptyMask, InvalidArgument.
HuHistogram lung_histogram(const Volume3D& ct, const Mask3D& lung, double bin_width = 2.0);

/// Gaussian fit to the above-half-maximum cap of the highest peak.
///
/// The peak is the first bin holding the maximum count. The fit region is the
/// contiguous run of bins around it with count >= half the peak count; empty
/// bins are skipped. log(count) is fitted with a least-squares parabola whose
/// vertex gives mu and whose curvature -1/(2 sigma^2) gives sigma.
/// Throws DegenerateHistogram (fewer than 3 usable bins) or NonConcaveFit.
PeakFit fit_peak(const HuHistogram& histogram);

/// Bit set iff the voxel is in `lung` and its HU is strictly below threshold.
Mask3D compute_air_mask(const Volume3D& ct, const Mask3D& lung, double threshold);

}  // namespace lungkit
