#include "lungkit/air_mask.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace lungkit {

std::vector<double> HuHistogram::edges() const {
  std::vector<double> out(counts.size() + 1);
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = lower_edge(i);
  return out;
}

namespace {

// floor(v / w), corrected so that the computed edges bracket v: edge(k) <= v < edge(k + 1).
std::int64_t bin_of(double v, double w) {
  auto k = static_cast<std::int64_t>(std::floor(v / w));
  if (v < static_cast<double>(k) * w) --k;
  else if (v >= static_cast<double>(k + 1) * w) ++k;
  return k;
}

}  // namespace

HuHistogram lung_histogram(const Volume3D& ct, const Mask3D& lung, double bin_width) {
  require_compatible(ct.geometry(), lung.geometry(), "lung_histogram");
  if (!(bin_width > 0.0) || !std::isfinite(bin_width))
    throw Error(ErrorCode::InvalidArgument, "bin_width must be > 0");

  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (std::size_t i = 0; i < ct.size(); ++i)
    if (lung[i]) {
      lo = std::min(lo, static_cast<double>(ct[i]));
      hi = std::max(hi, static_cast<double>(ct[i]));
    }
  if (lo > hi) throw Error(ErrorCode::EmptyMask, "lung_histogram: lung mask is empty");

  HuHistogram h;
  h.bin_width = bin_width;
  h.first_bin = bin_of(lo, bin_width);
  h.counts.assign(static_cast<std::size_t>(bin_of(hi, bin_width) - h.first_bin + 1), 0);
  for (std::size_t i = 0; i < ct.size(); ++i)
    if (lung[i]) {
      ++h.counts[static_cast<std::size_t>(bin_of(ct[i], bin_width) - h.first_bin)];
      ++h.total;
    }
  return h;
}

PeakFit fit_peak(const HuHistogram& histogram) {
  const auto& counts = histogram.counts;
  const auto nonzero = std::count_if(counts.begin(), counts.end(), [](auto c) { return c > 0; });
  if (nonzero < 3) throw Error(ErrorCode::DegenerateHistogram, "histogram has fewer than 3 non-empty bins");

  const auto peak = static_cast<std::size_t>(std::max_element(counts.begin(), counts.end()) - counts.begin());
  const double half = 0.5 * static_cast<double>(counts[peak]);
  std::size_t first = peak, last = peak;
  while (first > 0 && static_cast<double>(counts[first - 1]) >= half) --first;
  while (last + 1 < counts.size() && static_cast<double>(counts[last + 1]) >= half) ++last;

  // Abscissa in bin units relative to the peak keeps the fit well conditioned.
  std::vector<double> xs, ys;
  for (std::size_t b = first; b <= last; ++b) {
    if (counts[b] == 0) continue;
    xs.push_back(static_cast<double>(b) - static_cast<double>(peak));
    ys.push_back(std::log(static_cast<double>(counts[b])));
  }
  const std::size_t n = xs.size();
  if (n < 3) throw Error(ErrorCode::DegenerateHistogram, "peak cap spans fewer than 3 bins");

  // Least squares in an orthogonal basis {1, t, t^2 - alpha t - beta}, t = x - mean(x).
  double xbar = 0.0;
  for (double x : xs) xbar += x;
  xbar /= static_cast<double>(n);
  double s2 = 0.0, s3 = 0.0;
  for (double x : xs) {
    const double t = x - xbar;
    s2 += t * t;
    s3 += t * t * t;
  }
  const double alpha = s3 / s2;
  const double beta = s2 / static_cast<double>(n);
  double p1y = 0.0, p2y = 0.0, p2p2 = 0.0, p2y_abs = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double t = xs[i] - xbar;
    const double p2 = t * t - alpha * t - beta;
    p1y += t * ys[i];
    p2y += p2 * ys[i];
    p2p2 += p2 * p2;
    p2y_abs += std::abs(p2 * ys[i]);
  }
  const double c1 = p1y / s2;
  const double c2 = p2y / p2p2;
  // Curvature indistinguishable from zero within rounding is treated as non-concave.
  const double tolerance = 8.0 * static_cast<double>(n) * std::numeric_limits<double>::epsilon() * p2y_abs / p2p2;
  if (!(c2 < -tolerance))
    throw Error(ErrorCode::NonConcaveFit, "log-count parabola does not open downward");

  const double w = histogram.bin_width;
  const double vertex = xbar - (c1 - c2 * alpha) / (2.0 * c2);
  PeakFit fit;
  fit.peak_bin_center = histogram.center(peak);
  fit.mu = fit.peak_bin_center + vertex * w;
  fit.sigma = w * std::sqrt(-1.0 / (2.0 * c2));
  fit.fit_bin_count = static_cast<int>(n);
  fit.threshold = fit.mu + kAirSigmaFactor * fit.sigma;
  return fit;
}

Mask3D compute_air_mask(const Volume3D& ct, const Mask3D& lung, double threshold) {
  require_compatible(ct.geometry(), lung.geometry(), "compute_air_mask");
  Mask3D air(lung.geometry());
  for (std::size_t i = 0; i < ct.size(); ++i) air.set(i, lung[i] && static_cast<double>(ct[i]) < threshold);
  return air;
}

}  // namespace lungkit
