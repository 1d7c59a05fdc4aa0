#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "lungkit/error.hpp"
#include "lungkit/volume.hpp"

namespace lungkit {

/// Two-sided significance level for correlation reporting.
inline constexpr double kSignificanceLevel = 0.05;

struct SeverityScores {
  double dl = 0.0;  // damage load: lesion / lung voxel ratio
  double ds = 0.0;  // damage score: median lesion HU
};

/// |lesion and lung| / |lung|. Lesion voxels outside the lung are ignored
/// with a warning. Throws GeometryMismatch, EmptyMask.
double damage_load(const Mask3D& lesion, const Mask3D& lung);

/// Median HU over lesion voxels; an even count averages the two middle values.
/// Throws GeometryMismatch, EmptyMask.
double damage_score(const Volume3D& ct, const Mask3D& lesion);

struct CorrelationResult {
  std::string score;  // "DL" or "DS"
  std::string lab;    // "WBC" or "LYM%"
  std::size_t n = 0;
  double r = 0.0;
  double p = 1.0;
  bool significant = false;
  /// Records dropped for this pair because a field was missing.
  std::size_t excluded = 0;
  /// Set when this pair could not be computed; r and p are then meaningless.
  std::optional<ErrorCode> failure;
  std::string failure_message;
};

/// Pearson r with a two-sided p-value from Student's t on n - 2 degrees of
/// freedom. |r| == 1 gives p = 0. Throws LengthMismatch, TooFewPoints,
/// ConstantInput.
CorrelationResult pearson(std::span<const double> x, std::span<const double> y);

/// Regularised incomplete beta based p-value for a correlation r on n points.
double pearson_p_value(double r, std::size_t n);

struct SubjectRecord {
  std::string id;
  std::optional<double> wbc;      // 10^9 / L
  std::optional<double> lym_pct;  // percent
  std::optional<double> dl;
  std::optional<double> ds;       // HU
};

/// Pearson results for (DL,WBC), (DL,LYM%), (DS,WBC), (DS,LYM%) in that order.
/// Records missing either field of a pair are dropped from that pair only; a
/// pair that fails (constant input, < 3 points) carries `failure` while the
/// others are still computed. Throws TooFewPoints for fewer than 3 records.
std::vector<CorrelationResult> correlate_table(std::span<const SubjectRecord> records);

}  // namespace lungkit
