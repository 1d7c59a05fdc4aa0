#include "lungkit/severity.hpp"

#include <algorithm>
#include <cmath>

#include <boost/math/special_functions/beta.hpp>

namespace lungkit {

double damage_load(const Mask3D& lesion, const Mask3D& lung) {
  require_compatible(lesion.geometry(), lung.geometry(), "damage_load");
  std::uint64_t lung_count = 0, inside = 0, outside = 0;
  const auto l = lesion.bits();
  const auto m = lung.bits();
  for (std::size_t i = 0; i < l.size(); ++i) {
    lung_count += m[i];
    inside += l[i] & m[i];
    outside += l[i] & (m[i] ^ 1);
  }
  if (lung_count == 0) throw Error(ErrorCode::EmptyMask, "damage_load: lung mask is empty");
  if (outside > 0)
    warn(std::to_string(outside) + " lesion voxels lie outside the lung and are not counted");
  return static_cast<double>(inside) / static_cast<double>(lung_count);
}

double damage_score(const Volume3D& ct, const Mask3D& lesion) {
  require_compatible(ct.geometry(), lesion.geometry(), "damage_score");
  std::vector<double> hu;
  for (std::size_t i = 0; i < ct.size(); ++i)
    if (lesion[i]) hu.push_back(ct[i]);
  if (hu.empty()) throw Error(ErrorCode::EmptyMask, "damage_score: lesion mask is empty");
  const std::size_t mid = hu.size() / 2;
  std::nth_element(hu.begin(), hu.begin() + static_cast<std::ptrdiff_t>(mid), hu.end());
  const double upper = hu[mid];
  if (hu.size() % 2 == 1) return upper;
  const double lower = *std::max_element(hu.begin(), hu.begin() + static_cast<std::ptrdiff_t>(mid));
  return 0.5 * (lower + upper);
}

double pearson_p_value(double r, std::size_t n) {
  if (n < 3) throw Error(ErrorCode::TooFewPoints, "p-value needs at least 3 points");
  if (std::abs(r) >= 1.0) return 0.0;
  // Two-sided P(|T| >= |t|) for t = r sqrt(df / (1 - r^2)) equals I_{df/(df+t^2)}(df/2, 1/2),
  // and df / (df + t^2) simplifies to 1 - r^2.
  const double df = static_cast<double>(n - 2);
  return boost::math::ibeta(0.5 * df, 0.5, 1.0 - r * r);
}

CorrelationResult pearson(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw Error(ErrorCode::LengthMismatch, "pearson: inputs differ in length");
  const std::size_t n = x.size();
  if (n < 3) throw Error(ErrorCode::TooFewPoints, "pearson: need at least 3 points, got " + std::to_string(n));

  auto constant = [](std::span<const double> v) {
    return std::all_of(v.begin(), v.end(), [&](double e) { return e == v.front(); });
  };
  if (constant(x) || constant(y)) throw Error(ErrorCode::ConstantInput, "pearson: input has zero variance");

  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= static_cast<double>(n);
  my /= static_cast<double>(n);
  double sxx = 0.0, syy = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double dx = x[i] - mx, dy = y[i] - my;
    sxx += dx * dx;
    syy += dy * dy;
    sxy += dx * dy;
  }
  if (sxx == 0.0 || syy == 0.0) throw Error(ErrorCode::ConstantInput, "pearson: input has zero variance");

  CorrelationResult res;
  res.n = n;
  res.r = std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
  res.p = pearson_p_value(res.r, n);
  res.significant = res.p < kSignificanceLevel;
  return res;
}

std::vector<CorrelationResult> correlate_table(std::span<const SubjectRecord> records) {
  if (records.size() < 3)
    throw Error(ErrorCode::TooFewPoints, "correlate_table: need at least 3 subjects, got " +
                                             std::to_string(records.size()));
  using Field = std::optional<double> SubjectRecord::*;
  struct Pair {
    const char* score;
    Field score_field;
    const char* lab;
    Field lab_field;
  };
  static constexpr Pair kPairs[] = {
      {"DL", &SubjectRecord::dl, "WBC", &SubjectRecord::wbc},
      {"DL", &SubjectRecord::dl, "LYM%", &SubjectRecord::lym_pct},
      {"DS", &SubjectRecord::ds, "WBC", &SubjectRecord::wbc},
      {"DS", &SubjectRecord::ds, "LYM%", &SubjectRecord::lym_pct},
  };

  std::vector<CorrelationResult> out;
  for (const Pair& pair : kPairs) {
    std::vector<double> xs, ys;
    std::size_t excluded = 0;
    for (const auto& rec : records) {
      const auto& sx = rec.*pair.score_field;
      const auto& ly = rec.*pair.lab_field;
      if (!sx || !ly) {
        ++excluded;
        continue;
      }
      xs.push_back(*sx);
      ys.push_back(*ly);
    }
    if (excluded > 0)
      warn(std::string(pair.score) + "/" + pair.lab + ": excluded " + std::to_string(excluded) +
           " records with missing values");
    CorrelationResult res;
    try {
      res = pearson(xs, ys);
    } catch (const Error& e) {
      res = {};
      res.n = xs.size();
      res.r = std::nan("");
      res.p = std::nan("");
      res.failure = e.code();
      res.failure_message = e.what();
    }
    res.score = pair.score;
    res.lab = pair.lab;
    res.excluded = excluded;
    out.push_back(std::move(res));
  }
  return out;
}

}  // namespace lungkit
