#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <set>
#include <string>
#include <string_view>

#include "lungkit/lesion_synth.hpp"
#include "lungkit/phantom.hpp"
#include "lungkit/slice_export.hpp"

namespace lungkit {

/// Flat `key = value` settings, one per line, `#` starts a comment.
class Config {
 public:
  static Config parse(std::string_view text);
  static Config load(const std::filesystem::path& path);

  bool has(const std::string& key) const { return values_.count(key) != 0; }
  const std::string& get(const std::string& key) const;
  void set(const std::string& key, std::string value) { values_[key] = std::move(value); }

  /// Throws UnknownConfigKey naming the first key not in `allowed`.
  void require_known(const std::set<std::string>& allowed) const;

  /// Canonical `key = value\n` lines in key order.
  std::string canonical() const;
  /// 64-bit FNV-1a of canonical(), as 16 hex digits.
  std::string hash() const;

  const std::map<std::string, std::string>& values() const noexcept { return values_; }

 private:
  std::map<std::string, std::string> values_;
};

/// Every key a pipeline config file may hold. A subcommand reads the keys it
/// uses and ignores the rest, so one file can drive the whole pipeline.
inline const std::set<std::string> kPipelineKeys{
    "num_lesions", "steps", "hu_range", "connectivity", "rng_seed", "blur_radius", "bin_width", "hu_window"};

double parse_double(std::string_view text);
std::int64_t parse_int(std::string_view text);
std::uint64_t parse_u64(std::string_view text);
/// "a,b" (whitespace allowed) into two numbers.
std::pair<double, double> parse_double_pair(std::string_view text);
Connectivity parse_connectivity(std::string_view text);
std::string_view to_string(Connectivity c);

/// Reads num_lesions, steps, hu_range, connectivity, rng_seed, blur_radius;
/// missing keys keep the defaults in `base`. Throws UnknownConfigKey for keys
/// outside kPipelineKeys.
LesionSynthesisParams synthesis_params_from(const Config& config, LesionSynthesisParams base = {});
Config to_config(const LesionSynthesisParams& params);

/// Keys: dims, spacing, lung_shape (box | ellipsoid_pair), air_mean, air_sd,
/// wall_hu, rng_seed.
PhantomSpec phantom_spec_from(const Config& config);

}  // namespace lungkit
