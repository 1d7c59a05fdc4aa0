#include "lungkit/config.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iterator>
#include <sstream>

namespace lungkit {

namespace {

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(first, last - first + 1));
}

template <typename T>
T parse_number(std::string_view raw, const char* what) {
  const std::string text = trim(raw);
  T v{};
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (text.empty() || ec != std::errc{} || ptr != text.data() + text.size())
    throw Error(ErrorCode::InvalidArgument, std::string("expected ") + what + ", got '" + text + "'");
  return v;
}

std::vector<std::string> split_list(std::string_view text) {
  std::vector<std::string> out;
  std::size_t start = 0;
  for (;;) {
    const auto comma = text.find(',', start);
    out.push_back(trim(text.substr(start, comma == std::string_view::npos ? comma : comma - start)));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

std::string fmt_double(double v) {
  char buf[32];
  const auto r = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, r.ptr);
}

}  // namespace

Config Config::parse(std::string_view text) {
  Config c;
  std::istringstream in{std::string(text)};
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    const std::string body = trim(line);
    if (body.empty()) continue;
    const auto eq = body.find('=');
    if (eq == std::string::npos)
      throw Error(ErrorCode::InvalidArgument, "config line " + std::to_string(line_no) + ": expected key = value");
    std::string key = trim(std::string_view(body).substr(0, eq));
    if (key.empty())
      throw Error(ErrorCode::InvalidArgument, "config line " + std::to_string(line_no) + ": empty key");
    if (c.has(key))
      throw Error(ErrorCode::InvalidArgument, "config key '" + key + "' given twice");
    c.values_[std::move(key)] = trim(std::string_view(body).substr(eq + 1));
  }
  return c;
}

Config Config::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::IoFailure, "cannot open config " + path.string());
  return parse(std::string(std::istreambuf_iterator<char>(in), {}));
}

const std::string& Config::get(const std::string& key) const {
  const auto it = values_.find(key);
  if (it == values_.end()) throw Error(ErrorCode::InvalidArgument, "missing config key '" + key + "'");
  return it->second;
}

void Config::require_known(const std::set<std::string>& allowed) const {
  for (const auto& [key, value] : values_)
    if (!allowed.count(key)) throw Error(ErrorCode::UnknownConfigKey, "unknown config key '" + key + "'");
}

std::string Config::canonical() const {
  std::string out;
  for (const auto& [key, value] : values_) out += key + " = " + value + "\n";
  return out;
}

std::string Config::hash() const {
  std::uint64_t h = 0xCBF29CE484222325ULL;
  for (unsigned char c : canonical()) {
    h ^= c;
    h *= 0x100000001B3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

double parse_double(std::string_view text) {
  const double v = parse_number<double>(text, "a number");
  if (!std::isfinite(v)) throw Error(ErrorCode::InvalidArgument, "value must be finite");
  return v;
}

std::int64_t parse_int(std::string_view text) { return parse_number<std::int64_t>(text, "an integer"); }

std::uint64_t parse_u64(std::string_view text) { return parse_number<std::uint64_t>(text, "an unsigned integer"); }

std::pair<double, double> parse_double_pair(std::string_view text) {
  const auto parts = split_list(text);
  if (parts.size() != 2)
    throw Error(ErrorCode::InvalidArgument, "expected two comma-separated numbers, got '" + std::string(text) + "'");
  return {parse_double(parts[0]), parse_double(parts[1])};
}

Connectivity parse_connectivity(std::string_view text) {
  const std::string t = trim(text);
  if (t == "face6" || t == "6") return Connectivity::Face6;
  if (t == "vertex26" || t == "26") return Connectivity::Vertex26;
  throw Error(ErrorCode::InvalidArgument, "connectivity must be face6 or vertex26, got '" + t + "'");
}

std::string_view to_string(Connectivity c) { return c == Connectivity::Face6 ? "face6" : "vertex26"; }

LesionSynthesisParams synthesis_params_from(const Config& config, LesionSynthesisParams base) {
  config.require_known(kPipelineKeys);
  auto int_range = [&](const std::string& key, IntRange& target) {
    if (!config.has(key)) return;
    const auto parts = split_list(config.get(key));
    if (parts.size() == 1) target = {parse_int(parts[0]), parse_int(parts[0])};
    else if (parts.size() == 2) target = {parse_int(parts[0]), parse_int(parts[1])};
    else throw Error(ErrorCode::InvalidArgument, key + " expects 'min,max'");
  };
  int_range("num_lesions", base.num_lesions);
  int_range("steps", base.steps);
  if (config.has("hu_range")) {
    const auto [lo, hi] = parse_double_pair(config.get("hu_range"));
    base.hu_range = {lo, hi};
  }
  if (config.has("connectivity")) base.connectivity = parse_connectivity(config.get("connectivity"));
  if (config.has("rng_seed")) base.rng_seed = parse_u64(config.get("rng_seed"));
  if (config.has("blur_radius")) base.blur_radius = static_cast<int>(parse_int(config.get("blur_radius")));
  base.validate();
  return base;
}

Config to_config(const LesionSynthesisParams& p) {
  Config c;
  c.set("num_lesions", std::to_string(p.num_lesions.min) + "," + std::to_string(p.num_lesions.max));
  c.set("steps", std::to_string(p.steps.min) + "," + std::to_string(p.steps.max));
  c.set("hu_range", fmt_double(p.hu_range.low) + "," + fmt_double(p.hu_range.high));
  c.set("connectivity", std::string(to_string(p.connectivity)));
  c.set("rng_seed", std::to_string(p.rng_seed));
  c.set("blur_radius", std::to_string(p.blur_radius));
  return c;
}

PhantomSpec phantom_spec_from(const Config& config) {
  config.require_known({"dims", "spacing", "lung_shape", "air_mean", "air_sd", "wall_hu", "rng_seed"});
  PhantomSpec spec;
  if (config.has("dims")) {
    const auto parts = split_list(config.get("dims"));
    if (parts.size() != 3) throw Error(ErrorCode::InvalidArgument, "dims expects 'nx,ny,nz'");
    spec.dims = {parse_int(parts[0]), parse_int(parts[1]), parse_int(parts[2])};
  }
  if (config.has("spacing")) {
    const auto parts = split_list(config.get("spacing"));
    if (parts.size() != 3) throw Error(ErrorCode::InvalidArgument, "spacing expects 'sx,sy,sz'");
    spec.spacing = {parse_double(parts[0]), parse_double(parts[1]), parse_double(parts[2])};
  }
  if (config.has("lung_shape")) {
    const std::string& s = config.get("lung_shape");
    if (s == "box") spec.lung_shape = LungShape::Box;
    else if (s == "ellipsoid_pair") spec.lung_shape = LungShape::EllipsoidPair;
    else throw Error(ErrorCode::InvalidArgument, "lung_shape must be box or ellipsoid_pair");
  }
  if (config.has("air_mean")) spec.air_mean = parse_double(config.get("air_mean"));
  if (config.has("air_sd")) spec.air_sd = parse_double(config.get("air_sd"));
  if (config.has("wall_hu")) spec.wall_hu = parse_double(config.get("wall_hu"));
  if (config.has("rng_seed")) spec.rng_seed = parse_u64(config.get("rng_seed"));
  spec.validate();
  return spec;
}

}  // namespace lungkit
