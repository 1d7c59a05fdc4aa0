#include "lungkit/slice_export.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cstdio>
#include <cstring>
#include <fstream>

#include <json.hpp>

namespace lungkit {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr const char* kManifestName = "manifest.json";

void write_floats(const fs::path& path, std::span<const float> values) {
  std::string bytes(values.size() * 4, '\0');
  char* p = bytes.data();
  for (float v : values) {
    auto raw = std::bit_cast<std::array<char, 4>>(v);
    if constexpr (std::endian::native == std::endian::big) std::reverse(raw.begin(), raw.end());
    std::memcpy(p, raw.data(), 4);
    p += 4;
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw Error(ErrorCode::IoFailure, "cannot write " + path.string());
}

std::string slice_name(std::int64_t z, const char* kind) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "slice_%05lld_%s.raw", static_cast<long long>(z), kind);
  return buf;
}

}  // namespace

SliceDatasetManifest export_slice_dataset(const Volume3D& ct, const Mask3D& mask, const fs::path& out_dir,
                                          HuWindow window) {
  require_compatible(ct.geometry(), mask.geometry(), "export_slice_dataset");
  if (!(window.low < window.high))
    throw Error(ErrorCode::InvalidArgument, "HU window requires low < high");

  std::error_code ec;
  fs::create_directories(out_dir, ec);
  if (ec) throw Error(ErrorCode::IoFailure, "cannot create " + out_dir.string() + ": " + ec.message());

  const Index3 d = ct.geometry().dims();
  const auto plane = static_cast<std::size_t>(d.x * d.y);
  const double scale = 1.0 / (window.high - window.low);

  SliceDatasetManifest manifest;
  manifest.hu_window = window;
  std::vector<float> image(plane);
  std::vector<float> labels(plane);
  for (std::int64_t z = 0; z < d.z; ++z) {
    const std::size_t base = static_cast<std::size_t>(z) * plane;
    for (std::size_t i = 0; i < plane; ++i) {
      const double t = (static_cast<double>(ct[base + i]) - window.low) * scale;
      image[i] = static_cast<float>(std::clamp(t, 0.0, 1.0));
      labels[i] = mask[base + i] ? 1.0f : 0.0f;
    }
    SliceEntry entry;
    entry.slice_id = "z" + std::to_string(z);
    entry.image_path = slice_name(z, "image");
    entry.mask_path = slice_name(z, "mask");
    entry.height = d.y;
    entry.width = d.x;
    write_floats(out_dir / entry.image_path, image);
    write_floats(out_dir / entry.mask_path, labels);
    manifest.entries.push_back(std::move(entry));
  }

  json doc;
  doc["format_version"] = manifest.format_version;
  doc["hu_window"] = {window.low, window.high};
  doc["entries"] = json::array();
  for (const auto& e : manifest.entries)
    doc["entries"].push_back({{"slice_id", e.slice_id},
                              {"image_path", e.image_path},
                              {"mask_path", e.mask_path},
                              {"height", e.height},
                              {"width", e.width}});
  std::ofstream out(out_dir / kManifestName, std::ios::trunc);
  out << doc.dump(2) << '\n';
  if (!out) throw Error(ErrorCode::IoFailure, "cannot write manifest in " + out_dir.string());
  return manifest;
}

std::vector<float> read_slice_file(const fs::path& path, std::size_t expected_count) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::IoFailure, "cannot open " + path.string());
  std::string bytes(std::istreambuf_iterator<char>(in), {});
  if (bytes.size() != expected_count * 4)
    throw Error(ErrorCode::SizeMismatch, path.string() + " holds " + std::to_string(bytes.size()) +
                                             " bytes, expected " + std::to_string(expected_count * 4));
  std::vector<float> values(expected_count);
  for (std::size_t i = 0; i < expected_count; ++i) {
    std::array<char, 4> raw;
    std::memcpy(raw.data(), bytes.data() + 4 * i, 4);
    if constexpr (std::endian::native == std::endian::big) std::reverse(raw.begin(), raw.end());
    values[i] = std::bit_cast<float>(raw);
  }
  return values;
}

SliceDatasetManifest read_slice_manifest(const fs::path& dir) {
  std::ifstream in(dir / kManifestName);
  if (!in) throw Error(ErrorCode::IoFailure, "cannot open " + (dir / kManifestName).string());
  SliceDatasetManifest manifest;
  try {
    const json doc = json::parse(in);
    manifest.format_version = doc.at("format_version").get<int>();
    const auto& w = doc.at("hu_window");
    manifest.hu_window = {w.at(0).get<double>(), w.at(1).get<double>()};
    for (const auto& e : doc.at("entries"))
      manifest.entries.push_back({e.at("slice_id").get<std::string>(), e.at("image_path").get<std::string>(),
                                  e.at("mask_path").get<std::string>(), e.at("height").get<std::int64_t>(),
                                  e.at("width").get<std::int64_t>()});
  } catch (const json::exception& ex) {
    throw Error(ErrorCode::MalformedInput, std::string("invalid slice manifest: ") + ex.what());
  }
  if (manifest.format_version != SliceDatasetManifest::kFormatVersion)
    throw Error(ErrorCode::MalformedInput, "unsupported manifest format_version " +
                                               std::to_string(manifest.format_version));
  if (!(manifest.hu_window.low < manifest.hu_window.high))
    throw Error(ErrorCode::MalformedInput, "manifest hu_window requires low < high");
  for (const auto& e : manifest.entries) {
    if (e.height < 1 || e.width < 1) throw Error(ErrorCode::MalformedInput, "non-positive slice size");
    const auto expected = static_cast<std::uintmax_t>(e.height * e.width) * 4;
    for (const auto& rel : {e.image_path, e.mask_path}) {
      const fs::path p = dir / rel;
      if (!fs::exists(p)) throw Error(ErrorCode::IoFailure, "missing slice file " + p.string());
      if (fs::file_size(p) != expected)
        throw Error(ErrorCode::SizeMismatch, p.string() + " does not hold height*width float32 values");
    }
  }
  return manifest;
}

}  // namespace lungkit
