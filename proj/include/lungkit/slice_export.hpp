#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "lungkit/volume.hpp"

namespace lungkit {

struct HuWindow {
  double low = -1000.0;
  double high = 400.0;

  friend bool operator==(const HuWindow&, const HuWindow&) = default;
};

struct SliceEntry {
  std::string slice_id;
  std::string image_path;  // relative to the manifest directory
  std::string mask_path;
  std::int64_t height = 0;
  std::int64_t width = 0;

  friend bool operator==(const SliceEntry&, const SliceEntry&) = default;
};

struct SliceDatasetManifest {
  static constexpr int kFormatVersion = 1;

  int format_version = kFormatVersion;
  HuWindow hu_window;
  std::vector<SliceEntry> entries;

  friend bool operator==(const SliceDatasetManifest&, const SliceDatasetManifest&) = default;
};

/// Writes one float32 little-endian image and mask file per axial slice plus
/// `manifest.json`. Image intensities map [low, high] HU onto [0, 1], clamped.
SliceDatasetManifest export_slice_dataset(const Volume3D& ct, const Mask3D& mask,
                                          const std::filesystem::path& out_dir,
                                          HuWindow window = {});

/// Parses `manifest.json` in `dir` and checks every referenced file exists and
/// holds height*width float32 values.
SliceDatasetManifest read_slice_manifest(const std::filesystem::path& dir);

/// Loads one exported raw float32 slice.
std::vector<float> read_slice_file(const std::filesystem::path& path, std::size_t expected_count);

}  // namespace lungkit
