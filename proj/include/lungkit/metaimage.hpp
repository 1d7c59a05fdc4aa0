#pragma once

#include <filesystem>

#include "lungkit/volume.hpp"

namespace lungkit {

enum class ElementType { Short, UChar, Float };

/// Reads a MetaImage (.mhd + raw, or a single file with ElementDataFile =
/// LOCAL). MET_SHORT, MET_UCHAR and MET_FLOAT are accepted; byte order follows
/// ElementByteOrderMSB / BinaryDataByteOrderMSB. A non-identity
/// TransformMatrix is ignored with a warning.
Volume3D read_volume(const std::filesystem::path& header_path);

/// Writes `<stem>.mhd` plus `<stem>.raw` next to it. Integer element types
/// round half away from zero and throw RangeOverflow when a rounded value does
/// not fit.
void write_volume(const Volume3D& volume, const std::filesystem::path& header_path,
                  ElementType element_type = ElementType::Float);

/// Bit set iff value > threshold.
Mask3D volume_to_mask(const Volume3D& volume, double threshold);

/// Any non-zero label becomes 1 (threshold 0.5).
Mask3D read_mask(const std::filesystem::path& header_path);

/// Stored as MET_UCHAR 0/1.
void write_mask(const Mask3D& mask, const std::filesystem::path& header_path);

}  // namespace lungkit
