#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "lungkit/error.hpp"
#include "lungkit/geometry.hpp"

namespace lungkit {

/// Scalar CT field in Hounsfield units, x-fastest order.
class Volume3D {
 public:
  Volume3D() = default;
  /// Zero-filled volume.
  explicit Volume3D(Geometry geometry);
  /// Takes ownership of `values`; throws SizeMismatch or InvalidArgument
  /// (non-finite value).
  Volume3D(Geometry geometry, std::vector<float> values);

  const Geometry& geometry() const noexcept { return geometry_; }
  std::span<const float> values() const noexcept { return values_; }
  std::span<float> values() noexcept { return values_; }
  std::size_t size() const noexcept { return values_.size(); }

  float operator[](std::size_t i) const noexcept { return values_[i]; }
  float& operator[](std::size_t i) noexcept { return values_[i]; }
  float at(const Index3& i) const noexcept { return values_[geometry_.linear(i)]; }

  friend bool operator==(const Volume3D&, const Volume3D&) = default;

 private:
  Geometry geometry_;
  std::vector<float> values_;
};

/// Binary voxel set on a grid. One byte per voxel holding 0 or 1.
class Mask3D {
 public:
  Mask3D() = default;
  /// Empty mask.
  explicit Mask3D(Geometry geometry);
  /// Throws SizeMismatch, or InvalidArgument when an element is not 0/1.
  Mask3D(Geometry geometry, std::vector<std::uint8_t> bits);

  const Geometry& geometry() const noexcept { return geometry_; }
  std::span<const std::uint8_t> bits() const noexcept { return bits_; }
  std::span<std::uint8_t> bits() noexcept { return bits_; }
  std::size_t size() const noexcept { return bits_.size(); }

  bool operator[](std::size_t i) const noexcept { return bits_[i] != 0; }
  bool test(const Index3& i) const noexcept { return bits_[geometry_.linear(i)] != 0; }
  void set(std::size_t i, bool on = true) noexcept { bits_[i] = on ? 1 : 0; }
  void set(const Index3& i, bool on = true) noexcept { set(geometry_.linear(i), on); }

  std::size_t count() const noexcept;
  bool empty() const noexcept { return count() == 0; }

  /// Same bits on the same dims/spacing; origin is not compared.
  bool same_voxels(const Mask3D& other) const noexcept {
    return geometry_.compatible_with(other.geometry_) && bits_ == other.bits_;
  }

  friend bool operator==(const Mask3D&, const Mask3D&) = default;

 private:
  Geometry geometry_;
  std::vector<std::uint8_t> bits_;
};

}  // namespace lungkit
