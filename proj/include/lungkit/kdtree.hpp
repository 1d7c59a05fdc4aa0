#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "lungkit/geometry.hpp"

namespace lungkit {

/// Static 3-d tree answering exact nearest-neighbour distance queries.
class KdTree {
 public:
  explicit KdTree(std::span<const Vec3> points);

  std::size_t size() const noexcept { return points_.size(); }

  /// Squared Euclidean distance from `q` to the closest stored point.
  /// Requires a non-empty tree.
  double nearest_squared(const Vec3& q) const noexcept;

 private:
  struct Node {
    std::uint32_t begin;
    std::uint32_t end;
    std::int32_t left = -1;   // children are -1 for leaves
    std::int32_t right = -1;
    std::uint8_t axis = 0;
    double split = 0.0;
  };

  std::int32_t build(std::uint32_t begin, std::uint32_t end);
  void search(std::int32_t node, const Vec3& q, double& best) const noexcept;

  std::vector<Vec3> points_;
  std::vector<Node> nodes_;
};

}  // namespace lungkit
