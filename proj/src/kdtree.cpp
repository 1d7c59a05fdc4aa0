#include "lungkit/kdtree.hpp"

#include <algorithm>
#include <limits>

namespace lungkit {

namespace {

constexpr std::uint32_t kLeafSize = 8;

double coord(const Vec3& p, int axis) noexcept { return axis == 0 ? p.x : (axis == 1 ? p.y : p.z); }

}  // namespace

KdTree::KdTree(std::span<const Vec3> points) : points_(points.begin(), points.end()) {
  if (points_.size() >= std::numeric_limits<std::uint32_t>::max())
    throw std::length_error("KdTree: too many points");
  if (!points_.empty()) {
    nodes_.reserve(2 * points_.size() / kLeafSize + 1);
    build(0, static_cast<std::uint32_t>(points_.size()));
  }
}

std::int32_t KdTree::build(std::uint32_t begin, std::uint32_t end) {
  const auto id = static_cast<std::int32_t>(nodes_.size());
  nodes_.push_back({begin, end});
  if (end - begin <= kLeafSize) return id;

  Vec3 lo = points_[begin], hi = points_[begin];
  for (std::uint32_t i = begin + 1; i < end; ++i) {
    const Vec3& p = points_[i];
    lo = {std::min(lo.x, p.x), std::min(lo.y, p.y), std::min(lo.z, p.z)};
    hi = {std::max(hi.x, p.x), std::max(hi.y, p.y), std::max(hi.z, p.z)};
  }
  const double ex = hi.x - lo.x, ey = hi.y - lo.y, ez = hi.z - lo.z;
  const int axis = ex >= ey && ex >= ez ? 0 : (ey >= ez ? 1 : 2);
  if (std::max({ex, ey, ez}) == 0.0) return id;  // all points coincide

  const std::uint32_t mid = begin + (end - begin) / 2;
  std::nth_element(points_.begin() + begin, points_.begin() + mid, points_.begin() + end,
                   [axis](const Vec3& a, const Vec3& b) { return coord(a, axis) < coord(b, axis); });
  const double split = coord(points_[mid], axis);
  const std::int32_t left = build(begin, mid);
  const std::int32_t right = build(mid, end);
  Node& node = nodes_[static_cast<std::size_t>(id)];
  node.axis = static_cast<std::uint8_t>(axis);
  node.split = split;
  node.left = left;
  node.right = right;
  return id;
}

void KdTree::search(std::int32_t id, const Vec3& q, double& best) const noexcept {
  const Node& node = nodes_[static_cast<std::size_t>(id)];
  if (node.left < 0) {
    for (std::uint32_t i = node.begin; i < node.end; ++i) {
      const Vec3& p = points_[i];
      const double dx = p.x - q.x, dy = p.y - q.y, dz = p.z - q.z;
      best = std::min(best, dx * dx + dy * dy + dz * dz);
    }
    return;
  }
  // Left holds coordinates <= split, right holds coordinates >= split.
  const double delta = coord(q, node.axis) - node.split;
  const std::int32_t near = delta < 0.0 ? node.left : node.right;
  const std::int32_t far = delta < 0.0 ? node.right : node.left;
  search(near, q, best);
  if (delta * delta <= best) search(far, q, best);
}

double KdTree::nearest_squared(const Vec3& q) const noexcept {
  double best = std::numeric_limits<double>::infinity();
  if (!nodes_.empty()) search(0, q, best);
  return best;
}

}  // namespace lungkit
