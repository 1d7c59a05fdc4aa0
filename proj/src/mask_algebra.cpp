#include "lungkit/mask_algebra.hpp"

#include <numeric>

namespace lungkit {

Mask3D boolean_op(const Mask3D& a, const Mask3D& b, BoolOp op) {
  require_compatible(a.geometry(), b.geometry(), "boolean_op");
  Mask3D out(a.geometry());
  const auto x = a.bits();
  const auto y = b.bits();
  auto z = out.bits();
  switch (op) {
    case BoolOp::And: for (std::size_t i = 0; i < z.size(); ++i) z[i] = x[i] & y[i]; break;
    case BoolOp::Or: for (std::size_t i = 0; i < z.size(); ++i) z[i] = x[i] | y[i]; break;
    case BoolOp::AndNot: for (std::size_t i = 0; i < z.size(); ++i) z[i] = x[i] & (y[i] ^ 1); break;
    case BoolOp::Xor: for (std::size_t i = 0; i < z.size(); ++i) z[i] = x[i] ^ y[i]; break;
  }
  return out;
}

Mask3D combine_masks(const Mask3D& lung, const Mask3D& healthy, const Mask3D& air) {
  require_compatible(lung.geometry(), healthy.geometry(), "combine_masks (healthy)");
  require_compatible(lung.geometry(), air.geometry(), "combine_masks (air)");
  Mask3D out(lung.geometry());
  const auto m = lung.bits();
  const auto ht = healthy.bits();
  const auto a = air.bits();
  auto s = out.bits();
  for (std::size_t i = 0; i < s.size(); ++i) s[i] = m[i] & (ht[i] ^ 1) & (a[i] ^ 1);
  return out;
}

namespace {

class DisjointSets {
 public:
  std::uint32_t make() {
    parent_.push_back(static_cast<std::uint32_t>(parent_.size()));
    return parent_.back();
  }
  std::uint32_t find(std::uint32_t v) {
    while (parent_[v] != v) {
      parent_[v] = parent_[parent_[v]];
      v = parent_[v];
    }
    return v;
  }
  void unite(std::uint32_t a, std::uint32_t b) {
    a = find(a);
    b = find(b);
    if (a == b) return;
    if (a < b) parent_[b] = a;
    else parent_[a] = b;
  }
  std::size_t size() const { return parent_.size(); }

 private:
  std::vector<std::uint32_t> parent_;
};

}  // namespace

LabelMap connected_components(const Mask3D& mask, Connectivity connectivity) {
  const Geometry& g = mask.geometry();
  const Index3 d = g.dims();

  // Neighbours already visited in raster order.
  std::vector<Index3> backward;
  for (const auto& o : neighbor_offsets(connectivity))
    if (o.z < 0 || (o.z == 0 && (o.y < 0 || (o.y == 0 && o.x < 0)))) backward.push_back(o);

  LabelMap out;
  out.geometry = g;
  out.labels.assign(g.voxel_count(), 0);
  DisjointSets sets;
  sets.make();  // slot 0 is background

  std::size_t i = 0;
  for (std::int64_t z = 0; z < d.z; ++z)
    for (std::int64_t y = 0; y < d.y; ++y)
      for (std::int64_t x = 0; x < d.x; ++x, ++i) {
        if (!mask[i]) continue;
        std::uint32_t label = 0;
        for (const auto& o : backward) {
          const Index3 q{x + o.x, y + o.y, z + o.z};
          if (!g.contains(q)) continue;
          const std::uint32_t nl = out.labels[g.linear(q)];
          if (nl == 0) continue;
          if (label == 0) label = nl;
          else sets.unite(label, nl);
        }
        out.labels[i] = label != 0 ? label : sets.make();
      }

  // Final numbering follows first appearance in raster order, i.e. smallest linear index.
  std::vector<std::uint32_t> final_label(sets.size(), 0);
  for (auto& l : out.labels) {
    if (l == 0) continue;
    const std::uint32_t root = sets.find(l);
    if (final_label[root] == 0) final_label[root] = ++out.component_count;
    l = final_label[root];
  }
  return out;
}

}  // namespace lungkit
