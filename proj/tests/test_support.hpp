#pragma once

// Test-only helpers and brute-force oracles. Nothing here calls into the
// library code paths it is used to check.

#include <atomic>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <limits>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include <unistd.h>

#include "lungkit/error.hpp"
#include "lungkit/geometry.hpp"
#include "lungkit/volume.hpp"

namespace lungkit::testing {

class TempDir {
 public:
  TempDir() {
    static std::atomic<int> counter{0};
    path_ = std::filesystem::temp_directory_path() /
            ("lungkit_test_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
    std::filesystem::remove_all(path_);
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

 private:
  std::filesystem::path path_;
};

/// Code of the lungkit::Error thrown by `f`, or nullopt when nothing is thrown.
template <typename F>
std::optional<ErrorCode> error_code_of(F&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  return std::nullopt;
}

inline std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  return std::string(std::istreambuf_iterator<char>(in), {});
}

inline void spit(const std::filesystem::path& p, const std::string& bytes) {
  std::ofstream out(p, std::ios::binary | std::ios::trunc);
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
}

inline std::vector<std::uint8_t> bit_vector(const Mask3D& m) { return {m.bits().begin(), m.bits().end()}; }

inline Mask3D random_mask(const Geometry& g, double density, std::mt19937_64& gen) {
  std::bernoulli_distribution bit(density);
  Mask3D m(g);
  for (std::size_t i = 0; i < m.size(); ++i) m.set(i, bit(gen));
  return m;
}

inline bool in_grid(const Index3& d, std::int64_t x, std::int64_t y, std::int64_t z) {
  return x >= 0 && y >= 0 && z >= 0 && x < d.x && y < d.y && z < d.z;
}

inline bool is_neighbor(int dx, int dy, int dz, bool faces_only) {
  const int n = (dx != 0) + (dy != 0) + (dz != 0);
  return n > 0 && (!faces_only || n == 1);
}

/// Boundary voxels by explicit enumeration of every neighbour coordinate.
inline std::vector<Index3> brute_boundary(const Mask3D& m, bool faces_only = true) {
  const Index3 d = m.geometry().dims();
  auto on = [&](std::int64_t x, std::int64_t y, std::int64_t z) {
    return in_grid(d, x, y, z) && m.bits()[static_cast<std::size_t>(x + d.x * (y + d.y * z))] != 0;
  };
  std::vector<Index3> out;
  for (std::int64_t z = 0; z < d.z; ++z)
    for (std::int64_t y = 0; y < d.y; ++y)
      for (std::int64_t x = 0; x < d.x; ++x) {
        if (!on(x, y, z)) continue;
        bool boundary = false;
        for (int dz = -1; dz <= 1; ++dz)
          for (int dy = -1; dy <= 1; ++dy)
            for (int dx = -1; dx <= 1; ++dx)
              if (is_neighbor(dx, dy, dz, faces_only) && !on(x + dx, y + dy, z + dz)) boundary = true;
        if (boundary) out.push_back({x, y, z});
      }
  return out;
}

/// Component count by depth-first flood fill with an explicit stack.
inline int flood_fill_components(const Mask3D& m, bool faces_only = true) {
  const Index3 d = m.geometry().dims();
  std::vector<char> seen(m.size(), 0);
  int components = 0;
  for (std::size_t start = 0; start < m.size(); ++start) {
    if (!m.bits()[start] || seen[start]) continue;
    ++components;
    std::vector<std::size_t> stack{start};
    seen[start] = 1;
    while (!stack.empty()) {
      const std::size_t cur = stack.back();
      stack.pop_back();
      const auto l = static_cast<std::int64_t>(cur);
      const std::int64_t x = l % d.x, y = (l / d.x) % d.y, z = l / (d.x * d.y);
      for (int dz = -1; dz <= 1; ++dz)
        for (int dy = -1; dy <= 1; ++dy)
          for (int dx = -1; dx <= 1; ++dx) {
            if (!is_neighbor(dx, dy, dz, faces_only) || !in_grid(d, x + dx, y + dy, z + dz)) continue;
            const auto n = static_cast<std::size_t>((x + dx) + d.x * ((y + dy) + d.y * (z + dz)));
            if (m.bits()[n] && !seen[n]) {
              seen[n] = 1;
              stack.push_back(n);
            }
          }
    }
  }
  return components;
}

struct BruteCounts {
  std::uint64_t a = 0, b = 0, both = 0, either = 0;
};

inline BruteCounts brute_counts(const Mask3D& a, const Mask3D& b) {
  BruteCounts c;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const bool x = a.bits()[i] != 0, y = b.bits()[i] != 0;
    c.a += x;
    c.b += y;
    c.both += x && y;
    c.either += x || y;
  }
  return c;
}

/// Quadratic all-pairs average surface distance.
inline double brute_asd(const Mask3D& a, const Mask3D& b, bool faces_only = true) {
  auto physical = [](const Mask3D& m, const Index3& i) {
    const auto& g = m.geometry();
    return Vec3{static_cast<double>(i.x) * g.spacing().x + g.origin().x,
                static_cast<double>(i.y) * g.spacing().y + g.origin().y,
                static_cast<double>(i.z) * g.spacing().z + g.origin().z};
  };
  std::vector<Vec3> sa, sb;
  for (const auto& i : brute_boundary(a, faces_only)) sa.push_back(physical(a, i));
  for (const auto& i : brute_boundary(b, faces_only)) sb.push_back(physical(b, i));
  auto directed = [](const std::vector<Vec3>& from, const std::vector<Vec3>& to) {
    double sum = 0.0;
    for (const auto& p : from) {
      double best = std::numeric_limits<double>::infinity();
      for (const auto& q : to)
        best = std::min(best, std::sqrt((p.x - q.x) * (p.x - q.x) + (p.y - q.y) * (p.y - q.y) +
                                        (p.z - q.z) * (p.z - q.z)));
      sum += best;
    }
    return sum / static_cast<double>(from.size());
  };
  return 0.5 * (directed(sa, sb) + directed(sb, sa));
}

}  // namespace lungkit::testing
