#pragma once

#include <algorithm>
#include <compare>
#include <cstdint>
#include <cstdlib>
#include <vector>

namespace citygen {

struct Cell {
  int x = 0;
  int z = 0;

  friend auto operator<=>(const Cell&, const Cell&) = default;
};

inline int manhattan(Cell a, Cell b) { return std::abs(a.x - b.x) + std::abs(a.z - b.z); }

// Axis-aligned cell rectangle covering [x, x + width) × [z, z + length).
struct Rect {
  int x = 0;
  int z = 0;
  int width = 0;
  int length = 0;

  int x_end() const { return x + width; }
  int z_end() const { return z + length; }
  bool empty() const { return width <= 0 || length <= 0; }

  bool contains(Cell c) const { return c.x >= x && c.x < x_end() && c.z >= z && c.z < z_end(); }
  bool contains(const Rect& r) const {
    return r.x >= x && r.z >= z && r.x_end() <= x_end() && r.z_end() <= z_end();
  }
  bool intersects(const Rect& r) const {
    return x < r.x_end() && r.x < x_end() && z < r.z_end() && r.z < z_end();
  }
  Rect expanded(int margin) const {
    return {x - margin, z - margin, width + 2 * margin, length + 2 * margin};
  }

  friend bool operator==(const Rect&, const Rect&) = default;
};

// Number of empty cells separating two rectangles along the worse axis
// (Chebyshev gap). Touching or overlapping rectangles have gap 0.
inline int rect_gap(const Rect& a, const Rect& b) {
  const int gx = std::max({0, b.x - a.x_end(), a.x - b.x_end()});
  const int gz = std::max({0, b.z - a.z_end(), a.z - b.z_end()});
  return std::max(gx, gz);
}

// Boolean flag per world column.
class CellMask {
 public:
  CellMask() = default;
  CellMask(int width, int length)
      : width_(width), length_(length), bits_(static_cast<std::size_t>(width) * length, 0) {}

  int width() const { return width_; }
  int length() const { return length_; }
  bool in_bounds(Cell c) const { return c.x >= 0 && c.z >= 0 && c.x < width_ && c.z < length_; }

  bool test(Cell c) const { return in_bounds(c) && bits_[index(c)] != 0; }
  void set(Cell c, bool value = true) { bits_[index(c)] = value ? 1 : 0; }
  void fill(const Rect& r) {
    for (int x = std::max(0, r.x); x < std::min(width_, r.x_end()); ++x) {
      for (int z = std::max(0, r.z); z < std::min(length_, r.z_end()); ++z) set({x, z});
    }
  }

 private:
  std::size_t index(Cell c) const { return static_cast<std::size_t>(c.x) * length_ + c.z; }

  int width_ = 0;
  int length_ = 0;
  std::vector<std::uint8_t> bits_;
};

}  // namespace citygen
