#include <gtest/gtest.h>

#include <set>

#include "citygen/errors.hpp"
#include "citygen/walls.hpp"

using namespace citygen;

TEST(WallBounds, InnerCityInset) {
  EXPECT_EQ(inner_city_bounds(100, 80, {}), (Rect{4, 4, 92, 72}));
  WallConfig wide;
  wide.ring_width = 5;
  EXPECT_EQ(inner_city_bounds(40, 40, wide), (Rect{6, 6, 28, 28}));
  EXPECT_THROW(inner_city_bounds(8, 50, {}), ConfigError);
  WallConfig bad;
  bad.ring_width = 0;
  EXPECT_THROW(inner_city_bounds(50, 50, bad), ConfigError);
  bad = {};
  bad.fixture_interval = 1;
  EXPECT_THROW(validate(bad), ConfigError);
}

TEST(WallBounds, RingMembership) {
  const VoxelWorld w(20, 20, 1);
  EXPECT_TRUE(in_ring(w, {}, {0, 10}));
  EXPECT_TRUE(in_ring(w, {}, {2, 10}));
  EXPECT_FALSE(in_ring(w, {}, {3, 10}));
  EXPECT_TRUE(in_ring(w, {}, {17, 10}));
  EXPECT_FALSE(in_ring(w, {}, {16, 16}));
  EXPECT_FALSE(in_ring(w, {}, {-1, 0}));
}

TEST(Wall, FlatWorldFillHeights) {
  VoxelWorld w(30, 24, 10);
  const WallReport r = build_wall(w, {});
  EXPECT_EQ(r.plane_height, 14);
  const Rect inner = inner_city_bounds(w, {});
  std::set<Cell> fixtures;
  for (const Edit& e : w.edits())
    if (e.block == "torch" || e.block == "cannon") fixtures.insert({e.x, e.z});
  for (int x = 0; x < 30; ++x)
    for (int z = 0; z < 24; ++z) {
      const Cell c{x, z};
      const bool tower = (x < 4 || x >= 26) && (z < 4 || z >= 20);
      const int fixture = fixtures.count(c) ? 1 : 0;
      if (tower) {
        EXPECT_EQ(w.altitude(c), 19 + fixture);
      } else if (in_ring(w, {}, c)) {
        EXPECT_EQ(w.altitude(c), 14 + fixture) << x << "," << z;
        EXPECT_TRUE(w.artificial(c));
      } else {
        EXPECT_EQ(w.altitude(c), 10);
        if (inner.contains(c)) EXPECT_FALSE(w.artificial(c));
      }
    }
  EXPECT_TRUE(ring_closed(w, {}));
}

TEST(Wall, ValleyColumnsFilledToPlane) {
  VoxelWorld w(20, 20, 10);
  w.set_altitude({0, 9}, 3);
  w.set_altitude({1, 9}, 17);
  const WallReport r = build_wall(w, {});
  EXPECT_EQ(r.plane_height, 21);
  EXPECT_EQ(w.altitude({0, 9}), 21);
  EXPECT_EQ(w.altitude({1, 9}), 21);
  int base = 0;
  int plane = 0;
  for (const Edit& e : w.edits()) {
    if (e.x == 0 && e.z == 9) {
      base += e.block == "wall_base";
      plane += e.block == "wall_plane";
    }
  }
  EXPECT_EQ(base, 21 - 1 - 3);
  EXPECT_EQ(plane, 1);
}

TEST(Wall, FixtureCountAlternates) {
  for (int size : {20, 33, 64}) {
    VoxelWorld w(size, size + 5, 8);
    const WallReport r = build_wall(w, {});
    const int perimeter = 2 * (size - 5) + 2 * (size + 5 - 5);
    EXPECT_EQ(static_cast<int>(fixture_loop(w, {}).size()), perimeter);
    EXPECT_EQ(r.torches + r.cannons, perimeter / 8);
    EXPECT_EQ(r.torches - r.cannons, (perimeter / 8) % 2);
    const std::vector<Cell> cells = fixture_loop(w, {});
    const std::set<Cell> loop(cells.begin(), cells.end());
    EXPECT_EQ(loop.size(), static_cast<std::size_t>(perimeter));
    for (Cell c : loop) EXPECT_TRUE(in_ring(w, {}, c));
    std::vector<std::string> order;
    for (const Edit& e : w.edits())
      if (e.block == "torch" || e.block == "cannon") order.push_back(e.block);
    for (std::size_t i = 0; i < order.size(); ++i) EXPECT_EQ(order[i], i % 2 ? "cannon" : "torch");
  }
}

TEST(Wall, TowerEntrancesTouchTowerAndInnerCity) {
  const VoxelWorld w(40, 30, 5);
  const Rect inner = inner_city_bounds(w, {});
  const auto entrances = tower_entrances(w, {});
  for (Cell e : entrances) {
    EXPECT_FALSE(in_ring(w, {}, e));
    EXPECT_FALSE(inner.contains(e));
    bool near_inner = false;
    bool near_tower = false;
    const Cell d4[] = {{1, 0}, {-1, 0}, {0, 1}, {0, -1}};
    for (Cell d : d4) {
      const Cell n{e.x + d.x, e.z + d.z};
      near_inner |= inner.contains(n);
      near_tower |= (n.x < 4 || n.x >= 36) && (n.z < 4 || n.z >= 26);
    }
    EXPECT_TRUE(near_inner);
    EXPECT_TRUE(near_tower);
  }
  EXPECT_LT(entrances[0].x, entrances[1].x);
  EXPECT_LT(entrances[0].z, entrances[2].z);
}

TEST(Wall, PassagesStayOpenButRingClosed) {
  VoxelWorld w(30, 30, 6);
  CellMask passages(30, 30);
  for (int z = 0; z < 3; ++z) passages.set({15, z});
  const WallReport r = build_wall(w, {}, &passages);
  EXPECT_EQ(r.passages, 3);
  for (int z = 0; z < 3; ++z) {
    EXPECT_EQ(w.altitude({15, z}), 6);
    EXPECT_TRUE(w.artificial({15, z}));
  }
  EXPECT_TRUE(ring_closed(w, {}));
}

TEST(Wall, OpenRingDetected) {
  VoxelWorld w(30, 30, 6);
  EXPECT_FALSE(ring_closed(w, {}));
  build_wall(w, {});
  EXPECT_TRUE(ring_closed(w, {}));
}
