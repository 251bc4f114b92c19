#include <gtest/gtest.h>

#include <sstream>

#include "citygen/errors.hpp"
#include "citygen/export.hpp"
#include "mock_server.hpp"

using namespace citygen;
using citygen::testing::MockBlockServer;
using citygen::testing::area_json;

namespace {

VoxelWorld world_with_edits(int n) {
  VoxelWorld w(40, 30, 5);
  for (int i = 0; i < n; ++i) w.apply({i % 40, 5 + i / 1200, (i / 40) % 30, "road"});
  return w;
}

ExportParams fast() {
  ExportParams p;
  p.backoff = std::chrono::milliseconds(1);
  p.timeout = std::chrono::seconds(2);
  return p;
}

}  // namespace

TEST(Export, BuildAreaParsing) {
  const BuildArea a = parse_build_area(area_json(100, -20, 40, 30));
  EXPECT_EQ(a.x_from, 100);
  EXPECT_EQ(a.z_from, -20);
  EXPECT_EQ(a.width(), 40);
  EXPECT_EQ(a.length(), 30);
  EXPECT_THROW(parse_build_area("{\"xFrom\": 1}"), ParseError);
}

TEST(Export, SerializesWithOrigin) {
  const std::vector<Edit> edits = {{1, 64, 2, "road"}, {0, 70, 0, "building:dorm"}};
  const BuildArea area{10, 0, 20, 50, 255, 60};
  EXPECT_EQ(serialize_batch(edits, area), "11 64 22 road\n10 70 20 building:dorm\n");
}

TEST(Export, AcceptAllPlacesEveryEdit) {
  MockBlockServer server("/gdmc", area_json(1000, 2000, 40, 30));
  const VoxelWorld w = world_with_edits(2500);
  const ExportReport r = export_http(w, server.url(), fast());
  EXPECT_EQ(r.placed, w.edits().size());
  EXPECT_EQ(r.failed, 0u);
  EXPECT_EQ(r.batches, 3u);
  EXPECT_EQ(r.retries, 0u);
  const auto puts = server.puts();
  ASSERT_EQ(puts.size(), 3u);
  std::size_t lines = 0;
  for (const auto& p : puts) {
    EXPECT_LE(p.lines, 1000u);
    lines += p.lines;
  }
  EXPECT_EQ(lines, w.edits().size());
  std::istringstream first(puts[0].body);
  int x, y, z;
  std::string block;
  first >> x >> y >> z >> block;
  EXPECT_EQ(x, 1000);
  EXPECT_EQ(y, 5);
  EXPECT_EQ(z, 2000);
  EXPECT_EQ(block, "road");
}

TEST(Export, FailedAttemptIsRetriedOnce) {
  MockBlockServer server("", area_json(0, 0, 40, 30), {1});
  const VoxelWorld w = world_with_edits(1500);
  const ExportReport r = export_http(w, server.url(), fast());
  EXPECT_EQ(r.retries, 1u);
  EXPECT_EQ(r.requests, 3u);
  EXPECT_EQ(r.placed, 1500u);
  EXPECT_EQ(r.failed, 0u);
  const auto puts = server.puts();
  ASSERT_EQ(puts.size(), 3u);
  EXPECT_EQ(puts[1].body, puts[2].body);
}

TEST(Export, GivesUpAfterThreeRetries) {
  MockBlockServer server("", area_json(0, 0, 40, 30), {0, 1, 2, 3});
  const VoxelWorld w = world_with_edits(1200);
  const ExportReport r = export_http(w, server.url(), fast());
  EXPECT_EQ(r.retries, 3u);
  EXPECT_EQ(r.requests, 5u);
  EXPECT_EQ(r.failed, 1000u);
  EXPECT_EQ(r.placed, 200u);
}

TEST(Export, BackoffDoubles) {
  MockBlockServer server("", area_json(0, 0, 40, 30), {0, 1, 2});
  ExportParams p = fast();
  p.backoff = std::chrono::milliseconds(40);
  const auto start = std::chrono::steady_clock::now();
  const ExportReport r = export_http(world_with_edits(10), server.url(), p);
  const auto elapsed = std::chrono::steady_clock::now() - start;
  EXPECT_EQ(r.placed, 10u);
  EXPECT_GE(elapsed, std::chrono::milliseconds(40 + 80 + 160));
}

TEST(Export, SmallBuildAreaFailsBeforeWriting) {
  MockBlockServer server("", area_json(0, 0, 39, 30));
  EXPECT_THROW(export_http(world_with_edits(10), server.url(), fast()), DimensionMismatchError);
  EXPECT_EQ(server.area_queries(), 1);
  EXPECT_TRUE(server.puts().empty());
}

TEST(Export, UnreachableEndpoint) {
  int port = 0;
  {
    httplib::Server probe;
    port = probe.bind_to_any_port("127.0.0.1");
  }
  ExportParams p = fast();
  p.timeout = std::chrono::seconds(1);
  EXPECT_THROW(export_http(world_with_edits(3), "http://127.0.0.1:" + std::to_string(port), p), NetworkError);
  EXPECT_THROW(export_http(world_with_edits(3), "localhost:9000", p), ConfigError);
}

TEST(Export, EmptyLogRejected) {
  EXPECT_THROW(export_http(VoxelWorld(4, 4), "http://127.0.0.1:1", fast()), Error);
}
