#pragma once

#include <chrono>
#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "citygen/geometry.hpp"
#include "citygen/world.hpp"

namespace citygen {

// Build area as reported by GET {endpoint}/buildarea; *_to bounds inclusive.
struct BuildArea {
  int x_from = 0;
  int y_from = 0;
  int z_from = 0;
  int x_to = 0;
  int y_to = 0;
  int z_to = 0;

  int width() const { return x_to - x_from + 1; }
  int length() const { return z_to - z_from + 1; }
};

BuildArea parse_build_area(std::string_view json_text);

struct ExportParams {
  std::size_t batch_size = 1000;
  int max_retries = 3;
  // Delay before retry n is backoff · 2^(n-1).
  std::chrono::milliseconds backoff{200};
  std::chrono::seconds timeout{10};
};

struct ExportReport {
  BuildArea area;
  std::size_t placed = 0;
  std::size_t failed = 0;
  std::size_t requests = 0;  // PUT requests, retries included
  std::size_t retries = 0;
  std::size_t batches = 0;
};

// "x y z block_class" per edit, offset by the build area origin in x and z.
std::string serialize_batch(std::span<const Edit> edits, const BuildArea& area);

// Streams the world's edit log to a block-placement HTTP endpoint. The log
// must not be empty. Throws
// NetworkError when the endpoint cannot be reached and
// DimensionMismatchError (before any write) when the build area is smaller
// than the world.
ExportReport export_http(const VoxelWorld& world, const std::string& endpoint_url,
                         const ExportParams& params = {});

}  // namespace citygen
