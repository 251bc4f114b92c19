#include "citygen/export.hpp"

#include <algorithm>
#include <sstream>
#include <thread>

#include <httplib.h>
#include <json.hpp>

#include "citygen/errors.hpp"

namespace citygen {

namespace {

struct Endpoint {
  std::string origin;  // scheme://host[:port]
  std::string prefix;  // path without trailing slash
};

Endpoint split_url(const std::string& url) {
  const auto scheme = url.find("://");
  if (scheme == std::string::npos) throw ConfigError("export: endpoint '" + url + "' lacks a scheme");
  const auto path = url.find('/', scheme + 3);
  Endpoint e{url.substr(0, path), path == std::string::npos ? "" : url.substr(path)};
  while (!e.prefix.empty() && e.prefix.back() == '/') e.prefix.pop_back();
  return e;
}

}  // namespace

BuildArea parse_build_area(std::string_view json_text) {
  try {
    const auto doc = nlohmann::json::parse(json_text);
    return {doc.at("xFrom").get<int>(), doc.at("yFrom").get<int>(), doc.at("zFrom").get<int>(),
            doc.at("xTo").get<int>(),   doc.at("yTo").get<int>(),   doc.at("zTo").get<int>()};
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("build area: ") + e.what());
  }
}

std::string serialize_batch(std::span<const Edit> edits, const BuildArea& area) {
  std::ostringstream out;
  for (const Edit& e : edits) {
    out << (e.x + area.x_from) << ' ' << e.y << ' ' << (e.z + area.z_from) << ' ' << e.block << '\n';
  }
  return out.str();
}

ExportReport export_http(const VoxelWorld& world, const std::string& endpoint_url, const ExportParams& params) {
  if (params.batch_size < 1) throw ConfigError("export: batch size must be >= 1");
  if (world.edits().empty()) throw Error("export: the edit log is empty");
  const Endpoint endpoint = split_url(endpoint_url);
  httplib::Client client(endpoint.origin);
  client.set_connection_timeout(params.timeout);
  client.set_read_timeout(params.timeout);
  client.set_write_timeout(params.timeout);

  ExportReport report;
  const auto area_response = client.Get(endpoint.prefix + "/buildarea");
  if (!area_response) {
    throw NetworkError("export: cannot reach " + endpoint_url + ": " + httplib::to_string(area_response.error()));
  }
  if (area_response->status / 100 != 2) {
    throw NetworkError("export: build area query returned HTTP " + std::to_string(area_response->status));
  }
  report.area = parse_build_area(area_response->body);
  if (report.area.width() < world.width() || report.area.length() < world.length()) {
    throw DimensionMismatchError("export: build area " + std::to_string(report.area.width()) + "x" +
                                 std::to_string(report.area.length()) + " is smaller than the " +
                                 std::to_string(world.width()) + "x" + std::to_string(world.length()) +
                                 " world");
  }

  const std::span<const Edit> edits(world.edits());
  for (std::size_t begin = 0; begin < edits.size(); begin += params.batch_size) {
    const auto batch = edits.subspan(begin, std::min(params.batch_size, edits.size() - begin));
    const std::string body = serialize_batch(batch, report.area);
    ++report.batches;
    bool ok = false;
    for (int attempt = 0; attempt <= params.max_retries && !ok; ++attempt) {
      if (attempt > 0) {
        ++report.retries;
        std::this_thread::sleep_for(params.backoff * (1 << (attempt - 1)));
      }
      ++report.requests;
      const auto response = client.Put(endpoint.prefix + "/blocks", body, "text/plain");
      ok = response && response->status / 100 == 2;
    }
    (ok ? report.placed : report.failed) += batch.size();
  }
  return report;
}

}  // namespace citygen
