#pragma once

// In-process stand-in for a block-placement server.

#include <httplib.h>

#include <mutex>
#include <string>
#include <thread>
#include <vector>

namespace citygen::testing {

class MockBlockServer {
 public:
  struct Put {
    std::string body;
    std::size_t lines = 0;
    bool accepted = false;
  };

  // `area_json` answers GET {prefix}/buildarea. PUT requests listed in
  // `reject` (0-based arrival order) get HTTP 500.
  MockBlockServer(std::string prefix, std::string area_json, std::vector<std::size_t> reject = {})
      : prefix_(std::move(prefix)), area_(std::move(area_json)), reject_(std::move(reject)) {
    server_.Get(prefix_ + "/buildarea", [this](const httplib::Request&, httplib::Response& res) {
      std::lock_guard lock(mutex_);
      ++area_queries_;
      res.set_content(area_, "application/json");
    });
    server_.Put(prefix_ + "/blocks", [this](const httplib::Request& req, httplib::Response& res) {
      std::lock_guard lock(mutex_);
      Put put{req.body, 0, true};
      for (char ch : req.body) put.lines += ch == '\n';
      for (std::size_t r : reject_) put.accepted &= r != puts_.size();
      res.status = put.accepted ? 200 : 500;
      res.set_content(put.accepted ? "ok" : "fail", "text/plain");
      puts_.push_back(std::move(put));
    });
    port_ = server_.bind_to_any_port("127.0.0.1");
    thread_ = std::thread([this] { server_.listen_after_bind(); });
    server_.wait_until_ready();
  }

  ~MockBlockServer() {
    server_.stop();
    thread_.join();
  }

  std::string url() const { return "http://127.0.0.1:" + std::to_string(port_) + prefix_; }

  std::vector<Put> puts() const {
    std::lock_guard lock(mutex_);
    return puts_;
  }
  int area_queries() const {
    std::lock_guard lock(mutex_);
    return area_queries_;
  }

 private:
  httplib::Server server_;
  std::string prefix_;
  std::string area_;
  std::vector<std::size_t> reject_;
  mutable std::mutex mutex_;
  std::vector<Put> puts_;
  int area_queries_ = 0;
  int port_ = 0;
  std::thread thread_;
};

inline std::string area_json(int x0, int z0, int width, int length) {
  return "{\"xFrom\":" + std::to_string(x0) + ",\"yFrom\":0,\"zFrom\":" + std::to_string(z0) +
         ",\"xTo\":" + std::to_string(x0 + width - 1) + ",\"yTo\":255,\"zTo\":" + std::to_string(z0 + length - 1) + "}";
}

}  // namespace citygen::testing
