#pragma once

// In-process HTTP teacher for endpoint tests. The responder callback sees
// the 0-based call index and the raw request body and returns a status plus
// response body, so a test can script arbitrary sequences (failures first,
// then success; one canned answer per example; and so on).

#include <functional>
#include <mutex>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include <httplib.h>
#include <json.hpp>

namespace testsup {

class StubTeacher {
 public:
  using Responder = std::function<std::pair<int, std::string>(std::size_t index,
                                                              const std::string& body)>;

  explicit StubTeacher(Responder responder) : responder_(std::move(responder)) {
    server_.Post("/v1/complete", [this](const httplib::Request& req, httplib::Response& res) {
      std::size_t index;
      {
        std::lock_guard<std::mutex> lock(mutex_);
        index = bodies_.size();
        bodies_.push_back(req.body);
        auto it = req.headers.find("Authorization");
        auth_headers_.push_back(it == req.headers.end() ? std::string() : it->second);
      }
      auto [status, body] = responder_(index, req.body);
      res.status = status;
      res.set_content(body, "application/json");
    });
    port_ = server_.bind_to_any_port("127.0.0.1");
    thread_ = std::thread([this] { server_.listen_after_bind(); });
    server_.wait_until_ready();
  }

  StubTeacher(const StubTeacher&) = delete;
  StubTeacher& operator=(const StubTeacher&) = delete;

  ~StubTeacher() {
    server_.stop();
    thread_.join();
  }

  std::string base_url() const { return "http://127.0.0.1:" + std::to_string(port_); }

  std::size_t call_count() {
    std::lock_guard<std::mutex> lock(mutex_);
    return bodies_.size();
  }
  std::vector<std::string> bodies() {
    std::lock_guard<std::mutex> lock(mutex_);
    return bodies_;
  }
  std::vector<std::string> auth_headers() {
    std::lock_guard<std::mutex> lock(mutex_);
    return auth_headers_;
  }

 private:
  Responder responder_;
  httplib::Server server_;
  int port_ = 0;
  std::thread thread_;
  std::mutex mutex_;
  std::vector<std::string> bodies_;
  std::vector<std::string> auth_headers_;
};

// Wraps a teacher answer the way the endpoint protocol nests it: the outer
// object carries "text", whose value is itself a JSON document.
inline std::string teacher_payload(const std::string& fix_type,
                                   const std::vector<std::string>& trace) {
  nlohmann::json inner;
  inner["fix_type"] = fix_type;
  inner["trace"] = trace;
  nlohmann::json outer;
  outer["text"] = inner.dump();
  return outer.dump();
}

} // namespace testsup
