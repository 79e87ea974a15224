#pragma once

#include <map>
#include <string>

#include "roadsafe/store.hpp"

namespace roadsafe {

struct ApiRequest {
  std::string method;
  std::string path;
  std::map<std::string, std::string> query;
  std::string body;
};

struct ApiResponse {
  int status = 200;
  std::string content_type = "application/json";
  std::string body;
};

// HTTP-agnostic request handling, so endpoints are testable without a
// socket. Errors come back as {"error": "..."} with 400 (bad request),
// 404 (unknown route or record), 405, 409 (ticket no longer pending) or
// 422 (plate not registered).
class Api {
 public:
  explicit Api(Store& store) : store_(store) {}
  ApiResponse handle(const ApiRequest& request) const;

 private:
  Store& store_;
};

}  // namespace roadsafe
