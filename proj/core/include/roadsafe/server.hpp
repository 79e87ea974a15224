#pragma once

#include <memory>
#include <string>

#include "roadsafe/store.hpp"

namespace roadsafe {

// The Api behind an HTTP listener with permissive CORS headers.
class HttpServer {
 public:
  explicit HttpServer(Store& store);
  ~HttpServer();
  HttpServer(const HttpServer&) = delete;
  HttpServer& operator=(const HttpServer&) = delete;

  // Binds the address; port 0 picks a free port. Returns the bound port.
  // Throws Error when binding fails.
  int bind(const std::string& host, int port);
  // Serves requests until stop() is called from another thread.
  void listen();
  void stop();

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

// Binds and serves until the process is stopped.
void run_server(Store& store, const std::string& host, int port);

}  // namespace roadsafe
