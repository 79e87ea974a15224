#include "roadsafe/server.hpp"

#include <iostream>

#include "httplib.h"
#include "roadsafe/api.hpp"

namespace roadsafe {

struct HttpServer::Impl {
  explicit Impl(Store& store) : api(store) {}
  Api api;
  httplib::Server server;
};

HttpServer::HttpServer(Store& store) : impl_(std::make_unique<Impl>(store)) {
  auto dispatch = [this](const httplib::Request& req, httplib::Response& res) {
    ApiRequest r;
    r.method = req.method;
    r.path = req.path;
    for (const auto& [k, v] : req.params) r.query.emplace(k, v);
    r.body = req.body;
    const auto out = impl_->api.handle(r);
    res.status = out.status;
    if (out.status != 204) res.set_content(out.body, out.content_type);
  };
  auto& server = impl_->server;
  server.Get(".*", dispatch);
  server.Post(".*", dispatch);
  server.Put(".*", dispatch);
  server.Delete(".*", dispatch);
  server.Options(".*", [](const httplib::Request&, httplib::Response& res) { res.status = 204; });
  server.set_default_headers({{"Access-Control-Allow-Origin", "*"},
                              {"Access-Control-Allow-Methods", "GET, POST, PUT, DELETE, OPTIONS"},
                              {"Access-Control-Allow-Headers", "Content-Type"}});
}

HttpServer::~HttpServer() = default;

int HttpServer::bind(const std::string& host, int port) {
  int bound = port;
  if (port == 0) {
    bound = impl_->server.bind_to_any_port(host);
    if (bound < 0) bound = 0;
  } else if (!impl_->server.bind_to_port(host, port)) {
    bound = 0;
  }
  if (bound <= 0) throw Error("cannot bind " + host + ":" + std::to_string(port));
  return bound;
}

void HttpServer::listen() { impl_->server.listen_after_bind(); }

void HttpServer::stop() { impl_->server.stop(); }

void run_server(Store& store, const std::string& host, int port) {
  HttpServer server(store);
  const int bound = server.bind(host, port);
  std::cerr << "listening on " << host << ':' << bound << '\n';
  server.listen();
}

}  // namespace roadsafe
