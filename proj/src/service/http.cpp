// Copyright 2026 The hedtts Authors
// SPDX-License-Identifier: Apache-2.0

#include "hedtts/common/error.hpp"
#include "hedtts/service/api.hpp"

// after Eigen: resolv.h (pulled in by httplib) defines a _res macro
#include <httplib.h>

namespace hedtts::service {

struct HttpServer::Impl {
  httplib::Server server;
};

HttpServer::HttpServer(ApiService& api) : impl_(std::make_unique<Impl>()) {
  auto forward = [&api](const httplib::Request& req, httplib::Response& res) {
    const ApiResponse out = api.handle(req.method, req.path, req.body);
    res.status = out.status;
    res.set_content(out.body, out.content_type);
  };
  impl_->server.Get(".*", forward);
  impl_->server.Post(".*", forward);
}

HttpServer::~HttpServer() = default;

int HttpServer::bind(const std::string& host, int port) {
  const int bound = port == 0 ? impl_->server.bind_to_any_port(host) : (impl_->server.bind_to_port(host, port) ? port : -1);
  if (bound < 0) fail(ErrorCode::IoError, "cannot bind " + host + ":" + std::to_string(port));
  return bound;
}

void HttpServer::run() {
  if (!impl_->server.listen_after_bind()) fail(ErrorCode::IoError, "HTTP server stopped with an error");
}

void HttpServer::stop() { impl_->server.stop(); }

}  // namespace hedtts::service
