#pragma once

// HTTP/JSON front end over SessionStore.
//
//   POST   /sessions                 {obj: base64[, scheme, variant]} -> {session_id, report}
//   GET    /sessions/{id}/mesh       ?level&scheme&variant[&curvature=1]
//   PATCH  /sessions/{id}/normals    {edits: [{vertex, normal}]} -> {invalidated_levels}
//   GET    /sessions/{id}/analysis   ?kind=fit|curvature|report[&primitive&center&axis&radius&minor_radius]
//   GET    /sessions/{id}/export     ?level&scheme&variant -> OBJ text
//   DELETE /sessions/{id}            -> {}

#include "session.hpp"

#include "httplib.h"

#include <string>

namespace pnsubd::frontdoor {

struct ServiceOptions {
  int max_level = 8;
};

class Service {
 public:
  explicit Service(ServiceOptions options = {});

  httplib::Server& http() noexcept { return server_; }
  SessionStore& store() noexcept { return store_; }

  /// Binds and serves until stop(); returns kExitPortInUse when binding fails.
  int run(const std::string& host, int port);
  void stop() { server_.stop(); }

 private:
  void install_routes();

  ServiceOptions options_;
  SessionStore store_;
  httplib::Server server_;
};

}  // namespace pnsubd::frontdoor
