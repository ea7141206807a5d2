#include "service.hpp"

#include <pnsubd/analysis.hpp>
#include <pnsubd/obj_io.hpp>

#include <charconv>
#include <limits>

namespace pnsubd::frontdoor {
namespace {

constexpr const char* kJson = "application/json";

int http_status(ErrorCode code) {
  switch (category(code)) {
    case ErrorCategory::Input: return 400;
    case ErrorCategory::Scheme:
    case ErrorCategory::Numeric: return 422;
  }
  return 500;
}

void send_error(httplib::Response& res, int status, std::string_view code, const std::string& message) {
  res.status = status;
  res.set_content(Json{{"error", code}, {"message", message}}.dump(), kJson);
}

template <class F>
void guarded(httplib::Response& res, F&& body) {
  try {
    body();
  } catch (const Error& e) {
    send_error(res, http_status(e.code()), to_string(e.code()), e.what());
  } catch (const Json::exception& e) {
    send_error(res, 400, "ParseError", e.what());
  } catch (const std::exception& e) {
    send_error(res, 500, "Internal", e.what());
  }
}

int int_param(const httplib::Request& req, const char* name, int fallback) {
  if (!req.has_param(name)) return fallback;
  const std::string v = req.get_param_value(name);
  int out = 0;
  auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc{} || ptr != v.data() + v.size()) {
    throw Error(ErrorCode::InvalidArgument, std::string(name) + " must be an integer");
  }
  return out;
}

double double_param(const httplib::Request& req, const char* name, double fallback) {
  if (!req.has_param(name)) return fallback;
  const std::string v = req.get_param_value(name);
  double out = 0.0;
  auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc{} || ptr != v.data() + v.size()) {
    throw Error(ErrorCode::InvalidArgument, std::string(name) + " must be a number");
  }
  return out;
}

}  // namespace

Service::Service(ServiceOptions options) : options_(options), store_(options.max_level) {
  // httplib's default adds SO_REUSEPORT, which would let a second server share the port.
  server_.set_socket_options([](socket_t sock) {
    int yes = 1;
    setsockopt(sock, SOL_SOCKET, SO_REUSEADDR, reinterpret_cast<const void*>(&yes), sizeof(yes));
  });
  install_routes();
}

int Service::run(const std::string& host, int port) {
  if (!server_.bind_to_port(host, port)) return kExitPortInUse;
  server_.listen_after_bind();
  return kExitOk;
}

void Service::install_routes() {
  auto session_or_404 = [this](const httplib::Request& req, httplib::Response& res) -> std::shared_ptr<Session> {
    auto s = store_.find(req.matches[1]);
    if (!s) send_error(res, 404, "UnknownSession", "no session " + std::string(req.matches[1]));
    return s;
  };
  auto mesh_request = [this](const httplib::Request& req, const Session& s) {
    MeshRequest r;
    r.scheme = req.has_param("scheme") ? parse_scheme(req.get_param_value("scheme")) : s.default_scheme();
    r.variant = req.has_param("variant") ? parse_variant(req.get_param_value("variant")) : s.default_variant();
    r.level = int_param(req, "level", 0);
    if (r.level < 0 || r.level > options_.max_level) {
      throw Error(ErrorCode::InvalidArgument, "level must lie in 0.." + std::to_string(options_.max_level));
    }
    return r;
  };

  server_.Post("/sessions", [this](const httplib::Request& req, httplib::Response& res) {
    guarded(res, [&] {
      const Json body = Json::parse(req.body);
      if (!body.contains("obj") || !body["obj"].is_string()) {
        throw Error(ErrorCode::ParseError, "body needs an 'obj' base64 string");
      }
      PNMesh mesh = load_obj_string(base64_decode(body["obj"].get<std::string>()));
      const SchemeKind scheme = body.contains("scheme") ? parse_scheme(body["scheme"].get<std::string>())
                                                        : SchemeKind::CatmullClark;
      const Variant variant = body.contains("variant") ? parse_variant(body["variant"].get<std::string>())
                                                       : Variant::PN;
      const MeshReport report = validate(mesh);
      auto session = store_.create(std::move(mesh), scheme, variant);
      res.status = 201;
      res.set_content(Json{{"session_id", session->id()}, {"report", report_to_json(report)}}.dump(), kJson);
    });
  });

  server_.Get(R"(/sessions/([0-9a-f]+)/mesh)", [=](const httplib::Request& req, httplib::Response& res) {
    guarded(res, [&] {
      auto s = session_or_404(req, res);
      if (!s) return;
      const auto mesh = s->mesh(mesh_request(req, *s));
      Json out = mesh_to_json(*mesh);
      if (req.has_param("curvature") && req.get_param_value("curvature") == "1") {
        out["curvature"] = curvature_to_json(discrete_curvature(*mesh));
      }
      res.set_content(out.dump(), kJson);
    });
  });

  server_.Patch(R"(/sessions/([0-9a-f]+)/normals)", [=](const httplib::Request& req, httplib::Response& res) {
    guarded(res, [&] {
      auto s = session_or_404(req, res);
      if (!s) return;
      const Json body = Json::parse(req.body);
      std::vector<NormalEdit> edits;
      for (const Json& e : body.at("edits")) {
        const auto& n = e.at("normal");
        if (!n.is_array() || n.size() != 3) throw Error(ErrorCode::ParseError, "normal must be [x,y,z]");
        edits.push_back({e.at("vertex").get<int>(), Vec3(n[0].get<double>(), n[1].get<double>(), n[2].get<double>())});
      }
      res.set_content(Json{{"invalidated_levels", s->edit_normals(edits)}}.dump(), kJson);
    });
  });

  server_.Get(R"(/sessions/([0-9a-f]+)/analysis)", [=](const httplib::Request& req, httplib::Response& res) {
    guarded(res, [&] {
      auto s = session_or_404(req, res);
      if (!s) return;
      const auto mesh = s->mesh(mesh_request(req, *s));
      const std::string kind = req.has_param("kind") ? req.get_param_value("kind") : "report";
      Json out;
      if (kind == "fit") {
        if (!req.has_param("primitive")) throw Error(ErrorCode::InvalidArgument, "fit needs primitive=");
        const PrimitiveKind primitive = parse_primitive(req.get_param_value("primitive"));
        std::optional<PrimitiveParams> params;
        if (req.has_param("center") || req.has_param("radius") || req.has_param("axis")) {
          PrimitiveParams p;
          if (req.has_param("center")) p.center = parse_vec3(req.get_param_value("center"));
          if (req.has_param("axis")) p.axis = parse_vec3(req.get_param_value("axis"));
          p.radius = double_param(req, "radius", 1.0);
          p.minor_radius = double_param(req, "minor_radius", 0.0);
          params = p;
        }
        out = fit_to_json(primitive_residual(mesh->positions, primitive, params));
      } else if (kind == "curvature") {
        const CurvatureField field = discrete_curvature(*mesh);
        out = curvature_to_json(field);
        double lo = std::numeric_limits<double>::infinity();
        double hi = -lo;
        for (std::size_t v = 0; v < field.gaussian.size(); ++v) {
          if (!field.defined[v]) continue;
          lo = std::min(lo, field.gaussian[v]);
          hi = std::max(hi, field.gaussian[v]);
        }
        out["gaussian_min"] = lo;
        out["gaussian_max"] = hi;
      } else if (kind == "report") {
        out = report_to_json(validate(*mesh));
      } else {
        throw Error(ErrorCode::InvalidArgument, "unknown analysis kind '" + kind + "'");
      }
      res.set_content(out.dump(), kJson);
    });
  });

  server_.Get(R"(/sessions/([0-9a-f]+)/export)", [=](const httplib::Request& req, httplib::Response& res) {
    guarded(res, [&] {
      auto s = session_or_404(req, res);
      if (!s) return;
      res.set_content(save_obj_string(*s->mesh(mesh_request(req, *s))), "text/plain");
    });
  });

  server_.Delete(R"(/sessions/([0-9a-f]+))", [this](const httplib::Request& req, httplib::Response& res) {
    guarded(res, [&] {
      if (!store_.remove(req.matches[1])) {
        send_error(res, 404, "UnknownSession", "no session " + std::string(req.matches[1]));
        return;
      }
      res.set_content("{}", kJson);
    });
  });
}

}  // namespace pnsubd::frontdoor
