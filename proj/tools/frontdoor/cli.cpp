#include "cli.hpp"

#include "codec.hpp"
#include "service.hpp"

#include <pnsubd/analysis.hpp>
#include <pnsubd/curve.hpp>
#include <pnsubd/eigentune.hpp>
#include <pnsubd/obj_io.hpp>
#include <pnsubd/polyline_io.hpp>
#include <pnsubd/schemes.hpp>
#include <pnsubd/symbol.hpp>

#include "CLI11.hpp"

#include <atomic>
#include <charconv>
#include <csignal>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <thread>

#include <pthread.h>

namespace pnsubd::frontdoor {
namespace {

constexpr const char* kBanner = "pnsubd 0.1.0";

std::string g12(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

std::string g17(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::vector<double> parse_list(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(item.data(), item.data() + item.size(), v);
    if (ec != std::errc{} || ptr != item.data() + item.size()) {
      throw Error(ErrorCode::InvalidArgument, "bad number '" + item + "' in list");
    }
    out.push_back(v);
  }
  if (out.empty()) throw Error(ErrorCode::InvalidArgument, "empty list");
  return out;
}

/// "5" or "3..8".
std::pair<int, int> parse_range(const std::string& text) {
  const auto dots = text.find("..");
  auto to_int = [&](std::string_view s) {
    int v = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size()) {
      throw Error(ErrorCode::InvalidArgument, "bad range '" + text + "'");
    }
    return v;
  };
  if (dots == std::string::npos) {
    const int v = to_int(text);
    return {v, v};
  }
  const int lo = to_int(std::string_view(text).substr(0, dots));
  const int hi = to_int(std::string_view(text).substr(dots + 2));
  if (hi < lo) throw Error(ErrorCode::InvalidArgument, "empty range '" + text + "'");
  return {lo, hi};
}

std::string read_all(const std::string& path, std::istream& in) {
  std::ostringstream buf;
  if (path == "-") {
    buf << in.rdbuf();
    return buf.str();
  }
  std::ifstream file(path, std::ios::binary);
  if (!file) throw Error(ErrorCode::Io, "cannot open '" + path + "'");
  buf << file.rdbuf();
  return buf.str();
}

void write_all(const std::string& path, const std::string& text, std::ostream& out) {
  if (path == "-") {
    out << text;
    return;
  }
  std::ofstream file(path, std::ios::binary);
  if (!file || !(file << text)) throw Error(ErrorCode::Io, "cannot write '" + path + "'");
}

struct SubdivideArgs {
  std::string in = "-";
  std::string out = "-";
  std::string scheme;
  std::string variant = "pn";
  std::string normal_mask;
  std::string curve;
  int levels = 1;
  double kappa = 0.95;
  bool estimate = false;
};

int subdivide(const SubdivideArgs& a, std::istream& in, std::ostream& out) {
  if (a.levels < 0) throw Error(ErrorCode::InvalidArgument, "--levels must be non-negative");
  if (!a.curve.empty()) {
    std::istringstream text(read_all(a.curve, in));
    const PNPolygon poly = load_polyline(text);
    std::optional<Mask> normal_mask;
    if (!a.normal_mask.empty()) normal_mask = curve_mask(a.normal_mask);
    const PNPolygon refined = subdivide_curve(poly, a.scheme.empty() ? "4-point" : a.scheme, a.levels,
                                              parse_curve_variant(a.variant), normal_mask);
    std::ostringstream buf;
    save_polyline(refined, buf);
    write_all(a.out, buf.str(), out);
    return kExitOk;
  }
  if (!a.normal_mask.empty()) {
    throw Error(ErrorCode::InvalidArgument, "--normal-mask applies to curves only");
  }
  PNMesh mesh = load_obj_string(read_all(a.in, in));
  if (a.estimate) mesh = estimate_normals(mesh);
  const SchemeKind scheme = parse_scheme(a.scheme.empty() ? "cc" : a.scheme);
  const PNMesh refined = subdivide_surface(mesh, scheme, a.levels, parse_variant(a.variant), a.kappa);
  write_all(a.out, save_obj_string(refined), out);
  return kExitOk;
}

struct MaskArgs {
  int bspline = 0;
  int dd = 0;
  std::string coeffs;
  int offset = 0;
  int max_order = 6;
  int max_l = 8;
};

int analyze_mask(const MaskArgs& a, std::ostream& out) {
  const int given = (a.bspline ? 1 : 0) + (a.dd ? 1 : 0) + (a.coeffs.empty() ? 0 : 1);
  if (given != 1) throw Error(ErrorCode::InvalidArgument, "give exactly one of --bspline, --dd, --coeffs");
  std::string name;
  std::optional<Mask> mask;
  if (a.bspline) {
    mask = bspline_mask(a.bspline);
    name = "bspline" + std::to_string(a.bspline);
  } else if (a.dd) {
    mask = dd_interpolatory_mask(a.dd);
    name = std::to_string(2 * a.dd) + "-point";
  } else {
    mask = Mask(LaurentSymbol(parse_list(a.coeffs), a.offset));
    name = "custom";
  }
  const SmoothnessCertificate cert = smoothness_certificate(*mask, a.max_order, a.max_l);
  const LaurentSymbol& s = mask->symbol();
  out << "mask=" << name << '\n' << "offset=" << s.offset() << '\n' << "coefficients=";
  for (std::size_t i = 0; i < s.coefficients().size(); ++i) out << (i ? "," : "") << g17(s.coefficients()[i]);
  out << '\n'
      << "affine=" << (mask->affine() ? "true" : "false") << '\n'
      << "interpolatory=" << (mask->interpolatory() ? "true" : "false") << '\n'
      << "certified=" << (cert.order >= 0 ? "true" : "false") << '\n'
      << "smoothness=" << std::max(cert.order, 0) << '\n'
      << "iterations=" << cert.iterations << '\n'
      << "factor=" << g12(cert.factor) << '\n';
  return kExitOk;
}

struct SpectrumArgs {
  std::string scheme = "cc";
  std::string valence = "3..8";
  double kappa = 0.95;
};

int analyze_spectrum(const SpectrumArgs& a, std::ostream& out) {
  const SchemeKind scheme = parse_scheme(a.scheme);
  const auto [lo, hi] = parse_range(a.valence);
  if (lo < 3) throw Error(ErrorCode::InvalidArgument, "valence must be at least 3");
  out << "# scheme n lambda mu_max ratio tuned_ratio\n";
  for (int n = lo; n <= hi; ++n) {
    const Matrix m = assemble_local_matrix(scheme, n);
    const EigenSpectrum spec = spectrum(m);
    const EigenSpectrum tuned = spectrum(tune(m, a.kappa));
    const double lambda = spec.subdominant;
    out << scheme_name(scheme) << ' ' << n << ' ' << g12(lambda) << ' '
        << g12(spec.condition_ratio * lambda * lambda) << ' ' << g12(spec.condition_ratio) << ' '
        << g12(tuned.condition_ratio) << '\n';
  }
  return kExitOk;
}

struct FitArgs {
  std::string in = "-";
  std::string curve;
  std::string kind = "sphere";
  std::string center;
  std::string axis;
  std::optional<double> radius;
  double minor_radius = 0.0;
};

std::vector<Vec3> load_points(const std::string& in_path, const std::string& curve, std::istream& in) {
  if (!curve.empty()) {
    std::istringstream text(read_all(curve, in));
    return load_polyline(text).positions();
  }
  return load_obj_string(read_all(in_path, in)).positions;
}

int analyze_fit(const FitArgs& a, std::istream& in, std::ostream& out) {
  const PrimitiveKind kind = parse_primitive(a.kind);
  const std::vector<Vec3> points = load_points(a.in, a.curve, in);
  std::optional<PrimitiveParams> params;
  if (!a.center.empty() || !a.axis.empty() || a.radius) {
    PrimitiveParams p;
    if (!a.center.empty()) p.center = parse_vec3(a.center);
    if (!a.axis.empty()) p.axis = parse_vec3(a.axis);
    if (a.radius) p.radius = *a.radius;
    p.minor_radius = a.minor_radius;
    params = p;
  }
  out << format_fit(primitive_residual(points, kind, params));
  return kExitOk;
}

struct DecayArgs {
  std::string values;
  std::string scheme = "cc";
  std::string valence = "3..8";
  int levels = 6;
  unsigned seed = 1;
  double spread = 0.5;
};

int analyze_decay(const DecayArgs& a, std::ostream& out) {
  if (!a.values.empty()) {
    const double rate = decay_rate(parse_list(a.values));
    out << "decay_rate=" << g12(rate) << '\n';
    return kExitOk;
  }
  const SchemeKind scheme = parse_scheme(a.scheme);
  const auto [lo, hi] = parse_range(a.valence);
  out << "# scheme n decay_rate spread_per_level\n";
  for (int n = lo; n <= hi; ++n) {
    const std::vector<double> spread = normal_decay_experiment(scheme, n, a.levels, a.seed, a.spread);
    out << scheme_name(scheme) << ' ' << n << ' ' << g12(decay_rate(spread));
    for (double s : spread) out << ' ' << g12(s);
    out << '\n';
  }
  return kExitOk;
}

std::atomic<bool> g_serving{false};

int serve(const std::string& bind, int port, int max_level, std::ostream& err) {
  sigset_t signals;
  sigemptyset(&signals);
  sigaddset(&signals, SIGINT);
  sigaddset(&signals, SIGTERM);
  pthread_sigmask(SIG_BLOCK, &signals, nullptr);

  Service service(ServiceOptions{max_level});
  if (!service.http().bind_to_port(bind, port)) {
    err << "error: cannot bind " << bind << ':' << port << '\n';
    pthread_sigmask(SIG_UNBLOCK, &signals, nullptr);
    return kExitPortInUse;
  }
  g_serving = true;
  std::thread waiter([&] {
    const timespec tick{0, 200'000'000};
    while (g_serving) {
      if (sigtimedwait(&signals, nullptr, &tick) > 0) {
        service.stop();
        return;
      }
    }
  });
  service.http().listen_after_bind();
  g_serving = false;
  waiter.join();
  pthread_sigmask(SIG_UNBLOCK, &signals, nullptr);
  return kExitOk;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::istream& in, std::ostream& out, std::ostream& err) {
  CLI::App app{"Point-normal subdivision of curves and surfaces", "pnsubd"};
  app.require_subcommand(1);
  bool quiet = false;
  app.add_flag("-q,--quiet", quiet, "Suppress the version banner");
  app.set_version_flag("--version", kBanner);

  SubdivideArgs sub;
  auto* sub_cmd = app.add_subcommand("subdivide", "Refine an OBJ mesh or a polyline");
  sub_cmd->add_option("--in", sub.in, "Input OBJ ('-' for stdin)");
  sub_cmd->add_option("--out", sub.out, "Output file ('-' for stdout)");
  sub_cmd->add_option("--scheme", sub.scheme, "cc|ds|loop|kobbelt|butterfly, or a curve mask in curve mode");
  sub_cmd->add_option("--levels", sub.levels, "Refinement rounds");
  sub_cmd->add_option("--variant", sub.variant, "linear|pn|modified|pn-modified");
  sub_cmd->add_flag("--estimate-normals", sub.estimate, "Fill missing normals from face normals");
  sub_cmd->add_option("--normal-mask", sub.normal_mask, "Curve mask used for the normal average");
  sub_cmd->add_option("--curve", sub.curve, "Refine this polyline file instead of a mesh");
  sub_cmd->add_option("--kappa", sub.kappa, "Tail bound factor for modified variants");

  auto* analyze_cmd = app.add_subcommand("analyze", "Numerical diagnostics");
  analyze_cmd->require_subcommand(1);

  MaskArgs mask;
  auto* mask_cmd = analyze_cmd->add_subcommand("mask", "Symbol algebra and smoothness certificate");
  mask_cmd->add_option("--bspline", mask.bspline, "B-spline degree");
  mask_cmd->add_option("--dd", mask.dd, "Interpolatory 2n-point scheme, n");
  mask_cmd->add_option("--coeffs", mask.coeffs, "Comma-separated mask coefficients");
  mask_cmd->add_option("--offset", mask.offset, "Exponent of the first coefficient");
  mask_cmd->add_option("--max-order", mask.max_order, "Highest smoothness order tried");
  mask_cmd->add_option("--max-L", mask.max_l, "Highest iteration count tried");

  SpectrumArgs spec;
  auto* spec_cmd = analyze_cmd->add_subcommand("spectrum", "Local subdivision matrix spectra");
  spec_cmd->add_option("--scheme", spec.scheme, "cc|loop");
  spec_cmd->add_option("--valence", spec.valence, "Valence or range lo..hi");
  spec_cmd->add_option("--kappa", spec.kappa, "Tail bound factor");

  FitArgs fit;
  auto* fit_cmd = analyze_cmd->add_subcommand("fit", "Residual against an analytic primitive");
  fit_cmd->add_option("--in", fit.in, "Input OBJ ('-' for stdin)");
  fit_cmd->add_option("--curve", fit.curve, "Use the points of this polyline file");
  fit_cmd->add_option("--kind", fit.kind, "circle|sphere|cylinder|torus|plane");
  fit_cmd->add_option("--center", fit.center, "x,y,z");
  fit_cmd->add_option("--axis", fit.axis, "x,y,z");
  fit_cmd->add_option("--radius", fit.radius, "Radius (major radius for tori)");
  fit_cmd->add_option("--minor-radius", fit.minor_radius, "Torus tube radius");

  std::string curvature_in = "-";
  auto* curv_cmd = analyze_cmd->add_subcommand("curvature", "Per-vertex discrete curvature as CSV");
  curv_cmd->add_option("--in", curvature_in, "Input OBJ ('-' for stdin)");

  DecayArgs decay;
  auto* decay_cmd = analyze_cmd->add_subcommand("decay", "Decay rates of a sequence or of normal spreads");
  decay_cmd->add_option("--values", decay.values, "Comma-separated positive values");
  decay_cmd->add_option("--scheme", decay.scheme, "Scheme for the normal experiment");
  decay_cmd->add_option("--valence", decay.valence, "Valence or range lo..hi");
  decay_cmd->add_option("--levels", decay.levels, "Refinement rounds");
  decay_cmd->add_option("--seed", decay.seed, "Random seed for the normal tilts");
  decay_cmd->add_option("--spread", decay.spread, "Maximum tilt in radians");

  std::string report_in = "-";
  auto* report_cmd = analyze_cmd->add_subcommand("report", "Mesh validation report");
  report_cmd->add_option("--in", report_in, "Input OBJ ('-' for stdin)");

  std::string bind = "127.0.0.1";
  int port = 8080;
  int max_level = 8;
  auto* serve_cmd = app.add_subcommand("serve", "Run the session service");
  serve_cmd->add_option("--port", port, "TCP port");
  serve_cmd->add_option("--bind", bind, "Bind address");
  serve_cmd->add_option("--max-level", max_level, "Highest level a request may ask for");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err) == 0 ? kExitOk : 2;
  }
  if (!quiet) err << kBanner << '\n';

  try {
    if (*sub_cmd) return subdivide(sub, in, out);
    if (*mask_cmd) return analyze_mask(mask, out);
    if (*spec_cmd) return analyze_spectrum(spec, out);
    if (*fit_cmd) return analyze_fit(fit, in, out);
    if (*curv_cmd) {
      out << format_curvature_csv(discrete_curvature(load_obj_string(read_all(curvature_in, in))));
      return kExitOk;
    }
    if (*decay_cmd) return analyze_decay(decay, out);
    if (*report_cmd) {
      out << format_report(validate(load_obj_string(read_all(report_in, in))));
      return kExitOk;
    }
    if (*serve_cmd) return serve(bind, port, max_level, err);
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return exit_code(e.code());
  }
  return 2;
}

}  // namespace pnsubd::frontdoor
