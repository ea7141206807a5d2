#include "frontdoor/cli.hpp"
#include "frontdoor/codec.hpp"
#include "frontdoor/session.hpp"

#include <pnsubd/obj_io.hpp>
#include <pnsubd/polyline_io.hpp>

#include "catch_amalgamated.hpp"
#include "fixtures.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

using namespace pnsubd;
using namespace pnsubd::frontdoor;

namespace {

struct CliResult {
  int code;
  std::string out;
  std::string err;
};

CliResult run(std::vector<std::string> args, const std::string& stdin_text = "") {
  args.insert(args.begin(), "pnsubd");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::istringstream in(stdin_text);
  std::ostringstream out;
  std::ostringstream err;
  const int code = run_cli(static_cast<int>(argv.size()), argv.data(), in, out, err);
  return {code, out.str(), err.str()};
}

std::string temp_path(const std::string& name) {
  return (std::filesystem::temp_directory_path() / ("pnsubd_test_" + name)).string();
}

double kv(const std::string& report, const std::string& key) {
  const auto at = report.find(key + "=");
  REQUIRE(at != std::string::npos);
  return std::stod(report.substr(at + key.size() + 1));
}

}  // namespace

TEST_CASE("base64") {
  for (std::string s : {"", "a", "ab", "abc", "v 0 0 0\nf 1 2 3\n"}) CHECK(base64_decode(base64_encode(s)) == s);
  CHECK(base64_encode("abc") == "YWJj");
  CHECK(base64_decode("YW\nJj") == "abc");
  CHECK_THROWS_AS(base64_decode("Y$Jj"), Error);
}

TEST_CASE("random tokens") {
  const std::string a = random_token();
  const std::string b = random_token();
  CHECK(a.size() == 32);
  CHECK(a != b);
  CHECK(a.find_first_not_of("0123456789abcdef") == std::string::npos);
}

TEST_CASE("vector parsing and exit codes") {
  CHECK(parse_vec3("1,-2.5,3e1") == Vec3(1, -2.5, 30));
  CHECK_THROWS_AS(parse_vec3("1,2"), Error);
  CHECK_THROWS_AS(parse_vec3("1,2,x"), Error);
  CHECK(exit_code(ErrorCode::ParseError) == 2);
  CHECK(exit_code(ErrorCode::WrongFaceArity) == 3);
  CHECK(exit_code(ErrorCode::DegenerateAverage) == 4);
}

TEST_CASE("mesh JSON") {
  const Json j = mesh_to_json(fixtures::tetrahedron());
  CHECK(j["positions"].size() == 4);
  CHECK(j["normals"].size() == 4);
  CHECK(j["faces"].size() == 4);
  CHECK(j["faces"][0].size() == 3);
  const Json r = report_to_json(validate(fixtures::cube()));
  CHECK(r["vertex_count"] == 8);
  CHECK(r["valence_histogram"]["3"] == 8);
}

TEST_CASE("session caches levels and invalidates on edit") {
  SessionStore store;
  auto s = store.create(estimate_normals(fixtures::cube()));
  CHECK(store.find(s->id()) == s);
  const MeshRequest l2{SchemeKind::CatmullClark, Variant::PN, 2};
  const auto first = s->mesh(l2);
  CHECK(first->vertex_count() == 98);
  CHECK(s->mesh(l2) == first);
  CHECK(s->mesh({SchemeKind::CatmullClark, Variant::PN, 0})->positions == s->base().positions);
  const auto invalidated = s->edit_normals({{0, Vec3(0, 0, 2)}});
  CHECK(invalidated == std::vector<int>{1, 2});
  CHECK(s->base().normals[0] == Vec3::UnitZ());
  const auto second = s->mesh(l2);
  CHECK(second != first);
  CHECK(second->positions != first->positions);
  CHECK(second->positions == subdivide_surface(s->base(), SchemeKind::CatmullClark, 2, Variant::PN).positions);
  s->edit_normals({{1, Vec3::Zero()}});
  CHECK(is_zero(s->base().normals[1]));
  CHECK_THROWS_AS(s->edit_normals({{8, Vec3::UnitZ()}}), Error);
  CHECK_THROWS_AS(s->edit_normals({{0, Vec3(std::nan(""), 0, 1)}}), Error);
  CHECK(store.remove(s->id()));
  CHECK_FALSE(store.remove(s->id()));
  CHECK(store.find(s->id()) == nullptr);
}

TEST_CASE("failed edits are atomic") {
  SessionStore store;
  auto s = store.create(fixtures::tetrahedron(), SchemeKind::Loop);
  const PNMesh before = s->base();
  CHECK_THROWS(s->edit_normals({{0, Vec3::UnitX()}, {99, Vec3::UnitX()}}));
  CHECK(s->base().normals == before.normals);
}

TEST_CASE("cli: cube Catmull-Clark gives 26 vertices") {
  const std::string obj = save_obj_string(fixtures::cube());
  const CliResult r = run({"-q", "subdivide", "--scheme", "cc", "--levels", "1", "--variant", "linear"}, obj);
  CHECK(r.code == 0);
  CHECK(r.err.empty());
  CHECK(load_obj_string(r.out).vertex_count() == 26);
  const CliResult banner = run({"subdivide", "--levels", "0"}, obj);
  CHECK(banner.err == "pnsubd 0.1.0\n");
  CHECK(banner.out == obj);
}

TEST_CASE("cli: output is byte identical across runs") {
  const std::string obj = save_obj_string(fixtures::icosahedron());
  const CliResult a = run({"-q", "subdivide", "--scheme", "butterfly", "--levels", "2"}, obj);
  const CliResult b = run({"-q", "subdivide", "--scheme", "butterfly", "--levels", "2"}, obj);
  CHECK(a.code == 0);
  CHECK(a.out == b.out);
}

TEST_CASE("cli: exit codes") {
  const std::string quad = save_obj_string(fixtures::cube());
  const CliResult loop = run({"-q", "subdivide", "--scheme", "loop"}, quad);
  CHECK(loop.code == 3);
  CHECK(loop.err.find("WrongFaceArity") != std::string::npos);
  CHECK(run({"-q", "subdivide"}, "v 0 0\n").code == 2);
  CHECK(run({"-q", "subdivide", "--scheme", "sqrt3"}, quad).code == 3);
  CHECK(run({"-q", "subdivide", "--variant", "modified", "--scheme", "ds"}, quad).code == 3);
  CHECK(run({"-q", "subdivide", "--in", "/nonexistent.obj"}).code == 2);
  CHECK(run({"-q", "subdivide", "--bogus"}).code == 2);
  CHECK(run({"-q"}).code == 2);
  PNMesh antipodal = fixtures::grid(1, 1);
  antipodal.normals = {Vec3::UnitZ(), -Vec3::UnitZ(), Vec3::UnitZ(), -Vec3::UnitZ()};
  CHECK(run({"-q", "subdivide", "--variant", "pn"}, save_obj_string(antipodal)).code == 4);
  CHECK(run({"--help"}).code == 0);
}

TEST_CASE("cli: files and estimated normals") {
  const std::string in = temp_path("cube.obj");
  const std::string out = temp_path("cube_out.obj");
  save_obj_file(fixtures::cube(), in);
  const CliResult r = run({"-q", "subdivide", "--in", in, "--out", out, "--levels", "2", "--estimate-normals"});
  CHECK(r.code == 0);
  CHECK(r.out.empty());
  const PNMesh m = load_obj_file(out);
  CHECK(m.vertex_count() == 98);
  for (const Vec3& n : m.normals) CHECK(std::abs(n.norm() - 1.0) < 1e-12);
  std::remove(in.c_str());
  std::remove(out.c_str());
}

TEST_CASE("cli: cylinder pipeline reports a tiny residual") {
  const std::string obj = save_obj_string(fixtures::cylinder(6, 3, 1.0, 2.0));
  const CliResult sub = run({"-q", "subdivide", "--scheme", "cc", "--variant", "pn", "--levels", "5"}, obj);
  REQUIRE(sub.code == 0);
  const CliResult fit = run({"-q", "analyze", "fit", "--kind", "cylinder", "--center", "0,0,0", "--axis", "0,0,1",
                             "--radius", "1"},
                            sub.out);
  REQUIRE(fit.code == 0);
  CHECK(kv(fit.out, "max_residual") < 1e-9);
}

TEST_CASE("cli: sphere fit on PN-Butterfly output") {
  const std::string obj = save_obj_string(fixtures::tetrahedron());
  const CliResult sub = run({"-q", "subdivide", "--scheme", "butterfly", "--levels", "4"}, obj);
  REQUIRE(sub.code == 0);
  const CliResult fit = run({"-q", "analyze", "fit", "--kind", "sphere"}, sub.out);
  REQUIRE(fit.code == 0);
  CHECK(fit.out.find("fitted=true") != std::string::npos);
  CHECK(kv(fit.out, "max_residual") < 1e-9);
}

TEST_CASE("cli: curve mode") {
  const std::string poly_path = temp_path("circle.poly");
  {
    std::ofstream f(poly_path);
    save_polyline(fixtures::circle_polygon({0.0, 0.5, 1.4, 2.0, 3.1, 3.9, 4.6, 5.5}), f);
  }
  const CliResult r = run({"-q", "subdivide", "--curve", poly_path, "--scheme", "6-point", "--levels", "3"});
  REQUIRE(r.code == 0);
  std::istringstream text(r.out);
  const PNPolygon out = load_polyline(text);
  CHECK(out.vertices.size() == 64);
  for (const auto& v : out.vertices) CHECK(std::abs(v.position.norm() - 1.0) < 1e-12);
  const CliResult mask = run({"-q", "subdivide", "--curve", poly_path, "--normal-mask", "bspline3"});
  CHECK(mask.code == 0);
  CHECK(run({"-q", "subdivide", "--curve", poly_path, "--scheme", "bogus"}).code == 3);
  const CliResult fit = run({"-q", "analyze", "fit", "--kind", "circle", "--curve", "-"}, r.out);
  CHECK(fit.code == 0);
  CHECK(kv(fit.out, "max_residual") < 1e-9);
  std::remove(poly_path.c_str());
}

TEST_CASE("cli: analyze mask") {
  const CliResult r = run({"-q", "analyze", "mask", "--bspline", "3"});
  REQUIRE(r.code == 0);
  CHECK(kv(r.out, "smoothness") >= 2);
  CHECK(r.out.find("affine=true") != std::string::npos);
  const CliResult dd = run({"-q", "analyze", "mask", "--dd", "2"});
  CHECK(dd.out.find("interpolatory=true") != std::string::npos);
  CHECK(kv(dd.out, "smoothness") == 1);
  const CliResult custom = run({"-q", "analyze", "mask", "--coeffs", "0.25,0.75,0.75,0.25", "--offset", "-2"});
  CHECK(custom.code == 0);
  CHECK(kv(custom.out, "smoothness") == 1);
  CHECK(run({"-q", "analyze", "mask"}).code == 2);
  CHECK(run({"-q", "analyze", "mask", "--bspline", "0"}).code == 2);
}

TEST_CASE("cli: analyze spectrum table") {
  const CliResult r = run({"-q", "analyze", "spectrum", "--scheme", "cc", "--valence", "3..8"});
  REQUIRE(r.code == 0);
  std::istringstream lines(r.out);
  std::string line;
  std::getline(lines, line);
  CHECK(line == "# scheme n lambda mu_max ratio tuned_ratio");
  int rows = 0;
  while (std::getline(lines, line)) {
    std::istringstream cols(line);
    std::string scheme;
    int n = 0;
    double lambda = 0, mu = 0, ratio = 0, tuned = 0;
    cols >> scheme >> n >> lambda >> mu >> ratio >> tuned;
    CHECK(scheme == "cc");
    CHECK(n == 3 + rows);
    if (n == 3) CHECK(ratio <= 1.0);
    if (n >= 5) CHECK(ratio > 1.0);
    CHECK(tuned <= 0.95 + 1e-9);
    CHECK(std::abs(mu / (lambda * lambda) - ratio) < 1e-9);
    ++rows;
  }
  CHECK(rows == 6);
  CHECK(r.out.find("cc 3 0.410097050801 ") != std::string::npos);
  CHECK(run({"-q", "analyze", "spectrum", "--scheme", "ds"}).code == 3);
  CHECK(run({"-q", "analyze", "spectrum", "--valence", "8..3"}).code == 2);
}

TEST_CASE("cli: analyze decay, curvature and report") {
  const CliResult d = run({"-q", "analyze", "decay", "--values", "1,0.5,0.25,0.125,0.0625"});
  REQUIRE(d.code == 0);
  CHECK(std::abs(kv(d.out, "decay_rate") - 0.5) < 1e-12);
  const CliResult exp = run({"-q", "analyze", "decay", "--scheme", "cc", "--valence", "3..5"});
  REQUIRE(exp.code == 0);
  CHECK(std::count(exp.out.begin(), exp.out.end(), '\n') == 4);
  CHECK(run({"-q", "analyze", "decay", "--values", "1,2"}).code == 2);

  const std::string sphere = save_obj_string(subdivide_surface(fixtures::icosahedron(), SchemeKind::Loop, 1,
                                                               Variant::PN));
  const CliResult c = run({"-q", "analyze", "curvature"}, sphere);
  REQUIRE(c.code == 0);
  CHECK(c.out.rfind("vertex_id,gaussian,mean\n", 0) == 0);
  CHECK(std::count(c.out.begin(), c.out.end(), '\n') == 43);
  const CliResult rep = run({"-q", "analyze", "report"}, sphere);
  CHECK(rep.out.find("vertices=42\n") != std::string::npos);
  CHECK(rep.out.find("euler_characteristic=2\n") != std::string::npos);
}
