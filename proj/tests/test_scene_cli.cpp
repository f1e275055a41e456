#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <fstream>
#include <sstream>

#include "capt/cli.hpp"
#include "capt/scene.hpp"
#include "helpers.hpp"

using namespace capt;
using namespace testkit;

namespace {

int cli(const std::vector<std::string>& args, std::string* out_text = nullptr,
        std::string* err_text = nullptr) {
  std::ostringstream out, err;
  int rc = run_cli(args, out, err);
  if (out_text) *out_text = out.str();
  if (err_text) *err_text = err.str();
  return rc;
}

std::string temp_path(const std::string& name) {
  return std::string("/tmp/capt_test_") + name;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("parse a minimal one-component scene") {
  Scene s = Scene::parse("component a\nkind atom\nat 0 0\nmass 1\n");
  REQUIRE(s.components.size() == 1);
  CHECK(s.components.front().kind == MeasureComponent::Kind::atom);
  CHECK(s.components.front().mass == cplx{1, 0});
}

TEST_CASE("parse the shipped two-disks-plus-segment fixture") {
  Scene s = Scene::parse_file(fixture("two_disks_segment.scene"));
  CHECK(s.components.size() == 3);
  CHECK(s.K.size() == 3);
  CHECK(s.components[0].label == "diskL");
  CHECK(s.components[2].label == "seg");
}

TEST_CASE("scene errors carry line numbers") {
  try {
    Scene::parse("component a\nkind atom\nat 0 0\nmass 1\ncomponent a\nkind atom\nat 1 1\nmass 1\n");
    FAIL("expected a duplicate-label error");
  } catch (const error& e) {
    CHECK(std::string(e.what()).find("line 5") != std::string::npos);
    CHECK(std::string(e.what()).find("'a'") != std::string::npos);
  }
  try {
    Scene::parse("component a\nkind area\nshape disk 0 zero 1\ndensity 1\n");
    FAIL("expected a malformed-number error");
  } catch (const error& e) {
    CHECK(std::string(e.what()).find("line 3") != std::string::npos);
    CHECK(std::string(e.what()).find("zero") != std::string::npos);
  }
  CHECK_THROWS_AS(Scene::parse("component a\nkind blob\n"), error);
  CHECK_THROWS_AS(Scene::parse("component a\nkind arc\nshape disk 0 0 1\ndensity 1\n"), error);
}

TEST_CASE("scene serialization round-trips") {
  for (const char* name : {"unit_disk.scene", "two_disks_segment.scene", "annulus.scene",
                           "atom.scene", "circle.scene"}) {
    Scene a = Scene::parse_file(fixture(name));
    std::string text = a.serialize();
    Scene b = Scene::parse(text);
    CHECK(b.serialize() == text);
    CHECK(b.components.size() == a.components.size());
    CHECK(b.K.size() == a.K.size());
  }
}

TEST_CASE("cli cauchy writes a deterministic CSV") {
  std::string out1, out2;
  int rc = cli({"cauchy", "--scene", fixture("atom.scene"), "--points",
                fixture("points_outside.csv")},
               &out1);
  CHECK(rc == 0);
  cli({"cauchy", "--scene", fixture("atom.scene"), "--points", fixture("points_outside.csv")},
      &out2);
  CHECK(out1 == out2);
  CHECK(out1.rfind("re,im,mu_re,mu_im\n", 0) == 0);
  // atom at 0 mass 1 seen from z = 2: 1/(0-2) = -0.5
  CHECK(out1.find("2,0,-0.5,") != std::string::npos);
}

TEST_CASE("cli color reports green termination through the exit status") {
  std::string svg_path = temp_path("color.svg");
  std::string out;
  int rc = cli({"color", "--scene", fixture("atom.scene"), "--phi", "const:0", "--a", "0,0",
                "--k", "1", "--gens", "3", "--window", "-4,-4,4,4", "--out", svg_path},
               &out);
  CHECK(rc == 1);  // unbounded green path
  CHECK(out.find("green-terminated") != std::string::npos);
  std::string svg = slurp(svg_path);
  CHECK(svg.find("<svg") != std::string::npos);
  CHECK(svg.find("#7fc97f") != std::string::npos);  // greens present

  int rc2 = cli({"color", "--scene", fixture("atom.scene"), "--phi", "const:1e6", "--a", "0,0",
                 "--k", "1", "--gens", "2", "--window", "-6,-6,6,6", "--out", svg_path},
                &out);
  CHECK(rc2 == 0);
  CHECK(out.find("completed") != std::string::npos);
}

TEST_CASE("cli color rejects an infeasible window with exit code 4") {
  std::string out, err;
  int rc = cli({"color", "--scene", fixture("atom.scene"), "--phi", "const:1e6", "--a", "0,0",
                "--k", "1", "--gens", "3", "--window", "-1,-1,1,1", "--out",
                temp_path("bad.svg")},
               &out, &err);
  CHECK(rc == 4);
  CHECK(err.find("window") != std::string::npos);
}

TEST_CASE("cli rejects invalid scenes with exit code 2") {
  std::string bad = temp_path("bad.scene");
  std::ofstream(bad) << "component a\nkind atom\nmass 1\n";  // missing position
  std::string out, err;
  int rc = cli({"cauchy", "--scene", bad, "--points", fixture("points_outside.csv")}, &out, &err);
  CHECK(rc == 2);
  CHECK(!err.empty());
  std::remove(bad.c_str());
}

TEST_CASE("cli abpe-scan emits the component count and a report") {
  std::string svg_path = temp_path("scan.svg"), rep_path = temp_path("scan.json");
  std::string out;
  int rc = cli({"abpe-scan", "--scene", fixture("unit_disk.scene"), "--res", "0.0625",
                "--degree", "36", "--out", svg_path, "--report", rep_path},
               &out);
  CHECK(rc == 0);
  CHECK(out.find("components: 1") != std::string::npos);
  std::string rep = slurp(rep_path);
  CHECK(rep.find("\"component_count\": 1") != std::string::npos);
  std::string svg = slurp(svg_path);
  CHECK(svg.find("<svg") != std::string::npos);

  // determinism: identical bytes on a second run
  std::string svg_path2 = temp_path("scan2.svg");
  cli({"abpe-scan", "--scene", fixture("unit_disk.scene"), "--res", "0.0625", "--degree", "36",
       "--out", svg_path2},
      &out);
  CHECK(slurp(svg_path2) == svg);
}

TEST_CASE("cli sweep prints the boundary table") {
  std::string out;
  int rc = cli({"sweep", "--scene", fixture("atom.scene"), "--domain", "disk:0,0,1", "--samples",
                "64"},
               &out);
  CHECK(rc == 0);
  CHECK(out.find("# circle 0") != std::string::npos);
  CHECK(out.find("mass 1") != std::string::npos);
  // uniform density 1/(2 pi)
  CHECK(out.find("0.159154943") != std::string::npos);
}

TEST_CASE("cli decompose succeeds on the fixture and fails when blinded") {
  std::string rep = temp_path("dec.json");
  std::string out;
  int rc = cli({"decompose", "--scene", fixture("two_disks_segment.scene"), "--out", rep}, &out);
  CHECK(rc == 0);
  CHECK(out.find("delta0: seg") != std::string::npos);
  std::string j = slurp(rep);
  CHECK(j.find("\"delta0\"") != std::string::npos);

  // restricting the window to the left disk hides the right one; its
  // leftover component then fails the density test -> exit 3
  std::string blind = temp_path("blind.scene");
  std::ofstream(blind) << "resolution 8\ndegree 40\nwindow -1.8 -0.85 -0.2 0.85\n"
                          "component diskL\nkind area\nshape disk -1 0 0.5\ndensity 1\n"
                          "component diskR\nkind area\nshape disk 1 0 0.5\ndensity 1\n"
                          "K disk -1 0 0.5\nK disk 1 0 0.5\n";
  std::string err;
  int rc2 = cli({"decompose", "--scene", blind}, &out, &err);
  CHECK(rc2 == 3);
  std::remove(blind.c_str());
}
