// End-to-end tests driving the command-line binary.  Each invocation runs
// from the build directory; scratch files land in the test's working
// directory with unique names.
#include <doctest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <fstream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "tpl/layout.hpp"

using namespace tpl;

namespace {

std::string slurp(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

std::string testdata(const std::string& name) {
  return std::string(TESTDATA_DIR) + "/" + name;
}

struct RunResult {
  int exit_code = -1;
  std::string out;
  std::string err;
};

RunResult run_cli(const std::string& args) {
  static int counter = 0;
  const std::string tag = std::to_string(++counter);
  const std::string out_path = "cli_out_" + tag + ".txt";
  const std::string err_path = "cli_err_" + tag + ".txt";
  const std::string cmd = std::string(TPLROUTE_BIN) + " " + args + " > " +
                          out_path + " 2> " + err_path;
  const int raw = std::system(cmd.c_str());
  RunResult r;
  r.exit_code = raw == -1 ? -1 : WEXITSTATUS(raw);
  r.out = slurp(out_path);
  r.err = slurp(err_path);
  return r;
}

/// First line of `text` containing `needle`, or empty.
std::string line_with(const std::string& text, const std::string& needle) {
  std::istringstream ss(text);
  std::string line;
  while (std::getline(ss, line)) {
    if (line.find(needle) != std::string::npos) {
      return line;
    }
  }
  return {};
}

std::size_t count_of(const std::string& hay, const std::string& needle) {
  std::size_t n = 0;
  for (std::size_t pos = hay.find(needle); pos != std::string::npos;
       pos = hay.find(needle, pos + needle.size())) {
    ++n;
  }
  return n;
}

}  // namespace

TEST_CASE("cli route: a one-net fixture routes at pin distance and exits 0") {
  const RunResult r =
      run_cli("route " + testdata("tiny.netlist.jsonl"));
  CHECK(r.exit_code == 0);
  const std::string rep = line_with(r.out, "\"kind\":\"report\"");
  CHECK(rep.find("\"wirelength\":16") != std::string::npos);
  CHECK(rep.find("\"conflicts\":0") != std::string::npos);
  CHECK(rep.find("\"unrouted\":0") != std::string::npos);
}

TEST_CASE("cli route: both modes report identical netlist statistics") {
  REQUIRE(run_cli("gen --seed 11 --nets 8 --out cli_g11.netlist.jsonl")
              .exit_code == 0);
  const RunResult a = run_cli("route cli_g11.netlist.jsonl --mode triad");
  const RunResult b = run_cli("route cli_g11.netlist.jsonl --mode greedy");
  REQUIRE(a.exit_code == 0);
  REQUIRE(b.exit_code == 0);
  const std::string sa = line_with(a.out, "\"kind\":\"netlist_stats\"");
  const std::string sb = line_with(b.out, "\"kind\":\"netlist_stats\"");
  CHECK(sa == sb);
  CHECK_FALSE(sa.empty());
}

TEST_CASE("cli route: reruns write byte-identical files") {
  REQUIRE(run_cli("gen --seed 4 --nets 10 --out cli_g4.netlist.jsonl")
              .exit_code == 0);
  REQUIRE(run_cli("route cli_g4.netlist.jsonl --out cli_r4a").exit_code == 0);
  REQUIRE(run_cli("route cli_g4.netlist.jsonl --out cli_r4b").exit_code == 0);
  CHECK(slurp("cli_r4a.report.jsonl") == slurp("cli_r4b.report.jsonl"));
  CHECK(slurp("cli_r4a.layout.jsonl") == slurp("cli_r4b.layout.jsonl"));
  CHECK_FALSE(slurp("cli_r4a.report.jsonl").empty());

  SUBCASE("and the layout file round-trips byte-identically") {
    const std::string text = slurp("cli_r4a.layout.jsonl");
    CHECK(serialize_layout(parse_layout(text)) == text);
  }
}

TEST_CASE("cli decompose: three close features take three distinct masks") {
  const RunResult r = run_cli("decompose " +
                              testdata("triple_close.layout.jsonl") +
                              " --out cli_t3");
  REQUIRE(r.exit_code == 0);
  const std::string rep = slurp("cli_t3.report.jsonl");
  CHECK(rep.find("\"conflicts\":0") != std::string::npos);
  CHECK(rep.find("\"stitches\":0") != std::string::npos);
  const Layout lay = parse_layout(slurp("cli_t3.layout.jsonl"));
  REQUIRE(lay.wires.size() == 3);
  std::set<int> colors;
  for (const PlacedWire& pw : lay.wires) {
    colors.insert(pw.color);
  }
  CHECK(colors == std::set<int>{1, 2, 3});
  CHECK(lay.stitches.empty());
}

TEST_CASE("cli decompose: two features take two masks") {
  const RunResult r = run_cli("decompose " +
                              testdata("two_feature.layout.jsonl") +
                              " --out cli_t2");
  REQUIRE(r.exit_code == 0);
  const Layout lay = parse_layout(slurp("cli_t2.layout.jsonl"));
  REQUIRE(lay.wires.size() == 2);
  CHECK(lay.wires[0].color != lay.wires[1].color);
  CHECK(lay.wires[0].color >= 1);
  CHECK(lay.wires[1].color >= 1);
}

TEST_CASE("cli decompose: the eight-feature layout ends conflict-free with "
          "the remote trio on one mask") {
  const RunResult r = run_cli("decompose " +
                              testdata("eight_feature.layout.jsonl") +
                              " --out cli_e8");
  REQUIRE(r.exit_code == 0);
  const std::string rep = slurp("cli_e8.report.jsonl");
  CHECK(rep.find("\"conflicts\":0") != std::string::npos);
  const Layout lay = parse_layout(slurp("cli_e8.layout.jsonl"));
  REQUIRE(lay.wires.size() == 8);
  int color_d = 0;
  int color_g = 0;
  int color_h = 0;
  for (const PlacedWire& pw : lay.wires) {
    if (pw.seg.id == 4) color_d = pw.color;
    if (pw.seg.id == 7) color_g = pw.color;
    if (pw.seg.id == 8) color_h = pw.color;
  }
  CHECK(color_d >= 1);
  CHECK(color_d == color_g);
  CHECK(color_d == color_h);
}

TEST_CASE("cli verify: oracle and pipeline agree on planted fixtures") {
  SUBCASE("a colorable component") {
    const RunResult r =
        run_cli("verify " + testdata("triple_close.layout.jsonl"));
    CHECK(r.exit_code == 0);
    CHECK(r.out.find("oracle colorable; pipeline clean") != std::string::npos);
    CHECK(count_of(r.out, "AGREE") == 1);
    CHECK(r.out.find("DISAGREE") == std::string::npos);
  }
  SUBCASE("a four-clique is uncolorable and flagged") {
    const RunResult r = run_cli("verify " + testdata("k4.layout.jsonl"));
    CHECK(r.exit_code == 0);
    CHECK(r.out.find("oracle uncolorable; pipeline conflict") !=
          std::string::npos);
    CHECK(r.out.find("DISAGREE") == std::string::npos);
  }
  SUBCASE("components over the bound are skipped with a notice") {
    const RunResult r =
        run_cli("verify " + testdata("k4.layout.jsonl") + " --bound 2");
    CHECK(r.exit_code == 0);
    CHECK(r.out.find("skipped, oracle bound 2 exceeded") != std::string::npos);
  }
}

TEST_CASE("cli render: an empty layout yields a frame-only document") {
  {
    Layout empty;
    empty.width = 12;
    empty.height = 10;
    std::ofstream f("cli_empty.layout.jsonl", std::ios::binary);
    f << serialize_layout(empty);
  }
  const RunResult r = run_cli("render cli_empty.layout.jsonl cli_empty.svg");
  REQUIRE(r.exit_code == 0);
  const std::string svg = slurp("cli_empty.svg");
  CHECK(svg.rfind("<svg xmlns=", 0) == 0);
  CHECK(count_of(svg, "class=\"frame\"") == 1);
  CHECK(count_of(svg, "class=\"wire\"") == 0);
}

TEST_CASE("cli render: colored wires come out with distinct fills") {
  REQUIRE(run_cli("decompose " + testdata("triple_close.layout.jsonl") +
                  " --out cli_t3r")
              .exit_code == 0);
  const RunResult r =
      run_cli("render cli_t3r.layout.jsonl --svg cli_t3r.svg");
  REQUIRE(r.exit_code == 0);
  const std::string svg = slurp("cli_t3r.svg");
  CHECK(count_of(svg, "class=\"wire\"") == 3);
  std::set<std::string> fills;
  for (std::size_t pos = svg.find("fill=\"#");
       pos != std::string::npos; pos = svg.find("fill=\"#", pos + 1)) {
    fills.insert(svg.substr(pos + 6, 8));
  }
  CHECK(fills.size() == 3);
}

TEST_CASE("cli gen and stats: stable output, consistent statistics") {
  const RunResult g1 = run_cli("gen --seed 5 --nets 6");
  const RunResult g2 = run_cli("gen --seed 5 --nets 6");
  REQUIRE(g1.exit_code == 0);
  CHECK(g1.out == g2.out);
  {
    std::ofstream f("cli_g5.netlist.jsonl", std::ios::binary);
    f << g1.out;
  }
  const RunResult s = run_cli("stats cli_g5.netlist.jsonl");
  REQUIRE(s.exit_code == 0);
  const RunResult r = run_cli("route cli_g5.netlist.jsonl");
  REQUIRE(r.exit_code == 0);
  CHECK(line_with(s.out, "\"kind\":\"netlist_stats\"") ==
        line_with(r.out, "\"kind\":\"netlist_stats\""));
  CHECK(line_with(s.out, "\"sp_tp\":6").find("\"kind\":\"rules\"") !=
        std::string::npos);
}

TEST_CASE("cli bench: threaded batches aggregate deterministically") {
  const std::string flags =
      " --seeds 3 --nets 6 --width 16 --height 16 --threads 3";
  REQUIRE(run_cli("bench --out cli_b1.jsonl" + flags).exit_code == 0);
  REQUIRE(run_cli("bench --out cli_b2.jsonl" + flags).exit_code == 0);
  const std::string b = slurp("cli_b1.jsonl");
  CHECK(b == slurp("cli_b2.jsonl"));
  // One line per (seed, mode) plus one totals line per mode.
  CHECK(count_of(b, "\"kind\":\"bench_run\"") == 6);
  CHECK(count_of(b, "\"kind\":\"bench_totals\"") == 2);
  CHECK(count_of(b, "\"mode\":\"triad\"") == 4);
  CHECK(count_of(b, "\"mode\":\"greedy\"") == 4);
}

TEST_CASE("cli exit codes: 2 on bad input, 1 under --strict with conflicts") {
  CHECK(run_cli("route cli_no_such_file.jsonl").exit_code == 2);
  CHECK(run_cli("stats " + testdata("k4.layout.jsonl")).exit_code == 2);
  {
    std::ofstream f("cli_garbage.jsonl", std::ios::binary);
    f << "not json at all\n";
  }
  CHECK(run_cli("decompose cli_garbage.jsonl").exit_code == 2);
  // The four-clique cannot be stitched apart: a conflict stands, so strict
  // mode signals it while the default mode keeps exit 0 for reporting flows.
  CHECK(run_cli("decompose " + testdata("k4.layout.jsonl") + " --strict")
            .exit_code == 1);
  CHECK(run_cli("decompose " + testdata("k4.layout.jsonl")).exit_code == 0);
}
