// tplroute: triple-patterning-aware grid router, decomposer and checker.
//
// Subcommands: route, decompose, render, verify, gen, stats, bench.
// Exit codes: 0 on success, 1 when conflicts remain and --strict was given,
// 2 on input errors (unparseable files, bad flags, unwritable outputs).
// Set TECG_LOG=info|debug for tracked-state logging on stderr.

#include <CLI11.hpp>
#include <json.hpp>

#include <atomic>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "tpl/coloring.hpp"
#include "tpl/flow.hpp"
#include "tpl/gen.hpp"
#include "tpl/layout.hpp"
#include "tpl/netlist.hpp"
#include "tpl/router.hpp"
#include "tpl/svg_render.hpp"
#include "tpl/tecg.hpp"

namespace {

using namespace tpl;
using ojson = nlohmann::ordered_json;

constexpr int kExitOk = 0;
constexpr int kExitConflicts = 1;
constexpr int kExitInputError = 2;

std::string read_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) {
    throw std::runtime_error("cannot open " + path);
  }
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  f << text;
  if (!f) {
    throw std::runtime_error("cannot write " + path);
  }
}

/// Flag storage shared by all subcommands; exactly one of them parses.
struct Opts {
  std::string input;
  std::string output;  ///< render: positional output path
  std::string mode = "triad";
  std::string bench_mode = "both";
  int iters = 20;
  int no_conflict_iters = 15;
  long long penalty_st = Penalties{}.st;
  long long penalty_unsolvable = Penalties{}.unsolvable;
  int sp_tp_mult = 3;
  std::uint64_t seed = 1;
  std::string out;
  std::string svg;
  bool strict = false;
  bool timing = false;
  // Synthetic instance shape (gen, bench).
  int width = 24;
  int height = 24;
  int layers = 2;
  int nets = 12;
  int min_pins = 2;
  int max_pins = 4;
  int spread = 8;
  int obstacles = 0;
  // bench
  int runs = 8;
  int threads = 0;
  // verify
  int bound = 20;
};

void add_sp_tp_flag(CLI::App* c, Opts& o) {
  c->add_option("--sp-tp-mult", o.sp_tp_mult,
                "Override the coloring spacing as this multiple of the "
                "same-mask spacing (file value kept when omitted)")
      ->capture_default_str();
}

void add_penalty_flags(CLI::App* c, Opts& o) {
  c->add_option("--penalty-st", o.penalty_st, "Cost per planned stitch")
      ->capture_default_str();
  c->add_option("--penalty-unsolvable", o.penalty_unsolvable,
                "Cost per conflict no stitch plan can solve")
      ->capture_default_str();
}

void add_flow_flags(CLI::App* c, Opts& o) {
  c->add_option("--iters", o.iters, "Maximum routing passes")
      ->capture_default_str();
  c->add_option("--no-conflict-iters", o.no_conflict_iters,
                "Passes during which conflicted commits are prohibited")
      ->capture_default_str();
  add_penalty_flags(c, o);
  add_sp_tp_flag(c, o);
  c->add_flag("--timing", o.timing,
              "Stamp wall-clock runtime into reports (breaks byte "
              "reproducibility)");
}

void add_shape_flags(CLI::App* c, Opts& o) {
  c->add_option("--width", o.width, "Grid columns")->capture_default_str();
  c->add_option("--height", o.height, "Grid rows")->capture_default_str();
  c->add_option("--layers", o.layers, "Routing layers")->capture_default_str();
  c->add_option("--nets", o.nets, "Nets to generate")->capture_default_str();
  c->add_option("--min-pins", o.min_pins, "Pins per net, lower bound")
      ->capture_default_str();
  c->add_option("--max-pins", o.max_pins, "Pins per net, upper bound")
      ->capture_default_str();
  c->add_option("--spread", o.spread,
                "Pins land within this radius of a per-net anchor")
      ->capture_default_str();
  c->add_option("--obstacles", o.obstacles, "Random blockage rectangles")
      ->capture_default_str();
}

RouteMode parse_mode(const std::string& s) {
  return s == "greedy" ? RouteMode::greedy : RouteMode::triad;
}

GenParams shape_from(const CLI::App& sub, const Opts& o) {
  GenParams p;
  p.width = o.width;
  p.height = o.height;
  p.layers = o.layers;
  p.nets = o.nets;
  p.min_pins = o.min_pins;
  p.max_pins = o.max_pins;
  p.pin_spread = o.spread;
  p.obstacles = o.obstacles;
  if (sub.count("--sp-tp-mult") > 0) {
    p.rules.sp_tp = p.rules.sp_w * o.sp_tp_mult;
  }
  return p;
}

/// Renders the layout and writes one SVG per layer; silent no-op without a
/// path.
void write_svgs(const Layout& layout, const std::string& path) {
  if (path.empty()) {
    return;
  }
  for (const auto& [file, doc] : render_svg(layout, path)) {
    write_file(file, doc);
    std::cout << "wrote " << file << "\n";
  }
}

int cmd_route(const CLI::App& sub, const Opts& o) {
  Netlist nl = parse_netlist(read_file(o.input));
  if (sub.count("--sp-tp-mult") > 0) {
    nl.rules.sp_tp = nl.rules.sp_w * o.sp_tp_mult;
  }
  RouterConfig cfg;
  cfg.rules = nl.rules;
  cfg.penalties.st = o.penalty_st;
  cfg.penalties.unsolvable = o.penalty_unsolvable;
  cfg.max_iterations = o.iters;
  cfg.conflict_prohibited_iterations = o.no_conflict_iters;
  cfg.mode = parse_mode(o.mode);
  cfg.rng_seed = static_cast<unsigned>(o.seed);

  const FlowReport rep = run_flow(nl, cfg, o.timing);
  const std::string report_text = serialize_flow_report(rep);
  if (o.out.empty()) {
    std::cout << report_text;
  } else {
    write_file(o.out + ".report.jsonl", report_text);
    write_file(o.out + ".layout.jsonl", serialize_layout(rep.layout));
    std::cout << "mode=" << o.mode << " routed=" << rep.routed_two_pin
              << " wirelength=" << rep.wirelength
              << " stitches=" << rep.num_stitches
              << " conflicts=" << rep.num_conflicts << "\n"
              << "wrote " << o.out << ".report.jsonl\n"
              << "wrote " << o.out << ".layout.jsonl\n";
  }
  write_svgs(rep.layout, o.svg);
  return o.strict && rep.num_conflicts > 0 ? kExitConflicts : kExitOk;
}

std::string decompose_report_text(const DecomposeReport& rep) {
  std::ostringstream os;
  {
    ojson j;
    j["kind"] = "decompose_report";
    j["conflicts"] = rep.num_conflicts;
    j["stitches"] = rep.num_stitches;
    j["uncolorable"] = rep.uncolorable;
    j["violations"] = rep.violations.size();
    os << j.dump() << "\n";
  }
  for (const Violation& v : rep.violations) {
    ojson j;
    j["kind"] = "violation";
    j["type"] = v.kind == Violation::Kind::same_color_spacing
                    ? "same_color_spacing"
                    : "uncolorable_component";
    j["segments"] = v.segments;
    j["distance"] = v.distance;
    os << j.dump() << "\n";
  }
  return os.str();
}

int cmd_decompose(const CLI::App& sub, const Opts& o) {
  Layout in = parse_layout(read_file(o.input));
  if (sub.count("--sp-tp-mult") > 0) {
    in.rules.sp_tp = in.rules.sp_w * o.sp_tp_mult;
  }
  Penalties pen;
  pen.st = o.penalty_st;
  pen.unsolvable = o.penalty_unsolvable;

  const DecomposeReport rep = decompose_layout(in, pen);
  const std::string report_text = decompose_report_text(rep);
  if (o.out.empty()) {
    std::cout << report_text;
  } else {
    write_file(o.out + ".report.jsonl", report_text);
    write_file(o.out + ".layout.jsonl", serialize_layout(rep.layout));
    std::cout << "conflicts=" << rep.num_conflicts
              << " stitches=" << rep.num_stitches
              << " violations=" << rep.violations.size() << "\n"
              << "wrote " << o.out << ".report.jsonl\n"
              << "wrote " << o.out << ".layout.jsonl\n";
  }
  write_svgs(rep.layout, o.svg);
  return o.strict && rep.num_conflicts > 0 ? kExitConflicts : kExitOk;
}

int cmd_render(const Opts& o) {
  const Layout lay = parse_layout(read_file(o.input));
  const std::string path = !o.output.empty() ? o.output : o.svg;
  if (path.empty()) {
    throw std::runtime_error("render: an output path is required");
  }
  write_svgs(lay, path);
  return kExitOk;
}

int cmd_verify(const Opts& o) {
  const Layout lay = parse_layout(read_file(o.input));
  std::map<VertexId, WireSegment> segs;
  for (const PlacedWire& pw : lay.wires) {
    if (!segs.emplace(pw.seg.id, pw.seg).second) {
      throw std::runtime_error("duplicate wire id " +
                               std::to_string(pw.seg.id));
    }
  }

  // Ground truth: the plain pairwise conflict graph of the geometry.
  ConflictGraph cg;
  for (const auto& [id, s] : segs) {
    cg.add_vertex(s, id);
  }
  for (auto i = segs.begin(); i != segs.end(); ++i) {
    for (auto j = std::next(i); j != segs.end(); ++j) {
      if (segments_conflict(i->second, j->second, lay.rules)) {
        cg.add_edge(i->first, j->first);
      }
    }
  }

  // Pipeline verdicts: replay through the tracked state and color it.
  Tecg t;
  for (const auto& [id, s] : segs) {
    t.insert_segment_connected(s, lay.rules);
  }
  std::set<VertexId> flagged;
  for (const ConflictRecord& r : t.conflicts()) {
    if (r.a >= 0) flagged.insert(r.a);
    if (r.b >= 0) flagged.insert(r.b);
  }
  const MaskAssignment ma = assign_colors(t);
  for (const TokenId tok : ma.uncolorable) {
    for (const VertexId v : t.cg().members(tok)) {
      flagged.insert(v);
    }
  }

  // Cross-check per connected component of the plain graph.
  std::set<VertexId> seen;
  int comp_no = 0;
  int skipped = 0;
  bool disagree = false;
  for (const VertexId start : cg.vertex_ids()) {
    if (seen.count(start)) {
      continue;
    }
    std::vector<VertexId> comp{start};
    seen.insert(start);
    for (std::size_t k = 0; k < comp.size(); ++k) {
      for (const VertexId n : cg.neighbors(comp[k])) {
        if (seen.insert(n).second) {
          comp.push_back(n);
        }
      }
    }
    ++comp_no;
    if (comp.size() > static_cast<std::size_t>(o.bound)) {
      std::cout << "component " << comp_no << " (" << comp.size()
                << " segments): skipped, oracle bound " << o.bound
                << " exceeded\n";
      ++skipped;
      continue;
    }
    ConflictGraph sub;
    for (const VertexId v : comp) {
      sub.add_vertex(segs.at(v), v);
    }
    for (std::size_t a = 0; a < comp.size(); ++a) {
      for (std::size_t b = a + 1; b < comp.size(); ++b) {
        if (cg.neighbors(comp[a]).count(comp[b])) {
          sub.add_edge(comp[a], comp[b]);
        }
      }
    }
    const auto oracle = brute_force_3color(sub, o.bound);
    bool pipeline_bad = false;
    for (const VertexId v : comp) {
      pipeline_bad = pipeline_bad || flagged.count(v) > 0;
    }
    const bool agree = oracle.has_value() == !pipeline_bad;
    std::cout << "component " << comp_no << " (" << comp.size()
              << " segments): oracle "
              << (oracle ? "colorable" : "uncolorable") << "; pipeline "
              << (pipeline_bad ? "conflict" : "clean") << " -- "
              << (agree ? "AGREE" : "DISAGREE") << "\n";
    disagree = disagree || !agree;
  }
  std::cout << comp_no << " components checked, " << skipped << " skipped\n";
  return disagree ? kExitConflicts : kExitOk;
}

int cmd_gen(const CLI::App& sub, const Opts& o) {
  const Netlist nl = random_netlist(o.seed, shape_from(sub, o));
  const std::string text = serialize_netlist(nl);
  if (o.out.empty()) {
    std::cout << text;
  } else {
    write_file(o.out, text);
    std::cout << "wrote " << o.out << "\n";
  }
  return kExitOk;
}

int cmd_stats(const Opts& o) {
  const Netlist nl = parse_netlist(read_file(o.input));
  int pins = 0;
  for (const Net& n : nl.nets) {
    pins += static_cast<int>(n.pins.size());
  }
  const std::vector<TwoPinNet> pairs = decompose_nets(nl);
  ojson j;
  j["kind"] = "netlist_stats";
  j["width"] = nl.width;
  j["height"] = nl.height;
  j["layers"] = nl.layer_dirs.size();
  j["nets"] = nl.nets.size();
  j["pins"] = pins;
  j["two_pin_nets"] = pairs.size();
  std::cout << j.dump() << "\n";
  ojson r;
  r["kind"] = "rules";
  r["sp_w"] = nl.rules.sp_w;
  r["hw_w"] = nl.rules.hw_w;
  r["sp_tp"] = nl.rules.sp_tp;
  std::cout << r.dump() << "\n";
  return kExitOk;
}

int cmd_bench(const CLI::App& sub, const Opts& o) {
  std::vector<RouteMode> modes;
  if (o.bench_mode == "both") {
    modes = {RouteMode::triad, RouteMode::greedy};
  } else {
    modes = {parse_mode(o.bench_mode)};
  }
  struct Task {
    std::uint64_t seed = 0;
    RouteMode mode = RouteMode::triad;
  };
  std::vector<Task> tasks;
  for (int i = 0; i < o.runs; ++i) {
    for (const RouteMode m : modes) {
      tasks.push_back({o.seed + static_cast<std::uint64_t>(i), m});
    }
  }
  const GenParams shape = shape_from(sub, o);

  // Fan the independent runs out over a small pool; each run owns its
  // netlist, grid and tracked state exclusively, so results only meet in
  // the pre-sized vector below.
  std::vector<FlowReport> results(tasks.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < tasks.size(); i = next++) {
      const Netlist nl = random_netlist(tasks[i].seed, shape);
      RouterConfig cfg;
      cfg.rules = nl.rules;
      cfg.penalties.st = o.penalty_st;
      cfg.penalties.unsolvable = o.penalty_unsolvable;
      cfg.max_iterations = o.iters;
      cfg.conflict_prohibited_iterations = o.no_conflict_iters;
      cfg.mode = tasks[i].mode;
      cfg.rng_seed = static_cast<unsigned>(tasks[i].seed);
      results[i] = run_flow(nl, cfg, o.timing);
    }
  };
  unsigned pool = o.threads > 0 ? static_cast<unsigned>(o.threads)
                                : std::thread::hardware_concurrency();
  pool = std::max(1u, std::min<unsigned>(pool, tasks.size()));
  std::vector<std::thread> threads;
  for (unsigned i = 0; i < pool; ++i) {
    threads.emplace_back(worker);
  }
  for (std::thread& th : threads) {
    th.join();
  }

  std::ostringstream os;
  std::map<RouteMode, std::array<long long, 4>> totals;
  for (std::size_t i = 0; i < tasks.size(); ++i) {
    const FlowReport& r = results[i];
    const char* mode = tasks[i].mode == RouteMode::triad ? "triad" : "greedy";
    ojson j;
    j["kind"] = "bench_run";
    j["seed"] = tasks[i].seed;
    j["mode"] = mode;
    j["wirelength"] = r.wirelength;
    j["stitches"] = r.num_stitches;
    j["conflicts"] = r.num_conflicts;
    j["routed"] = r.routed_two_pin;
    j["unrouted"] = r.unrouted.size();
    j["runtime_seconds"] = r.runtime_seconds;
    os << j.dump() << "\n";
    auto& t = totals[tasks[i].mode];
    t[0] += r.wirelength;
    t[1] += r.num_stitches;
    t[2] += r.num_conflicts;
    t[3] += static_cast<long long>(r.unrouted.size());
  }
  long long all_conflicts = 0;
  for (const RouteMode m : modes) {
    const auto& t = totals[m];
    ojson j;
    j["kind"] = "bench_totals";
    j["mode"] = m == RouteMode::triad ? "triad" : "greedy";
    j["instances"] = o.runs;
    j["wirelength"] = t[0];
    j["stitches"] = t[1];
    j["conflicts"] = t[2];
    j["unrouted"] = t[3];
    os << j.dump() << "\n";
    all_conflicts += t[2];
  }
  if (o.out.empty()) {
    std::cout << os.str();
  } else {
    write_file(o.out, os.str());
    std::cout << "wrote " << o.out << "\n";
  }
  return o.strict && all_conflicts > 0 ? kExitConflicts : kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "Triple-patterning-aware grid maze router, layout decomposer and mask "
      "checker"};
  app.require_subcommand(1);
  app.footer("Set TECG_LOG=info|debug for tracked-state logging on stderr.");
  Opts o;

  CLI::App* route = app.add_subcommand(
      "route", "Route a netlist; write the mask-colored layout and a report");
  route->add_option("input", o.input, "Netlist file")->required();
  route->add_option("--mode", o.mode, "Routing mode")
      ->check(CLI::IsMember({"triad", "greedy"}))
      ->capture_default_str();
  add_flow_flags(route, o);
  route->add_option("--seed", o.seed, "Run seed (recorded; flow itself is "
                    "deterministic)")
      ->capture_default_str();
  route->add_option("--out", o.out,
                    "Write <out>.report.jsonl and <out>.layout.jsonl instead "
                    "of printing the report");
  route->add_option("--svg", o.svg, "Also render the layout (one SVG per "
                    "layer)");
  route->add_flag("--strict", o.strict, "Exit 1 when conflicts remain");

  CLI::App* decompose = app.add_subcommand(
      "decompose",
      "Recolor a fixed layout: replay its wires through the tracked state, "
      "stitch where needed, assign masks, validate");
  decompose->add_option("input", o.input, "Layout file")->required();
  add_penalty_flags(decompose, o);
  add_sp_tp_flag(decompose, o);
  decompose->add_option("--out", o.out,
                        "Write <out>.report.jsonl and <out>.layout.jsonl");
  decompose->add_option("--svg", o.svg, "Also render the colored layout");
  decompose->add_flag("--strict", o.strict, "Exit 1 when conflicts remain");

  CLI::App* render = app.add_subcommand(
      "render", "Render a layout file to SVG, one document per layer");
  render->add_option("input", o.input, "Layout file")->required();
  render->add_option("output", o.output, "Output SVG path");
  render->add_option("--svg", o.svg, "Output SVG path (alternative spelling)");

  CLI::App* verify = app.add_subcommand(
      "verify",
      "Cross-check pipeline conflict verdicts against an exhaustive "
      "3-coloring oracle, per conflict-graph component");
  verify->add_option("input", o.input, "Layout file")->required();
  verify->add_option("--bound", o.bound,
                     "Skip components larger than this many segments")
      ->capture_default_str();

  CLI::App* gen = app.add_subcommand(
      "gen", "Generate a seeded synthetic netlist");
  gen->add_option("--seed", o.seed, "Generator seed")->capture_default_str();
  add_shape_flags(gen, o);
  add_sp_tp_flag(gen, o);
  gen->add_option("--out", o.out, "Output netlist path (stdout when omitted)");

  CLI::App* stats = app.add_subcommand(
      "stats", "Print netlist statistics as JSON lines");
  stats->add_option("input", o.input, "Netlist file")->required();

  CLI::App* bench = app.add_subcommand(
      "bench",
      "Route a batch of seeded synthetic instances across worker threads");
  bench->add_option("--seeds", o.runs, "Number of seeds to run")
      ->capture_default_str();
  bench->add_option("--seed", o.seed, "First seed")->capture_default_str();
  bench->add_option("--mode", o.bench_mode, "Routing mode, or both")
      ->check(CLI::IsMember({"triad", "greedy", "both"}))
      ->capture_default_str();
  bench->add_option("--threads", o.threads,
                    "Worker threads (0 = hardware concurrency)")
      ->capture_default_str();
  add_flow_flags(bench, o);
  add_shape_flags(bench, o);
  bench->add_option("--out", o.out, "Output report path (stdout when "
                    "omitted)");
  bench->add_flag("--strict", o.strict,
                  "Exit 1 when any run ends with conflicts");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitInputError;
  }

  try {
    if (route->parsed()) return cmd_route(*route, o);
    if (decompose->parsed()) return cmd_decompose(*decompose, o);
    if (render->parsed()) return cmd_render(o);
    if (verify->parsed()) return cmd_verify(o);
    if (gen->parsed()) return cmd_gen(*gen, o);
    if (stats->parsed()) return cmd_stats(o);
    if (bench->parsed()) return cmd_bench(*bench, o);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInputError;
  }
  return kExitOk;
}
