#include "cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "membrane/closure.hpp"
#include "membrane/error.hpp"
#include "membrane/growth.hpp"
#include "membrane/lifting.hpp"
#include "membrane/mc.hpp"
#include "membrane/render.hpp"
#include "membrane/scene.hpp"
#include "membrane/stress.hpp"

namespace membrane::cli {

namespace {

void write_file(const std::string& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw Error(ErrorCode::InvalidArgument, "cannot write '" + path + "'");
  f << text;
  if (!f) throw Error(ErrorCode::InvalidArgument, "write failed for '" + path + "'");
}

std::string join(const std::vector<std::size_t>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + std::to_string(v[i]);
  return s;
}

struct GenArgs {
  double lambda = 0.0;
  double window = 30.0;
  std::optional<double> pad;
  std::string shape = "disk:1";
  std::uint64_t seed = 0;
  bool pinwheel = false;
  std::string output;
};

int run_gen(const GenArgs& a, std::ostream& out) {
  Scene scene;
  if (a.pinwheel) {
    scene = pinwheel_scene();
  } else {
    const Window w = square_window(a.window);
    scene = sample_poisson_scene(w, a.pad.value_or(default_pad(w)), a.lambda, parse_shape_distribution(a.shape),
                                 a.seed);
  }
  write_scene(scene, a.output);
  out << "holes=" << scene.holes.size() << "\n";
  return kExitOk;
}

struct CloseArgs {
  std::string input;
  std::string output;
  int max_gen = 60;
  int scanlines = 1024;
};

int run_close(const CloseArgs& a, std::ostream& out) {
  const Scene scene = read_scene(a.input);
  ClosureOptions opts;
  opts.max_gen = a.max_gen;
  opts.area_scanlines = a.scanlines;
  const ClosureResult r = closure_run(scene, scene.window, opts);
  if (!a.output.empty()) {
    write_file(a.output, std::string(kClosureCsvHeader) + "\n" +
                             closure_report_csv_rows(r.report, scene.seed, scene.lambda));
  }
  if (r.report.covering_generation) {
    out << "COVERED k=" << *r.report.covering_generation << "\n";
  } else if (r.report.fixed_point_generation) {
    out << "FIXED_POINT k=" << *r.report.fixed_point_generation << "\n";
  } else {
    out << "CENSORED k=" << r.report.generations.back().generation << "\n";
  }
  return kExitOk;
}

struct TensionArgs {
  std::string input;
  bool spider = false;
  std::string certificate;
  std::string lifting;
  std::string framework;
};

int run_spider(const TensionArgs& a, std::ostream& out) {
  Framework fw = read_framework(a.input);
  const SpiderWebResult r = spider_web_lp(fw);
  out << (r.feasible ? "FEASIBLE" : "INFEASIBLE") << "\n";
  out << "edges=" << fw.edges.size() << " verified=" << (r.verified ? "true" : "false") << "\n";
  if (r.feasible && !a.framework.empty()) {
    fw.stress = r.stress;
    write_framework(fw, a.framework);
  }
  return kExitOk;
}

int run_tension(const TensionArgs& a, std::ostream& out) {
  if (a.spider) return run_spider(a, out);
  const Scene scene = read_scene(a.input);
  const HoleSystem holes = scene_hole_system(scene);
  std::vector<int> ids;
  for (const Hole& h : scene.holes) ids.push_back(h.id);
  const LiftingResult r = lifting_feasible(holes);
  if (r.feasible) {
    Lifting l = *r.lifting;
    l.hole_ids = ids;
    out << "FEASIBLE\n";
    out << "holes=" << holes.size() << " margin=" << l.margin(holes) << "\n";
    if (!a.lifting.empty()) write_file(a.lifting, lifting_to_json(scene, l));
    if (!a.framework.empty()) {
      Subdivision sub = envelope_subdivision(l, scene.padded_window());
      sub.framework.stress = stresses_from_lifting(l, sub);
      write_framework(sub.framework, a.framework);
    }
  } else {
    const LiftingCertificate& c = *r.certificate;
    std::vector<std::size_t> support;
    for (std::size_t i : c.support) support.push_back(static_cast<std::size_t>(ids[i]));
    out << "INFEASIBLE\n";
    out << "support=" << join(support) << " terms=" << c.terms.size()
        << " verified=" << (c.verified ? "true" : "false") << "\n";
    if (!a.certificate.empty()) write_file(a.certificate, certificate_to_json(c, ids));
  }
  return kExitOk;
}

struct HminArgs {
  std::string input;
  std::string output;
  std::string method = "approx";
};

int run_hmin(const HminArgs& a, std::ostream& out) {
  const Scene scene = read_scene(a.input);
  const HoleSystem holes = scene_hole_system(scene);
  HoleSystem system;
  if (a.method == "search") {
    const HminSearch s = h_min_search(holes);
    system = s.system;
    out << "holes=" << system.size() << " area=" << s.area << " candidates=" << s.candidates
        << " feasible=" << s.feasible << " minimal=" << s.minimal << "\n";
  } else {
    system = h_min_approx(holes, scene.padded_window());
    out << "holes=" << system.size() << " area=" << total_area(system) << "\n";
  }
  if (!a.output.empty()) write_scene(scene_from_holes(system, scene.window), a.output);
  return kExitOk;
}

struct GrowArgs {
  std::string input;
  std::string output;
  std::optional<int> origin;
  std::string variant = "full";
  std::string color = "any";
  bool angular = false;
  int k_max = 50;
};

int run_grow(const GrowArgs& a, std::ostream& out) {
  const Scene scene = read_scene(a.input);
  GrowthConfig cfg;
  cfg.variant = parse_growth_variant(a.variant);
  cfg.color = parse_point_color(a.color);
  cfg.angular_exclusion = a.angular;
  cfg.k_max = a.k_max;
  const int origin = a.origin.value_or(nearest_disk(scene, scene.window.center()));
  const GrowthTrace trace = grow_run(scene, origin, cfg);
  if (!a.output.empty()) write_file(a.output, growth_trace_csv(trace));
  if (trace.stopped_at) {
    out << "STOPPED k=" << *trace.stopped_at << "\n";
  } else {
    out << "REACHED k=" << trace.last_k() << "\n";
  }
  out << "origin=" << origin << " absorbed=" << trace.used_holes.size() << "\n";
  return kExitOk;
}

struct BoxArgs {
  std::string input;
  std::string output;
  double lambda = 1.0;
  std::uint64_t seed = 0;
  BoxConfig config;
};

int run_boxes(const BoxArgs& a, std::ostream& out) {
  const BoxGrid grid =
      a.input.empty() ? box_coupling_run(a.lambda, a.config, a.seed) : box_grid_from(read_scene(a.input), a.config);
  if (!a.output.empty()) write_file(a.output, box_grid_csv(grid));
  out << "open=" << grid.open_count << "/" << grid.boxes.size() << " largest_cluster=" << grid.largest_cluster
      << "\n";
  return kExitOk;
}

struct LatticeArgs {
  int n = 10;
  double p = 1.0;
  std::uint64_t seed = 0;
  std::string output;
};

int run_lattice(const LatticeArgs& a, std::ostream& out) {
  Framework fw = triangular_lattice(a.n, a.p, a.seed);
  const SpiderWebResult r = spider_web_lp(fw);
  if (r.feasible) fw.stress = r.stress;
  if (!a.output.empty()) write_framework(fw, a.output);
  out << (r.feasible ? "FEASIBLE" : "INFEASIBLE") << "\n";
  out << "edges=" << fw.edges.size() << "\n";
  return kExitOk;
}

struct SweepArgs {
  SweepConfig config;
  std::string experiment = "closure";
  std::string shape = "disk:1";
  std::string growth_variant = "full";
  std::string output;
  std::string summary;
  std::string curves;
};

int run_sweep_cmd(SweepArgs a, std::ostream& out) {
  a.config.experiment = parse_experiment(a.experiment);
  a.config.shape = parse_shape_distribution(a.shape);
  a.config.growth.variant = parse_growth_variant(a.growth_variant);
  const ResultTable table = run_sweep(a.config);
  write_file(a.output, sweep_csv(table));
  const std::vector<SweepSummary> s = summarize(table);
  if (!a.summary.empty()) write_file(a.summary, summary_csv(s));
  if (!a.curves.empty()) write_file(a.curves, area_curve_csv(s));
  out << "rows=" << table.rows.size() << "\n";
  return kExitOk;
}

struct RenderArgs {
  std::string input;
  std::string output;
  std::string layers;
  std::string framework;
  double scale = 10.0;
  int max_gen = 60;
  BoxConfig boxes;
};

int run_render(const RenderArgs& a, std::ostream& out) {
  RenderSpec spec;
  spec.layers = parse_layers(a.layers);
  spec.scale = a.scale;
  RenderData data;
  auto wants = [&](Layer l) { return std::find(spec.layers.begin(), spec.layers.end(), l) != spec.layers.end(); };
  if (!a.input.empty()) {
    const Scene scene = read_scene(a.input);
    spec.window = scene.padded_window();
    spec.core = scene.window;
    data.scene = scene;
    if (wants(Layer::Defects)) {
      ClosureOptions opts;
      opts.max_gen = a.max_gen;
      opts.keep_history = true;
      data.generations = closure_run(scene, scene.window, opts).history;
    }
    if (wants(Layer::Cells) || (wants(Layer::Framework) && a.framework.empty())) {
      const LiftingResult r = lifting_feasible(scene_hole_system(scene));
      if (r.feasible) {
        Subdivision sub = envelope_subdivision(*r.lifting, spec.window);
        sub.framework.stress = stresses_from_lifting(*r.lifting, sub);
        data.subdivision = std::move(sub);
      }
    }
    if (wants(Layer::Boxes)) {
      data.boxes = box_grid_from(scene, a.boxes);
      data.box_config = a.boxes;
      spec.core = box_window(a.boxes);
    }
  }
  if (!a.framework.empty()) {
    const Framework fw = read_framework(a.framework);
    if (a.input.empty()) {
      Window w{fw.vertices.at(0).x, fw.vertices.at(0).x, fw.vertices.at(0).y, fw.vertices.at(0).y};
      for (Point p : fw.vertices) {
        w = {std::min(w.xmin, p.x), std::max(w.xmax, p.x), std::min(w.ymin, p.y), std::max(w.ymax, p.y)};
      }
      spec.window = w.padded(1.0);
    }
    data.framework = fw;
  }
  if (a.input.empty() && a.framework.empty()) {
    throw Error(ErrorCode::MissingLayer, "render needs a scene (-i) or a framework (--framework)");
  }
  const std::string svg = svg_render(spec, data);
  write_file(a.output, svg);
  out << "layers=" << spec.layers.size() << " bytes=" << svg.size() << "\n";
  return kExitOk;
}

void add_box_options(CLI::App* sub, BoxConfig& cfg) {
  sub->add_option("--k0", cfg.k0, "Box scale parameter k0")->capture_default_str();
  sub->add_option("--T", cfg.T, "Candidate circles per box minus one")->capture_default_str();
  sub->add_option("--nx", cfg.nx, "Boxes along x")->capture_default_str();
  sub->add_option("--ny", cfg.ny, "Boxes along y")->capture_default_str();
}

}  // namespace

int dispatch(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Membrane percolation toolkit: scenes, closure, liftings, growth and sweeps", "membrane_perc"};
  app.require_subcommand(1);

  GenArgs gen;
  auto* gen_cmd = app.add_subcommand("gen", "Sample a Poisson scene");
  gen_cmd->add_option("--lambda", gen.lambda, "Hole rate per unit area");
  gen_cmd->add_option("--window", gen.window, "Side of the square core window")->capture_default_str();
  gen_cmd->add_option("--pad", gen.pad, "Padding around the window (default: a quarter side)");
  gen_cmd->add_option("--shape", gen.shape, "Shape law: disk:R, uniform:A:B, discrete:R@W,..., polygon:N:M:A:B")
      ->capture_default_str();
  gen_cmd->add_option("--seed", gen.seed, "Master seed")->capture_default_str();
  gen_cmd->add_flag("--pinwheel", gen.pinwheel, "Emit the three-triangle pinwheel scene instead");
  gen_cmd->add_option("-o,--output", gen.output, "Scene file")->required();

  CloseArgs close;
  auto* close_cmd = app.add_subcommand("close", "Run hull closure on a scene");
  close_cmd->add_option("-i,--input", close.input, "Scene file")->required();
  close_cmd->add_option("-o,--output", close.output, "Closure report CSV");
  close_cmd->add_option("--max-gen", close.max_gen, "Generation cap")->capture_default_str();
  close_cmd->add_option("--scanlines", close.scanlines, "Scanlines for covered area")->capture_default_str();

  TensionArgs tension;
  auto* tension_cmd = app.add_subcommand("tension", "Decide whether a scene or framework supports tension");
  tension_cmd->add_option("-i,--input", tension.input, "Scene file, or framework file with --spider")->required();
  tension_cmd->add_flag("--spider", tension.spider, "Input is a framework; test for a positive equilibrium stress");
  tension_cmd->add_option("--certificate", tension.certificate, "Write the infeasibility certificate as JSON");
  tension_cmd->add_option("--lifting", tension.lifting, "Write the lifting as JSON");
  tension_cmd->add_option("--framework", tension.framework, "Write the stressed framework as JSON");

  HminArgs hmin;
  auto* hmin_cmd = app.add_subcommand("hmin", "Smallest liftable system containing the holes");
  hmin_cmd->add_option("-i,--input", hmin.input, "Scene file")->required();
  hmin_cmd->add_option("-o,--output", hmin.output, "Scene file for the resulting system");
  hmin_cmd->add_option("--method", hmin.method, "approx or search")
      ->check(CLI::IsMember({"approx", "search"}))
      ->capture_default_str();

  GrowArgs grow;
  auto* grow_cmd = app.add_subcommand("grow", "Grow polygons from an origin disk");
  grow_cmd->add_option("-i,--input", grow.input, "Scene file")->required();
  grow_cmd->add_option("-o,--output", grow.output, "Trace CSV");
  grow_cmd->add_option("--origin", grow.origin, "Origin hole id (default: disk nearest the window center)");
  grow_cmd->add_option("--variant", grow.variant, "full, ring or restricted")->capture_default_str();
  grow_cmd->add_option("--color", grow.color, "any, green or blue")->capture_default_str();
  grow_cmd->add_flag("--angular", grow.angular, "Apply angular exclusion");
  grow_cmd->add_option("--k-max", grow.k_max, "Last generation")->capture_default_str();

  BoxArgs boxes;
  auto* boxes_cmd = app.add_subcommand("boxes", "Evaluate the open-box grid");
  boxes_cmd->add_option("-i,--input", boxes.input, "Scene file (default: sample one)");
  boxes_cmd->add_option("-o,--output", boxes.output, "Box CSV");
  boxes_cmd->add_option("--lambda", boxes.lambda, "Hole rate when sampling")->capture_default_str();
  boxes_cmd->add_option("--seed", boxes.seed, "Seed when sampling")->capture_default_str();
  add_box_options(boxes_cmd, boxes.config);

  LatticeArgs lattice;
  auto* lattice_cmd = app.add_subcommand("lattice", "Diluted triangular lattice and its tension verdict");
  lattice_cmd->add_option("--n", lattice.n, "Lattice side")->capture_default_str();
  lattice_cmd->add_option("--p", lattice.p, "Edge retention probability")->capture_default_str();
  lattice_cmd->add_option("--seed", lattice.seed, "Seed")->capture_default_str();
  lattice_cmd->add_option("-o,--output", lattice.output, "Framework file");

  SweepArgs sweep;
  auto* sweep_cmd = app.add_subcommand("sweep", "Monte Carlo sweep over rates");
  sweep_cmd->add_option("--experiment", sweep.experiment, "closure, growth, boxes or lattice")->capture_default_str();
  sweep_cmd->add_option("--lambdas", sweep.config.lambdas, "Comma-separated rates (edge probabilities for lattice)")
      ->delimiter(',')
      ->required();
  sweep_cmd->add_option("--trials", sweep.config.trials, "Trials per rate")->capture_default_str();
  sweep_cmd->add_option("--window", sweep.config.window, "Core window side")->capture_default_str();
  sweep_cmd->add_option("--pad", sweep.config.pad, "Padding")->capture_default_str();
  sweep_cmd->add_option("--shape", sweep.shape, "Shape law")->capture_default_str();
  sweep_cmd->add_option("--max-gen", sweep.config.max_gen, "Generation cap")->capture_default_str();
  sweep_cmd->add_option("--max-holes", sweep.config.max_holes, "Skip trials with more holes")->capture_default_str();
  sweep_cmd->add_option("--seed", sweep.config.seed, "Master seed")->capture_default_str();
  sweep_cmd->add_option("--threads", sweep.config.threads, "Worker threads (0: all cores)")->capture_default_str();
  sweep_cmd->add_flag("--runtime", sweep.config.record_runtime, "Record per-trial runtime");
  sweep_cmd->add_option("--variant", sweep.growth_variant, "Growth variant")->capture_default_str();
  sweep_cmd->add_option("--lattice-n", sweep.config.lattice_n, "Lattice side")->capture_default_str();
  add_box_options(sweep_cmd, sweep.config.boxes);
  sweep_cmd->add_option("-o,--output", sweep.output, "Per-trial CSV")->required();
  sweep_cmd->add_option("--summary", sweep.summary, "Per-rate summary CSV");
  sweep_cmd->add_option("--curves", sweep.curves, "Mean covered-area curves CSV");

  RenderArgs render;
  auto* render_cmd = app.add_subcommand("render", "Draw a scene and derived layers as SVG");
  render_cmd->add_option("-i,--input", render.input, "Scene file");
  render_cmd->add_option("--layers", render.layers, "Comma-separated: holes, defects, cells, framework, boxes")
      ->required();
  render_cmd->add_option("--framework", render.framework, "Framework file for the framework layer");
  render_cmd->add_option("--scale", render.scale, "SVG units per window unit")->capture_default_str();
  render_cmd->add_option("--max-gen", render.max_gen, "Generation cap for defects")->capture_default_str();
  add_box_options(render_cmd, render.boxes);
  render_cmd->add_option("-o,--output", render.output, "SVG file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, err, err);
    return kExitUsage;
  }

  try {
    if (*gen_cmd) {
      if (!gen.pinwheel && gen_cmd->count("--lambda") == 0) {
        err << "gen: --lambda is required unless --pinwheel is given\n" << gen_cmd->help();
        return kExitUsage;
      }
      return run_gen(gen, out);
    }
    if (*close_cmd) return run_close(close, out);
    if (*tension_cmd) return run_tension(tension, out);
    if (*hmin_cmd) return run_hmin(hmin, out);
    if (*grow_cmd) return run_grow(grow, out);
    if (*boxes_cmd) return run_boxes(boxes, out);
    if (*lattice_cmd) return run_lattice(lattice, out);
    if (*sweep_cmd) return run_sweep_cmd(sweep, out);
    if (*render_cmd) return run_render(render, out);
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kExitFailure;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitFailure;
  }
  return kExitUsage;
}

}  // namespace membrane::cli
