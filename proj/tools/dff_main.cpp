// Copyright (c) 2026 the dff authors
// SPDX-License-Identifier: Apache-2.0
//
// dff: depth-from-focus reconstruction toolkit.
//   simulate    render a synthetic focal stack with known ground truth
//   reconstruct variational depth estimation from a focal stack
//   baseline    classical windowed-argmax depth estimation
//   evaluate    score an estimate against a ground-truth depth map
//   diagnose    long solver run with convergence decay series

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "dff/classical.hpp"
#include "dff/contrast.hpp"
#include "dff/errors.hpp"
#include "dff/image.hpp"
#include "dff/io.hpp"
#include "dff/kernels.hpp"
#include "dff/parallel.hpp"
#include "dff/polyfit.hpp"
#include "dff/simulate.hpp"
#include "dff/tv_admm.hpp"

namespace fs = std::filesystem;

namespace {

constexpr const char* kVersion = "dff 1.0.0";

struct SimulateArgs {
  std::string shape = "cone";
  int height = 128, width = 128, slices = 15;
  uint64_t seed = 42;
  double noise_a = 1e-4, noise_b = 1e-5, psf_gain = 3.5;
  std::string texture_path;
  std::string out;
};

struct ReconstructArgs {
  std::string stack;
  std::string out;
  double alpha = 0.25, tau = 8.0, lambda0 = 1.0, growth = 1.02;
  int iters = 400, degree = 8;
};

struct BaselineArgs {
  std::string stack;
  std::string out;
  std::string preset;
  int contrast_window = 9;
  int median_window = 0;  // 0 = none
};

struct EvaluateArgs {
  std::string est, gt;
  int slices = 15;
  std::string shape = "-", method = "-", params = "-";
};

struct DiagnoseArgs {
  std::string stack;
  std::string out;
  double alpha = 1.0 / 12.0;
  int iters = 1000;
};

void write_diagnostics_csv(const dff::Diagnostics& diag, const std::string& path) {
  dff::CsvWriter csv(path,
                     {"iteration", "energy", "iterate_change_sq", "split_residual_sq", "lambda"});
  for (const auto& r : diag)
    csv.write_row({std::to_string(r.iteration), dff::format_double(r.energy),
                   dff::format_double(r.iterate_change_sq),
                   dff::format_double(r.split_residual_sq), dff::format_double(r.lambda)});
}

dff::Manifest base_manifest(const std::string& subcommand) {
  dff::Manifest m;
  m.set("version", std::string(kVersion));
  m.set("subcommand", subcommand);
  m.set("kernels", std::string(dff::kernels::ops().name));
  return m;
}

// Reads the file named by any --config option in args and returns the
// "--key value" pairs for entries whose flags are not already present.
std::vector<std::string> expand_config_args(const std::vector<std::string>& args) {
  std::string path;
  for (size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--config" && i + 1 < args.size())
      path = args[i + 1];
    else if (args[i].rfind("--config=", 0) == 0)
      path = args[i].substr(9);
  }
  std::vector<std::string> extra;
  if (path.empty()) return extra;
  const dff::Manifest cfg = dff::Manifest::load(path);  // flat key=value
  for (const auto& [key, value] : cfg.entries) {
    const std::string flag = "--" + key;
    bool present = false;
    for (const auto& a : args)
      if (a == flag || a.rfind(flag + "=", 0) == 0) present = true;
    if (!present) {
      extra.push_back(flag);
      extra.push_back(value);
    }
  }
  return extra;
}

int run_simulate(const SimulateArgs& a) {
  fs::create_directories(a.out);
  dff::SceneSpec spec;
  spec.shape = dff::parse_shape(a.shape);
  spec.slice_count = a.slices;
  spec.seed = a.seed;
  spec.noise_a = a.noise_a;
  spec.noise_b = a.noise_b;
  spec.psf_gain = a.psf_gain;
  if (a.texture_path.empty())
    spec.texture = dff::procedural_texture(a.height, a.width, a.seed);
  else
    spec.texture = dff::load_image(a.texture_path);
  const dff::GroundTruth gt = dff::make_depth(spec.shape, spec.texture.height(),
                                              spec.texture.width());
  const dff::FocalStack stack = dff::render_stack(spec, gt);

  std::vector<std::string> names;
  for (int k = 0; k < stack.size(); ++k) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "slice_%03d.png", k);
    names.emplace_back(buf);
    dff::save_image_png(stack.slices[k], (fs::path(a.out) / buf).string());
  }
  {
    std::ofstream list(fs::path(a.out) / "stack.txt");
    for (const auto& n : names) list << n << "\n";
  }
  dff::save_pfm(gt.depth, (fs::path(a.out) / "gt.pfm").string());

  dff::Manifest m = base_manifest("simulate");
  m.set("shape", a.shape);
  m.set("height", spec.texture.height());
  m.set("width", spec.texture.width());
  m.set("slices", a.slices);
  m.set("seed", std::to_string(a.seed));
  m.set("noise_a", a.noise_a);
  m.set("noise_b", a.noise_b);
  m.set("psf_gain", a.psf_gain);
  m.set("texture", a.texture_path.empty() ? std::string("procedural") : a.texture_path);
  m.save((fs::path(a.out) / "manifest.txt").string());
  std::cout << "wrote " << stack.size() << " slices + gt.pfm to " << a.out << "\n";
  return 0;
}

int run_reconstruct(const ReconstructArgs& a) {
  dff::SolverConfig cfg;
  cfg.alpha = a.alpha;
  cfg.tau = a.tau;
  cfg.lambda0 = a.lambda0;
  cfg.lambda_growth = a.growth;
  cfg.iterations = a.iters;
  cfg.fit_degree = a.degree;
  cfg.validate();

  const dff::FocalStack stack = dff::load_stack_auto(a.stack);
  fs::create_directories(a.out);
  auto [depth, diag] = dff::solve(stack, cfg);

  dff::save_pfm(depth, (fs::path(a.out) / "depth.pfm").string());
  dff::save_depth_png(depth, (fs::path(a.out) / "depth.png").string());
  write_diagnostics_csv(diag, (fs::path(a.out) / "diagnostics.csv").string());

  dff::Manifest m = base_manifest("reconstruct");
  m.set("stack", a.stack);
  m.set("alpha", a.alpha);
  m.set("tau", a.tau);
  m.set("lambda0", a.lambda0);
  m.set("growth", a.growth);
  m.set("iters", a.iters);
  m.set("degree", a.degree);
  m.save((fs::path(a.out) / "manifest.txt").string());
  std::cout << "wrote depth.pfm, depth.png, diagnostics.csv to " << a.out << "\n";
  return 0;
}

int run_baseline(const BaselineArgs& a) {
  int wc = a.contrast_window;
  int wm = a.median_window;
  if (a.preset == "mlap1") {
    wc = 9;
    wm = 0;
  } else if (a.preset == "mlap2") {
    wc = 41;
    wm = 11;
  } else if (!a.preset.empty()) {
    throw dff::InvalidArgument("unknown preset: " + a.preset + " (use mlap1 or mlap2)");
  }
  const dff::FocalStack stack = dff::load_stack_auto(a.stack);
  fs::create_directories(a.out);
  const dff::DepthMap depth = dff::baseline_pipeline(
      stack, wc, wm > 0 ? std::optional<int>(wm) : std::nullopt);

  dff::save_pfm(depth, (fs::path(a.out) / "depth.pfm").string());
  dff::save_depth_png(depth, (fs::path(a.out) / "depth.png").string());

  dff::Manifest m = base_manifest("baseline");
  m.set("stack", a.stack);
  m.set("contrast_window", wc);
  m.set("median_window", wm);
  m.save((fs::path(a.out) / "manifest.txt").string());
  std::cout << "wrote depth.pfm, depth.png to " << a.out << "\n";
  return 0;
}

int run_evaluate(const EvaluateArgs& a) {
  const dff::DepthMap est = dff::load_pfm(a.est);
  dff::GroundTruth gt{dff::load_pfm(a.gt)};
  const double mse = dff::score(est, gt, dff::ScoreUnits::Normalized, a.slices).first;
  const double rmse_slices = dff::score(est, gt, dff::ScoreUnits::Slices, a.slices).second;
  std::cout << "shape,method,params,mse,rmse_slices\r\n"
            << dff::csv_quote(a.shape) << ',' << dff::csv_quote(a.method) << ','
            << dff::csv_quote(a.params) << ',' << dff::format_double(mse) << ','
            << dff::format_double(rmse_slices) << "\r\n";
  return 0;
}

int run_diagnose(const DiagnoseArgs& a) {
  dff::SolverConfig cfg;
  cfg.alpha = a.alpha;
  cfg.iterations = a.iters;
  cfg.validate();

  const dff::FocalStack stack = dff::load_stack_auto(a.stack);
  fs::create_directories(a.out);
  auto [depth, diag] = dff::solve(stack, cfg);

  dff::save_pfm(depth, (fs::path(a.out) / "depth.pfm").string());
  write_diagnostics_csv(diag, (fs::path(a.out) / "diagnostics.csv").string());
  {
    // Decay series relative to the final energy, for log-domain plots.
    const double e_final = diag.back().energy;
    dff::CsvWriter csv((fs::path(a.out) / "decay.csv").string(),
                       {"iteration", "energy_gap", "iterate_change_sq", "split_residual_sq"});
    for (const auto& r : diag)
      csv.write_row({std::to_string(r.iteration), dff::format_double(r.energy - e_final),
                     dff::format_double(r.iterate_change_sq),
                     dff::format_double(r.split_residual_sq)});
  }

  dff::Manifest m = base_manifest("diagnose");
  m.set("stack", a.stack);
  m.set("alpha", a.alpha);
  m.set("iters", a.iters);
  m.save((fs::path(a.out) / "manifest.txt").string());
  std::cout << "wrote depth.pfm, diagnostics.csv, decay.csv to " << a.out << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"depth-from-focus reconstruction toolkit"};
  app.set_version_flag("--version", kVersion);
  app.require_subcommand(1);

  int threads = 0;
  app.add_option("--threads", threads, "worker thread count (default: hardware)");

  SimulateArgs sim;
  auto* s = app.add_subcommand("simulate", "render a synthetic focal stack");
  s->add_option("--shape", sim.shape, "cone|plane|cosine|sphere")->capture_default_str();
  s->add_option("--height", sim.height)->capture_default_str();
  s->add_option("--width", sim.width)->capture_default_str();
  s->add_option("--slices", sim.slices)->capture_default_str();
  s->add_option("--seed", sim.seed)->capture_default_str();
  s->add_option("--noise-a", sim.noise_a, "signal-dependent noise variance coefficient")
      ->capture_default_str();
  s->add_option("--noise-b", sim.noise_b, "signal-independent noise variance")
      ->capture_default_str();
  s->add_option("--psf-gain", sim.psf_gain, "blur sigma per unit defocus, pixels")
      ->capture_default_str();
  s->add_option("--texture", sim.texture_path, "texture image (default: procedural)");
  s->add_option("-o,--out", sim.out, "output directory")->required();

  ReconstructArgs rec;
  auto* r = app.add_subcommand("reconstruct", "variational depth reconstruction");
  r->add_option("stack", rec.stack, "stack directory or list file")->required();
  r->add_option("--alpha", rec.alpha, "regularization weight")->capture_default_str();
  r->add_option("--tau", rec.tau, "linearization step size")->capture_default_str();
  r->add_option("--lambda0", rec.lambda0, "initial penalty")->capture_default_str();
  r->add_option("--growth", rec.growth, "per-iteration penalty factor")->capture_default_str();
  r->add_option("--iters", rec.iters)->capture_default_str();
  r->add_option("--degree", rec.degree, "contrast curve degree")->capture_default_str();
  r->add_option("-o,--out", rec.out, "output directory")->required();

  BaselineArgs base;
  auto* b = app.add_subcommand("baseline", "classical windowed-argmax depth");
  b->add_option("stack", base.stack, "stack directory or list file")->required();
  b->add_option("--preset", base.preset, "mlap1 (9x9) or mlap2 (41x41 + 11x11 median)");
  b->add_option("--contrast-window", base.contrast_window)->capture_default_str();
  b->add_option("--median-window", base.median_window, "0 disables")->capture_default_str();
  b->add_option("-o,--out", base.out, "output directory")->required();

  EvaluateArgs ev;
  auto* e = app.add_subcommand("evaluate", "score a depth estimate");
  e->add_option("--est", ev.est, "estimate PFM")->required();
  e->add_option("--gt", ev.gt, "ground-truth PFM")->required();
  e->add_option("--slices", ev.slices, "slice count for slice-unit RMSE")->capture_default_str();
  e->add_option("--shape", ev.shape, "label for the CSV row");
  e->add_option("--method", ev.method, "label for the CSV row");
  e->add_option("--params", ev.params, "label for the CSV row");

  DiagnoseArgs diag;
  auto* d = app.add_subcommand("diagnose", "long run with convergence series");
  d->add_option("stack", diag.stack, "stack directory or list file")->required();
  d->add_option("--alpha", diag.alpha)->capture_default_str();
  d->add_option("--iters", diag.iters)->capture_default_str();
  d->add_option("-o,--out", diag.out, "output directory")->required();

  std::string config_path;
  for (CLI::App* sub : {s, r, b, e, d})
    sub->add_option("--config", config_path, "flat key=value configuration file");

  // Config precedence: explicit flags > config file > built-in defaults.
  // Implemented by appending --key value pairs for config entries whose
  // flags are absent from the command line.
  std::vector<std::string> args(argv + 1, argv + argc);
  try {
    const auto inject = expand_config_args(args);
    args.insert(args.end(), inject.begin(), inject.end());
    std::reverse(args.begin(), args.end());  // CLI11 vector parse order
    app.parse(args);
  } catch (const CLI::CallForHelp& e2) {
    return app.exit(e2);
  } catch (const CLI::CallForVersion& e2) {
    return app.exit(e2);
  } catch (const CLI::ParseError& e2) {
    app.exit(e2);
    return 2;
  } catch (const dff::Error& ex) {
    std::cerr << "error: " << ex.what() << "\n";
    return 2;
  }

  if (threads > 0) dff::set_thread_count(threads);

  try {
    if (s->parsed()) return run_simulate(sim);
    if (r->parsed()) return run_reconstruct(rec);
    if (b->parsed()) return run_baseline(base);
    if (e->parsed()) return run_evaluate(ev);
    if (d->parsed()) return run_diagnose(diag);
  } catch (const dff::DivergenceDetected& ex) {
    std::cerr << "numeric failure: " << ex.what() << "\n";
    return 3;
  } catch (const dff::Error& ex) {
    std::cerr << "error: " << ex.what() << "\n";
    return 2;
  } catch (const std::exception& ex) {
    std::cerr << "unexpected error: " << ex.what() << "\n";
    return 1;
  }
  return 2;
}
