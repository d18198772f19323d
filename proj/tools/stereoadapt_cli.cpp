// Copyright 2026 The stereoadapt Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// stereoadapt command-line driver.

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <random>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"
#include "stereoadapt/color.hpp"
#include "stereoadapt/costvolume.hpp"
#include "stereoadapt/dataio.hpp"
#include "stereoadapt/disparity.hpp"
#include "stereoadapt/metrics.hpp"
#include "stereoadapt/parallel.hpp"
#include "stereoadapt/pipeline.hpp"
#include "stereoadapt/reconstruction.hpp"
#include "stereoadapt/report.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace stereoadapt;

namespace {

// Everything a run was configured with; written next to the outputs.
struct RunConfig {
  std::string command;
  std::uint64_t seed = 0;
  unsigned threads = 0;
  std::string out_dir;
  std::string format = "csv";

  // stereo / cost-hist
  std::string mode = "wta";
  double beta = 1.0;
  int agg_radius = 2;
  int d_max = 0;  // 0: min(128, feature width)
  std::string cost_norm = "on";
  int feat_stride = 2;
  int census_window = 3;

  // transfer
  std::string space = "log-lab";
  double gamma = 0.95;
  std::string layout = "flat-pairs";

  // losses / gradcheck
  LossWeights weights;
  std::size_t probes = 100;
  double step = 1e-3;
  double tolerance = 1e-3;

  // eval
  double threshold = 3.0;
  double focal_baseline = EvalConfig{}.focal_times_baseline;

  json to_json() const {
    return {
        {"command", command},
        {"seed", seed},
        {"threads", threads},
        {"out_dir", out_dir},
        {"format", format},
        {"stereo",
         {{"mode", mode},
          {"beta", beta},
          {"agg_radius", agg_radius},
          {"d_max", d_max},
          {"cost_norm", cost_norm},
          {"feat_stride", feat_stride},
          {"census_window", census_window}}},
        {"transfer", {{"space", space}, {"gamma", gamma}, {"layout", layout}}},
        {"losses",
         {{"w_s_occ", weights.w_s_occ},
          {"w_t_ar", weights.w_t_ar},
          {"w_t_occ", weights.w_t_occ},
          {"w_t_sm", weights.w_t_sm},
          {"alpha", weights.alpha}}},
        {"gradcheck", {{"probes", probes}, {"step", step}, {"tolerance", tolerance}}},
        {"eval", {{"threshold", threshold}, {"focal_times_baseline", focal_baseline}}},
    };
  }

  PipelineConfig pipeline(int feature_width) const {
    PipelineConfig p;
    p.features.downsample = feat_stride;
    p.features.census_window = census_window;
    p.norm = parse_cost_norm(cost_norm);
    p.regression.mode = parse_regression_mode(mode);
    p.regression.beta = beta;
    p.regression.aggregation_radius = agg_radius;
    p.d_max = d_max > 0 ? d_max : std::min(128, feature_width);
    return p;
  }
};

void make_parent(const fs::path& path) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
}

void write_text(const fs::path& path, const std::string& text) {
  make_parent(path);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path.string());
  out << text;
  if (!out) throw Error("failed writing " + path.string());
}

void save_run_config(const RunConfig& rc) {
  if (!rc.out_dir.empty()) write_text(fs::path(rc.out_dir) / "run_config.json", rc.to_json().dump(2) + "\n");
}

void check_pair(const Image& l, const Image& r) {
  if (l.width() != r.width() || l.height() != r.height()) throw Error("left and right views differ in size");
}

void write_visualization(const fs::path& path, const DisparityMap& d) {
  double hi = 0.0;
  for (int y = 0; y < d.height(); ++y)
    for (int x = 0; x < d.width(); ++x)
      if (d.valid(y, x)) hi = std::max(hi, d.at(y, x));
  Planar g(1, d.height(), d.width());
  for (int y = 0; y < d.height(); ++y)
    for (int x = 0; x < d.width(); ++x)
      if (d.valid(y, x) && hi > 0.0) g.at(0, y, x) = std::clamp(d.at(y, x) / hi, 0.0, 1.0);
  write_gray(path, g);
}

OcclusionMask load_occlusion(const std::string& path, int width, int height) {
  if (path.empty()) return OcclusionMask(width, height, OcclusionKind::kSoft, 0.0);
  OcclusionMask occ = pfm_to_occlusion(read_pfm(path));
  if (occ.width() != width || occ.height() != height) throw Error("occlusion map differs in size");
  return occ;
}

// ---------------------------------------------------------------------------

struct TransferArgs {
  std::string source_dir, target_dir, target_layout;
};

int run_transfer(const RunConfig& rc, const TransferArgs& a) {
  const Layout src_layout = parse_layout(rc.layout);
  const Layout tgt_layout = a.target_layout.empty() ? src_layout : parse_layout(a.target_layout);
  const PairListing src = list_pairs({src_layout, a.source_dir});
  const PairListing tgt = list_pairs({tgt_layout, a.target_dir});
  for (const auto& w : src.warnings) std::cerr << "warning: " << w << '\n';
  for (const auto& w : tgt.warnings) std::cerr << "warning: " << w << '\n';
  if (src.pairs.empty()) throw Error("no source pairs in " + a.source_dir);
  if (tgt.pairs.empty()) throw Error("no target pairs in " + a.target_dir);

  const auto src_order = shuffled_order(src.pairs.size(), rc.seed);
  const auto tgt_order = shuffled_order(tgt.pairs.size(), rc.seed);
  ProgressiveColorTransfer pct(rc.gamma, parse_color_space(rc.space));
  const fs::path out_dir(rc.out_dir);

  std::string stats = "iteration,source,target,mu_0,mu_1,mu_2,sigma_0,sigma_1,sigma_2\n";
  for (std::size_t i = 0; i < src_order.size(); ++i) {
    const StereoPair& sp = src.pairs[src_order[i]];
    const StereoPair& tp = tgt.pairs[tgt_order[i % tgt_order.size()]];
    const Image left = read_image(sp.left);
    const Image right = read_image(sp.right);
    check_pair(left, right);
    const TransferredPair out = pct.step(left, right, read_image(tp.left));
    const fs::path out_left = out_dir / sp.relative_left;
    const fs::path out_right = out_dir / fs::relative(sp.right, a.source_dir);
    make_parent(out_left);
    make_parent(out_right);
    write_image(out_left, out.left);
    write_image(out_right, out.right);

    const TransferState& st = pct.state();
    stats += std::to_string(i) + ',' + sp.relative_left.generic_string() + ',' + tp.relative_left.generic_string();
    for (double m : st.running_mean) stats += ',' + format_number(m);
    for (double s : st.running_std) stats += ',' + format_number(s);
    stats += '\n';
  }
  write_text(out_dir / "transfer_stats.csv", stats);
  std::cout << "pairs=" << src_order.size() << " space=" << rc.space << " gamma=" << format_number(rc.gamma)
            << " skipped=" << src.skipped << '\n';
  save_run_config(rc);
  return 0;
}

// ---------------------------------------------------------------------------

struct StereoArgs {
  std::string left, right, out, vis, dataset;
};

DisparityMap stereo_one(const RunConfig& rc, const Image& left, const Image& right, const std::string& name) {
  check_pair(left, right);
  const PipelineConfig cfg = rc.pipeline(left.width() / std::max(rc.feat_stride, 1));
  const auto t0 = std::chrono::steady_clock::now();
  PipelineResult res = estimate_disparity(left, right, cfg);
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  std::cout << "pair=" << name << " cost_norm=" << cost_norm_name(cfg.norm) << " mode=" << to_string(cfg.regression.mode)
            << " d_max=" << cfg.d_max << " seconds=" << format_number(secs) << '\n';
  return std::move(res.disparity);
}

int run_stereo(const RunConfig& rc, const StereoArgs& a) {
  if (!a.dataset.empty()) {
    if (rc.out_dir.empty()) throw Error("--dataset requires --out-dir");
    const PairListing listing = list_pairs({parse_layout(rc.layout), a.dataset});
    for (const auto& w : listing.warnings) std::cerr << "warning: " << w << '\n';
    for (const StereoPair& p : listing.pairs) {
      const DisparityMap d = stereo_one(rc, read_image(p.left), read_image(p.right), p.relative_left.generic_string());
      fs::path rel = p.relative_left;
      rel.replace_extension(".pfm");
      const fs::path out = fs::path(rc.out_dir) / rel;
      make_parent(out);
      write_pfm_disparity(out, d);
      if (!a.vis.empty()) {
        rel.replace_extension(".png");
        const fs::path vis = fs::path(rc.out_dir) / "vis" / rel;
        make_parent(vis);
        write_visualization(vis, d);
      }
    }
    save_run_config(rc);
    return 0;
  }
  if (a.left.empty() || a.right.empty() || a.out.empty()) throw Error("need --left, --right and --out, or --dataset");
  const DisparityMap d = stereo_one(rc, read_image(a.left), read_image(a.right), fs::path(a.left).filename().string());
  make_parent(a.out);
  write_disparity(a.out, d);
  if (!a.vis.empty()) {
    make_parent(a.vis);
    write_visualization(a.vis, d);
  }
  save_run_config(rc);
  return 0;
}

// ---------------------------------------------------------------------------

struct EvalArgs {
  std::string pred, gt, sem;
};

int run_eval(const RunConfig& rc, const EvalArgs& a) {
  EvalConfig cfg;
  cfg.pixel_threshold = rc.threshold;
  cfg.focal_times_baseline = rc.focal_baseline;
  const DisparityMap pred = read_disparity(a.pred);
  const DisparityMap gt = read_disparity(a.gt);
  std::optional<LabelMap> labels;
  if (!a.sem.empty()) labels = read_label_png(a.sem);
  const MetricReport r = evaluate(pred, gt, labels ? &*labels : nullptr, cfg);

  if (rc.out_dir.empty()) {
    std::cout << (rc.format == "json" ? metrics_json(r) : metrics_csv(r));
    return 0;
  }
  const fs::path out(rc.out_dir);
  if (rc.format == "json") {
    write_text(out / "metrics.json", metrics_json(r));
  } else {
    write_text(out / "metrics.csv", metrics_csv(r));
    write_text(out / "ard.csv", ard_csv(r.ard));
    write_text(out / "mr.csv", mr_csv(r.mr_per_class));
  }
  std::cout << metrics_csv(r);
  save_run_config(rc);
  return 0;
}

// ---------------------------------------------------------------------------

struct PairArgs {
  std::string left, right, out;
};

int run_cost_hist(const RunConfig& rc, const PairArgs& a) {
  const Image left = read_image(a.left);
  const Image right = read_image(a.right);
  check_pair(left, right);
  const PipelineConfig cfg = rc.pipeline(left.width() / std::max(rc.feat_stride, 1));
  const Histogram h = cost_histogram(build_cost_volume(left, right, cfg));
  const std::string text = rc.format == "json" ? histogram_json(h) : histogram_csv(h);
  if (a.out.empty()) {
    std::cout << text;
  } else {
    write_text(a.out, text);
  }
  save_run_config(rc);
  return 0;
}

// ---------------------------------------------------------------------------

struct LossArgs {
  std::string left, right, disp, occ, gt, json_out;
};

int run_losses(const RunConfig& rc, const LossArgs& a) {
  rc.weights.validate();
  const Image left = read_image(a.left);
  const Image right = read_image(a.right);
  check_pair(left, right);
  const DisparityMap disp = read_disparity(a.disp);
  if (disp.width() != left.width() || disp.height() != left.height()) throw Error("disparity differs in size from images");
  const OcclusionMask occ = load_occlusion(a.occ, left.width(), left.height());

  LossParts parts;
  if (!a.gt.empty()) {
    const DisparityMap gt = read_disparity(a.gt);
    parts.l_s_main = smooth_l1_loss(disp, gt);
    parts.l_s_occ = bce_loss(occ, occlusion_oracle(gt));
  }
  const WarpResult warp = warp_right_to_left(right, disp);
  parts.l_t_ar = reconstruction_loss(left, warp.warped, occ, warp.valid, rc.weights.alpha);
  parts.l_t_occ = occlusion_regularizer(occ);
  parts.l_t_sm = smoothness_loss(disp, left);
  const LossBreakdown b = total_loss(parts, rc.weights);
  std::cout << loss_lines(b);
  if (!a.json_out.empty()) write_text(a.json_out, loss_json(b));
  save_run_config(rc);
  return 0;
}

// ---------------------------------------------------------------------------

struct GradArgs {
  std::string left, right, disp, occ;
  int width = 96, height = 64, shift = 6;
};

int run_gradcheck(const RunConfig& rc, const GradArgs& a) {
  Image left, right;
  DisparityMap disp;
  OcclusionMask occ;
  if (a.left.empty()) {
    const SyntheticPair s = synth_rds(a.width, a.height, a.shift, std::nullopt, rc.seed);
    left = s.left;
    right = s.right;
    // Integer disparities sit on bilinear cell boundaries; move them inside.
    std::mt19937_64 rng(rc.seed);
    std::uniform_real_distribution<double> frac(0.1, 0.9);
    disp = s.disparity;
    for (int y = 0; y < disp.height(); ++y)
      for (int x = 0; x < disp.width(); ++x) disp.at(y, x) += frac(rng);
    occ = OcclusionMask(left.width(), left.height(), OcclusionKind::kSoft);
    for (int y = 0; y < occ.height(); ++y)
      for (int x = 0; x < occ.width(); ++x) occ.at(y, x) = s.occlusion.at(y, x);
  } else {
    left = read_image(a.left);
    right = read_image(a.right);
    check_pair(left, right);
    disp = read_disparity(a.disp);
    occ = load_occlusion(a.occ, left.width(), left.height());
  }
  const GradCheckResult r =
      check_disparity_gradient(left, right, disp, occ, rc.weights.alpha, rc.probes, rc.step, rc.seed);
  std::cout << "probes=" << r.probes << "\nmax_rel_error=" << format_number(r.max_rel_error)
            << "\nmean_rel_error=" << format_number(r.mean_rel_error) << '\n';
  save_run_config(rc);
  if (r.probes == 0) throw Error("no smooth probe points found");
  if (r.max_rel_error > rc.tolerance) {
    throw Error("max_rel_error " + format_number(r.max_rel_error) + " exceeds tolerance " + format_number(rc.tolerance));
  }
  return 0;
}

// ---------------------------------------------------------------------------

struct SynthArgs {
  int width = 320, height = 240, shift = 10;
};

int run_synth(const RunConfig& rc, const SynthArgs& a) {
  if (rc.out_dir.empty()) throw Error("--out-dir is required");
  const SyntheticPair s = synth_rds(a.width, a.height, a.shift, std::nullopt, rc.seed);
  const fs::path out(rc.out_dir);
  fs::create_directories(out);
  write_image(out / "left.png", s.left);
  write_image(out / "right.png", s.right);
  write_pfm_disparity(out / "disp.pfm", s.disparity);
  PfmRaster occ;
  occ.width = a.width;
  occ.height = a.height;
  for (double v : s.occlusion.values()) occ.data.push_back(static_cast<float>(v));
  write_pfm(out / "occ.pfm", occ);
  std::cout << "wrote " << (out / "left.png").string() << '\n';
  save_run_config(rc);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Stereo matching domain-adaptation toolkit"};
  app.require_subcommand(1);
  RunConfig rc;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--threads", rc.threads, "Worker thread cap (0 = all cores)");
    sub->add_option("--seed", rc.seed, "Random seed");
  };
  auto add_stereo_flags = [&](CLI::App* sub) {
    sub->add_option("--mode", rc.mode, "wta | soft-argmin")->check(CLI::IsMember({"wta", "soft-argmin"}));
    sub->add_option("--beta", rc.beta, "Soft-argmin temperature")->check(CLI::PositiveNumber);
    sub->add_option("--agg-radius", rc.agg_radius, "Box aggregation half-width")->check(CLI::NonNegativeNumber);
    sub->add_option("--d-max", rc.d_max, "Disparity candidates at feature resolution (0 = auto)");
    sub->add_option("--cost-norm", rc.cost_norm, "on | off | channel-only | pixel-only")
        ->check(CLI::IsMember({"on", "off", "channel-only", "pixel-only"}));
    sub->add_option("--feat-stride", rc.feat_stride, "Feature downsampling factor")->check(CLI::PositiveNumber);
    sub->add_option("--census-window", rc.census_window, "Odd census window size");
  };
  auto add_format = [&](CLI::App* sub) {
    sub->add_option("--format", rc.format, "csv | json")->check(CLI::IsMember({"csv", "json"}));
  };
  auto add_loss_weights = [&](CLI::App* sub) {
    sub->add_option("--alpha", rc.weights.alpha, "SSIM / L1 balance");
    sub->add_option("--w-s-occ", rc.weights.w_s_occ);
    sub->add_option("--w-t-ar", rc.weights.w_t_ar);
    sub->add_option("--w-t-occ", rc.weights.w_t_occ);
    sub->add_option("--w-t-sm", rc.weights.w_t_sm);
  };

  TransferArgs ta;
  auto* transfer = app.add_subcommand("transfer", "Progressive colour transfer of a source dataset");
  add_common(transfer);
  transfer->add_option("--source-dir", ta.source_dir)->required();
  transfer->add_option("--target-dir", ta.target_dir)->required();
  transfer->add_option("--out-dir", rc.out_dir)->required();
  transfer->add_option("--space", rc.space, "log-lab | cielab")->check(CLI::IsMember({"log-lab", "cielab"}));
  transfer->add_option("--gamma", rc.gamma, "Momentum in [0,1]")->check(CLI::Range(0.0, 1.0));
  transfer->add_option("--layout", rc.layout, "Source dataset layout");
  transfer->add_option("--target-layout", ta.target_layout, "Target dataset layout (default: --layout)");

  StereoArgs sa;
  auto* stereo = app.add_subcommand("stereo", "Disparity estimation");
  add_common(stereo);
  add_stereo_flags(stereo);
  stereo->add_option("--left", sa.left);
  stereo->add_option("--right", sa.right);
  stereo->add_option("--out", sa.out, "Output disparity (.pfm or .png)");
  stereo->add_option("--vis", sa.vis, "Visualisation PNG (dataset mode: any value enables it)");
  stereo->add_option("--dataset", sa.dataset, "Dataset root instead of a single pair");
  stereo->add_option("--layout", rc.layout);
  stereo->add_option("--out-dir", rc.out_dir);

  EvalArgs ea;
  auto* eval = app.add_subcommand("eval", "Evaluation metrics");
  add_common(eval);
  add_format(eval);
  eval->add_option("--pred", ea.pred)->required();
  eval->add_option("--gt", ea.gt)->required();
  eval->add_option("--sem", ea.sem, "8-bit class-id PNG");
  eval->add_option("--threshold", rc.threshold)->check(CLI::PositiveNumber);
  eval->add_option("--fB", rc.focal_baseline, "Focal length times baseline")->check(CLI::PositiveNumber);
  eval->add_option("--out-dir", rc.out_dir);

  PairArgs ha;
  auto* hist = app.add_subcommand("cost-hist", "Histogram of matching costs");
  add_common(hist);
  add_stereo_flags(hist);
  add_format(hist);
  hist->add_option("--left", ha.left)->required();
  hist->add_option("--right", ha.right)->required();
  hist->add_option("--out", ha.out);

  LossArgs la;
  auto* losses = app.add_subcommand("losses", "Loss breakdown for a pair and a disparity map");
  add_common(losses);
  add_loss_weights(losses);
  losses->add_option("--left", la.left)->required();
  losses->add_option("--right", la.right)->required();
  losses->add_option("--disp", la.disp)->required();
  losses->add_option("--occ", la.occ, "Soft occlusion PFM");
  losses->add_option("--gt", la.gt, "Ground-truth disparity for the supervised terms");
  losses->add_option("--json", la.json_out);

  GradArgs ga;
  auto* grad = app.add_subcommand("gradcheck", "Finite-difference check of the disparity gradient");
  add_common(grad);
  grad->add_option("--alpha", rc.weights.alpha);
  grad->add_option("--left", ga.left);
  grad->add_option("--right", ga.right);
  grad->add_option("--disp", ga.disp);
  grad->add_option("--occ", ga.occ);
  grad->add_option("--width", ga.width);
  grad->add_option("--height", ga.height);
  grad->add_option("--shift", ga.shift);
  grad->add_option("--probes", rc.probes);
  grad->add_option("--step", rc.step)->check(CLI::PositiveNumber);
  grad->add_option("--tolerance", rc.tolerance);

  SynthArgs ya;
  auto* synth = app.add_subcommand("synth", "Write a random-dot stereo pair with ground truth");
  add_common(synth);
  synth->add_option("--width", ya.width);
  synth->add_option("--height", ya.height);
  synth->add_option("--shift", ya.shift);
  synth->add_option("--out-dir", rc.out_dir);

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: usage: " << e.what() << '\n';
    return 2;
  }

  CLI::App* chosen = app.get_subcommands().front();
  rc.command = chosen->get_name();
  try {
    set_thread_limit(rc.threads);
    if (chosen == transfer) return run_transfer(rc, ta);
    if (chosen == stereo) return run_stereo(rc, sa);
    if (chosen == eval) return run_eval(rc, ea);
    if (chosen == hist) return run_cost_hist(rc, ha);
    if (chosen == losses) return run_losses(rc, la);
    if (chosen == grad) return run_gradcheck(rc, ga);
    if (chosen == synth) return run_synth(rc, ya);
  } catch (const std::exception& e) {
    std::cerr << "error: " << rc.command << ": " << e.what() << '\n';
    return 1;
  }
  return 1;
}
