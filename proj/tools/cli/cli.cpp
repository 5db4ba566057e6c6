#include "cli/cli.hpp"

#include <algorithm>
#include <cctype>
#include <cstdlib>
#include <ostream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "arstack/detect.hpp"
#include "arstack/errors.hpp"
#include "arstack/estimate.hpp"
#include "arstack/io.hpp"
#include "arstack/metrics.hpp"
#include "arstack/stack.hpp"
#include "arstack/synth.hpp"

namespace arstack::cli {

namespace fs = std::filesystem;

namespace {

unsigned effective_threads(unsigned requested) {
  if (requested > 0) return requested;
  if (const char* env = std::getenv("ARSTACK_THREADS"); env != nullptr && *env != '\0') {
    char* end = nullptr;
    const unsigned long v = std::strtoul(env, &end, 10);
    if (*end != '\0' || v == 0) {
      throw InvalidArgument("ARSTACK_THREADS must be a positive integer, got '" +
                            std::string(env) + "'");
    }
    return static_cast<unsigned>(v);
  }
  return 0;
}

std::string file_safe(const std::string& label) {
  std::string out = label;
  for (auto& ch : out) {
    if (!std::isalnum(static_cast<unsigned char>(ch)) && ch != '-' && ch != '_' && ch != '.') {
      ch = '_';
    }
  }
  return out;
}

EvalParams eval_params(const RunConfig& cfg) {
  EvalParams p;
  p.detect.c = cfg.c_values.front();
  p.detect.se_radius = cfg.se_radius;
  p.detect.min_cluster_size = cfg.min_cluster_size;
  p.detect.mode = cfg.two_sided ? ThresholdMode::two_sided : ThresholdMode::one_sided;
  p.detect.pooled_stats = cfg.pooled_stats;
  p.match_radius_px = cfg.match_radius_px;
  return p;
}

void require(const fs::path& path, const char* flag) {
  if (path.empty()) throw InvalidArgument(std::string("missing required option ") + flag);
}

ImageStack load_required_stack(const RunConfig& cfg) {
  require(cfg.stack_manifest, "--stack");
  return load_stack(cfg.stack_manifest);
}

/// Either reads a forecast raster written by `estimate` or fits the stack.
GroundEstimate ground_for(const RunConfig& cfg, const ImageStack& stack, unsigned threads) {
  if (cfg.forecast_path.empty()) return estimate_ground(stack, cfg.p, cfg.h, threads);
  GroundEstimate g;
  try {
    g.forecast = read_raw_raster(cfg.forecast_path, stack.width(), stack.height(),
                                 stack.pixel_area_m2());
  } catch (const Error& e) {
    throw LoadError(std::string("forecast: ") + e.what());
  }
  g.order = cfg.p;
  g.horizon = cfg.h;
  return g;
}

void run_estimate(const RunConfig& cfg, unsigned threads, std::ostream& out) {
  const auto stack = load_required_stack(cfg);
  const auto ground = estimate_ground(stack, cfg.p, cfg.h, threads);
  write_raw_raster(cfg.out_dir / "forecast.raw", ground.forecast);
  write_raw_raster(cfg.out_dir / "coef.raw", ground.coef_magnitude);
  const nlohmann::json meta = {{"width", stack.width()},
                               {"height", stack.height()},
                               {"pixel_area_m2", stack.pixel_area_m2()},
                               {"order", ground.order},
                               {"horizon", ground.horizon},
                               {"layers", stack.labels()},
                               {"forecast", "forecast.raw"},
                               {"coef_magnitude", "coef.raw"}};
  write_file_atomic(cfg.out_dir / "ground.json", meta.dump(2) + "\n");
  out << "estimate: " << stack.size() << " layers, " << stack.width() << "x" << stack.height()
      << ", AR(" << cfg.p << ") h=" << cfg.h << " -> " << (cfg.out_dir / "forecast.raw").string()
      << "\n";
}

void run_detect(const RunConfig& cfg, unsigned threads, std::ostream& out) {
  const auto stack = load_required_stack(cfg);
  const auto ground = ground_for(cfg, stack, threads);
  const auto params = eval_params(cfg);
  const auto diffs = difference_images(stack, ground, threads);
  const auto layers = detect_stack(stack, diffs, params.detect, threads);

  write_file_atomic(cfg.out_dir / "detections.csv", detections_csv(layers));
  std::string thresholds = "layer_label,c,mu_hat,sigma_hat,lambda\n";
  for (std::size_t i = 0; i < layers.size(); ++i) {
    const auto& l = layers[i];
    const auto& m = l.mask.bytes();
    write_file_atomic(cfg.out_dir / ("mask_" + file_safe(l.label) + ".u8"),
                      std::string_view(reinterpret_cast<const char*>(m.data()), m.size()));
    thresholds += format("%s,%.4f,%.6f,%.6f,%.6f\n", l.label.c_str(), l.spec.c, l.spec.mu_hat,
                         l.spec.sigma_hat, l.spec.lambda);
    if (cfg.emit_histogram) {
      const PixelMoments moments{l.spec.mu_hat, l.spec.sigma_hat, diffs[i].size()};
      write_file_atomic(cfg.out_dir / ("hist_" + file_safe(l.label) + ".csv"),
                        histogram_csv(difference_histogram(diffs[i], moments)));
    }
    out << "detect: " << l.label << ": " << l.detections.size() << " detections (lambda="
        << format("%.4f", l.spec.lambda) << ")\n";
  }
  write_file_atomic(cfg.out_dir / "thresholds.csv", thresholds);
}

void write_score(const RunConfig& cfg, const ScoreReport& report, std::ostream& out) {
  write_file_atomic(cfg.out_dir / "score.csv", score_csv(report));
  write_file_atomic(cfg.out_dir / "score.json", score_json(report));
  const std::string table = score_table(report);
  write_file_atomic(cfg.out_dir / "score.txt", table);
  out << table;
}

void run_score(const RunConfig& cfg, unsigned threads, std::ostream& out) {
  if (!cfg.rows_path.empty()) {
    write_score(cfg, score(load_case_counts(cfg.rows_path)), out);
    return;
  }
  const auto stack = load_required_stack(cfg);
  require(cfg.truth_path, "--truth");
  const auto truths = load_truth(cfg.truth_path);
  const auto params = eval_params(cfg);
  if (!cfg.detections_path.empty()) {
    auto layers = load_detections(cfg.detections_path);
    // Layers without any detection do not appear in the CSV.
    for (const auto& t : truths) {
      const bool present = std::any_of(layers.begin(), layers.end(),
                                       [&](const auto& l) { return l.label == t.layer_label; });
      if (!present) layers.push_back(LayerDetections{t.layer_label, {}, {}, {}});
    }
    write_score(cfg, score(count_cases(stack, layers, truths, params.match_radius_px)), out);
    return;
  }
  const auto ground = ground_for(cfg, stack, threads);
  write_score(cfg, evaluate(stack, ground, truths, params, threads), out);
}

void run_sweep(const RunConfig& cfg, unsigned threads, std::ostream& out) {
  const auto stack = load_required_stack(cfg);
  require(cfg.truth_path, "--truth");
  const auto truths = load_truth(cfg.truth_path);
  const auto ground = ground_for(cfg, stack, threads);
  const auto curve = roc_sweep(stack, ground, truths, cfg.c_values, eval_params(cfg), threads);
  const std::string csv = roc_csv(curve);
  write_file_atomic(cfg.out_dir / "roc.csv", csv);
  out << csv;
}

void run_synth(const RunConfig& cfg, unsigned threads, std::ostream& out) {
  SynthSpec spec = cfg.synth_spec.empty() ? reference_scene_spec() : load_synth_spec(cfg.synth_spec);
  if (cfg.seed) spec.seed = *cfg.seed;
  const auto scene = generate(spec, threads);
  save_stack(cfg.out_dir / "stack.json", scene.stack);
  write_file_atomic(cfg.out_dir / "truth.csv", truth_csv(scene.truths));
  out << "synth: " << scene.stack.size() << " layers, " << scene.stack.width() << "x"
      << scene.stack.height() << ", " << spec.targets.size() << " targets -> "
      << (cfg.out_dir / "stack.json").string() << "\n";
}

void add_common(CLI::App* sub, RunConfig& cfg) {
  sub->add_option("--threads", cfg.threads,
                  "Worker threads (default: $ARSTACK_THREADS or hardware concurrency)");
  sub->add_option("--out-dir", cfg.out_dir, "Directory for all outputs");
}

void add_model(CLI::App* sub, RunConfig& cfg) {
  sub->add_option("--stack", cfg.stack_manifest, "Stack manifest (JSON)");
  sub->add_option("--p,--order", cfg.p, "AR model order")->check(CLI::PositiveNumber);
  sub->add_option("--h,--horizon", cfg.h, "Forecast horizon in steps")->check(CLI::PositiveNumber);
}

void add_detection(CLI::App* sub, RunConfig& cfg) {
  sub->add_option("--forecast", cfg.forecast_path, "Reuse forecast.raw from `estimate`");
  sub->add_option("--c", cfg.c_values, "Detection constant(s), comma separated")
      ->delimiter(',');
  sub->add_option("--se-radius", cfg.se_radius, "Structuring element radius")
      ->check(CLI::NonNegativeNumber);
  sub->add_option("--min-cluster-size", cfg.min_cluster_size, "Smallest kept cluster (pixels)");
  sub->add_option("--match-radius-px", cfg.match_radius_px, "Detection-to-target radius")
      ->check(CLI::PositiveNumber);
  sub->add_flag("--two-sided", cfg.two_sided, "Flag |diff - mu| >= c sigma instead of diff >= lambda");
  sub->add_flag("--pooled-stats", cfg.pooled_stats, "Pool mu/sigma over all difference images");
}

}  // namespace

std::optional<RunConfig> parse_args(int argc, const char* const* argv, std::ostream& out,
                                    std::ostream& err, int& exit_code) {
  RunConfig cfg;
  CLI::App app{"Ground-scene estimation and change detection for co-registered image stacks",
               "arstack"};
  // -h is not a help alias: --h is the forecast horizon.
  app.set_help_flag("--help", "Print this help message and exit");
  app.require_subcommand(1);

  auto* estimate = app.add_subcommand("estimate", "Per-pixel AR forecast -> forecast.raw, coef.raw");
  add_model(estimate, cfg);
  add_common(estimate, cfg);

  auto* detect = app.add_subcommand("detect", "Threshold, open and cluster every difference image");
  add_model(detect, cfg);
  add_detection(detect, cfg);
  detect->add_flag("--emit-histogram", cfg.emit_histogram, "Write a 256-bin histogram per layer");
  add_common(detect, cfg);

  auto* score_cmd = app.add_subcommand("score", "Pd / FAR report against ground truth");
  add_model(score_cmd, cfg);
  add_detection(score_cmd, cfg);
  score_cmd->add_option("--truth", cfg.truth_path, "Ground truth CSV (layer_label,x,y)");
  score_cmd->add_option("--detections", cfg.detections_path, "Reuse detections.csv from `detect`");
  score_cmd->add_option("--rows", cfg.rows_path,
                        "Score precomputed counts (layer_label,known_targets,detected_targets,"
                        "false_alarms,area_km2)");
  add_common(score_cmd, cfg);

  auto* sweep = app.add_subcommand("sweep", "ROC sweep over detection constants -> roc.csv");
  add_model(sweep, cfg);
  add_detection(sweep, cfg);
  sweep->add_option("--truth", cfg.truth_path, "Ground truth CSV (layer_label,x,y)");
  add_common(sweep, cfg);

  auto* synth = app.add_subcommand("synth", "Generate a synthetic stack, manifest and truth");
  synth->add_option("--spec", cfg.synth_spec, "Synthetic scene spec (JSON); default reference scene");
  synth->add_option("--seed", cfg.seed, "Override the spec seed");
  add_common(synth, cfg);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    exit_code = app.exit(e, out, err);
    return std::nullopt;
  }

  if (estimate->parsed()) cfg.command = Command::estimate;
  if (detect->parsed()) cfg.command = Command::detect;
  if (score_cmd->parsed()) cfg.command = Command::score;
  if (sweep->parsed()) cfg.command = Command::sweep;
  if (synth->parsed()) cfg.command = Command::synth;
  exit_code = 0;
  return cfg;
}

void run(const RunConfig& cfg, std::ostream& out) {
  if (cfg.c_values.empty()) throw InvalidArgument("--c needs at least one value");
  const unsigned threads = effective_threads(cfg.threads);
  switch (cfg.command) {
    case Command::estimate: run_estimate(cfg, threads, out); break;
    case Command::detect: run_detect(cfg, threads, out); break;
    case Command::score: run_score(cfg, threads, out); break;
    case Command::sweep: run_sweep(cfg, threads, out); break;
    case Command::synth: run_synth(cfg, threads, out); break;
  }
}

int main_entry(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  int code = 0;
  const auto cfg = parse_args(argc, argv, out, err, code);
  if (!cfg) return code;
  try {
    run(*cfg, out);
  } catch (const Error& e) {
    std::string msg = e.what();
    for (auto& ch : msg) {
      if (ch == '\n') ch = ' ';
    }
    err << "arstack: error: " << e.kind() << ": " << msg << "\n";
    return 1;
  } catch (const std::filesystem::filesystem_error& e) {
    err << "arstack: error: io: " << e.what() << "\n";
    return 1;
  }
  return 0;
}

}  // namespace arstack::cli
