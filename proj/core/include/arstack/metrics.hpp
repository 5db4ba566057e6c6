#pragma once

#include <cstddef>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "arstack/detect.hpp"
#include "arstack/estimate.hpp"
#include "arstack/stack.hpp"

namespace arstack {

struct TargetPosition {
  double x = 0.0;
  double y = 0.0;
};

/// Known target positions (pixel coordinates) in one layer.
struct GroundTruth {
  std::string layer_label;
  std::vector<TargetPosition> targets;
};

struct MatchResult {
  std::size_t hits = 0;
  std::size_t false_alarms = 0;
};

/// Greedy one-to-one association.  Detections, in the order given, claim
/// the nearest unclaimed target within `radius_px` (ties go to the lower
/// target index).  Unclaimed detections are false alarms.
MatchResult match(std::span<const Detection> detections, const GroundTruth& truth,
                  double radius_px);

/// Raw counts for one case of interest.
struct CaseCounts {
  std::string layer_label;
  std::size_t known_targets = 0;
  std::size_t detected_targets = 0;
  std::size_t false_alarms = 0;
  double area_km2 = 0.0;
};

struct ScoreRow {
  std::string layer_label;
  std::size_t known_targets = 0;
  std::size_t detected_targets = 0;
  double pd = 0.0;
  double area_km2 = 0.0;
  std::size_t false_alarms = 0;
  double far_per_km2 = 0.0;
};

struct ScoreReport {
  std::vector<ScoreRow> rows;
  ScoreRow total;
};

/// Pd and FAR per case plus the pooled total.  Throws InvalidArgument on
/// zero known targets or non-positive area.
ScoreReport score(std::span<const CaseCounts> cases);

struct RocPoint {
  double c = 0.0;
  double far_per_km2 = 0.0;
  double pd = 0.0;
};

struct RocCurve {
  std::vector<RocPoint> points;  // ascending c
};

struct EvalParams {
  DetectParams detect;
  double match_radius_px = 10.0;
};

/// Case counts for every ground-truth layer from already computed detections.
std::vector<CaseCounts> count_cases(const ImageStack& stack,
                                    std::span<const LayerDetections> layers,
                                    std::span<const GroundTruth> truths, double match_radius_px);

/// Detect at params.detect.c and score the layers that have ground truth.
ScoreReport evaluate(const ImageStack& stack, const GroundEstimate& ground,
                     std::span<const GroundTruth> truths, const EvalParams& params,
                     unsigned threads = 0);

/// One aggregate (FAR, Pd) point per detection constant.  `cs` must be
/// non-empty and strictly ascending.
RocCurve roc_sweep(const ImageStack& stack, const GroundEstimate& ground,
                   std::span<const GroundTruth> truths, std::span<const double> cs,
                   const EvalParams& params, unsigned threads = 0);

/// CSV `layer_label,x,y`.  Rows of the same label are grouped in first-seen order.
std::vector<GroundTruth> load_truth(const std::filesystem::path& path);
std::string truth_csv(std::span<const GroundTruth> truths);

/// Checks every truth label exists in the stack and every target is in bounds.
void validate_truth(const ImageStack& stack, std::span<const GroundTruth> truths);

/// Case-count fixture CSV `layer_label,known_targets,detected_targets,false_alarms,area_km2`.
std::vector<CaseCounts> load_case_counts(const std::filesystem::path& path);

/// Machine-readable report, 4 decimals.  Last row is labelled `total`.
std::string score_csv(const ScoreReport& report);
std::string score_json(const ScoreReport& report);
/// Human-readable table, 2 decimals.
std::string score_table(const ScoreReport& report);
/// Header `c,far_per_km2,pd`.
std::string roc_csv(const RocCurve& curve);

}  // namespace arstack
