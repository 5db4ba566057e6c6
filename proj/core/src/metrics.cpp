#include "arstack/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <json.hpp>

#include "arstack/errors.hpp"
#include "arstack/io.hpp"

namespace arstack {

MatchResult match(std::span<const Detection> detections, const GroundTruth& truth,
                  double radius_px) {
  if (!(radius_px > 0.0)) throw InvalidArgument("match radius must be > 0");
  std::vector<bool> claimed(truth.targets.size(), false);
  MatchResult result;
  for (const auto& d : detections) {
    std::size_t best = truth.targets.size();
    double best_dist = std::numeric_limits<double>::infinity();
    for (std::size_t t = 0; t < truth.targets.size(); ++t) {
      if (claimed[t]) continue;
      const double dist =
          std::hypot(d.centroid_x - truth.targets[t].x, d.centroid_y - truth.targets[t].y);
      if (dist <= radius_px && dist < best_dist) {
        best = t;
        best_dist = dist;
      }
    }
    if (best < truth.targets.size()) {
      claimed[best] = true;
      ++result.hits;
    } else {
      ++result.false_alarms;
    }
  }
  return result;
}

ScoreReport score(std::span<const CaseCounts> cases) {
  ScoreReport report;
  report.total.layer_label = "total";
  for (const auto& c : cases) {
    if (c.known_targets == 0) {
      throw InvalidArgument("case '" + c.layer_label + "' has zero known targets");
    }
    if (!(c.area_km2 > 0.0)) throw InvalidArgument("case '" + c.layer_label + "' has no area");
    if (c.detected_targets > c.known_targets) {
      throw InvalidArgument("case '" + c.layer_label + "' detects more targets than are known");
    }
    ScoreRow row{c.layer_label,
                 c.known_targets,
                 c.detected_targets,
                 static_cast<double>(c.detected_targets) / static_cast<double>(c.known_targets),
                 c.area_km2,
                 c.false_alarms,
                 static_cast<double>(c.false_alarms) / c.area_km2};
    report.rows.push_back(row);
    report.total.known_targets += c.known_targets;
    report.total.detected_targets += c.detected_targets;
    report.total.false_alarms += c.false_alarms;
    report.total.area_km2 += c.area_km2;
  }
  if (report.rows.empty()) throw InvalidArgument("nothing to score: no cases of interest");
  report.total.pd = static_cast<double>(report.total.detected_targets) /
                    static_cast<double>(report.total.known_targets);
  report.total.far_per_km2 =
      static_cast<double>(report.total.false_alarms) / report.total.area_km2;
  return report;
}

void validate_truth(const ImageStack& stack, std::span<const GroundTruth> truths) {
  for (const auto& t : truths) {
    if (!stack.find_label(t.layer_label)) {
      throw InvalidData("ground truth names unknown layer '" + t.layer_label + "'");
    }
    for (const auto& p : t.targets) {
      if (p.x < 0.0 || p.y < 0.0 || p.x > static_cast<double>(stack.width() - 1) ||
          p.y > static_cast<double>(stack.height() - 1)) {
        throw InvalidData("ground truth target (" + format("%g, %g", p.x, p.y) + ") in layer '" +
                          t.layer_label + "' lies outside the raster");
      }
    }
  }
}

std::vector<CaseCounts> count_cases(const ImageStack& stack,
                                    std::span<const LayerDetections> layers,
                                    std::span<const GroundTruth> truths, double match_radius_px) {
  validate_truth(stack, truths);
  std::vector<CaseCounts> cases;
  for (const auto& truth : truths) {
    const auto it = std::find_if(layers.begin(), layers.end(), [&](const LayerDetections& l) {
      return l.label == truth.layer_label;
    });
    if (it == layers.end()) {
      throw InvalidArgument("no detections computed for layer '" + truth.layer_label + "'");
    }
    const auto m = match(it->detections, truth, match_radius_px);
    const auto idx = *stack.find_label(truth.layer_label);
    cases.push_back(CaseCounts{truth.layer_label, truth.targets.size(), m.hits, m.false_alarms,
                               stack.layer(idx).area_km2()});
  }
  return cases;
}

ScoreReport evaluate(const ImageStack& stack, const GroundEstimate& ground,
                     std::span<const GroundTruth> truths, const EvalParams& params,
                     unsigned threads) {
  validate_truth(stack, truths);
  const auto diffs = difference_images(stack, ground, threads);
  const auto layers = detect_stack(stack, diffs, params.detect, threads);
  const auto cases = count_cases(stack, layers, truths, params.match_radius_px);
  return score(cases);
}

RocCurve roc_sweep(const ImageStack& stack, const GroundEstimate& ground,
                   std::span<const GroundTruth> truths, std::span<const double> cs,
                   const EvalParams& params, unsigned threads) {
  if (cs.empty()) throw InvalidArgument("roc_sweep needs at least one detection constant");
  for (std::size_t i = 1; i < cs.size(); ++i) {
    if (!(cs[i] > cs[i - 1])) {
      throw InvalidArgument("detection constants must be strictly ascending");
    }
  }
  validate_truth(stack, truths);
  const auto diffs = difference_images(stack, ground, threads);

  RocCurve curve;
  for (double c : cs) {
    EvalParams p = params;
    p.detect.c = c;
    const auto layers = detect_stack(stack, diffs, p.detect, threads);
    const auto report = score(count_cases(stack, layers, truths, p.match_radius_px));
    curve.points.push_back(RocPoint{c, report.total.far_per_km2, report.total.pd});
  }
  return curve;
}

// ---------------------------------------------------------------- files

std::vector<GroundTruth> load_truth(const std::filesystem::path& path) {
  const auto rows = read_csv(path, {"layer_label", "x", "y"});
  std::vector<GroundTruth> truths;
  for (const auto& row : rows) {
    const TargetPosition pos{parse_double(row[1], "target x"), parse_double(row[2], "target y")};
    auto it = std::find_if(truths.begin(), truths.end(),
                           [&](const GroundTruth& t) { return t.layer_label == row[0]; });
    if (it == truths.end()) {
      truths.push_back(GroundTruth{row[0], {}});
      it = truths.end() - 1;
    }
    it->targets.push_back(pos);
  }
  return truths;
}

std::string truth_csv(std::span<const GroundTruth> truths) {
  std::string out = "layer_label,x,y\n";
  for (const auto& t : truths) {
    for (const auto& p : t.targets) out += format("%s,%.4f,%.4f\n", t.layer_label.c_str(), p.x, p.y);
  }
  return out;
}

namespace {

std::size_t parse_count(const std::string& text, const std::string& what) {
  const double v = parse_double(text, what);
  if (v < 0.0 || v != std::floor(v)) throw InvalidData(what + " must be a non-negative integer");
  return static_cast<std::size_t>(v);
}

}  // namespace

std::vector<CaseCounts> load_case_counts(const std::filesystem::path& path) {
  const auto rows = read_csv(
      path, {"layer_label", "known_targets", "detected_targets", "false_alarms", "area_km2"});
  std::vector<CaseCounts> cases;
  for (const auto& row : rows) {
    cases.push_back(CaseCounts{row[0], parse_count(row[1], "known_targets"),
                               parse_count(row[2], "detected_targets"),
                               parse_count(row[3], "false_alarms"),
                               parse_double(row[4], "area_km2")});
  }
  return cases;
}

std::string score_csv(const ScoreReport& report) {
  std::string out =
      "layer_label,known_targets,detected_targets,pd,area_km2,false_alarms,far_per_km2\n";
  auto line = [&](const ScoreRow& r) {
    out += format("%s,%zu,%zu,%.4f,%.4f,%zu,%.4f\n", r.layer_label.c_str(), r.known_targets,
                  r.detected_targets, r.pd, r.area_km2, r.false_alarms, r.far_per_km2);
  };
  for (const auto& r : report.rows) line(r);
  line(report.total);
  return out;
}

std::string score_json(const ScoreReport& report) {
  auto to_json = [](const ScoreRow& r) {
    return nlohmann::json{{"layer_label", r.layer_label},
                          {"known_targets", r.known_targets},
                          {"detected_targets", r.detected_targets},
                          {"pd", r.pd},
                          {"area_km2", r.area_km2},
                          {"false_alarms", r.false_alarms},
                          {"far_per_km2", r.far_per_km2}};
  };
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& r : report.rows) rows.push_back(to_json(r));
  return nlohmann::json{{"rows", rows}, {"total", to_json(report.total)}}.dump(2) + "\n";
}

std::string score_table(const ScoreReport& report) {
  std::string out = format("%-16s %6s %9s %6s %10s %13s %8s\n", "case", "known", "detected",
                           "Pd", "area[km2]", "false_alarms", "FAR");
  auto line = [&](const ScoreRow& r) {
    out += format("%-16s %6zu %9zu %6.2f %10.2f %13zu %8.2f\n", r.layer_label.c_str(),
                  r.known_targets, r.detected_targets, r.pd, r.area_km2, r.false_alarms,
                  r.far_per_km2);
  };
  for (const auto& r : report.rows) line(r);
  line(report.total);
  return out;
}

std::string roc_csv(const RocCurve& curve) {
  std::string out = "c,far_per_km2,pd\n";
  for (const auto& p : curve.points) out += format("%.4f,%.4f,%.4f\n", p.c, p.far_per_km2, p.pd);
  return out;
}

}  // namespace arstack
