#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace arstack::cli {

enum class Command { estimate, detect, score, sweep, synth };

struct RunConfig {
  Command command = Command::estimate;
  std::filesystem::path stack_manifest;
  std::filesystem::path truth_path;
  int p = 1;
  int h = 1;
  std::vector<double> c_values{4.5, 5.0, 5.5, 6.0, 6.5};
  int se_radius = 1;
  std::size_t min_cluster_size = 2;
  double match_radius_px = 10.0;
  bool two_sided = false;
  bool pooled_stats = false;
  unsigned threads = 0;  // 0: ARSTACK_THREADS, else hardware concurrency
  std::filesystem::path out_dir = ".";

  // Command-specific inputs.
  std::filesystem::path synth_spec;       // synth; empty selects the reference scene
  std::optional<std::uint64_t> seed;      // synth; overrides the spec's seed
  std::filesystem::path forecast_path;    // detect/score/sweep: reuse `estimate` output
  std::filesystem::path detections_path;  // score: reuse `detect` output
  std::filesystem::path rows_path;        // score: per-case count fixture
  bool emit_histogram = false;            // detect
};

/// Parses argv into a RunConfig.  Returns std::nullopt after printing help
/// or a usage error; `exit_code` receives the status to return.
std::optional<RunConfig> parse_args(int argc, const char* const* argv, std::ostream& out,
                                    std::ostream& err, int& exit_code);

/// Executes one command.  Errors propagate as arstack::Error.
void run(const RunConfig& config, std::ostream& out);

/// parse_args + run; library errors are reported as one line on `err`:
///   arstack: error: <kind>: <message>
int main_entry(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace arstack::cli
