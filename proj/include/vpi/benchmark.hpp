#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "vpi/backend.hpp"
#include "vpi/covr.hpp"
#include "vpi/episode.hpp"
#include "vpi/render.hpp"
#include "vpi/scene.hpp"

namespace vpi {

/// "oracle", "oracle:p=0.3,seed=7", "http" or "http:model=NAME".
struct BackendSpec {
  enum class Kind { kOracle, kHttp };

  Kind kind = Kind::kOracle;
  double noise = 0.0;
  std::uint64_t seed = 0;
  std::string model;

  std::string to_string() const;

  friend bool operator==(const BackendSpec&, const BackendSpec&) = default;
};

/// Throws kInvalidArgument on unknown kinds, keys or out-of-range noise.
BackendSpec parse_backend_spec(std::string_view text);

/// Backend answering requests about `episode`. HTTP backends ignore the
/// episode and read credentials from the environment.
std::shared_ptr<MllmBackend> make_backend(const BackendSpec& spec, const EpisodeRecord& episode);

struct BenchmarkSpec {
  std::vector<Method> methods{kAllMethods.begin(), kAllMethods.end()};
  std::vector<Task> tasks{Task::kBlock, Task::kPolygon, Task::kHousehold};
  /// Tasks absent from the map use default_preferences().
  std::map<Task, std::vector<PreferenceLabel>> preferences;
  /// 0 selects default_repeats() per task.
  int repeats = 0;
  std::uint64_t master_seed = 0;
  int n_images = 0;
  BackendSpec backend;
  bool render_images = true;
  /// JSONL response cache for live backends; empty disables it.
  std::string cache_path;
  /// 0 selects the hardware concurrency.
  int threads = 0;
  std::string out_dir = "results";
  std::string run_id = "run";

  std::vector<PreferenceLabel> preferences_for(Task task) const;
  int repeats_for(Task task) const;
};

/// Block: spatial patterns; Polygon: color and shape; Household: all nine.
std::vector<PreferenceLabel> default_preferences(Task task);
/// 10 for the simulated tasks, 6 for Household.
int default_repeats(Task task);

/// `key = value` lines; `#` starts a comment. Keys: methods, tasks,
/// preferences.<task>, repeats, master_seed, n_images, backend,
/// render_images, cache, threads, out_dir, run_id. Throws kParseError.
BenchmarkSpec parse_benchmark_config(const std::string& text);
BenchmarkSpec load_benchmark_config(const std::string& path);

/// One (method, task, preference) cell.
struct ReportRow {
  Method method = Method::kCovr;
  Task task = Task::kBlock;
  PreferenceLabel preference = PreferenceLabel::kGroupByColor;
  double sr_prd = 0.0;
  /// Absent for methods that produce no residuals.
  std::optional<double> sr_vrd_mean;
  std::optional<double> sr_vrd_std;
  int episodes = 0;
  std::uint64_t seed_first = 0;
  std::uint64_t seed_last = 0;
  std::string backend_id;
  double noise = 0.0;
  /// Non-empty when the cell failed; metric fields are then meaningless.
  std::string error;

  bool failed() const { return !error.empty(); }

  friend bool operator==(const ReportRow&, const ReportRow&) = default;
};

struct BenchmarkReport {
  std::uint64_t master_seed = 0;
  std::string backend_id;
  /// Sorted by task, preference, then method.
  std::vector<ReportRow> rows;

  bool any_failed() const;

  friend bool operator==(const BenchmarkReport&, const BenchmarkReport&) = default;
};

std::vector<Png> render_episode(const EpisodeRecord& episode, const RenderOptions& options = {});

/// Runs one method over an episode's images. MDPE reads the final scene and
/// ignores `backend`; the others require it. Responses that never parse
/// yield an empty preference with a note rather than an exception.
InferenceResult run_method(Method method, const EpisodeRecord& episode, std::span<const Png> images,
                           MllmBackend* backend, const CovrOptions& options);

/// Runs every method on every cell's episodes (seed = master_seed + repeat).
/// When `audit_dir` is set, writes <audit_dir>/<task>/<label>/<seed>/
/// episode.json and one <method>.json per method.
BenchmarkReport run_benchmark(const BenchmarkSpec& spec, const std::string& audit_dir = {});

/// One aligned table per task, methods in fixed order, "mean±std" cells.
std::string render_report_text(const BenchmarkReport& report);
std::string render_report_csv(const BenchmarkReport& report);
/// Inverse of render_report_csv. Throws kParseError.
BenchmarkReport parse_report_csv(const std::string& text);

/// Writes report.txt and report.csv into `dir`, creating it if needed.
void write_report(const BenchmarkReport& report, const std::string& dir);

}  // namespace vpi
