#include "vpi/benchmark.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>
#include <thread>

#include "vpi/baselines.hpp"
#include "vpi/catalog.hpp"
#include "vpi/error.hpp"
#include "vpi/http_backend.hpp"
#include "vpi/metrics.hpp"
#include "vpi/oracle_backend.hpp"
#include "vpi/scenegen.hpp"

namespace vpi {

namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> split_list(std::string_view s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == sep) {
      if (auto t = trim(cur); !t.empty()) out.push_back(t);
      cur.clear();
    } else {
      cur += c;
    }
  }
  if (auto t = trim(cur); !t.empty()) out.push_back(t);
  return out;
}

std::string fmt(const char* format, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, format, v);
  return buf;
}

double parse_double(const std::string& s, const char* what) {
  try {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used == s.size()) return v;
  } catch (const std::exception&) {
  }
  throw Error(ErrorKind::kParseError, std::string(what) + ": not a number: '" + s + "'");
}

std::uint64_t parse_u64(const std::string& s, const char* what) {
  try {
    std::size_t used = 0;
    const auto v = std::stoull(s, &used);
    if (used == s.size() && s.front() != '-') return v;
  } catch (const std::exception&) {
  }
  throw Error(ErrorKind::kParseError, std::string(what) + ": not an unsigned integer: '" + s + "'");
}

template <typename T>
void dedupe(std::vector<T>& v) {
  std::vector<T> out;
  for (const T& x : v) {
    if (std::find(out.begin(), out.end(), x) == out.end()) out.push_back(x);
  }
  v = std::move(out);
}

}  // namespace

std::string BackendSpec::to_string() const {
  if (kind == Kind::kHttp) return model.empty() ? "http" : "http:model=" + model;
  return "oracle:p=" + fmt("%g", noise) + ",seed=" + std::to_string(seed);
}

BackendSpec parse_backend_spec(std::string_view text) {
  const std::string t = trim(text);
  const auto colon = t.find(':');
  const std::string kind = t.substr(0, colon);
  const std::string rest = colon == std::string::npos ? "" : t.substr(colon + 1);
  BackendSpec spec;
  if (kind == "oracle") {
    spec.kind = BackendSpec::Kind::kOracle;
  } else if (kind == "http") {
    spec.kind = BackendSpec::Kind::kHttp;
  } else {
    throw Error(ErrorKind::kInvalidArgument, "unknown backend '" + kind + "'");
  }
  for (const auto& kv : split_list(rest, ',')) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos) {
      throw Error(ErrorKind::kInvalidArgument, "backend option needs key=value: '" + kv + "'");
    }
    const std::string key = trim(kv.substr(0, eq));
    const std::string value = trim(kv.substr(eq + 1));
    try {
      if (spec.kind == BackendSpec::Kind::kOracle && (key == "p" || key == "noise")) {
        spec.noise = parse_double(value, "noise");
      } else if (spec.kind == BackendSpec::Kind::kOracle && key == "seed") {
        spec.seed = parse_u64(value, "seed");
      } else if (spec.kind == BackendSpec::Kind::kHttp && key == "model") {
        spec.model = value;
      } else {
        throw Error(ErrorKind::kInvalidArgument, "unknown backend option '" + key + "'");
      }
    } catch (const Error& err) {
      if (err.kind() == ErrorKind::kInvalidArgument) throw;
      throw Error(ErrorKind::kInvalidArgument, err.what());
    }
  }
  if (!(spec.noise >= 0.0 && spec.noise <= 1.0)) {
    throw Error(ErrorKind::kInvalidArgument, "noise must lie in [0, 1]");
  }
  return spec;
}

std::shared_ptr<MllmBackend> make_backend(const BackendSpec& spec, const EpisodeRecord& episode) {
  if (spec.kind == BackendSpec::Kind::kOracle) {
    return std::make_shared<OracleBackend>(episode, spec.noise, spec.seed);
  }
  HttpBackendConfig config = HttpBackendConfig::from_env();
  if (!spec.model.empty()) config.model = spec.model;
  return std::make_shared<HttpBackend>(config);
}

std::vector<PreferenceLabel> default_preferences(Task task) {
  switch (task) {
    case Task::kBlock:
      return {PreferenceLabel::kAlignHorizontal, PreferenceLabel::kAlignVertical,
              PreferenceLabel::kClusterQuadrant1, PreferenceLabel::kClusterQuadrant2,
              PreferenceLabel::kClusterQuadrant3, PreferenceLabel::kClusterQuadrant4};
    case Task::kPolygon:
      return {PreferenceLabel::kGroupByColor, PreferenceLabel::kGroupByShape};
    case Task::kHousehold:
      return applicable_preferences(task);
  }
  return {};
}

int default_repeats(Task task) { return task == Task::kHousehold ? 6 : 10; }

std::vector<PreferenceLabel> BenchmarkSpec::preferences_for(Task task) const {
  auto it = preferences.find(task);
  return it == preferences.end() ? default_preferences(task) : it->second;
}

int BenchmarkSpec::repeats_for(Task task) const {
  return repeats > 0 ? repeats : default_repeats(task);
}

BenchmarkSpec parse_benchmark_config(const std::string& text) {
  BenchmarkSpec spec;
  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    if (trim(line).empty()) continue;
    const auto eq = line.find('=');
    const std::string where = "line " + std::to_string(line_no) + ": ";
    if (eq == std::string::npos) throw Error(ErrorKind::kParseError, where + "expected key = value");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    try {
      if (key == "methods") {
        spec.methods.clear();
        for (const auto& m : split_list(value, ',')) spec.methods.push_back(parse_method(m));
        dedupe(spec.methods);
      } else if (key == "tasks") {
        spec.tasks.clear();
        for (const auto& t : split_list(value, ',')) spec.tasks.push_back(parse_task(t));
        dedupe(spec.tasks);
      } else if (key.starts_with("preferences.")) {
        const Task task = parse_task(key.substr(std::string_view("preferences.").size()));
        if (value == "auto") {
          spec.preferences.erase(task);
          continue;
        }
        std::vector<PreferenceLabel> labels;
        for (const auto& p : split_list(value, ',')) labels.push_back(parse_preference(p));
        dedupe(labels);
        spec.preferences[task] = labels;
      } else if (key == "repeats") {
        spec.repeats = static_cast<int>(parse_u64(value, "repeats"));
      } else if (key == "master_seed") {
        spec.master_seed = parse_u64(value, "master_seed");
      } else if (key == "n_images") {
        spec.n_images = static_cast<int>(parse_u64(value, "n_images"));
      } else if (key == "backend") {
        spec.backend = parse_backend_spec(value);
      } else if (key == "render_images") {
        if (value == "true" || value == "1" || value == "yes") {
          spec.render_images = true;
        } else if (value == "false" || value == "0" || value == "no") {
          spec.render_images = false;
        } else {
          throw Error(ErrorKind::kParseError, "render_images: expected true or false");
        }
      } else if (key == "cache") {
        spec.cache_path = value;
      } else if (key == "threads") {
        spec.threads = static_cast<int>(parse_u64(value, "threads"));
      } else if (key == "out_dir") {
        spec.out_dir = value;
      } else if (key == "run_id") {
        spec.run_id = value;
      } else {
        throw Error(ErrorKind::kParseError, "unknown key '" + key + "'");
      }
    } catch (const Error& err) {
      throw Error(ErrorKind::kParseError, where + err.what());
    }
  }
  if (spec.methods.empty() || spec.tasks.empty()) {
    throw Error(ErrorKind::kParseError, "methods and tasks must be non-empty");
  }
  if (spec.n_images == 1) throw Error(ErrorKind::kParseError, "n_images must be 0 or at least 2");
  return spec;
}

BenchmarkSpec load_benchmark_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::kIoError, "cannot read " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_benchmark_config(buf.str());
}

bool BenchmarkReport::any_failed() const {
  return std::any_of(rows.begin(), rows.end(), [](const ReportRow& r) { return r.failed(); });
}

std::vector<Png> render_episode(const EpisodeRecord& episode, const RenderOptions& options) {
  std::vector<Png> out;
  out.reserve(episode.scenes.size());
  for (const auto& scene : episode.scenes) out.push_back(encode_png(render_scene(scene, options)));
  return out;
}

InferenceResult run_method(Method method, const EpisodeRecord& episode, std::span<const Png> images,
                           MllmBackend* backend, const CovrOptions& options) {
  if (method == Method::kMdpe) return infer_preference_mdpe(episode.scenes.back());
  if (backend == nullptr) {
    throw Error(ErrorKind::kInvalidArgument,
                std::string(method_token(method)) + " needs a model backend");
  }
  switch (method) {
    case Method::kCovr:
      return infer_preference_covr(images, *backend, options);
    case Method::kNaive:
      return infer_preference_naive(images, *backend, options.retry, options.decoding);
    case Method::kL2r:
      try {
        return infer_preference_l2r(images, *backend, episode.task(), {}, options.decoding);
      } catch (const Error& err) {
        if (err.kind() != ErrorKind::kMalformedResponse && err.kind() != ErrorKind::kEmptyScene) {
          throw;
        }
        InferenceResult r;
        r.method = Method::kL2r;
        r.note = err.what();
        return r;
      }
    case Method::kMdpe:
      break;
  }
  return infer_preference_mdpe(episode.scenes.back());
}

namespace {

struct Cell {
  Task task;
  PreferenceLabel preference;
};

struct Accumulator {
  int hits = 0;
  std::vector<double> vrd;
  std::string error;
};

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::kIoError, "cannot write " + path.string());
  out << text;
}

std::vector<ReportRow> run_cell(const BenchmarkSpec& spec, const Cell& cell,
                                const CovrOptions& options,
                                const std::shared_ptr<MllmBackend>& shared_backend,
                                const std::string& backend_id, const std::string& audit_dir) {
  const int repeats = spec.repeats_for(cell.task);
  std::vector<Accumulator> acc(spec.methods.size());
  std::string cell_error;
  int completed = 0;

  for (int r = 0; r < repeats && cell_error.empty(); ++r) {
    const std::uint64_t seed = spec.master_seed + static_cast<std::uint64_t>(r);
    EpisodeRecord episode;
    std::vector<Png> images;
    std::shared_ptr<MllmBackend> backend = shared_backend;
    try {
      GenerationConfig config;
      config.task = cell.task;
      config.preference = cell.preference;
      config.seed = seed;
      config.n_images = spec.n_images;
      episode = generate_episode(config);
      images = spec.render_images ? render_episode(episode)
                                  : std::vector<Png>(episode.scenes.size());
      if (!backend) backend = make_backend(spec.backend, episode);
    } catch (const std::exception& err) {
      cell_error = err.what();
      break;
    }

    std::filesystem::path dir;
    if (!audit_dir.empty()) {
      dir = std::filesystem::path(audit_dir) / task_name(cell.task) /
            preference_token(cell.preference) / std::to_string(seed);
      std::filesystem::create_directories(dir);
      write_text(dir / "episode.json", episode_to_json(episode));
    }

    for (std::size_t m = 0; m < spec.methods.size(); ++m) {
      Accumulator& a = acc[m];
      if (!a.error.empty()) continue;
      try {
        const InferenceResult result =
            run_method(spec.methods[m], episode, images, backend.get(), options);
        if (result.preference == cell.preference) ++a.hits;
        std::optional<double> vrd;
        if (!result.residuals.empty()) {
          vrd = sr_vrd(result.residuals, episode.ground_truth_residuals);
          a.vrd.push_back(*vrd);
        }
        if (!dir.empty()) {
          nlohmann::json j = inference_to_json(result);
          j["backend"] = backend_id;
          j["sr_vrd"] = vrd ? nlohmann::json(*vrd) : nlohmann::json(nullptr);
          write_text(dir / (std::string(method_token(spec.methods[m])) + ".json"), j.dump(2));
        }
      } catch (const std::exception& err) {
        a.error = err.what();
      }
    }
    ++completed;
  }

  std::vector<ReportRow> rows;
  for (std::size_t m = 0; m < spec.methods.size(); ++m) {
    const Accumulator& a = acc[m];
    ReportRow row;
    row.method = spec.methods[m];
    row.task = cell.task;
    row.preference = cell.preference;
    row.episodes = repeats;
    row.seed_first = spec.master_seed;
    row.seed_last = spec.master_seed + static_cast<std::uint64_t>(repeats - 1);
    row.backend_id = backend_id;
    row.noise = spec.backend.kind == BackendSpec::Kind::kOracle ? spec.backend.noise : 0.0;
    row.error = !cell_error.empty() ? cell_error : a.error;
    if (!row.failed() && completed > 0) {
      row.sr_prd = static_cast<double>(a.hits) / completed;
      if (a.vrd.size() == static_cast<std::size_t>(completed)) {
        double sum = 0.0;
        for (double v : a.vrd) sum += v;
        const double mean = sum / static_cast<double>(completed);
        double sq = 0.0;
        for (double v : a.vrd) sq += (v - mean) * (v - mean);
        row.sr_vrd_mean = mean;
        row.sr_vrd_std = std::sqrt(sq / static_cast<double>(completed));
      }
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace

BenchmarkReport run_benchmark(const BenchmarkSpec& spec, const std::string& audit_dir) {
  if (spec.methods.empty() || spec.tasks.empty()) {
    throw Error(ErrorKind::kInvalidArgument, "benchmark needs at least one method and task");
  }
  std::vector<Cell> cells;
  std::map<Task, CovrOptions> options;
  for (Task task : spec.tasks) {
    for (PreferenceLabel p : spec.preferences_for(task)) cells.push_back({task, p});
    options.emplace(task, CovrOptions::for_task(task));
  }

  std::shared_ptr<MllmBackend> shared;
  std::string backend_id = spec.backend.to_string();
  if (spec.backend.kind == BackendSpec::Kind::kHttp) {
    auto http = make_backend(spec.backend, EpisodeRecord{});
    backend_id = http->id();
    shared = std::make_shared<CachingBackend>(http, spec.cache_path);
  }

  std::vector<std::vector<ReportRow>> results(cells.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < cells.size(); i = next++) {
      results[i] = run_cell(spec, cells[i], options.at(cells[i].task), shared, backend_id, audit_dir);
    }
  };
  const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
  const std::size_t n_threads =
      std::min<std::size_t>(spec.threads > 0 ? static_cast<std::size_t>(spec.threads) : hw,
                            cells.size());
  if (n_threads <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t t = 0; t < n_threads; ++t) pool.emplace_back(worker);
  }

  BenchmarkReport report;
  report.master_seed = spec.master_seed;
  report.backend_id = backend_id;
  for (auto& rows : results) {
    for (auto& row : rows) report.rows.push_back(std::move(row));
  }
  std::stable_sort(report.rows.begin(), report.rows.end(), [](const auto& a, const auto& b) {
    return std::tuple(a.task, a.preference, a.method) < std::tuple(b.task, b.preference, b.method);
  });
  return report;
}

namespace {

struct Column {
  std::string title;
  bool (*member)(PreferenceLabel);
};

bool is_color(PreferenceLabel p) { return p == PreferenceLabel::kGroupByColor; }
bool is_shape(PreferenceLabel p) { return p == PreferenceLabel::kGroupByShape; }
bool is_category(PreferenceLabel p) { return p == PreferenceLabel::kGroupByCategory; }
bool is_quadrant(PreferenceLabel p) { return quadrant_of(p) != 0; }
bool is_vertical(PreferenceLabel p) { return p == PreferenceLabel::kAlignVertical; }
bool is_horizontal(PreferenceLabel p) { return p == PreferenceLabel::kAlignHorizontal; }
bool is_semantic(PreferenceLabel p) { return !is_spatial(p); }

std::vector<Column> columns_for(Task task) {
  if (task == Task::kHousehold) return {{"spatial pattern", is_spatial}, {"semantic", is_semantic}};
  return {{"color", is_color},       {"shape", is_shape},       {"category", is_category},
          {"quadrant", is_quadrant}, {"vertical", is_vertical}, {"horizontal", is_horizontal}};
}

std::string task_title(Task task) {
  std::string t(task_name(task));
  if (!t.empty()) t[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(t[0])));
  return t;
}

// Display width, counting each UTF-8 code point once.
std::size_t width(const std::string& s) {
  return static_cast<std::size_t>(
      std::count_if(s.begin(), s.end(), [](char c) { return (c & 0xC0) != 0x80; }));
}

std::string pad(const std::string& s, std::size_t w) {
  const std::size_t n = width(s);
  return n >= w ? s : s + std::string(w - n, ' ');
}

std::string prd_cell(const std::vector<const ReportRow*>& rows) {
  if (rows.empty()) return "-";
  double hits = 0.0;
  int n = 0;
  for (const ReportRow* r : rows) {
    if (r->failed()) return "fail";
    hits += r->sr_prd * r->episodes;
    n += r->episodes;
  }
  return n == 0 ? "-" : fmt("%.2f", hits / n);
}

std::string vrd_cell(const std::vector<const ReportRow*>& rows) {
  double n = 0.0;
  double sum = 0.0;
  double sum_sq = 0.0;
  for (const ReportRow* r : rows) {
    if (r->failed() || !r->sr_vrd_mean || !r->sr_vrd_std) continue;
    const double m = *r->sr_vrd_mean;
    const double s = *r->sr_vrd_std;
    n += r->episodes;
    sum += r->episodes * m;
    sum_sq += r->episodes * (s * s + m * m);
  }
  if (n == 0.0) return "-";
  const double mean = sum / n;
  const double var = std::max(0.0, sum_sq / n - mean * mean);
  return fmt("%.2f", mean) + "±" + fmt("%.2f", std::sqrt(var));
}

}  // namespace

std::string render_report_text(const BenchmarkReport& report) {
  std::ostringstream out;
  std::set<Task> tasks;
  for (const auto& r : report.rows) tasks.insert(r.task);

  bool first_table = true;
  for (Task task : tasks) {
    std::vector<Column> cols;
    for (const Column& c : columns_for(task)) {
      const bool used = std::any_of(report.rows.begin(), report.rows.end(), [&](const ReportRow& r) {
        return r.task == task && c.member(r.preference);
      });
      if (used) cols.push_back(c);
    }
    std::vector<Method> methods;
    for (Method m : kAllMethods) {
      if (std::any_of(report.rows.begin(), report.rows.end(),
                      [&](const ReportRow& r) { return r.task == task && r.method == m; })) {
        methods.push_back(m);
      }
    }

    std::vector<std::vector<std::string>> grid;
    std::vector<std::string> header{"Model", "SR_VRD"};
    for (const Column& c : cols) header.push_back(c.title);
    grid.push_back(header);
    for (Method m : methods) {
      std::vector<const ReportRow*> all;
      for (const auto& r : report.rows) {
        if (r.task == task && r.method == m) all.push_back(&r);
      }
      std::vector<std::string> line{std::string(method_display_name(m)), vrd_cell(all)};
      for (const Column& c : cols) {
        std::vector<const ReportRow*> in_col;
        for (const ReportRow* r : all) {
          if (c.member(r->preference)) in_col.push_back(r);
        }
        line.push_back(prd_cell(in_col));
      }
      grid.push_back(line);
    }

    std::vector<std::size_t> widths(header.size(), 0);
    for (const auto& line : grid) {
      for (std::size_t i = 0; i < line.size(); ++i) widths[i] = std::max(widths[i], width(line[i]));
    }
    if (!first_table) out << "\n";
    first_table = false;
    out << task_title(task) << " (backend " << report.backend_id << ", master seed "
        << report.master_seed << ")\n";
    for (const auto& line : grid) {
      std::string text;
      for (std::size_t i = 0; i < line.size(); ++i) {
        text += i + 1 == line.size() ? line[i] : pad(line[i], widths[i] + 2);
      }
      out << text << "\n";
    }
  }

  bool heading = false;
  for (const auto& r : report.rows) {
    if (!r.failed()) continue;
    if (!heading) out << "\nFailed cells\n";
    heading = true;
    out << method_token(r.method) << " " << task_name(r.task) << " "
        << preference_token(r.preference) << ": " << r.error << "\n";
  }
  return out.str();
}

namespace {

constexpr const char* kCsvHeader =
    "method,task,preference,sr_prd,sr_vrd_mean,sr_vrd_std,episodes,seed_first,seed_last,backend,"
    "noise,master_seed,error";

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::vector<std::vector<std::string>> parse_csv(const std::string& text) {
  std::vector<std::vector<std::string>> rows;
  std::vector<std::string> row;
  std::string field;
  bool quoted = false;
  bool any = false;
  for (std::size_t i = 0; i < text.size(); ++i) {
    const char c = text[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < text.size() && text[i + 1] == '"') {
          field += '"';
          ++i;
        } else {
          quoted = false;
        }
      } else {
        field += c;
      }
      continue;
    }
    if (c == '"') {
      quoted = true;
      any = true;
    } else if (c == ',') {
      row.push_back(std::move(field));
      field.clear();
      any = true;
    } else if (c == '\n') {
      row.push_back(std::move(field));
      field.clear();
      rows.push_back(std::move(row));
      row.clear();
      any = false;
    } else if (c != '\r') {
      field += c;
      any = true;
    }
  }
  if (quoted) throw Error(ErrorKind::kParseError, "unterminated quoted field");
  if (any) {
    row.push_back(std::move(field));
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace

std::string render_report_csv(const BenchmarkReport& report) {
  std::ostringstream out;
  out << kCsvHeader << "\n";
  for (const auto& r : report.rows) {
    out << method_token(r.method) << ',' << task_name(r.task) << ','
        << preference_token(r.preference) << ',' << fmt("%.17g", r.sr_prd) << ','
        << (r.sr_vrd_mean ? fmt("%.17g", *r.sr_vrd_mean) : "") << ','
        << (r.sr_vrd_std ? fmt("%.17g", *r.sr_vrd_std) : "") << ',' << r.episodes << ','
        << r.seed_first << ',' << r.seed_last << ',' << csv_field(r.backend_id) << ','
        << fmt("%.17g", r.noise) << ',' << report.master_seed << ',' << csv_field(r.error)
        << "\n";
  }
  return out.str();
}

BenchmarkReport parse_report_csv(const std::string& text) {
  const auto rows = parse_csv(text);
  if (rows.empty()) throw Error(ErrorKind::kParseError, "empty report");
  std::string header;
  for (std::size_t i = 0; i < rows[0].size(); ++i) header += (i ? "," : "") + rows[0][i];
  if (header != kCsvHeader) throw Error(ErrorKind::kParseError, "unexpected header: " + header);

  BenchmarkReport report;
  for (std::size_t i = 1; i < rows.size(); ++i) {
    const auto& f = rows[i];
    if (f.size() != 13) {
      throw Error(ErrorKind::kParseError, "row " + std::to_string(i) + ": expected 13 fields");
    }
    try {
      ReportRow r;
      r.method = parse_method(f[0]);
      r.task = parse_task(f[1]);
      r.preference = parse_preference(f[2]);
      r.sr_prd = parse_double(f[3], "sr_prd");
      if (!f[4].empty()) r.sr_vrd_mean = parse_double(f[4], "sr_vrd_mean");
      if (!f[5].empty()) r.sr_vrd_std = parse_double(f[5], "sr_vrd_std");
      r.episodes = static_cast<int>(parse_u64(f[6], "episodes"));
      r.seed_first = parse_u64(f[7], "seed_first");
      r.seed_last = parse_u64(f[8], "seed_last");
      r.backend_id = f[9];
      r.noise = parse_double(f[10], "noise");
      report.master_seed = parse_u64(f[11], "master_seed");
      r.error = f[12];
      if (report.backend_id.empty()) report.backend_id = r.backend_id;
      report.rows.push_back(std::move(r));
    } catch (const Error& err) {
      throw Error(ErrorKind::kParseError, "row " + std::to_string(i) + ": " + err.what());
    }
  }
  return report;
}

void write_report(const BenchmarkReport& report, const std::string& dir) {
  std::filesystem::create_directories(dir);
  write_text(std::filesystem::path(dir) / "report.txt", render_report_text(report));
  write_text(std::filesystem::path(dir) / "report.csv", render_report_csv(report));
}

}  // namespace vpi
