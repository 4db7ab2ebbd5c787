#include <csignal>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <thread>

#include <CLI11.hpp>

#include "vpi/benchmark.hpp"
#include "vpi/episode.hpp"
#include "vpi/error.hpp"
#include "vpi/render.hpp"
#include "vpi/scenegen.hpp"
#include "vpi/server.hpp"

namespace fs = std::filesystem;

namespace {

constexpr int kUsageError = 2;
constexpr int kRuntimeError = 1;

// Flag values that parse only after CLI11 is done (task names, specs).
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

template <typename F>
auto flag_value(F&& parse) {
  try {
    return parse();
  } catch (const vpi::Error& err) {
    throw UsageError(err.what());
  }
}

void write_bytes(const fs::path& path, const std::vector<std::uint8_t>& bytes) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw vpi::Error(vpi::ErrorKind::kIoError, "cannot write " + path.string());
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
}

std::vector<std::string> write_images(const vpi::EpisodeRecord& episode, const fs::path& dir,
                                      const vpi::RenderOptions& options) {
  fs::create_directories(dir);
  std::vector<std::string> names;
  for (std::size_t k = 0; k < episode.scenes.size(); ++k) {
    const std::string name = "image_" + std::to_string(k + 1) + ".png";
    write_bytes(dir / name, vpi::encode_png(vpi::render_scene(episode.scenes[k], options)));
    names.push_back(name);
  }
  return names;
}

struct GenerateArgs {
  std::string task;
  std::string preference;
  std::uint64_t seed = 0;
  int n = 0;
  std::string out = "episodes";
  bool annotate = false;
};

int run_generate(const GenerateArgs& a) {
  vpi::GenerationConfig config;
  config.task = flag_value([&] { return vpi::parse_task(a.task); });
  config.preference = flag_value([&] { return vpi::parse_preference(a.preference); });
  config.seed = a.seed;
  config.n_images = a.n;
  if (a.n == 1) throw UsageError("--n must be 0 or at least 2");

  vpi::EpisodeRecord episode = vpi::generate_episode(config);
  const fs::path dir = fs::path(a.out) / std::string(vpi::task_name(config.task)) /
                       std::string(vpi::preference_token(config.preference)) /
                       std::to_string(config.seed);
  vpi::RenderOptions options;
  options.annotate = a.annotate;
  episode.image_paths = write_images(episode, dir, options);
  vpi::save_episode(episode, (dir / "episode.json").string());
  std::cout << dir.string() << "\n";
  return 0;
}

int run_bench(const std::string& config_path, const std::string& out_dir, const std::string& run_id) {
  vpi::BenchmarkSpec spec = vpi::load_benchmark_config(config_path);
  if (!out_dir.empty()) spec.out_dir = out_dir;
  if (!run_id.empty()) spec.run_id = run_id;
  const fs::path dir = fs::path(spec.out_dir) / spec.run_id;
  const vpi::BenchmarkReport report = vpi::run_benchmark(spec, (dir / "episodes").string());
  vpi::write_report(report, dir.string());
  std::cout << vpi::render_report_text(report);
  std::cout << "wrote " << (dir / "report.txt").string() << " and " << (dir / "report.csv").string()
            << "\n";
  return report.any_failed() ? kRuntimeError : 0;
}

int run_render(const std::string& episode_path, const std::string& out, bool annotate) {
  const vpi::EpisodeRecord episode = vpi::load_episode(episode_path);
  vpi::RenderOptions options;
  options.annotate = annotate;
  for (const auto& name : write_images(episode, out, options)) {
    std::cout << (fs::path(out) / name).string() << "\n";
  }
  return 0;
}

int run_infer(const std::string& episode_path, const std::string& method_text,
              const std::string& backend_text) {
  const vpi::Method method = flag_value([&] { return vpi::parse_method(method_text); });
  const vpi::BackendSpec backend_spec =
      flag_value([&] { return vpi::parse_backend_spec(backend_text); });
  const vpi::EpisodeRecord episode = vpi::load_episode(episode_path);
  std::vector<vpi::Png> images;
  std::shared_ptr<vpi::MllmBackend> backend;
  vpi::CovrOptions options;
  if (method != vpi::Method::kMdpe) {
    images = vpi::render_episode(episode);
    backend = vpi::make_backend(backend_spec, episode);
    options = vpi::CovrOptions::for_task(episode.task());
  }
  const vpi::InferenceResult result =
      vpi::run_method(method, episode, images, backend.get(), options);
  nlohmann::json j = vpi::inference_to_json(result);
  j["ground_truth"] = vpi::preference_token(episode.label);
  std::cout << j.dump(2) << "\n";
  return 0;
}

int run_serve(const std::string& addr, const std::string& static_dir,
              const std::string& snapshot) {
  const auto colon = addr.rfind(':');
  if (colon == std::string::npos) throw UsageError("--addr must be HOST:PORT");
  const std::string host = addr.substr(0, colon);
  int port = 0;
  try {
    port = std::stoi(addr.substr(colon + 1));
  } catch (const std::exception&) {
    throw UsageError("--addr must be HOST:PORT");
  }

  sigset_t signals;
  sigemptyset(&signals);
  sigaddset(&signals, SIGINT);
  sigaddset(&signals, SIGTERM);
  pthread_sigmask(SIG_BLOCK, &signals, nullptr);

  vpi::ServerOptions options;
  options.static_dir = static_dir;
  options.snapshot_path = snapshot;
  vpi::SessionServer server(std::make_shared<vpi::SessionManager>(), options);
  std::jthread waiter([&] {
    int sig = 0;
    sigwait(&signals, &sig);
    server.stop();
  });
  std::cerr << "serving on " << host << ":" << port << "\n";
  if (!server.listen(host, port)) {
    std::cerr << "vpi: cannot listen on " << addr << "\n";
    pthread_kill(waiter.native_handle(), SIGTERM);
    return kRuntimeError;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Visual preference inference laboratory"};
  app.require_subcommand(1);

  GenerateArgs gen;
  auto* generate = app.add_subcommand("generate", "Generate an episode with rendered images");
  generate->add_option("--task", gen.task, "block, polygon or household")->required();
  generate->add_option("--preference", gen.preference, "Preference token or sentence")->required();
  generate->add_option("--seed", gen.seed, "Generator seed")->required();
  generate->add_option("--n", gen.n, "Number of images (0 = as many as needed)");
  generate->add_option("--out", gen.out, "Root of episodes/<task>/<label>/<seed>/");
  generate->add_flag("--annotate", gen.annotate, "Print object names under glyphs");

  std::string config_path;
  std::string bench_out;
  std::string bench_run;
  auto* bench = app.add_subcommand("bench", "Run a benchmark from a config file");
  bench->add_option("--config", config_path, "Key-value config file")->required();
  bench->add_option("--out-dir", bench_out, "Override out_dir");
  bench->add_option("--run-id", bench_run, "Override run_id");

  std::string render_episode_path;
  std::string render_out;
  bool render_annotate = false;
  auto* render = app.add_subcommand("render", "Render every scene of an episode");
  render->add_option("--episode", render_episode_path, "Episode JSON")->required();
  render->add_option("--out", render_out, "Output directory")->required();
  render->add_flag("--annotate", render_annotate, "Print object names under glyphs");

  std::string infer_episode;
  std::string infer_method;
  std::string infer_backend = "oracle";
  auto* infer = app.add_subcommand("infer", "Infer the preference behind an episode");
  infer->add_option("--episode", infer_episode, "Episode JSON")->required();
  infer->add_option("--method", infer_method, "covr, naive, l2r or mdpe")->required();
  infer->add_option("--backend", infer_backend, "oracle[:p=P,seed=S] or http[:model=M]");

  std::string addr = "127.0.0.1:8080";
  std::string static_dir;
  std::string snapshot;
  auto* serve = app.add_subcommand("serve", "Start the session HTTP service");
  serve->add_option("--addr", addr, "HOST:PORT");
  serve->add_option("--static", static_dir, "Directory of web client assets");
  serve->add_option("--snapshot", snapshot, "Write sessions here on shutdown");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsageError;
  }

  try {
    if (*generate) return run_generate(gen);
    if (*bench) return run_bench(config_path, bench_out, bench_run);
    if (*render) return run_render(render_episode_path, render_out, render_annotate);
    if (*infer) return run_infer(infer_episode, infer_method, infer_backend);
    if (*serve) return run_serve(addr, static_dir, snapshot);
  } catch (const UsageError& err) {
    std::cerr << "vpi: " << err.what() << "\n" << app.help();
    return kUsageError;
  } catch (const vpi::Error& err) {
    std::cerr << "vpi: " << err.what() << "\n";
    return kRuntimeError;
  } catch (const std::exception& err) {
    std::cerr << "vpi: " << err.what() << "\n";
    return kRuntimeError;
  }
  return kUsageError;
}
