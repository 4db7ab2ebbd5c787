#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "vpi/benchmark.hpp"
#include "vpi/covr.hpp"
#include "vpi/episode.hpp"
#include "vpi/error.hpp"
#include "vpi/json_io.hpp"
#include "vpi/metrics.hpp"
#include "vpi/render.hpp"
#include "vpi/scenegen.hpp"

namespace py = pybind11;

namespace {

std::string generate(const std::string& task, const std::string& preference, std::uint64_t seed,
                     int n_images) {
  vpi::GenerationConfig config;
  config.task = vpi::parse_task(task);
  config.preference = vpi::parse_preference(preference);
  config.seed = seed;
  config.n_images = n_images;
  return vpi::episode_to_json(vpi::generate_episode(config));
}

py::bytes render(const std::string& episode_json, std::size_t index, bool annotate) {
  const vpi::EpisodeRecord episode = vpi::episode_from_json(episode_json);
  if (index >= episode.scenes.size()) {
    throw vpi::Error(vpi::ErrorKind::kInvalidArgument,
                     "scene index " + std::to_string(index) + " out of range");
  }
  vpi::RenderOptions options;
  options.annotate = annotate;
  const auto png = vpi::encode_png(vpi::render_scene(episode.scenes[index], options));
  return py::bytes(reinterpret_cast<const char*>(png.data()), png.size());
}

std::string infer(const std::string& episode_json, const std::string& method_text,
                  const std::string& backend_text) {
  const vpi::Method method = vpi::parse_method(method_text);
  const vpi::BackendSpec spec = vpi::parse_backend_spec(backend_text);
  const vpi::EpisodeRecord episode = vpi::episode_from_json(episode_json);
  py::gil_scoped_release release;
  std::vector<vpi::Png> images;
  std::shared_ptr<vpi::MllmBackend> backend;
  vpi::CovrOptions options;
  if (method != vpi::Method::kMdpe) {
    images = vpi::render_episode(episode);
    backend = vpi::make_backend(spec, episode);
    options = vpi::CovrOptions::for_task(episode.task());
  }
  const vpi::InferenceResult result = vpi::run_method(method, episode, images, backend.get(), options);
  return vpi::inference_to_json(result).dump();
}

double sr_vrd(const std::string& predicted_json, const std::string& truth_json) {
  const auto predicted = nlohmann::json::parse(predicted_json).get<std::vector<vpi::VisualResidual>>();
  const auto truth = nlohmann::json::parse(truth_json).get<std::vector<vpi::VisualResidual>>();
  return vpi::sr_vrd(predicted, truth);
}

double sr_prd(const std::vector<std::optional<std::string>>& predicted,
              const std::vector<std::string>& truth) {
  std::vector<std::optional<vpi::PreferenceLabel>> p;
  for (const auto& label : predicted) {
    p.push_back(label ? std::optional(vpi::parse_preference(*label)) : std::nullopt);
  }
  std::vector<vpi::PreferenceLabel> t;
  for (const auto& label : truth) t.push_back(vpi::parse_preference(label));
  return vpi::sr_prd(p, t);
}

std::string parse_vrd(const std::string& text) {
  return nlohmann::json(vpi::parse_vrd_response(text)).dump();
}

std::string benchmark(const std::string& config_text, const std::string& audit_dir) {
  const vpi::BenchmarkSpec spec = vpi::parse_benchmark_config(config_text);
  py::gil_scoped_release release;
  return vpi::render_report_csv(vpi::run_benchmark(spec, audit_dir));
}

std::string report_text(const std::string& csv) {
  return vpi::render_report_text(vpi::parse_report_csv(csv));
}

}  // namespace

PYBIND11_MODULE(_vpi, m) {
  m.doc() = "Preference inference from image sequences";

  static py::exception<vpi::Error> error(m, "VpiError");
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const vpi::Error& e) {
      py::object instance = py::handle(error.ptr())(e.what());
      instance.attr("kind") = std::string(vpi::error_kind_name(e.kind()));
      PyErr_SetObject(error.ptr(), instance.ptr());
    }
  });

  m.def("generate_episode", &generate, py::arg("task"), py::arg("preference"), py::arg("seed"),
        py::arg("n_images") = 0, "Episode JSON for one generation config");
  m.def("render", &render, py::arg("episode_json"), py::arg("index"), py::arg("annotate") = false,
        "PNG bytes of one scene of an episode");
  m.def("infer", &infer, py::arg("episode_json"), py::arg("method"),
        py::arg("backend") = "oracle", "Inference result JSON");
  m.def("sr_vrd", &sr_vrd, py::arg("predicted_json"), py::arg("truth_json"));
  m.def("sr_prd", &sr_prd, py::arg("predicted"), py::arg("truth"));
  m.def("parse_vrd_response", &parse_vrd, py::arg("text"), "Residual JSON");
  m.def("run_benchmark", &benchmark, py::arg("config_text"), py::arg("audit_dir") = "",
        "Report CSV");
  m.def("report_text", &report_text, py::arg("csv"));
}
