#include "vpi/baselines.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <regex>
#include <sstream>

#include "vpi/catalog.hpp"
#include "vpi/error.hpp"
#include "vpi/layout_stats.hpp"
#include "vpi/prompt_markers.hpp"

namespace vpi {

double MdpeConfig::weight(PreferenceLabel label) const {
  auto it = weights.find(label);
  return it == weights.end() ? 1.0 : it->second;
}

void MdpeConfig::validate() const {
  if (!(align_threshold > 0.0)) {
    throw Error(ErrorKind::kInvalidArgument, "align threshold must be positive");
  }
  if (!(ambiguity_margin >= 0.0)) {
    throw Error(ErrorKind::kInvalidArgument, "ambiguity margin must be non-negative");
  }
  for (const auto& [label, w] : weights) {
    if (!(w >= 0.0)) {
      throw Error(ErrorKind::kInvalidArgument,
                  "weight for " + std::string(preference_token(label)) + " is negative");
    }
  }
}

namespace {

double grouping_feature(const std::vector<ObjectInstance>& objs, PreferenceLabel label) {
  const auto groups = group_indices(objs, label);
  const bool has_pair = std::any_of(groups.begin(), groups.end(),
                                    [](const auto& g) { return g.size() >= 2; });
  if (groups.size() < 2 || !has_pair) return 0.0;

  std::vector<std::size_t> group_of(objs.size());
  for (std::size_t g = 0; g < groups.size(); ++g) {
    for (std::size_t i : groups[g]) group_of[i] = g;
  }
  double all_sum = 0.0;
  double intra_sum = 0.0;
  std::size_t all_n = 0;
  std::size_t intra_n = 0;
  for (std::size_t i = 0; i < objs.size(); ++i) {
    for (std::size_t j = i + 1; j < objs.size(); ++j) {
      const double d = distance(objs[i].position, objs[j].position);
      all_sum += d;
      ++all_n;
      if (group_of[i] == group_of[j]) {
        intra_sum += d;
        ++intra_n;
      }
    }
  }
  const double all_mean = all_sum / static_cast<double>(all_n);
  if (all_mean <= 0.0) return 0.0;
  const double intra_mean = intra_sum / static_cast<double>(intra_n);
  return std::clamp(1.0 - intra_mean / all_mean, 0.0, 1.0);
}

}  // namespace

FeatureVector mdpe_features(const Scene& scene, const MdpeConfig& config) {
  config.validate();
  FeatureVector f;
  const auto& objs = scene.objects;
  if (objs.size() < 2) {
    throw Error(ErrorKind::kInvalidArgument, "features need at least two objects");
  }
  for (PreferenceLabel label : {PreferenceLabel::kGroupByColor, PreferenceLabel::kGroupByShape,
                                PreferenceLabel::kGroupByCategory}) {
    f[label] = grouping_feature(objs, label);
  }
  f[PreferenceLabel::kAlignHorizontal] =
      std::max(0.0, 1.0 - population_std(ys(objs)) / config.align_threshold);
  f[PreferenceLabel::kAlignVertical] =
      std::max(0.0, 1.0 - population_std(xs(objs)) / config.align_threshold);
  for (PreferenceLabel label :
       {PreferenceLabel::kClusterQuadrant1, PreferenceLabel::kClusterQuadrant2,
        PreferenceLabel::kClusterQuadrant3, PreferenceLabel::kClusterQuadrant4}) {
    const int q = quadrant_of(label);
    const auto inside = std::count_if(objs.begin(), objs.end(), [q](const ObjectInstance& o) {
      return in_quadrant(o.position, q);
    });
    const double fraction = static_cast<double>(inside) / static_cast<double>(objs.size());
    f[label] = std::clamp(2.0 * fraction - 1.0, 0.0, 1.0);
  }
  return f;
}

MdpeDecision mdpe_infer(const FeatureVector& features, const MdpeConfig& config) {
  config.validate();
  MdpeDecision d;
  for (PreferenceLabel label : kAllPreferences) {
    d.ranked.emplace_back(label, config.weight(label) * features[label]);
  }
  std::stable_sort(d.ranked.begin(), d.ranked.end(),
                   [](const auto& a, const auto& b) { return a.second > b.second; });

  const double top = d.ranked.front().second;
  const double scale = top > 0.0 ? top : 1.0;
  const double lead = (top - d.ranked[1].second) / scale;
  if (lead > config.ambiguity_margin) {
    d.label = d.ranked.front().first;
    return d;
  }
  for (const auto& [label, score] : d.ranked) {
    if ((top - score) / scale <= config.ambiguity_margin) d.tied.push_back(label);
  }
  return d;
}

InferenceResult infer_preference_mdpe(const Scene& final_scene, const MdpeConfig& config) {
  const MdpeDecision d = mdpe_infer(mdpe_features(final_scene, config), config);
  InferenceResult r;
  r.method = Method::kMdpe;
  r.preference = d.label;
  r.ambiguous = d.tied;
  r.ranked = d.ranked;
  if (d.ambiguous()) r.note = "ambiguous: " + std::to_string(d.tied.size()) + " labels tied";
  return r;
}

namespace {

std::string image_list(std::size_t n) {
  std::string out;
  for (std::size_t k = 1; k <= n; ++k) {
    if (k > 1) out += ", ";
    out += "[image" + std::to_string(k) + "]";
  }
  return out;
}

}  // namespace

PromptBundle build_naive_prompt(std::span<const Png> images) {
  if (images.size() < 2) throw Error(ErrorKind::kInvalidArgument, "need at least two images");
  std::ostringstream u;
  u << "I will give you a set of images " << image_list(images.size()) << ".\n"
    << "They show a tabletop, in order, while a user rearranges the objects one at a time. "
       "Describe how the objects changed between consecutive images, then decide which "
       "preference the user is following.\n"
    << markers::kPreferenceSet << "\n";
  for (PreferenceLabel label : kAllPreferences) u << "- " << preference_sentence(label) << "\n";
  u << "End your answer with one line of the form \"Preference: <one sentence from the "
       "preference set>\".";
  PromptBundle b;
  b.system = "You are a helpful assistant that looks at images.";
  b.user = u.str();
  b.images.assign(images.begin(), images.end());
  return b;
}

InferenceResult infer_preference_naive(std::span<const Png> images, MllmBackend& backend,
                                       const RetryPolicy& retry, const DecodingParams& decoding) {
  InferenceResult r;
  r.method = Method::kNaive;
  const BackendRequest request{build_naive_prompt(images), decoding};
  r.preference = complete_with_retry(backend, request, retry, r.transcript,
                                     [](const std::string& t) { return parse_prd_response(t); });
  if (!r.preference) r.note = "preference response could not be parsed";
  return r;
}

PromptBundle build_position_prompt(std::span<const Png> images, const Vocabulary& vocabulary) {
  if (images.empty()) throw Error(ErrorKind::kInvalidArgument, "need at least one image");
  std::ostringstream u;
  u << "I will give you the image [image" << images.size() << "].\n"
    << "Extract the " << markers::kPositionRequest
    << " (ranging from 0.0 to 1.0) of every object on the table. x runs from the left edge "
       "(0.0) to the right edge (1.0); y runs from the bottom edge (0.0) to the top edge (1.0).\n"
    << "Objects: ";
  for (std::size_t i = 0; i < vocabulary.object_names.size(); ++i) {
    if (i > 0) u << ", ";
    u << vocabulary.object_names[i];
  }
  u << ".\nAnswer with one line per object of the form \"name: (x, y)\".";
  PromptBundle b;
  b.system = "You are a helpful assistant that looks at images.";
  b.user = u.str();
  b.images = {images.back()};
  return b;
}

std::vector<std::pair<std::string, Point>> parse_position_response(const std::string& text) {
  static const std::regex kLine(
      R"(^\s*(?:[-*]\s*)?\**\s*([^:(]+?)\s*\**\s*:\s*\(?\s*([-+]?[0-9]*\.?[0-9]+(?:[eE][-+]?[0-9]+)?)\s*,\s*([-+]?[0-9]*\.?[0-9]+(?:[eE][-+]?[0-9]+)?)\s*\)?)");
  std::vector<std::pair<std::string, Point>> out;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    std::smatch m;
    if (!std::regex_search(line, m, kLine)) continue;
    std::string name = m[1].str();
    for (auto& c : name) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    const double x = std::clamp(std::stod(m[2].str()), 0.0, 1.0);
    const double y = std::clamp(std::stod(m[3].str()), 0.0, 1.0);
    out.emplace_back(name, Point{x, y});
  }
  if (out.empty()) throw Error(ErrorKind::kMalformedResponse, "no \"name: (x, y)\" lines");
  return out;
}

std::map<std::string, Point> l2r_extract_positions(std::span<const Png> images,
                                                   MllmBackend& backend, Task task,
                                                   std::vector<TranscriptEntry>* transcript,
                                                   const DecodingParams& decoding) {
  const BackendRequest request{build_position_prompt(images, vocabulary_for(task)), decoding};
  const BackendResponse response = backend.complete(request);
  if (transcript != nullptr) transcript->push_back({request_digest(request), response.text});
  std::map<std::string, Point> positions;
  for (auto& [name, p] : parse_position_response(response.text)) positions.emplace(name, p);
  return positions;
}

Scene scene_from_positions(const std::map<std::string, Point>& positions, Task task) {
  const Catalog& catalog = catalog_for(task);
  Scene scene{task, {}};
  for (std::size_t i = 0; i < catalog.entries.size(); ++i) {
    const auto& e = catalog.entries[i];
    if (auto it = positions.find(e.name); it != positions.end()) {
      scene.objects.push_back({static_cast<int>(i), e.name, e.color, e.shape, e.category,
                               it->second});
    }
  }
  if (scene.objects.empty()) {
    throw Error(ErrorKind::kEmptyScene, "no extracted name matches the catalog");
  }
  return scene;
}

InferenceResult infer_preference_l2r(std::span<const Png> images, MllmBackend& backend, Task task,
                                     const MdpeConfig& config, const DecodingParams& decoding) {
  InferenceResult r;
  r.method = Method::kL2r;
  const auto positions = l2r_extract_positions(images, backend, task, &r.transcript, decoding);
  const Scene scene = scene_from_positions(positions, task);
  if (scene.objects.size() < 2) {
    r.note = "fewer than two objects resolved";
    return r;
  }
  const MdpeDecision d = mdpe_infer(mdpe_features(scene, config), config);
  r.preference = d.label;
  r.ambiguous = d.tied;
  r.ranked = d.ranked;
  if (d.ambiguous()) r.note = "ambiguous: " + std::to_string(d.tied.size()) + " labels tied";
  return r;
}

}  // namespace vpi
