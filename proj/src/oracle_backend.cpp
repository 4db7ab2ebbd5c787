#include "vpi/oracle_backend.hpp"

#include <algorithm>
#include <cstdio>
#include <optional>

#include "vpi/catalog.hpp"
#include "vpi/covr.hpp"
#include "vpi/error.hpp"
#include "vpi/prompt_markers.hpp"
#include "vpi/rng.hpp"

namespace vpi {

namespace {

GeometricRelation other_relation(GeometricRelation truth, Rng& rng) {
  std::vector<GeometricRelation> others;
  for (auto r : kAllRelations) {
    if (r != truth) others.push_back(r);
  }
  return others[rng.below(others.size())];
}

std::string& attribute(ObjectDescriptor& d, int which) {
  return which == 0 ? d.name : (which == 1 ? d.color : d.shape);
}

const std::string& attribute(const CatalogEntry& e, int which) {
  return which == 0 ? e.name : (which == 1 ? e.color : e.shape);
}

// Replaces one attribute of source or target with the value another catalog
// object carries for it. Only attributes with an alternative value qualify.
SemanticProperty swap_attribute(const SemanticProperty& truth, Task task, Rng& rng) {
  const Catalog& catalog = catalog_for(task);
  struct Option {
    bool target;
    int which;
    std::vector<std::string> values;
  };
  std::vector<Option> options;
  for (bool target : {false, true}) {
    const ObjectDescriptor& d = target ? truth.target : truth.source;
    for (int which = 0; which < 3; ++which) {
      Option opt{target, which, {}};
      for (const auto& e : catalog.entries) {
        const std::string& v = attribute(e, which);
        const std::string& current = which == 0 ? d.name : (which == 1 ? d.color : d.shape);
        if (v != current &&
            std::find(opt.values.begin(), opt.values.end(), v) == opt.values.end()) {
          opt.values.push_back(v);
        }
      }
      if (!opt.values.empty()) options.push_back(std::move(opt));
    }
  }
  SemanticProperty out = truth;
  const Option& pick = options[rng.below(options.size())];
  ObjectDescriptor& d = pick.target ? out.target : out.source;
  attribute(d, pick.which) = pick.values[rng.below(pick.values.size())];
  return out;
}

std::optional<std::size_t> marker_after(const std::string& text, std::size_t from) {
  const std::string tag = "[image";
  const std::size_t pos = text.find(tag, from);
  if (pos == std::string::npos) return std::nullopt;
  std::size_t i = pos + tag.size();
  std::size_t value = 0;
  bool any = false;
  while (i < text.size() && text[i] >= '0' && text[i] <= '9') {
    value = value * 10 + static_cast<std::size_t>(text[i] - '0');
    ++i;
    any = true;
  }
  if (!any || i >= text.size() || text[i] != ']') return std::nullopt;
  return value;
}

std::string format_number(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace

VisualResidual oracle_residual(const EpisodeRecord& episode, std::size_t pair_index, double noise,
                               std::uint64_t seed, CorruptionMask* mask) {
  if (pair_index >= episode.ground_truth_residuals.size()) {
    throw Error(ErrorKind::kUnrecognizedRequest,
                "episode has no image pair " + std::to_string(pair_index + 1));
  }
  const VisualResidual& truth = episode.ground_truth_residuals[pair_index];
  Rng rng(derive_seed(seed, {tag_of("oracle-vrd"), episode.seed, pair_index}));
  const double u_semantic = rng.uniform();
  const double u_geometric = rng.uniform();
  const double u_description = rng.uniform();
  CorruptionMask m{u_semantic < noise, u_geometric < noise, u_description < noise};

  // Alternatives are always drawn so the stream stays aligned across noise levels.
  const SemanticProperty alt_semantic = swap_attribute(truth.semantic, episode.task(), rng);
  const GeometricRelation alt_geometric = other_relation(truth.geometric, rng);
  const GeometricRelation alt_for_description = other_relation(truth.geometric, rng);

  VisualResidual r = truth;
  if (m.semantic) r.semantic = alt_semantic;
  if (m.geometric) r.geometric = alt_geometric;
  if (m.description) {
    r.description = canonical_description(r.semantic, r.geometric);
    if (r.description == truth.description) {
      r.description = canonical_description(r.semantic, alt_for_description);
    }
  }
  if (mask != nullptr) *mask = m;
  return r;
}

PreferenceLabel oracle_preference(const EpisodeRecord& episode, double noise, std::uint64_t seed) {
  Rng rng(derive_seed(seed, {tag_of("oracle-prd"), episode.seed}));
  const double u = rng.uniform();
  std::vector<PreferenceLabel> others;
  for (auto l : kAllPreferences) {
    if (l != episode.label) others.push_back(l);
  }
  const PreferenceLabel alt = others[rng.below(others.size())];
  return u < noise ? alt : episode.label;
}

BackendResponse oracle_complete(const BackendRequest& request, const EpisodeRecord& episode,
                                double noise, std::uint64_t seed) {
  const std::string& text = request.bundle.user;
  BackendResponse response;

  if (const std::size_t q = text.rfind(markers::kResidualQuestion); q != std::string::npos) {
    const auto first = marker_after(text, q);
    const auto second = first ? marker_after(text, text.find(']', q) + 1) : std::nullopt;
    if (!first || !second || *first < 1 || *second != *first + 1) {
      throw Error(ErrorKind::kUnrecognizedRequest, "residual question lacks an image pair");
    }
    response.text = format_vrd_response(oracle_residual(episode, *first - 1, noise, seed));
    return response;
  }

  if (const std::size_t q = text.find(markers::kPositionRequest); q != std::string::npos) {
    const auto index = marker_after(text, 0);
    if (!index || *index < 1 || *index > episode.scenes.size()) {
      throw Error(ErrorKind::kUnrecognizedRequest, "position request names no known image");
    }
    const Scene& scene = episode.scenes[*index - 1];
    Rng rng(derive_seed(seed, {tag_of("oracle-l2r"), episode.seed, *index}));
    const double amplitude = noise * 0.25;
    for (const auto& obj : scene.objects) {
      const double dx = rng.uniform(-1.0, 1.0) * amplitude;
      const double dy = rng.uniform(-1.0, 1.0) * amplitude;
      const double x = std::clamp(obj.position.x + dx, 0.0, 1.0);
      const double y = std::clamp(obj.position.y + dy, 0.0, 1.0);
      response.text += obj.name + ": (" + format_number(x) + ", " + format_number(y) + ")\n";
    }
    return response;
  }

  if (text.find(markers::kPreferenceSet) != std::string::npos) {
    response.text =
        "Preference: " + std::string(preference_sentence(oracle_preference(episode, noise, seed)));
    return response;
  }

  throw Error(ErrorKind::kUnrecognizedRequest, "prompt matches no known request kind");
}

OracleBackend::OracleBackend(EpisodeRecord episode, double noise, std::uint64_t seed)
    : episode_(std::move(episode)), noise_(noise), seed_(seed) {
  if (!(noise_ >= 0.0 && noise_ <= 1.0)) {
    throw Error(ErrorKind::kInvalidArgument, "oracle noise must lie in [0, 1]");
  }
}

BackendResponse OracleBackend::complete(const BackendRequest& request) {
  return oracle_complete(request, episode_, noise_, seed_);
}

std::string OracleBackend::id() const {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "oracle:p=%g,seed=%llu", noise_,
                static_cast<unsigned long long>(seed_));
  return buf;
}

}  // namespace vpi
