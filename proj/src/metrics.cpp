#include "vpi/metrics.hpp"

#include <sstream>
#include <vector>

#include "vpi/error.hpp"

namespace vpi {

std::string normalize_attribute(std::string_view token) {
  std::string norm = normalize_text(token);
  constexpr std::string_view kSuffix = " shaped";
  if (norm.size() > kSuffix.size() && norm.ends_with(kSuffix)) {
    norm.erase(norm.size() - kSuffix.size());
  }
  return norm;
}

std::string canonicalize_description(std::string_view text) {
  std::istringstream in(normalize_text(text));
  std::vector<std::string> words;
  std::string w;
  while (in >> w) {
    if (w == "the" || w == "a" || w == "an") continue;
    if (w == "of" && !words.empty() && words.back() == "behind") continue;
    words.push_back(w);
  }
  std::string out;
  for (const auto& word : words) {
    if (!out.empty()) out += ' ';
    out += word;
  }
  return out;
}

namespace {

bool same_descriptor(const ObjectDescriptor& a, const ObjectDescriptor& b) {
  return normalize_attribute(a.name) == normalize_attribute(b.name) &&
         normalize_attribute(a.color) == normalize_attribute(b.color) &&
         normalize_attribute(a.shape) == normalize_attribute(b.shape);
}

}  // namespace

ResidualScore score_residual(const VisualResidual& predicted, const VisualResidual& truth) {
  ResidualScore s;
  if (predicted.unparsed || truth.unparsed) return s;
  s.geometric = predicted.geometric == truth.geometric;
  s.semantic = same_descriptor(predicted.semantic.source, truth.semantic.source) &&
               same_descriptor(predicted.semantic.target, truth.semantic.target);
  s.description =
      canonicalize_description(predicted.description) == canonicalize_description(truth.description);
  return s;
}

double sr_vrd(std::span<const VisualResidual> predicted, std::span<const VisualResidual> truth) {
  if (predicted.size() != truth.size()) {
    throw Error(ErrorKind::kLengthMismatch, std::to_string(predicted.size()) + " predictions vs " +
                                                std::to_string(truth.size()) + " truths");
  }
  if (truth.empty()) throw Error(ErrorKind::kEmptyInput, "no residual pairs");
  double total = 0.0;
  for (std::size_t k = 0; k < truth.size(); ++k) {
    total += score_residual(predicted[k], truth[k]).fraction();
  }
  return total / static_cast<double>(truth.size());
}

double sr_prd(std::span<const std::optional<PreferenceLabel>> predicted,
              std::span<const PreferenceLabel> truth) {
  if (predicted.size() != truth.size()) {
    throw Error(ErrorKind::kLengthMismatch, std::to_string(predicted.size()) + " predictions vs " +
                                                std::to_string(truth.size()) + " truths");
  }
  if (truth.empty()) throw Error(ErrorKind::kEmptyInput, "no episodes");
  std::size_t hits = 0;
  for (std::size_t i = 0; i < truth.size(); ++i) {
    if (predicted[i] && *predicted[i] == truth[i]) ++hits;
  }
  return static_cast<double>(hits) / static_cast<double>(truth.size());
}

}  // namespace vpi
