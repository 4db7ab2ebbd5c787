#pragma once

#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "vpi/backend.hpp"
#include "vpi/residual.hpp"
#include "vpi/scene.hpp"

namespace vpi {

/// Tokens the model may use when describing a residual.
struct Vocabulary {
  std::vector<std::string> object_names;
  std::vector<std::string> colors;
  std::vector<std::string> shapes;
  std::vector<std::string> categories;
};

Vocabulary vocabulary_for(Task task);

/// Two worked examples per task drawn from held-out generator seeds and
/// formatted exactly like oracle responses.
std::vector<FewShotExample> default_few_shot(Task task);

/// Canonical response text for a residual; what a perfect model would write.
std::string format_vrd_response(const VisualResidual& residual);

/// Request for the residual between images `pair_index + 1` and
/// `pair_index + 2` (1-based in the prompt text).
PromptBundle build_vrd_prompt(const Png& first, const Png& second, std::size_t pair_index,
                              const Vocabulary& vocabulary,
                              const std::vector<FewShotExample>& few_shot);

/// Line-oriented, label-driven parse. Throws kMalformedResponse when a field
/// label is missing and kUnknownRelation for an unmappable relation.
VisualResidual parse_vrd_response(const std::string& text);

/// Residual chain serialized the way the preference prompt presents it.
std::string format_residual_chain(const std::vector<VisualResidual>& residuals);

PromptBundle build_prd_prompt(std::span<const Png> images,
                              const std::vector<VisualResidual>& residuals);

/// Reads the label after the last "Preference:" (or the whole text) and
/// matches it to the preference set: exact sentence first, then the earliest
/// sentence occurring as a substring. Throws kUnknownPreference.
PreferenceLabel parse_prd_response(const std::string& text);

struct RetryPolicy {
  /// Extra attempts after a response that fails to parse.
  int max_retries = 2;
};

struct TranscriptEntry {
  std::string digest;
  std::string response;

  friend bool operator==(const TranscriptEntry&, const TranscriptEntry&) = default;
};

struct CovrOptions {
  Vocabulary vocabulary;
  std::vector<FewShotExample> few_shot;
  RetryPolicy retry;
  DecodingParams decoding;

  static CovrOptions for_task(Task task);
};

/// One request per adjacent image pair, issued concurrently up to the
/// backend's limit and reassembled in pair order. A pair whose responses
/// never parse yields VisualResidual::unparsed_sentinel().
std::vector<VisualResidual> run_vrd_chain(std::span<const Png> images, MllmBackend& backend,
                                          const CovrOptions& options,
                                          std::vector<TranscriptEntry>* transcript = nullptr);

enum class Method { kCovr, kNaive, kL2r, kMdpe };

inline constexpr std::array<Method, 4> kAllMethods = {Method::kCovr, Method::kNaive,
                                                      Method::kL2r, Method::kMdpe};

std::string_view method_token(Method method);
/// Row label used in report tables, e.g. "MLLM-CoVR (Ours)".
std::string_view method_display_name(Method method);
Method parse_method(std::string_view text);

struct InferenceResult {
  Method method = Method::kCovr;
  std::vector<VisualResidual> residuals;
  /// Empty when no single label was produced (unparseable or ambiguous).
  std::optional<PreferenceLabel> preference;
  /// Labels tied within the ambiguity margin, for extractors that can tie.
  std::vector<PreferenceLabel> ambiguous;
  /// Full score vector, highest first, when the method computes one.
  std::vector<std::pair<PreferenceLabel, double>> ranked;
  std::vector<TranscriptEntry> transcript;
  std::string note;
};

nlohmann::json inference_to_json(const InferenceResult& result);

/// Residual chain followed by one preference request over all images.
InferenceResult infer_preference_covr(std::span<const Png> images, MllmBackend& backend,
                                      const CovrOptions& options);

/// Issues the request, retrying responses `parse` rejects with a
/// kMalformedResponse, kUnknownRelation or kUnknownPreference error.
/// Returns nullopt when every attempt failed to parse.
template <typename Parse>
auto complete_with_retry(MllmBackend& backend, const BackendRequest& request,
                         const RetryPolicy& retry, std::vector<TranscriptEntry>& transcript,
                         Parse parse) -> std::optional<decltype(parse(std::string{}))>;

}  // namespace vpi

#include "vpi/covr_inl.hpp"
