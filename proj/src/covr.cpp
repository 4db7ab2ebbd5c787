#include "vpi/covr.hpp"

#include <algorithm>
#include <atomic>
#include <cctype>
#include <exception>
#include <set>
#include <sstream>
#include <thread>

#include "vpi/catalog.hpp"
#include "vpi/error.hpp"
#include "vpi/json_io.hpp"
#include "vpi/scenegen.hpp"

namespace vpi {

namespace {

constexpr const char* kSystemPrompt =
    "You are a visual reasoning assistant observing a tabletop from above while a user "
    "rearranges objects one at a time.";

std::string join(const std::vector<std::string>& items, std::string_view sep) {
  std::string out;
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (i > 0) out += sep;
    out += items[i];
  }
  return out;
}

std::string image_marker(std::size_t one_based) { return "[image" + std::to_string(one_based) + "]"; }

std::string image_list(std::size_t first, std::size_t last) {
  std::string out;
  for (std::size_t k = first; k <= last; ++k) {
    if (k > first) out += ", ";
    out += image_marker(k);
  }
  return out;
}

std::string trim(std::string_view s) {
  std::size_t b = 0;
  std::size_t e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return std::string(s.substr(b, e - b));
}

std::string lower(std::string_view s) {
  std::string out(s);
  for (auto& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

std::vector<std::string> split_lines(const std::string& text) {
  std::vector<std::string> lines;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    lines.push_back(line);
  }
  return lines;
}

}  // namespace

Vocabulary vocabulary_for(Task task) {
  Vocabulary v;
  std::set<std::string> colors;
  std::set<std::string> shapes;
  std::set<std::string> categories;
  for (const auto& e : catalog_for(task).entries) {
    v.object_names.push_back(e.name);
    colors.insert(e.color);
    shapes.insert(e.shape);
    categories.insert(e.category);
  }
  v.colors.assign(colors.begin(), colors.end());
  v.shapes.assign(shapes.begin(), shapes.end());
  v.categories.assign(categories.begin(), categories.end());
  return v;
}

std::string format_vrd_response(const VisualResidual& r) {
  const auto& s = r.semantic.source;
  const auto& t = r.semantic.target;
  std::string out;
  out += "geometric property: ";
  out += relation_token(r.geometric);
  out += "\nsemantic property: source object: " + s.name + ", " + s.color + ", " + s.shape + ",\n";
  out += "target object: " + t.name + ", " + t.color + ", " + t.shape + "\n";
  out += "description: " + r.description;
  return out;
}

std::vector<FewShotExample> default_few_shot(Task task) {
  const auto prefs = applicable_preferences(task);
  const std::array<std::pair<std::uint64_t, PreferenceLabel>, 2> held_out = {
      {{1'000'003, prefs.front()}, {1'000'004, prefs.back()}}};
  std::vector<FewShotExample> out;
  for (const auto& [seed, label] : held_out) {
    GenerationConfig config;
    config.task = task;
    config.preference = label;
    config.seed = seed;
    config.n_images = 2;
    const EpisodeRecord ep = generate_episode(config);
    const VisualResidual& r = ep.ground_truth_residuals.front();
    out.push_back({"The " + r.semantic.source.name +
                       " was picked up and set down near the " + r.semantic.target.name + ".",
                   format_vrd_response(r)});
  }
  return out;
}

CovrOptions CovrOptions::for_task(Task task) {
  CovrOptions o;
  o.vocabulary = vocabulary_for(task);
  o.few_shot = default_few_shot(task);
  return o;
}

PromptBundle build_vrd_prompt(const Png& first, const Png& second, std::size_t pair_index,
                              const Vocabulary& vocabulary,
                              const std::vector<FewShotExample>& few_shot) {
  const std::string a = image_marker(pair_index + 1);
  const std::string b = image_marker(pair_index + 2);
  std::ostringstream u;
  u << "I will give you a set of images " << a << ", " << b << ".\n"
    << "The goal is to reason about the geometric and semantic properties of objects in an "
       "image sequence.\n"
    << "Format:\n"
    << "- geometric property: one of left_of, right_of, in_front_of, behind_of\n"
    << "- semantic property: source object: <name>, <color>, <shape>, target object: <name>, "
       "<color>, <shape>\n"
    << "- description: Move the <source name> <relation> the <target name>.\n";
  if (!few_shot.empty()) {
    u << "Examples:\n";
    for (std::size_t i = 0; i < few_shot.size(); ++i) {
      u << "Example " << (i + 1) << ": " << few_shot[i].prompt << "\n"
        << few_shot[i].response << "\n";
    }
  }
  u << "How did the objects move between the " << a << " and " << b << "?\n"
    << "The geometric relationship between objects contains {to the left of, to the right of, "
       "in front of, behind of}, while their semantic properties include {color, shape, "
       "category}.\n"
    << "Objects: " << join(vocabulary.object_names, ", ") << ".\n"
    << "Colors: " << join(vocabulary.colors, ", ") << ". Shapes: " << join(vocabulary.shapes, ", ")
    << ". Categories: " << join(vocabulary.categories, ", ") << ".\n"
    << "The source object is the one that moved; the target object is the object closest to "
       "where it was placed. The images are top-down: the top of an image is the far side of "
       "the table (behind), the bottom is the near side (in front).";

  PromptBundle bundle;
  bundle.system = kSystemPrompt;
  bundle.user = u.str();
  bundle.images = {first, second};
  bundle.few_shot = few_shot;
  return bundle;
}

namespace {

enum class Field { kGeometric, kSemantic, kDescription };

// Recognizes "geometric property:", "Semantic Property :", "- **description**:" and
// similar. On success returns the field and the text after the colon.
std::optional<std::pair<Field, std::string>> match_label(const std::string& line) {
  std::string cleaned;
  for (char c : line) {
    if (c != '*' && c != '`' && c != '#') cleaned.push_back(c);
  }
  std::size_t i = 0;
  while (i < cleaned.size()) {
    const unsigned char c = static_cast<unsigned char>(cleaned[i]);
    if (std::isspace(c) || c == '-' || c == '>' || c == '.') {
      ++i;
    } else if (cleaned.compare(i, 3, "\xE2\x80\xA2") == 0) {
      i += 3;
    } else if (std::isdigit(c)) {
      std::size_t j = i;
      while (j < cleaned.size() && std::isdigit(static_cast<unsigned char>(cleaned[j]))) ++j;
      if (j < cleaned.size() && (cleaned[j] == '.' || cleaned[j] == ')')) {
        i = j + 1;
      } else {
        break;
      }
    } else {
      break;
    }
  }
  const std::size_t colon = cleaned.find(':', i);
  if (colon == std::string::npos) return std::nullopt;
  const std::string head = normalize_text(cleaned.substr(i, colon - i));
  const std::string rest = trim(std::string_view(cleaned).substr(colon + 1));
  if (head == "geometric property" || head == "geometric") return {{Field::kGeometric, rest}};
  if (head == "semantic property" || head == "semantic") return {{Field::kSemantic, rest}};
  if (head == "description") return {{Field::kDescription, rest}};
  return std::nullopt;
}

ObjectDescriptor parse_descriptor(std::string_view segment) {
  std::vector<std::string> parts;
  std::string current;
  auto flush = [&] {
    std::string t = trim(current);
    while (!t.empty() && (t.back() == '.' || t.back() == ';')) t.pop_back();
    t = trim(t);
    if (!t.empty()) parts.push_back(t);
    current.clear();
  };
  for (char c : segment) {
    if (c == ',' || c == '\n') {
      flush();
    } else {
      current.push_back(c);
    }
  }
  flush();
  ObjectDescriptor d;
  if (!parts.empty()) d.name = parts[0];
  if (parts.size() > 1) d.color = parts[1];
  if (parts.size() > 2) d.shape = parts[2];
  return d;
}

GeometricRelation parse_geometric_field(const std::string& field) {
  if (auto rel = try_parse_relation(field)) return *rel;
  // Tolerate trailing prose such as "in_front_of (the apple now sits in front)".
  const std::string norm = normalize_text(field);
  static const std::array<std::pair<const char*, GeometricRelation>, 10> kPrefixes = {{
      {"to the left of", GeometricRelation::kLeftOf},
      {"to the right of", GeometricRelation::kRightOf},
      {"in front of", GeometricRelation::kInFrontOf},
      {"behind of", GeometricRelation::kBehindOf},
      {"left of", GeometricRelation::kLeftOf},
      {"right of", GeometricRelation::kRightOf},
      {"behind", GeometricRelation::kBehindOf},
      {"is to the left of", GeometricRelation::kLeftOf},
      {"is to the right of", GeometricRelation::kRightOf},
      {"is in front of", GeometricRelation::kInFrontOf},
  }};
  for (const auto& [prefix, rel] : kPrefixes) {
    const std::string p = prefix;
    if (norm.size() > p.size() && norm.compare(0, p.size(), p) == 0 && norm[p.size()] == ' ') {
      return rel;
    }
  }
  throw Error(ErrorKind::kUnknownRelation, "'" + field + "'");
}

}  // namespace

VisualResidual parse_vrd_response(const std::string& text) {
  std::optional<std::string> fields[3];
  std::optional<Field> open;
  for (const auto& line : split_lines(text)) {
    if (auto label = match_label(line)) {
      const auto idx = static_cast<std::size_t>(label->first);
      // First occurrence wins; a repeated label ends the open field.
      if (!fields[idx]) {
        fields[idx] = label->second;
        open = label->first;
      } else {
        open.reset();
      }
      continue;
    }
    if (open && *open == Field::kSemantic) {
      const std::string t = trim(line);
      if (!t.empty()) *fields[static_cast<std::size_t>(*open)] += "\n" + t;
    } else if (trim(line).empty()) {
      open.reset();
    }
  }
  if (!fields[0] || !fields[1] || !fields[2]) {
    std::vector<std::string> missing;
    if (!fields[0]) missing.emplace_back("geometric property");
    if (!fields[1]) missing.emplace_back("semantic property");
    if (!fields[2]) missing.emplace_back("description");
    throw Error(ErrorKind::kMalformedResponse, "missing " + join(missing, ", "));
  }

  VisualResidual r;
  r.geometric = parse_geometric_field(*fields[0]);
  r.description = trim(*fields[2]);

  const std::string& sem = *fields[1];
  const std::string sem_lower = lower(sem);
  const std::size_t src = sem_lower.find("source object");
  const std::size_t tgt = sem_lower.find("target object");
  auto after_marker = [&](std::size_t pos) {
    std::size_t start = pos + std::string_view("source object").size();
    if (start < sem.size() && sem[start] == ':') ++start;
    return start;
  };
  if (src != std::string::npos) {
    const std::size_t start = after_marker(src);
    const std::size_t end = (tgt != std::string::npos && tgt > src) ? tgt : sem.size();
    r.semantic.source = parse_descriptor(std::string_view(sem).substr(start, end - start));
  }
  if (tgt != std::string::npos) {
    const std::size_t start = after_marker(tgt);
    const std::size_t end = (src != std::string::npos && src > tgt) ? src : sem.size();
    r.semantic.target = parse_descriptor(std::string_view(sem).substr(start, end - start));
  }
  return r;
}

std::string format_residual_chain(const std::vector<VisualResidual>& residuals) {
  std::ostringstream out;
  for (std::size_t k = 0; k < residuals.size(); ++k) {
    out << "Residual " << (k + 1) << " (" << image_marker(k + 1) << " -> " << image_marker(k + 2)
        << "):\n";
    if (residuals[k].unparsed) {
      out << "(no residual could be extracted for this pair)\n";
    } else {
      out << format_vrd_response(residuals[k]) << "\n";
    }
  }
  return out.str();
}

namespace {

void append_preference_set(std::ostringstream& u) {
  u << "Preference set:\n";
  for (PreferenceLabel label : kAllPreferences) u << "- " << preference_sentence(label) << "\n";
}

}  // namespace

PromptBundle build_prd_prompt(std::span<const Png> images,
                              const std::vector<VisualResidual>& residuals) {
  if (images.size() < 2 || residuals.size() + 1 != images.size()) {
    throw Error(ErrorKind::kInvalidArgument, "preference prompt needs n images and n-1 residuals");
  }
  std::ostringstream u;
  u << "I will give you a set of images " << image_list(1, images.size()) << ".\n";
  append_preference_set(u);
  u << "Let's try to analyze images and infer the user's preference.\n"
    << "Based on previous visual residuals:\n"
    << format_residual_chain(residuals)
    << "Answer with one line of the form \"Preference: <one sentence from the preference "
       "set>\".";

  PromptBundle bundle;
  bundle.system = kSystemPrompt;
  bundle.user = u.str();
  bundle.images.assign(images.begin(), images.end());
  return bundle;
}

PreferenceLabel parse_prd_response(const std::string& text) {
  std::string candidate = text;
  const std::string low = lower(text);
  if (const std::size_t pos = low.rfind("preference:"); pos != std::string::npos) {
    const std::size_t start = pos + std::string_view("preference:").size();
    const std::size_t end = text.find('\n', start);
    candidate = text.substr(start, end == std::string::npos ? std::string::npos : end - start);
  }
  if (auto exact = try_parse_preference(candidate)) return *exact;

  auto earliest_mention = [](const std::string& haystack) -> std::optional<PreferenceLabel> {
    const std::string norm = " " + normalize_text(haystack) + " ";
    std::optional<PreferenceLabel> best;
    std::size_t best_pos = std::string::npos;
    std::size_t best_len = 0;
    for (PreferenceLabel label : kAllPreferences) {
      for (const std::string& needle : {normalize_text(preference_sentence(label)),
                                        normalize_text(preference_token(label))}) {
        const std::size_t pos = norm.find(" " + needle + " ");
        if (pos == std::string::npos) continue;
        if (pos < best_pos || (pos == best_pos && needle.size() > best_len)) {
          best = label;
          best_pos = pos;
          best_len = needle.size();
        }
      }
    }
    return best;
  };
  if (auto found = earliest_mention(candidate)) return *found;
  if (auto found = earliest_mention(text)) return *found;
  throw Error(ErrorKind::kUnknownPreference, "no preference sentence in response");
}

std::vector<VisualResidual> run_vrd_chain(std::span<const Png> images, MllmBackend& backend,
                                          const CovrOptions& options,
                                          std::vector<TranscriptEntry>* transcript) {
  if (images.size() < 2) {
    throw Error(ErrorKind::kInvalidArgument, "residual chain needs at least two images");
  }
  const std::size_t pairs = images.size() - 1;
  std::vector<VisualResidual> residuals(pairs);
  std::vector<std::vector<TranscriptEntry>> logs(pairs);
  std::vector<std::exception_ptr> errors(pairs);

  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t k = next++; k < pairs; k = next++) {
      try {
        BackendRequest request{
            build_vrd_prompt(images[k], images[k + 1], k, options.vocabulary, options.few_shot),
            options.decoding};
        auto parsed = complete_with_retry(backend, request, options.retry, logs[k],
                                          [](const std::string& t) { return parse_vrd_response(t); });
        residuals[k] = parsed ? std::move(*parsed) : VisualResidual::unparsed_sentinel();
      } catch (...) {
        errors[k] = std::current_exception();
      }
    }
  };
  const auto limit = static_cast<std::size_t>(std::max(1, backend.max_concurrency()));
  const std::size_t n_threads = std::min(limit, pairs);
  if (n_threads <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t t = 0; t < n_threads; ++t) pool.emplace_back(worker);
  }

  for (const auto& err : errors) {
    if (err) std::rethrow_exception(err);
  }
  if (transcript != nullptr) {
    for (auto& log : logs) {
      transcript->insert(transcript->end(), log.begin(), log.end());
    }
  }
  return residuals;
}

std::string_view method_token(Method method) {
  switch (method) {
    case Method::kCovr: return "covr";
    case Method::kNaive: return "naive";
    case Method::kL2r: return "l2r";
    case Method::kMdpe: return "mdpe";
  }
  return "";
}

std::string_view method_display_name(Method method) {
  switch (method) {
    case Method::kCovr: return "MLLM-CoVR (Ours)";
    case Method::kNaive: return "MLLM-Naive";
    case Method::kL2r: return "MLLM-L2R";
    case Method::kMdpe: return "MDPE";
  }
  return "";
}

Method parse_method(std::string_view text) {
  const std::string norm = normalize_text(text);
  for (Method m : kAllMethods) {
    if (norm == method_token(m)) return m;
  }
  throw Error(ErrorKind::kInvalidArgument, "unknown method '" + std::string(text) + "'");
}

nlohmann::json inference_to_json(const InferenceResult& result) {
  nlohmann::json j;
  j["method"] = method_token(result.method);
  j["preference"] = result.preference ? nlohmann::json(preference_token(*result.preference))
                                      : nlohmann::json(nullptr);
  if (result.preference) j["preference_sentence"] = preference_sentence(*result.preference);
  j["residuals"] = result.residuals;
  auto ambiguous = nlohmann::json::array();
  for (PreferenceLabel l : result.ambiguous) ambiguous.push_back(preference_token(l));
  j["ambiguous"] = ambiguous;
  auto ranked = nlohmann::json::array();
  for (const auto& [label, score] : result.ranked) {
    ranked.push_back({{"label", preference_token(label)}, {"score", score}});
  }
  j["ranked"] = ranked;
  auto transcript = nlohmann::json::array();
  for (const auto& e : result.transcript) {
    transcript.push_back({{"digest", e.digest}, {"response", e.response}});
  }
  j["transcript"] = transcript;
  if (!result.note.empty()) j["note"] = result.note;
  return j;
}

InferenceResult infer_preference_covr(std::span<const Png> images, MllmBackend& backend,
                                      const CovrOptions& options) {
  InferenceResult result;
  result.method = Method::kCovr;
  result.residuals = run_vrd_chain(images, backend, options, &result.transcript);
  const BackendRequest request{build_prd_prompt(images, result.residuals), options.decoding};
  result.preference = complete_with_retry(backend, request, options.retry, result.transcript,
                                          [](const std::string& t) { return parse_prd_response(t); });
  if (!result.preference) result.note = "preference response could not be parsed";
  return result;
}

}  // namespace vpi
