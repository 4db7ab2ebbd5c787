#pragma once

#include <optional>
#include <string>
#include <vector>

#include "vpi/error.hpp"
#include "vpi/residual.hpp"

namespace vpi::testing {

inline constexpr const char* kSampleResponse =
    "geometric property: in_front_of\n"
    "semantic property: source object: apple, red, sphere,\n"
    "target object: orange drink, orange, cylinder\n"
    "description: Move the apple in front of the orange drink.";

inline VisualResidual sample_residual() {
  VisualResidual r;
  r.geometric = GeometricRelation::kInFrontOf;
  r.semantic.source = {"apple", "red", "sphere"};
  r.semantic.target = {"orange drink", "orange", "cylinder"};
  r.description = "Move the apple in front of the orange drink.";
  return r;
}

struct ParserFixture {
  std::string name;
  std::string text;
  /// Unset when the text must parse to sample_residual().
  std::optional<ErrorKind> error;
};

inline std::vector<ParserFixture> parser_fixtures() {
  const std::string geo = "geometric property: in_front_of";
  const std::string sem =
      "semantic property: source object: apple, red, sphere,\n"
      "target object: orange drink, orange, cylinder";
  const std::string desc = "description: Move the apple in front of the orange drink.";
  std::vector<ParserFixture> f;
  f.push_back({"canonical", kSampleResponse, std::nullopt});
  f.push_back({"reordered", desc + "\n" + sem + "\n" + geo, std::nullopt});
  f.push_back({"semantic_last", geo + "\n" + desc + "\n" + sem, std::nullopt});
  f.push_back({"upper_case_labels",
               "GEOMETRIC PROPERTY: in_front_of\n"
               "Semantic Property: source object: apple, red, sphere,\n"
               "target object: orange drink, orange, cylinder\n"
               "DESCRIPTION: Move the apple in front of the orange drink.",
               std::nullopt});
  f.push_back({"upper_case_relation",
               "geometric property: IN_FRONT_OF\n" + sem + "\n" + desc, std::nullopt});
  f.push_back({"dash_bullets", "- " + geo + "\n- " + sem + "\n- " + desc, std::nullopt});
  f.push_back({"bold_labels",
               "**Geometric property**: in_front_of\n"
               "**Semantic property**: source object: apple, red, sphere,\n"
               "target object: orange drink, orange, cylinder\n"
               "**Description**: Move the apple in front of the orange drink.",
               std::nullopt});
  f.push_back({"numbered", "1. " + geo + "\n2) " + sem + "\n3. " + desc, std::nullopt});
  f.push_back({"unicode_bullets",
               "\xE2\x80\xA2 " + geo + "\n\xE2\x80\xA2 " + sem + "\n\xE2\x80\xA2 " + desc,
               std::nullopt});
  f.push_back({"markdown_headers", "### " + geo + "\n### " + sem + "\n### " + desc, std::nullopt});
  f.push_back({"crlf", geo + "\r\n" + "semantic property: source object: apple, red, sphere,\r\n"
                           "target object: orange drink, orange, cylinder\r\n" + desc,
               std::nullopt});
  f.push_back({"leading_prose",
               "Sure! Comparing the two images carefully.\n\n" + std::string(kSampleResponse),
               std::nullopt});
  f.push_back({"trailing_prose",
               std::string(kSampleResponse) + "\n\nLet me know if you need anything else.",
               std::nullopt});
  f.push_back({"code_fence", "```\n" + std::string(kSampleResponse) + "\n```", std::nullopt});
  f.push_back({"relation_phrase", "geometric property: in front of\n" + sem + "\n" + desc,
               std::nullopt});
  f.push_back({"relation_with_prose",
               "geometric property: in_front_of (the apple now sits nearer the camera)\n" + sem +
                   "\n" + desc,
               std::nullopt});
  f.push_back({"semantic_one_line",
               geo + "\nsemantic property: source object: apple, red, sphere, target object: "
                     "orange drink, orange, cylinder\n" + desc,
               std::nullopt});
  f.push_back({"space_before_colon",
               "geometric property : in_front_of\n"
               "semantic property : source object: apple, red, sphere,\n"
               "target object: orange drink, orange, cylinder\n"
               "description : Move the apple in front of the orange drink.",
               std::nullopt});
  f.push_back({"short_labels",
               "geometric: in_front_of\n"
               "semantic: source object: apple, red, sphere,\n"
               "target object: orange drink, orange, cylinder\n"
               "description: Move the apple in front of the orange drink.",
               std::nullopt});
  f.push_back({"duplicate_label_first_wins",
               std::string(kSampleResponse) + "\ngeometric property: left_of", std::nullopt});
  f.push_back({"indented", "   " + geo + "\n   " + sem + "\n   " + desc, std::nullopt});

  f.push_back({"missing_geometric", sem + "\n" + desc, ErrorKind::kMalformedResponse});
  f.push_back({"missing_semantic", geo + "\n" + desc, ErrorKind::kMalformedResponse});
  f.push_back({"missing_description", geo + "\n" + sem, ErrorKind::kMalformedResponse});
  f.push_back({"empty", "", ErrorKind::kMalformedResponse});
  f.push_back({"prose_only", "The apple moved closer to the drink.",
               ErrorKind::kMalformedResponse});
  f.push_back({"unknown_relation", "geometric property: above\n" + sem + "\n" + desc,
               ErrorKind::kUnknownRelation});
  f.push_back({"diagonal_relation", "geometric property: diagonally across\n" + sem + "\n" + desc,
               ErrorKind::kUnknownRelation});
  f.push_back({"empty_relation", "geometric property:\n" + sem + "\n" + desc,
               ErrorKind::kUnknownRelation});
  return f;
}

}  // namespace vpi::testing
