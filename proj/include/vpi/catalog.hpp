#pragma once

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "vpi/scene.hpp"

namespace vpi {

struct CatalogEntry {
  std::string name;
  std::string color;
  std::string shape;
  std::string category;
};

struct Catalog {
  Task task = Task::kBlock;
  std::vector<CatalogEntry> entries;

  /// Index of the entry with this name, or -1.
  int index_of(std::string_view name) const;
};

/// Fixed per-task object sets. Object ids in generated scenes equal the
/// entry index.
const Catalog& catalog_for(Task task);

std::span<const std::string_view> palette_colors();
std::span<const std::string_view> shape_tokens();

/// Preferences a generator can demonstrate for this task. Grouping labels
/// are included only when the attribute splits the catalog into at least two
/// groups with one of them holding two or more members.
std::vector<PreferenceLabel> applicable_preferences(Task task);

}  // namespace vpi
