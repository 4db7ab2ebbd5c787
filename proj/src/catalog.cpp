#include "vpi/catalog.hpp"

#include <array>
#include <map>

namespace vpi {

int Catalog::index_of(std::string_view name) const {
  for (std::size_t i = 0; i < entries.size(); ++i) {
    if (entries[i].name == name) return static_cast<int>(i);
  }
  return -1;
}

namespace {

Catalog make_block_catalog() {
  Catalog c{Task::kBlock, {}};
  for (const char* color : {"red", "green", "blue", "yellow", "orange", "purple"}) {
    c.entries.push_back({std::string(color) + " cube", color, "cube", "block"});
  }
  return c;
}

Catalog make_polygon_catalog() {
  Catalog c{Task::kPolygon, {}};
  for (const char* shape : {"triangle", "star"}) {
    for (const char* color : {"red", "green", "blue"}) {
      c.entries.push_back({std::string(color) + " " + shape, color, shape, "polygon"});
    }
  }
  return c;
}

Catalog make_household_catalog() {
  return Catalog{Task::kHousehold,
                 {
                     {"apple", "red", "sphere", "fruit"},
                     {"orange", "orange", "sphere", "fruit"},
                     {"lemon", "yellow", "sphere", "fruit"},
                     {"lime", "green", "sphere", "fruit"},
                     {"red drink", "red", "cylinder", "beverage"},
                     {"orange drink", "orange", "cylinder", "beverage"},
                     {"yellow drink", "yellow", "cylinder", "beverage"},
                     {"green drink", "green", "cylinder", "beverage"},
                     {"choco bar", "brown", "box", "snack"},
                     {"chips", "yellow", "box", "snack"},
                     {"cookie pack", "red", "box", "snack"},
                     {"cracker box", "orange", "box", "snack"},
                 }};
}

template <typename Key>
bool splits_into_groups(const Catalog& catalog, Key key) {
  std::map<std::string, int> sizes;
  for (const auto& e : catalog.entries) ++sizes[key(e)];
  if (sizes.size() < 2) return false;
  for (const auto& [_, n] : sizes) {
    if (n >= 2) return true;
  }
  return false;
}

}  // namespace

const Catalog& catalog_for(Task task) {
  static const Catalog block = make_block_catalog();
  static const Catalog polygon = make_polygon_catalog();
  static const Catalog household = make_household_catalog();
  switch (task) {
    case Task::kBlock: return block;
    case Task::kPolygon: return polygon;
    case Task::kHousehold: return household;
  }
  return block;
}

std::span<const std::string_view> palette_colors() {
  static constexpr std::array<std::string_view, 8> kColors = {
      "red", "green", "blue", "yellow", "orange", "purple", "white", "brown"};
  return kColors;
}

std::span<const std::string_view> shape_tokens() {
  static constexpr std::array<std::string_view, 6> kShapes = {"cube",   "triangle", "star",
                                                              "sphere", "cylinder", "box"};
  return kShapes;
}

std::vector<PreferenceLabel> applicable_preferences(Task task) {
  const Catalog& catalog = catalog_for(task);
  std::vector<PreferenceLabel> out;
  if (splits_into_groups(catalog, [](const CatalogEntry& e) { return e.color; })) {
    out.push_back(PreferenceLabel::kGroupByColor);
  }
  if (splits_into_groups(catalog, [](const CatalogEntry& e) { return e.shape; })) {
    out.push_back(PreferenceLabel::kGroupByShape);
  }
  if (splits_into_groups(catalog, [](const CatalogEntry& e) { return e.category; })) {
    out.push_back(PreferenceLabel::kGroupByCategory);
  }
  for (PreferenceLabel label : kAllPreferences) {
    if (is_spatial(label)) out.push_back(label);
  }
  return out;
}

}  // namespace vpi
