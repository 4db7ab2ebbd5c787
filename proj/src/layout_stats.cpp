#include "vpi/layout_stats.hpp"

#include <cmath>
#include <map>

namespace vpi {

const std::string& grouping_attribute(const ObjectInstance& obj, PreferenceLabel label) {
  static const std::string kNone;
  switch (label) {
    case PreferenceLabel::kGroupByColor: return obj.color;
    case PreferenceLabel::kGroupByShape: return obj.shape;
    case PreferenceLabel::kGroupByCategory: return obj.category;
    default: return kNone;
  }
}

std::vector<std::vector<std::size_t>> group_indices(const std::vector<ObjectInstance>& objects,
                                                    PreferenceLabel label) {
  std::vector<std::vector<std::size_t>> groups;
  std::map<std::string, std::size_t> slot;
  for (std::size_t i = 0; i < objects.size(); ++i) {
    const auto& key = grouping_attribute(objects[i], label);
    auto [it, inserted] = slot.try_emplace(key, groups.size());
    if (inserted) groups.emplace_back();
    groups[it->second].push_back(i);
  }
  return groups;
}

double population_std(const std::vector<double>& values) {
  if (values.empty()) return 0.0;
  double mean = 0.0;
  for (double v : values) mean += v;
  mean /= static_cast<double>(values.size());
  double var = 0.0;
  for (double v : values) var += (v - mean) * (v - mean);
  return std::sqrt(var / static_cast<double>(values.size()));
}

std::vector<double> xs(const std::vector<ObjectInstance>& objects) {
  std::vector<double> out;
  out.reserve(objects.size());
  for (const auto& o : objects) out.push_back(o.position.x);
  return out;
}

std::vector<double> ys(const std::vector<ObjectInstance>& objects) {
  std::vector<double> out;
  out.reserve(objects.size());
  for (const auto& o : objects) out.push_back(o.position.y);
  return out;
}

}  // namespace vpi
