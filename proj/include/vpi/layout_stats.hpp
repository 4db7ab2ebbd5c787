#pragma once

#include <string>
#include <vector>

#include "vpi/scene.hpp"

namespace vpi {

/// Attribute a grouping preference partitions objects by ("color", "shape"
/// or "category" value). Empty for spatial labels.
const std::string& grouping_attribute(const ObjectInstance& obj, PreferenceLabel label);

/// Object indices bucketed by attribute value, in first-appearance order.
std::vector<std::vector<std::size_t>> group_indices(const std::vector<ObjectInstance>& objects,
                                                    PreferenceLabel label);

double population_std(const std::vector<double>& values);
std::vector<double> xs(const std::vector<ObjectInstance>& objects);
std::vector<double> ys(const std::vector<ObjectInstance>& objects);

}  // namespace vpi
