#pragma once

#include <vector>

#include <gtest/gtest.h>

#include "vpi/catalog.hpp"
#include "vpi/error.hpp"
#include "vpi/scene.hpp"

namespace vpi::testing {

/// Scene with the task's full catalog placed at `positions` (one per entry).
inline Scene make_scene(Task task, const std::vector<Point>& positions) {
  const Catalog& catalog = catalog_for(task);
  Scene scene{task, {}};
  for (std::size_t i = 0; i < catalog.entries.size(); ++i) {
    const auto& e = catalog.entries[i];
    scene.objects.push_back({static_cast<int>(i), e.name, e.color, e.shape, e.category,
                             positions.at(i)});
  }
  return scene;
}

/// Catalog entries laid out on a coarse grid, well separated.
inline Scene grid_scene(Task task) {
  const std::size_t n = catalog_for(task).entries.size();
  std::vector<Point> pts;
  for (std::size_t i = 0; i < n; ++i) {
    pts.push_back({0.1 + 0.2 * static_cast<double>(i % 5), 0.1 + 0.2 * static_cast<double>(i / 5)});
  }
  return make_scene(task, pts);
}

template <typename F>
ErrorKind kind_of(F&& f) {
  try {
    f();
  } catch (const Error& err) {
    return err.kind();
  }
  ADD_FAILURE() << "expected an Error";
  return ErrorKind::kInvalidArgument;
}

}  // namespace vpi::testing
