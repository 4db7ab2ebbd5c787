#pragma once

#include <optional>
#include <span>
#include <string>
#include <string_view>

#include "vpi/residual.hpp"
#include "vpi/scene.hpp"

namespace vpi {

struct ResidualScore {
  bool semantic = false;
  bool geometric = false;
  bool description = false;

  int matches() const { return int{semantic} + int{geometric} + int{description}; }
  double fraction() const { return matches() / 3.0; }
};

/// Lowercase, separators to spaces, "_shaped"/"-shaped" suffix dropped.
std::string normalize_attribute(std::string_view token);

/// Lowercase, punctuation dropped, articles dropped, "behind of" -> "behind".
std::string canonicalize_description(std::string_view text);

/// Element-wise comparison; an unparsed prediction scores 0/3.
ResidualScore score_residual(const VisualResidual& predicted, const VisualResidual& truth);

/// Mean per-pair match fraction. Throws kLengthMismatch or kEmptyInput.
double sr_vrd(std::span<const VisualResidual> predicted, std::span<const VisualResidual> truth);

/// Fraction of exact label matches; an empty prediction (ambiguous or
/// unparseable) never matches. Throws kLengthMismatch or kEmptyInput.
double sr_prd(std::span<const std::optional<PreferenceLabel>> predicted,
              std::span<const PreferenceLabel> truth);

}  // namespace vpi
