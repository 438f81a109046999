#pragma once

#include <filesystem>
#include <memory>
#include <vector>

#include "snowframe/compose/compose.hpp"

namespace snowframe::compose {

/// Opaque stand-in painting: night sky, snowy ground and four faceless snow
/// figures whose heads sit in the slot regions.
Rgba8Frame procedural_background(Size size, const SlotGeometry& geometry);

/// PNG frames of a directory (lexicographic), flattened onto black and
/// resampled to `size`.
std::vector<std::shared_ptr<const Rgba8Frame>> load_background(const std::filesystem::path& dir,
                                                               Size size);

}  // namespace snowframe::compose
