#pragma once

#include <array>
#include <memory>
#include <optional>
#include <utility>
#include <vector>

#include "snowframe/geometry.hpp"
#include "snowframe/image.hpp"

namespace snowframe::compose {

inline constexpr int kFigureCount = 4;

inline constexpr int kBackgroundZ = 0;
inline constexpr int kSpriteBaseZ = 10;
inline constexpr int kSnowZ = 100;

/// One 2D layer. The source must be premultiplied; the mask, when present,
/// has the source's dimensions and scales the source alpha.
struct Layer {
  int z = 0;
  std::shared_ptr<const Rgba8Frame> source;
  Rect dst_rect;
  double opacity = 1.0;
  std::shared_ptr<const GrayImage> mask;
};

void validate(const Layer& layer);

struct Scene {
  Size output;
  std::vector<Layer> layers;
};

void validate(const Scene& scene);

/// Head regions of the four painted figures, in output pixels.
struct SlotGeometry {
  std::array<Rect, kFigureCount> regions{};

  friend bool operator==(const SlotGeometry&, const SlotGeometry&) = default;
};

void validate(const SlotGeometry& geometry, Size output);

/// Default layout: four square head regions spread across the canvas,
/// proportional to the output size.
SlotGeometry default_slot_geometry(Size output);

/// Blends the layers back to front over opaque black (ascending z, ties by
/// list position). `workers` > 1 splits rows across threads; the result does
/// not depend on it.
Rgba8Frame composite(const Scene& scene, int workers = 1);

/// Blends one layer into `dst` in place.
void draw_layer(Rgba8Frame& dst, const Layer& layer);

/// Cuts the face region (expanded by `padding` per side, clamped to the
/// camera) and bakes in an elliptical alpha mask whose outer `feather`
/// fraction ramps linearly to zero.
Rgba8Frame extract_face_sprite(const Rgba8Frame& camera, const Rect& face, double padding,
                               double feather);

/// Region that extract_face_sprite copies from.
Rect sprite_source_region(Size camera, const Rect& face, double padding);

/// Alpha of the feathered ellipse inscribed in a width x height box.
GrayImage ellipse_mask(int width, int height, double feather);

using SpriteList = std::vector<std::pair<int, std::shared_ptr<const Rgba8Frame>>>;

/// Background at z 0, sprites at 10 + slot inside their regions, snow at 100.
Scene build_scene(std::shared_ptr<const Rgba8Frame> background, const SpriteList& sprites,
                  const SlotGeometry& geometry, std::shared_ptr<const Rgba8Frame> snow,
                  Size output);

}  // namespace snowframe::compose
