#pragma once

#include <cstddef>
#include <filesystem>
#include <string_view>
#include <vector>

namespace snowframe::detect {

/// Rectangle of a Haar feature, in model-window units.
struct WeightedRect {
  int x = 0;
  int y = 0;
  int w = 0;
  int h = 0;
  double weight = 0.0;
};

/// Upright Haar feature with two or three weighted rectangles.
struct HaarFeature {
  std::vector<WeightedRect> rects;
  bool tilted = false;
};

/// Decision stump: left_value when the normalized feature value is below
/// threshold, right_value otherwise.
struct WeakClassifier {
  std::size_t feature_index = 0;
  double threshold = 0.0;
  double left_value = 0.0;
  double right_value = 0.0;
};

struct Stage {
  double threshold = 0.0;
  std::vector<WeakClassifier> weak;
};

/// Boosted Haar cascade. Immutable once parsed; safe to share across threads.
struct CascadeModel {
  int window_width = 0;
  int window_height = 0;
  std::vector<Stage> stages;
  std::vector<HaarFeature> features;

  std::size_t weak_count() const noexcept;
};

/// Parses the cascade XML interchange format (stageType BOOST, featureType
/// HAAR, stump weak classifiers). The root may be <cascade> itself or the
/// <opencv_storage> wrapper the stock files use.
///
/// Throws ParseError for malformed XML, UnsupportedFeatureError for tilted
/// features, UnsupportedStructureError for non-stump classifiers or other
/// stage/feature types, and ValidationError for inconsistent content.
CascadeModel parse_cascade(std::string_view xml);

/// Reads and parses a cascade file; IoError if the file cannot be read.
CascadeModel load_cascade(const std::filesystem::path& path);

/// Checks every structural invariant; throws ValidationError on the first
/// violation. parse_cascade already calls this.
void validate(const CascadeModel& model);

}  // namespace snowframe::detect
