#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "snowframe/detect/cascade.hpp"
#include "snowframe/detect/integral.hpp"
#include "snowframe/geometry.hpp"
#include "snowframe/image.hpp"

namespace snowframe::detect {

struct DetectParams {
  double scale_factor = 1.1;
  /// Stride in model-window pixels; scaled with the window and rounded.
  double step_shift = 2.0;
  /// Window size bounds in image pixels. A zero dimension means unbounded.
  Size min_size{0, 0};
  Size max_size{0, 0};
  int min_neighbors = 3;
  int max_faces = 4;
  /// Similarity tolerance used when grouping raw hits.
  double group_eps = 0.2;
};

/// Throws ValidationError when a field is out of range.
void validate(const DetectParams& params);

struct Detection {
  Rect rect;
  int neighbors = 0;
  std::int64_t score = 0;  // rect area in pixels^2

  friend bool operator==(const Detection&, const Detection&) = default;
};

struct WindowVerdict {
  bool accepted = false;
  /// Stage that rejected the window, or the last stage when accepted.
  std::size_t stage = 0;
  /// Score of that stage.
  double score = 0.0;
  /// Set when the window was rejected for having (near) zero variance.
  bool flat = false;
};

/// Variance floor below which a window is rejected without evaluation.
inline constexpr double kVarianceEpsilon = 1e-6;

/// A cascade with every feature rectangle scaled to one window scale and
/// pre-resolved into integral-table offsets for a given table stride.
class ScaledCascade {
 public:
  ScaledCascade(const CascadeModel& model, double scale, int table_stride);

  int window_width() const noexcept { return window_w_; }
  int window_height() const noexcept { return window_h_; }
  double scale() const noexcept { return scale_; }

  /// Evaluates the window whose top-left corner is at `origin`. The caller
  /// guarantees the window fits inside the table.
  WindowVerdict evaluate(const IntegralPair& ii, Point origin) const noexcept;

  /// Normalized feature value (weighted rect sums / window area) of a feature
  /// at `origin`. Exposed for tests.
  double feature_value(const IntegralPair& ii, Point origin, std::size_t feature) const noexcept;

 private:
  struct Corner4 {
    std::ptrdiff_t a, b, c, d;  // top-left, top-right, bottom-left, bottom-right
    double weight;              // rect weight divided by window area
  };
  struct Node {
    std::uint32_t rect_begin;
    std::uint32_t rect_end;
    double threshold;
    double left;
    double right;
  };
  struct StageRange {
    std::size_t first;
    std::size_t count;
    double threshold;
  };

  double weighted_sum(const std::int64_t* base, std::uint32_t begin,
                      std::uint32_t end) const noexcept;

  double scale_;
  int window_w_;
  int window_h_;
  std::int64_t area_;
  Corner4 window_;
  std::vector<Corner4> rects_;
  std::vector<std::size_t> feature_first_;  // index into rects_, size features+1
  std::vector<Node> nodes_;
  std::vector<StageRange> stages_;
};

/// Scaled window size for `scale`: round(window * scale) in each dimension.
Size scaled_window(const CascadeModel& model, double scale) noexcept;

/// Runs the cascade on one window. Throws BoundsError when the scaled window
/// does not fit the image at `origin`.
WindowVerdict evaluate_window(const CascadeModel& model, const IntegralPair& ii, Point origin,
                              double scale);

/// Sliding-window scan over the scale pyramid s = 1, f, f^2, ... followed by
/// grouping, ranking by area (ties: ascending x, then y) and truncation to
/// params.max_faces. Images smaller than the model window yield no detections.
std::vector<Detection> detect_multiscale(const CascadeModel& model, const GrayImage& img,
                                         const DetectParams& params = {});

/// Raw accepted windows before grouping, in scan order.
std::vector<Rect> scan_windows(const CascadeModel& model, const IntegralPair& ii,
                               const DetectParams& params);

/// Two rectangles are similar when both horizontal edges differ by at most
/// eps * mean width and both vertical edges by at most eps * mean height.
bool similar(const Rect& a, const Rect& b, double eps) noexcept;

/// Partitions `raw` into the transitive closure of `similar`, keeps classes
/// with more than `min_neighbors` members and returns one averaged rectangle
/// per class, ordered by descending neighbors, then ascending x, then y.
std::vector<Detection> group_rectangles(std::span<const Rect> raw, int min_neighbors, double eps);

}  // namespace snowframe::detect
