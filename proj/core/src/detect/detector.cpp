#include "snowframe/detect/detector.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "snowframe/errors.hpp"

namespace snowframe::detect {

namespace {

int round_half_up(double v) noexcept { return static_cast<int>(std::floor(v + 0.5)); }

}  // namespace

void validate(const DetectParams& p) {
  if (!(p.scale_factor > 1.0)) throw ValidationError("scale_factor must be > 1");
  if (!(p.step_shift > 0.0)) throw ValidationError("step_shift must be > 0");
  if (p.min_neighbors < 0) throw ValidationError("min_neighbors must be >= 0");
  if (p.max_faces < 1) throw ValidationError("max_faces must be >= 1");
  if (p.group_eps < 0.0) throw ValidationError("group_eps must be >= 0");
  if (p.min_size.width < 0 || p.min_size.height < 0 || p.max_size.width < 0 ||
      p.max_size.height < 0) {
    throw ValidationError("size bounds must be non-negative");
  }
}

Size scaled_window(const CascadeModel& model, double scale) noexcept {
  return {round_half_up(model.window_width * scale), round_half_up(model.window_height * scale)};
}

ScaledCascade::ScaledCascade(const CascadeModel& model, double scale, int table_stride)
    : scale_(scale) {
  const Size win = scaled_window(model, scale);
  window_w_ = win.width;
  window_h_ = win.height;
  area_ = static_cast<std::int64_t>(window_w_) * window_h_;
  const double inv_area = 1.0 / static_cast<double>(area_);

  const auto corners = [table_stride](int x, int y, int w, int h, double weight) {
    const std::ptrdiff_t s = table_stride;
    return Corner4{y * s + x, y * s + x + w, (y + h) * s + x, (y + h) * s + x + w, weight};
  };
  window_ = corners(0, 0, window_w_, window_h_, 1.0);

  feature_first_.reserve(model.features.size() + 1);
  for (const auto& f : model.features) {
    feature_first_.push_back(rects_.size());
    const std::size_t first = rects_.size();
    std::vector<std::int64_t> areas;
    for (const auto& r : f.rects) {
      int x = round_half_up(r.x * scale);
      int y = round_half_up(r.y * scale);
      int w = std::max(1, round_half_up(r.w * scale));
      int h = std::max(1, round_half_up(r.h * scale));
      x = std::min(x, window_w_ - 1);
      y = std::min(y, window_h_ - 1);
      w = std::min(w, window_w_ - x);
      h = std::min(h, window_h_ - y);
      rects_.push_back(corners(x, y, w, h, r.weight * inv_area));
      areas.push_back(static_cast<std::int64_t>(w) * h);
    }
    // Rounding the scaled rects breaks the zero-sum balance of the feature;
    // re-derive the first weight so a flat window still responds with 0.
    {
      double rest = 0.0;
      for (std::size_t k = 1; k < areas.size(); ++k) rest += rects_[first + k].weight * areas[k];
      rects_[first].weight = -rest / areas[0];
    }
  }
  feature_first_.push_back(rects_.size());

  for (const auto& stage : model.stages) {
    stages_.push_back(StageRange{nodes_.size(), stage.weak.size(), stage.threshold});
    for (const auto& wc : stage.weak) {
      nodes_.push_back(Node{static_cast<std::uint32_t>(feature_first_[wc.feature_index]),
                            static_cast<std::uint32_t>(feature_first_[wc.feature_index + 1]),
                            wc.threshold, wc.left_value, wc.right_value});
    }
  }
}

double ScaledCascade::weighted_sum(const std::int64_t* base, std::uint32_t begin,
                                   std::uint32_t end) const noexcept {
  double v = 0.0;
  for (std::uint32_t i = begin; i < end; ++i) {
    const Corner4& r = rects_[i];
    v += r.weight * static_cast<double>(base[r.d] - base[r.b] - base[r.c] + base[r.a]);
  }
  return v;
}

double ScaledCascade::feature_value(const IntegralPair& ii, Point origin,
                                    std::size_t feature) const noexcept {
  const std::int64_t* base =
      ii.sum.data() + static_cast<std::ptrdiff_t>(origin.y) * ii.stride() + origin.x;
  return weighted_sum(base, static_cast<std::uint32_t>(feature_first_[feature]),
                      static_cast<std::uint32_t>(feature_first_[feature + 1]));
}

WindowVerdict ScaledCascade::evaluate(const IntegralPair& ii, Point origin) const noexcept {
  const std::ptrdiff_t offset = static_cast<std::ptrdiff_t>(origin.y) * ii.stride() + origin.x;
  const std::int64_t* sum = ii.sum.data() + offset;
  const std::int64_t* sq = ii.sqsum.data() + offset;

  const std::int64_t s = sum[window_.d] - sum[window_.b] - sum[window_.c] + sum[window_.a];
  const std::int64_t q = sq[window_.d] - sq[window_.b] - sq[window_.c] + sq[window_.a];
  // area * q - s^2 is exact in 128 bits; it is zero for a flat window.
  const __int128 num = static_cast<__int128>(area_) * q - static_cast<__int128>(s) * s;
  const double variance =
      static_cast<double>(num) / (static_cast<double>(area_) * static_cast<double>(area_));
  if (variance <= kVarianceEpsilon) return WindowVerdict{false, 0, 0.0, true};
  const double norm = std::sqrt(std::max(kVarianceEpsilon, variance));

  double stage_score = 0.0;
  for (std::size_t si = 0; si < stages_.size(); ++si) {
    const StageRange& st = stages_[si];
    stage_score = 0.0;
    for (std::size_t n = st.first; n < st.first + st.count; ++n) {
      const Node& node = nodes_[n];
      const double value = weighted_sum(sum, node.rect_begin, node.rect_end);
      stage_score += value < node.threshold * norm ? node.left : node.right;
    }
    if (stage_score < st.threshold) return WindowVerdict{false, si, stage_score, false};
  }
  return WindowVerdict{true, stages_.size() - 1, stage_score, false};
}

WindowVerdict evaluate_window(const CascadeModel& model, const IntegralPair& ii, Point origin,
                              double scale) {
  const Size win = scaled_window(model, scale);
  if (!(scale > 0.0) || origin.x < 0 || origin.y < 0 || win.width < 1 || win.height < 1 ||
      origin.x + win.width > ii.width || origin.y + win.height > ii.height) {
    throw BoundsError("scaled window does not fit the image at the given origin");
  }
  return ScaledCascade(model, scale, ii.stride()).evaluate(ii, origin);
}

std::vector<Rect> scan_windows(const CascadeModel& model, const IntegralPair& ii,
                               const DetectParams& params) {
  validate(params);
  std::vector<Rect> raw;
  for (double scale = 1.0;; scale *= params.scale_factor) {
    const Size win = scaled_window(model, scale);
    if (win.width > ii.width || win.height > ii.height) break;
    if ((params.max_size.width > 0 && win.width > params.max_size.width) ||
        (params.max_size.height > 0 && win.height > params.max_size.height)) {
      break;
    }
    if (win.width < params.min_size.width || win.height < params.min_size.height) continue;

    const ScaledCascade cascade(model, scale, ii.stride());
    const int stride = std::max(1, round_half_up(params.step_shift * scale));
    for (int y = 0; y + win.height <= ii.height; y += stride) {
      for (int x = 0; x + win.width <= ii.width; x += stride) {
        if (cascade.evaluate(ii, Point{x, y}).accepted) {
          raw.push_back(Rect{x, y, win.width, win.height});
        }
      }
    }
  }
  return raw;
}

std::vector<Detection> detect_multiscale(const CascadeModel& model, const GrayImage& img,
                                         const DetectParams& params) {
  validate(params);
  if (img.width() < model.window_width || img.height() < model.window_height) return {};

  const IntegralPair ii = integral_images(img);
  const std::vector<Rect> raw = scan_windows(model, ii, params);
  std::vector<Detection> out = group_rectangles(raw, params.min_neighbors, params.group_eps);

  const Rect bounds{0, 0, img.width(), img.height()};
  for (auto& d : out) {
    d.rect = intersect(d.rect, bounds);
    d.score = d.rect.area();
  }
  std::erase_if(out, [](const Detection& d) { return d.rect.empty(); });
  std::stable_sort(out.begin(), out.end(), [](const Detection& a, const Detection& b) {
    if (a.score != b.score) return a.score > b.score;
    if (a.rect.x != b.rect.x) return a.rect.x < b.rect.x;
    return a.rect.y < b.rect.y;
  });
  if (out.size() > static_cast<std::size_t>(params.max_faces)) out.resize(params.max_faces);
  return out;
}

bool similar(const Rect& a, const Rect& b, double eps) noexcept {
  const double dx = eps * 0.5 * (a.w + b.w);
  const double dy = eps * 0.5 * (a.h + b.h);
  return std::abs(a.x - b.x) <= dx && std::abs(a.right() - b.right()) <= dx &&
         std::abs(a.y - b.y) <= dy && std::abs(a.bottom() - b.bottom()) <= dy;
}

namespace {

class DisjointSet {
 public:
  explicit DisjointSet(std::size_t n) : parent_(n) { std::iota(parent_.begin(), parent_.end(), 0); }

  std::size_t find(std::size_t i) {
    while (parent_[i] != i) {
      parent_[i] = parent_[parent_[i]];
      i = parent_[i];
    }
    return i;
  }
  void unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a != b) parent_[std::max(a, b)] = std::min(a, b);
  }

 private:
  std::vector<std::size_t> parent_;
};

// round_half_up(sum / n) in integers, so grouping commutes with translation.
int mean_round(std::int64_t sum, std::int64_t n) noexcept {
  const std::int64_t num = 2 * sum + n;
  const std::int64_t den = 2 * n;
  std::int64_t q = num / den;
  if ((num % den != 0) && ((num < 0) != (den < 0))) --q;
  return static_cast<int>(q);
}

}  // namespace

std::vector<Detection> group_rectangles(std::span<const Rect> raw, int min_neighbors, double eps) {
  const std::size_t n = raw.size();
  DisjointSet sets(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      if (similar(raw[i], raw[j], eps)) sets.unite(i, j);
    }
  }

  struct Accum {
    std::int64_t x = 0, y = 0, w = 0, h = 0, count = 0;
  };
  std::vector<Accum> acc(n);
  for (std::size_t i = 0; i < n; ++i) {
    Accum& a = acc[sets.find(i)];
    a.x += raw[i].x;
    a.y += raw[i].y;
    a.w += raw[i].w;
    a.h += raw[i].h;
    ++a.count;
  }

  std::vector<Detection> out;
  for (const Accum& a : acc) {
    if (a.count == 0 || a.count <= min_neighbors) continue;
    Rect r{mean_round(a.x, a.count), mean_round(a.y, a.count), mean_round(a.w, a.count),
           mean_round(a.h, a.count)};
    out.push_back(Detection{r, static_cast<int>(a.count), r.area()});
  }
  std::sort(out.begin(), out.end(), [](const Detection& a, const Detection& b) {
    if (a.neighbors != b.neighbors) return a.neighbors > b.neighbors;
    if (a.rect.x != b.rect.x) return a.rect.x < b.rect.x;
    if (a.rect.y != b.rect.y) return a.rect.y < b.rect.y;
    if (a.rect.w != b.rect.w) return a.rect.w < b.rect.w;
    return a.rect.h < b.rect.h;
  });
  return out;
}

}  // namespace snowframe::detect
