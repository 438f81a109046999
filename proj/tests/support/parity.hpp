#pragma once

#include <algorithm>
#include <string>
#include <vector>

#include "json.hpp"
#include "snowframe/detect/cascade.hpp"
#include "snowframe/detect/detector.hpp"
#include "snowframe/png_io.hpp"
#include "support/test_support.hpp"

namespace snowframe::testing {

inline nlohmann::json corpus_reference() { return nlohmann::json::parse(read_text(fixture("corpus_reference.json"))); }

inline Rect json_rect(const nlohmann::json& a) { return {a[0].get<int>(), a[1].get<int>(), a[2].get<int>(), a[3].get<int>()}; }

/// One-to-one pairing, highest IoU first, keeping pairs with IoU >= min_iou.
inline int matched_pairs(const std::vector<Rect>& reference, const std::vector<Rect>& found, double min_iou) {
  struct Cand {
    double iou;
    std::size_t r, f;
  };
  std::vector<Cand> cands;
  for (std::size_t r = 0; r < reference.size(); ++r)
    for (std::size_t f = 0; f < found.size(); ++f) {
      const double v = iou(reference[r], found[f]);
      if (v >= min_iou) cands.push_back({v, r, f});
    }
  std::stable_sort(cands.begin(), cands.end(), [](const Cand& a, const Cand& b) { return a.iou > b.iou; });
  std::vector<bool> used_r(reference.size()), used_f(found.size());
  int n = 0;
  for (const auto& c : cands) {
    if (used_r[c.r] || used_f[c.f]) continue;
    used_r[c.r] = used_f[c.f] = true;
    ++n;
  }
  return n;
}

inline detect::DetectParams reference_params(const nlohmann::json& ref, int max_faces) {
  detect::DetectParams p;
  p.scale_factor = ref["params"]["scale_factor"].get<double>();
  p.min_neighbors = ref["params"]["min_neighbors"].get<int>();
  const int m = ref["params"]["min_size"].get<int>();
  p.min_size = {m, m};
  p.max_faces = max_faces;
  return p;
}

struct ParityResult {
  int faces = 0;
  int matched = 0;
  int negatives = 0;
  int clean_negatives = 0;
  std::vector<std::string> notes;
};

inline ParityResult corpus_parity(const detect::CascadeModel& model) {
  const auto ref = corpus_reference();
  const detect::DetectParams p = reference_params(ref, 100);
  ParityResult out;
  for (const auto& img : ref["images"]) {
    const std::string file = img["file"].get<std::string>();
    std::vector<Rect> expect, found;
    for (const auto& r : img["reference"]) expect.push_back(json_rect(r));
    for (const auto& d : detect::detect_multiscale(model, to_gray(read_png(fixture("corpus/" + file))), p)) {
      found.push_back(d.rect);
    }
    if (img["kind"] == "negative") {
      ++out.negatives;
      if (found.empty()) ++out.clean_negatives;
      else out.notes.push_back(file + ": " + std::to_string(found.size()) + " detections");
      continue;
    }
    const int m = matched_pairs(expect, found, 0.6);
    out.faces += static_cast<int>(expect.size());
    out.matched += m;
    if (m < static_cast<int>(expect.size())) {
      out.notes.push_back(file + ": " + std::to_string(m) + "/" + std::to_string(expect.size()) + " matched");
    }
  }
  return out;
}

struct SixFaceResult {
  std::size_t count = 0;
  int matched_largest = 0;
  double worst_iou = 1.0;
};

/// Default detector cap on the six-face fixture against the reference's four
/// largest detections.
inline SixFaceResult six_face_cap(const detect::CascadeModel& model) {
  const auto ref = corpus_reference();
  std::vector<Rect> reference;
  for (const auto& r : ref["six_faces"]["reference"]) reference.push_back(json_rect(r));
  std::stable_sort(reference.begin(), reference.end(), [](const Rect& a, const Rect& b) { return a.area() > b.area(); });
  reference.resize(4);
  const auto dets = detect::detect_multiscale(model, to_gray(read_png(fixture("six_faces.png"))), reference_params(ref, 4));
  SixFaceResult out;
  out.count = dets.size();
  std::vector<Rect> found;
  for (const auto& d : dets) found.push_back(d.rect);
  out.matched_largest = matched_pairs(reference, found, 0.9);
  for (const Rect& r : reference) {
    double best = 0.0;
    for (const Rect& f : found) best = std::max(best, iou(r, f));
    out.worst_iou = std::min(out.worst_iou, best);
  }
  return out;
}

}  // namespace snowframe::testing
