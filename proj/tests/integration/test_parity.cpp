#include "doctest.h"
#include "support/parity.hpp"

using namespace snowframe;
namespace t = snowframe::testing;

namespace {
const detect::CascadeModel& stock() {
  static const detect::CascadeModel m = detect::load_cascade(t::stock_cascade());
  return m;
}
}  // namespace

TEST_CASE("pairing helper") {
  const std::vector<Rect> ref = {{0, 0, 10, 10}, {100, 100, 10, 10}};
  CHECK(t::matched_pairs(ref, {{0, 0, 10, 10}}, 0.6) == 1);
  CHECK(t::matched_pairs(ref, {{1, 0, 10, 10}, {0, 0, 10, 10}}, 0.6) == 1);
  CHECK(t::matched_pairs(ref, {{5, 5, 10, 10}}, 0.6) == 0);
  CHECK(t::matched_pairs({}, {{5, 5, 10, 10}}, 0.6) == 0);
}

TEST_CASE("detector agrees with the offline reference on the labeled corpus") {
  const t::ParityResult r = t::corpus_parity(stock());
  for (const auto& n : r.notes) MESSAGE(n);
  CHECK(r.faces >= 20);
  CHECK(r.negatives == 10);
  CHECK(r.matched >= 0.9 * r.faces);
  CHECK(r.clean_negatives >= 8);
}

TEST_CASE("six faces in, the four largest out") {
  const t::SixFaceResult r = t::six_face_cap(stock());
  CHECK(r.count == 4);
  CHECK(r.matched_largest == 4);
  CHECK(r.worst_iou >= 0.9);
}
