#include <string>

#include "doctest.h"
#include "snowframe/detect/cascade.hpp"
#include "snowframe/detect/xml.hpp"
#include "snowframe/errors.hpp"
#include "support/cascade_scan.hpp"
#include "support/test_support.hpp"

using namespace snowframe;
using namespace snowframe::detect;
namespace t = snowframe::testing;

namespace {

using snowframe::testing::scan_occurrences;
using snowframe::testing::scan_stage_count;

}  // namespace

TEST_CASE("xml reader handles prolog, comments, attributes and entities") {
  const auto root = parse_xml(
      "<?xml version=\"1.0\"?>\n<!-- c -->\n<a k='v &amp; w'><b>1 &lt; 2</b><!--x--><c/>"
      "<d><![CDATA[<raw>]]></d></a>\n");
  CHECK(root.name == "a");
  CHECK(root.attribute("k") == "v & w");
  REQUIRE(root.children.size() == 3);
  CHECK(root.child("b")->text == "1 < 2");
  CHECK(root.child("c")->children.empty());
  CHECK(root.child("d")->text == "<raw>");
  CHECK(root.child("missing") == nullptr);
}

TEST_CASE("xml reader reports line and column of errors") {
  try {
    parse_xml("<a>\n  <b>text</c>\n</a>");
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(e.line() == 2);
    CHECK(e.column() == 12);
  }
  CHECK_THROWS_AS(parse_xml(""), ParseError);
  CHECK_THROWS_AS(parse_xml("<a>"), ParseError);
  CHECK_THROWS_AS(parse_xml("<a></a><b/>"), ParseError);
  CHECK_THROWS_AS(parse_xml("<a x=1/>"), ParseError);
  CHECK_THROWS_AS(parse_xml("<a>&bogus;</a>"), ParseError);
}

TEST_CASE("hand-built single-stump cascade") {
  const CascadeModel m = load_cascade(t::fixture("cascades/one_stump.xml"));
  CHECK(m.window_width == 24);
  CHECK(m.window_height == 24);
  REQUIRE(m.stages.size() == 1);
  REQUIRE(m.stages[0].weak.size() == 1);
  REQUIRE(m.features.size() == 1);
  CHECK(m.stages[0].threshold == -1.5);
  const WeakClassifier& w = m.stages[0].weak[0];
  CHECK(w.feature_index == 0);
  CHECK(w.threshold == 0.125);
  CHECK(w.left_value == -2.0);
  CHECK(w.right_value == 1.0);
  REQUIRE(m.features[0].rects.size() == 2);
  CHECK(m.features[0].rects[1].weight == 2.0);
  CHECK(m.features[0].rects[1].w == 12);
}

TEST_CASE("bare <cascade> root and explicit tilted=0 are accepted") {
  const CascadeModel m = load_cascade(t::fixture("cascades/bare_root.xml"));
  CHECK(m.window_width == 8);
  CHECK(m.stages.size() == 2);
  CHECK(m.weak_count() == 3);
  CHECK(m.features.size() == 2);
  CHECK(m.stages[1].weak[0].left_value == 1.0);
}

TEST_CASE("stock frontal-face cascade matches a text scan of the file") {
  const std::string text = t::read_text(t::stock_cascade());
  const CascadeModel m = parse_cascade(text);
  CHECK(m.stages.size() == scan_stage_count(text));
  CHECK(m.features.size() == scan_occurrences(text, "<rects>"));
  CHECK(m.weak_count() == scan_occurrences(text, "<internalNodes>"));
  CHECK(m.window_width == 24);
  CHECK(m.window_height == 24);
}

TEST_CASE("the alt stump cascade also loads") {
  const std::string text = t::read_text(t::data("cascades/haarcascade_frontalface_alt.xml"));
  const CascadeModel m = parse_cascade(text);
  CHECK(m.stages.size() == scan_stage_count(text));
  CHECK(m.window_width == 20);
}

TEST_CASE("decimal literals are parsed exactly") {
  const CascadeModel m = load_cascade(t::stock_cascade());
  // First weak classifier of the stock file: "0 -1 0 -3.1511999666690826e-02".
  CHECK(m.stages[0].weak[0].threshold == -3.1511999666690826e-02);
  CHECK(m.stages[0].threshold == -5.0425500869750977e+00);
}

TEST_CASE("rejections") {
  SUBCASE("tilted feature names its index") {
    try {
      load_cascade(t::fixture("cascades/tilted.xml"));
      FAIL("expected UnsupportedFeatureError");
    } catch (const UnsupportedFeatureError& e) {
      CHECK(e.feature_index() == 0);
    }
  }
  SUBCASE("tree weak classifier") {
    CHECK_THROWS_AS(load_cascade(t::fixture("cascades/tree_node.xml")), UnsupportedStructureError);
    CHECK_THROWS_AS(load_cascade(t::data("cascades/haarcascade_frontalface_alt2.xml")),
                    UnsupportedStructureError);
  }
  SUBCASE("dangling feature index") {
    CHECK_THROWS_AS(load_cascade(t::fixture("cascades/dangling_feature.xml")), ValidationError);
  }
  SUBCASE("rect outside the model window") {
    CHECK_THROWS_AS(load_cascade(t::fixture("cascades/rect_outside.xml")), ValidationError);
  }
  SUBCASE("malformed xml carries a position") {
    try {
      load_cascade(t::fixture("cascades/malformed.xml"));
      FAIL("expected ParseError");
    } catch (const ParseError& e) {
      CHECK(e.line() == 8);
    }
  }
  SUBCASE("wrong feature type") {
    CHECK_THROWS_AS(parse_cascade("<cascade><stageType>BOOST</stageType><featureType>LBP</featureType>"
                                  "</cascade>"),
                    UnsupportedStructureError);
  }
  SUBCASE("missing file") {
    CHECK_THROWS_AS(load_cascade("/nonexistent/cascade.xml"), IoError);
  }
}
