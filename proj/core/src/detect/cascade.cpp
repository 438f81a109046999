#include "snowframe/detect/cascade.hpp"

#include <cctype>
#include <charconv>
#include <fstream>
#include <iterator>
#include <numeric>
#include <string>

#include "snowframe/detect/xml.hpp"
#include "snowframe/errors.hpp"

namespace snowframe::detect {

std::size_t CascadeModel::weak_count() const noexcept {
  return std::accumulate(stages.begin(), stages.end(), std::size_t{0},
                         [](std::size_t n, const Stage& s) { return n + s.weak.size(); });
}

namespace {

std::string where(const XmlElement& el) {
  return " at line " + std::to_string(el.line) + ", column " + std::to_string(el.column);
}

// Splits element text into whitespace-separated decimal literals.
std::vector<double> numbers(const XmlElement& el) {
  std::vector<double> out;
  const std::string& s = el.text;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
    if (i == s.size()) break;
    std::size_t j = i;
    while (j < s.size() && !std::isspace(static_cast<unsigned char>(s[j]))) ++j;
    double v = 0.0;
    const char* first = s.data() + i;
    const char* last = s.data() + j;
    if (*first == '+') ++first;
    const auto res = std::from_chars(first, last, v);
    if (res.ec != std::errc{} || res.ptr != last) {
      throw ValidationError("<" + el.name + "> holds non-numeric token '" +
                            s.substr(i, j - i) + "'" + where(el));
    }
    out.push_back(v);
    i = j;
  }
  return out;
}

const XmlElement& required(const XmlElement& parent, std::string_view name) {
  const XmlElement* c = parent.child(name);
  if (!c) {
    throw ValidationError("<" + parent.name + "> is missing <" + std::string(name) + ">" +
                          where(parent));
  }
  return *c;
}

double scalar(const XmlElement& el) {
  const auto v = numbers(el);
  if (v.size() != 1) {
    throw ValidationError("<" + el.name + "> must hold exactly one number" + where(el));
  }
  return v.front();
}

int integer(const XmlElement& el) {
  const double v = scalar(el);
  if (v != static_cast<double>(static_cast<int>(v))) {
    throw ValidationError("<" + el.name + "> must be an integer" + where(el));
  }
  return static_cast<int>(v);
}

std::string trimmed(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

const XmlElement& find_cascade_root(const XmlElement& root) {
  if (root.name == "cascade") return root;
  if (root.name == "opencv_storage") {
    for (const auto& c : root.children) {
      if (c.name == "cascade" || c.attribute("type_id") == "opencv-cascade-classifier") {
        return c;
      }
    }
    for (const auto& c : root.children) {
      if (c.attribute("type_id") == "opencv-haar-classifier") {
        throw UnsupportedStructureError(
            "legacy haar-classifier layout <" + c.name +
            "> is not supported; convert it to the <cascade> layout");
      }
    }
  }
  throw UnsupportedStructureError("document root <" + root.name +
                                  "> does not contain a <cascade> element");
}

Stage parse_stage(const XmlElement& el, std::size_t stage_index) {
  Stage stage;
  stage.threshold = scalar(required(el, "stageThreshold"));
  const XmlElement& weak_list = required(el, "weakClassifiers");
  for (const auto& w : weak_list.children) {
    if (w.name != "_") continue;
    const auto nodes = numbers(required(w, "internalNodes"));
    const auto leaves = numbers(required(w, "leafValues"));
    // A stump is exactly one internal node "0 -1 featureIndex threshold" with
    // two leaves. Anything else is a tree or a categorical (LBP) split.
    if (nodes.size() != 4 || leaves.size() != 2 || nodes[0] != 0.0 || nodes[1] != -1.0) {
      throw UnsupportedStructureError(
          "stage " + std::to_string(stage_index) + " weak classifier " +
          std::to_string(stage.weak.size()) + " is not a stump (internal node count " +
          std::to_string(nodes.size() / 4) + ")" + where(w));
    }
    if (nodes[2] < 0 || nodes[2] != static_cast<double>(static_cast<std::size_t>(nodes[2]))) {
      throw ValidationError("invalid feature index in internalNodes" + where(w));
    }
    stage.weak.push_back(WeakClassifier{static_cast<std::size_t>(nodes[2]), nodes[3],
                                        leaves[0], leaves[1]});
  }
  if (const XmlElement* mwc = el.child("maxWeakCount")) {
    if (static_cast<std::size_t>(integer(*mwc)) != stage.weak.size()) {
      throw ValidationError("stage " + std::to_string(stage_index) + " declares maxWeakCount " +
                            trimmed(mwc->text) + " but holds " +
                            std::to_string(stage.weak.size()) + " weak classifiers");
    }
  }
  return stage;
}

HaarFeature parse_feature(const XmlElement& el, std::size_t feature_index) {
  HaarFeature f;
  if (const XmlElement* t = el.child("tilted")) {
    const std::string v = trimmed(t->text);
    if (v != "0") {
      throw UnsupportedFeatureError(
          "feature " + std::to_string(feature_index) + " is tilted; only upright features are supported",
          feature_index);
    }
  }
  for (const auto& r : required(el, "rects").children) {
    if (r.name != "_") continue;
    const auto v = numbers(r);
    if (v.size() != 5) {
      throw ValidationError("feature " + std::to_string(feature_index) +
                            " rect must be 'x y w h weight'" + where(r));
    }
    for (int k = 0; k < 4; ++k) {
      if (v[k] != static_cast<double>(static_cast<int>(v[k]))) {
        throw ValidationError("feature " + std::to_string(feature_index) +
                              " rect coordinates must be integers" + where(r));
      }
    }
    f.rects.push_back(WeightedRect{static_cast<int>(v[0]), static_cast<int>(v[1]),
                                   static_cast<int>(v[2]), static_cast<int>(v[3]), v[4]});
  }
  return f;
}

}  // namespace

void validate(const CascadeModel& m) {
  if (m.window_width < 4 || m.window_height < 4) {
    throw ValidationError("model window must be at least 4x4, got " +
                          std::to_string(m.window_width) + "x" + std::to_string(m.window_height));
  }
  if (m.stages.empty()) throw ValidationError("cascade has no stages");
  for (std::size_t fi = 0; fi < m.features.size(); ++fi) {
    const HaarFeature& f = m.features[fi];
    if (f.tilted) {
      throw UnsupportedFeatureError("feature " + std::to_string(fi) + " is tilted", fi);
    }
    if (f.rects.size() < 2 || f.rects.size() > 3) {
      throw ValidationError("feature " + std::to_string(fi) + " has " +
                            std::to_string(f.rects.size()) + " rects; expected 2 or 3");
    }
    for (const auto& r : f.rects) {
      if (r.x < 0 || r.y < 0 || r.w < 1 || r.h < 1 || r.x + r.w > m.window_width ||
          r.y + r.h > m.window_height) {
        throw ValidationError("feature " + std::to_string(fi) +
                              " has a rect outside the model window");
      }
    }
  }
  for (std::size_t si = 0; si < m.stages.size(); ++si) {
    const Stage& s = m.stages[si];
    if (s.weak.empty()) {
      throw ValidationError("stage " + std::to_string(si) + " has no weak classifiers");
    }
    for (const auto& w : s.weak) {
      if (w.feature_index >= m.features.size()) {
        throw ValidationError("stage " + std::to_string(si) + " references feature " +
                              std::to_string(w.feature_index) + " but only " +
                              std::to_string(m.features.size()) + " features exist");
      }
    }
  }
}

CascadeModel parse_cascade(std::string_view xml) {
  const XmlElement doc = parse_xml(xml);
  const XmlElement& root = find_cascade_root(doc);

  const std::string stage_type = trimmed(required(root, "stageType").text);
  if (stage_type != "BOOST") {
    throw UnsupportedStructureError("stageType '" + stage_type + "' is not supported");
  }
  const std::string feature_type = trimmed(required(root, "featureType").text);
  if (feature_type != "HAAR") {
    throw UnsupportedStructureError("featureType '" + feature_type + "' is not supported");
  }

  CascadeModel model;
  model.window_height = integer(required(root, "height"));
  model.window_width = integer(required(root, "width"));

  for (const auto& s : required(root, "stages").children) {
    if (s.name == "_") model.stages.push_back(parse_stage(s, model.stages.size()));
  }
  if (const XmlElement* n = root.child("stageNum")) {
    if (static_cast<std::size_t>(integer(*n)) != model.stages.size()) {
      throw ValidationError("stageNum " + trimmed(n->text) + " does not match the " +
                            std::to_string(model.stages.size()) + " stages present");
    }
  }
  for (const auto& f : required(root, "features").children) {
    if (f.name == "_") model.features.push_back(parse_feature(f, model.features.size()));
  }
  validate(model);
  return model;
}

CascadeModel load_cascade(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open cascade file " + path.string());
  const std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return parse_cascade(text);
}

}  // namespace snowframe::detect
