#pragma once

#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace snowframe::detect {

/// Element tree produced by parse_xml. Character data of an element is the
/// concatenation of its text runs (entities decoded, CDATA kept verbatim).
struct XmlElement {
  std::string name;
  std::vector<std::pair<std::string, std::string>> attributes;
  std::string text;
  std::vector<XmlElement> children;
  int line = 0;
  int column = 0;

  /// First child with the given name, or nullptr.
  const XmlElement* child(std::string_view child_name) const noexcept;
  /// Value of the named attribute, or empty when absent.
  std::string_view attribute(std::string_view attr_name) const noexcept;
};

/// Parses a complete document and returns its root element. Prolog, comments,
/// processing instructions and DOCTYPE declarations are skipped.
/// Throws ParseError carrying the line/column of the first problem.
XmlElement parse_xml(std::string_view document);

}  // namespace snowframe::detect
