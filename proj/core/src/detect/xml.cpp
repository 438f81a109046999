#include "snowframe/detect/xml.hpp"

#include <cctype>
#include <charconv>

#include "snowframe/errors.hpp"

namespace snowframe::detect {

const XmlElement* XmlElement::child(std::string_view child_name) const noexcept {
  for (const auto& c : children) {
    if (c.name == child_name) return &c;
  }
  return nullptr;
}

std::string_view XmlElement::attribute(std::string_view attr_name) const noexcept {
  for (const auto& [k, v] : attributes) {
    if (k == attr_name) return v;
  }
  return {};
}

namespace {

bool is_name_start(char c) {
  const auto u = static_cast<unsigned char>(c);
  return std::isalpha(u) || c == '_' || c == ':' || u >= 0x80;
}

bool is_name_char(char c) {
  return is_name_start(c) || std::isdigit(static_cast<unsigned char>(c)) || c == '-' ||
         c == '.';
}

bool is_space(char c) { return c == ' ' || c == '\t' || c == '\n' || c == '\r'; }

class Reader {
 public:
  explicit Reader(std::string_view doc) : doc_(doc) {}

  XmlElement parse_document() {
    skip_misc();
    if (eof()) fail("document has no root element");
    if (peek() != '<') fail("expected '<' at start of root element");
    XmlElement root = parse_element();
    skip_misc();
    if (!eof()) fail("unexpected content after root element");
    return root;
  }

 private:
  [[noreturn]] void fail(const std::string& what) const { throw ParseError(what, line_, col_); }

  bool eof() const { return pos_ >= doc_.size(); }
  char peek(std::size_t ahead = 0) const {
    return pos_ + ahead < doc_.size() ? doc_[pos_ + ahead] : '\0';
  }
  bool starts_with(std::string_view s) const { return doc_.substr(pos_).starts_with(s); }

  void advance(std::size_t n = 1) {
    for (std::size_t i = 0; i < n && pos_ < doc_.size(); ++i, ++pos_) {
      if (doc_[pos_] == '\n') {
        ++line_;
        col_ = 1;
      } else {
        ++col_;
      }
    }
  }

  void expect(std::string_view s) {
    if (!starts_with(s)) fail("expected '" + std::string(s) + "'");
    advance(s.size());
  }

  void skip_space() {
    while (!eof() && is_space(peek())) advance();
  }

  void skip_until(std::string_view terminator, const char* what) {
    const std::size_t end = doc_.find(terminator, pos_);
    if (end == std::string_view::npos) fail(std::string("unterminated ") + what);
    advance(end + terminator.size() - pos_);
  }

  // Whitespace, comments, processing instructions and DOCTYPE outside the root.
  void skip_misc() {
    for (;;) {
      skip_space();
      if (starts_with("<?")) {
        skip_until("?>", "processing instruction");
      } else if (starts_with("<!--")) {
        skip_until("-->", "comment");
      } else if (starts_with("<!DOCTYPE")) {
        skip_until(">", "DOCTYPE declaration");
      } else {
        return;
      }
    }
  }

  std::string parse_name() {
    if (eof() || !is_name_start(peek())) fail("expected a name");
    const std::size_t start = pos_;
    while (!eof() && is_name_char(peek())) advance();
    return std::string(doc_.substr(start, pos_ - start));
  }

  void append_entity(std::string& out) {
    const int line = line_;
    const int col = col_;
    const std::size_t semi = doc_.find(';', pos_);
    if (semi == std::string_view::npos || semi - pos_ > 12) {
      throw ParseError("unterminated entity reference", line, col);
    }
    const std::string_view ent = doc_.substr(pos_ + 1, semi - pos_ - 1);
    advance(semi + 1 - pos_);
    if (ent == "lt") out += '<';
    else if (ent == "gt") out += '>';
    else if (ent == "amp") out += '&';
    else if (ent == "quot") out += '"';
    else if (ent == "apos") out += '\'';
    else if (ent.size() > 1 && ent[0] == '#') {
      unsigned code = 0;
      const bool hex = ent[1] == 'x' || ent[1] == 'X';
      const std::string_view digits = ent.substr(hex ? 2 : 1);
      const auto res = std::from_chars(digits.data(), digits.data() + digits.size(), code,
                                       hex ? 16 : 10);
      if (res.ec != std::errc{} || res.ptr != digits.data() + digits.size()) {
        throw ParseError("bad character reference", line, col);
      }
      // UTF-8 encode.
      if (code < 0x80) {
        out += static_cast<char>(code);
      } else if (code < 0x800) {
        out += static_cast<char>(0xC0 | (code >> 6));
        out += static_cast<char>(0x80 | (code & 0x3F));
      } else if (code < 0x10000) {
        out += static_cast<char>(0xE0 | (code >> 12));
        out += static_cast<char>(0x80 | ((code >> 6) & 0x3F));
        out += static_cast<char>(0x80 | (code & 0x3F));
      } else {
        out += static_cast<char>(0xF0 | (code >> 18));
        out += static_cast<char>(0x80 | ((code >> 12) & 0x3F));
        out += static_cast<char>(0x80 | ((code >> 6) & 0x3F));
        out += static_cast<char>(0x80 | (code & 0x3F));
      }
    } else {
      throw ParseError("unknown entity '&" + std::string(ent) + ";'", line, col);
    }
  }

  std::string parse_attribute_value() {
    const char quote = peek();
    if (quote != '"' && quote != '\'') fail("expected quoted attribute value");
    advance();
    std::string value;
    while (!eof() && peek() != quote) {
      if (peek() == '<') fail("'<' not allowed in attribute value");
      if (peek() == '&') {
        append_entity(value);
      } else {
        value += peek();
        advance();
      }
    }
    if (eof()) fail("unterminated attribute value");
    advance();
    return value;
  }

  XmlElement parse_element() {
    XmlElement el;
    el.line = line_;
    el.column = col_;
    expect("<");
    el.name = parse_name();
    for (;;) {
      const bool had_space = !eof() && is_space(peek());
      skip_space();
      if (eof()) fail("unterminated start tag <" + el.name + ">");
      if (peek() == '/') {
        advance();
        expect(">");
        return el;
      }
      if (peek() == '>') {
        advance();
        break;
      }
      if (!had_space) fail("expected whitespace before attribute");
      std::string key = parse_name();
      skip_space();
      expect("=");
      skip_space();
      el.attributes.emplace_back(std::move(key), parse_attribute_value());
    }

    // Content.
    for (;;) {
      if (eof()) fail("missing end tag </" + el.name + ">");
      const char c = peek();
      if (c == '<') {
        if (starts_with("</")) {
          advance(2);
          const int line = line_;
          const int col = col_;
          const std::string closing = parse_name();
          if (closing != el.name) {
            throw ParseError("mismatched end tag </" + closing + ">, expected </" +
                                 el.name + ">",
                             line, col);
          }
          skip_space();
          expect(">");
          return el;
        }
        if (starts_with("<!--")) {
          skip_until("-->", "comment");
        } else if (starts_with("<![CDATA[")) {
          advance(9);
          const std::size_t end = doc_.find("]]>", pos_);
          if (end == std::string_view::npos) fail("unterminated CDATA section");
          el.text.append(doc_.substr(pos_, end - pos_));
          advance(end + 3 - pos_);
        } else if (starts_with("<?")) {
          skip_until("?>", "processing instruction");
        } else {
          el.children.push_back(parse_element());
        }
      } else if (c == '&') {
        append_entity(el.text);
      } else {
        el.text += c;
        advance();
      }
    }
  }

  std::string_view doc_;
  std::size_t pos_ = 0;
  int line_ = 1;
  int col_ = 1;
};

}  // namespace

XmlElement parse_xml(std::string_view document) { return Reader(document).parse_document(); }

}  // namespace snowframe::detect
