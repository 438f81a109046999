#pragma once

#include <string>

namespace snowframe::testing {

// Counts <_> elements that are direct children of <stages> with a plain text
// scan; independent of the XML reader.
inline std::size_t scan_stage_count(const std::string& text) {
  const std::size_t begin = text.find("<stages>");
  const std::size_t end = text.find("</stages>");
  std::size_t count = 0;
  int depth = 0;
  for (std::size_t pos = begin; pos < end;) {
    const std::size_t open = text.find("<_>", pos);
    const std::size_t close = text.find("</_>", pos);
    if (open < close && open < end) {
      if (depth == 0) ++count;
      ++depth;
      pos = open + 3;
    } else if (close < end) {
      --depth;
      pos = close + 4;
    } else {
      break;
    }
  }
  return count;
}

inline std::size_t scan_occurrences(const std::string& text, const std::string& needle) {
  std::size_t n = 0;
  for (std::size_t pos = text.find(needle); pos != std::string::npos;
       pos = text.find(needle, pos + needle.size())) {
    ++n;
  }
  return n;
}

}  // namespace snowframe::testing
