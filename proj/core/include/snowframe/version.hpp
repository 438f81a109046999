#pragma once

#include <filesystem>
#include <string>

namespace snowframe {

/// Library version, e.g. "0.3.0".
const char* version() noexcept;

/// Locates a bundled data file (cascades/..., faces/...). Searches
/// $SNOWFRAME_DATA_DIR, the source tree the library was built from, then the
/// install prefix. Returns the first candidate that exists, or `rel` as is.
std::filesystem::path find_data_file(const std::filesystem::path& rel);

}  // namespace snowframe
