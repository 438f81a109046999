#include "snowframe/version.hpp"

#include <cstdlib>

namespace snowframe {

const char* version() noexcept { return SNOWFRAME_VERSION; }

std::filesystem::path find_data_file(const std::filesystem::path& rel) {
  std::error_code ec;
  if (rel.is_absolute()) return rel;
  const char* env = std::getenv("SNOWFRAME_DATA_DIR");
  for (const char* base : {env, SNOWFRAME_BUILD_DATA_DIR, SNOWFRAME_INSTALL_DATA_DIR}) {
    if (!base || !*base) continue;
    const std::filesystem::path p = std::filesystem::path(base) / rel;
    if (std::filesystem::exists(p, ec)) return p;
  }
  return rel;
}

}  // namespace snowframe
