#include "snowframe/runtime/sink.hpp"

#include <cstdio>

#include "snowframe/errors.hpp"
#include "snowframe/png_io.hpp"

namespace snowframe::runtime {

DirSink::DirSink(std::filesystem::path dir) : dir_(std::move(dir)) {}

void DirSink::open() {
  std::error_code ec;
  std::filesystem::create_directories(dir_, ec);
  if (ec || !std::filesystem::is_directory(dir_)) {
    throw IoError("cannot create output directory " + dir_.string());
  }
}

std::string DirSink::file_name(std::uint64_t index) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "frame_%06llu.png", static_cast<unsigned long long>(index));
  return buf;
}

void DirSink::write(const Rgba8Frame& frame, std::uint64_t index) {
  write_png(dir_ / file_name(index), frame);
  ++frames_;
}

}  // namespace snowframe::runtime
