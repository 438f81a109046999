#include "snowframe/png_io.hpp"

#include <png.h>

#include <fstream>
#include <iterator>

#include "snowframe/errors.hpp"

namespace snowframe {

namespace {

struct ImageGuard {
  png_image* image;
  ~ImageGuard() { png_image_free(image); }
};

}  // namespace

Rgba8Frame decode_png(std::span<const std::uint8_t> bytes) {
  png_image image{};
  image.version = PNG_IMAGE_VERSION;
  ImageGuard guard{&image};
  if (!png_image_begin_read_from_memory(&image, bytes.data(), bytes.size())) {
    throw IoError(std::string("png: ") + image.message);
  }
  image.format = PNG_FORMAT_RGBA;
  if (image.width == 0 || image.height == 0) throw IoError("png: empty image");
  Rgba8Frame frame(static_cast<int>(image.width), static_cast<int>(image.height), false);
  if (!png_image_finish_read(&image, nullptr, frame.data(), 0, nullptr)) {
    throw IoError(std::string("png: ") + image.message);
  }
  return frame;
}

Rgba8Frame read_png(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                  std::istreambuf_iterator<char>());
  try {
    return decode_png(bytes);
  } catch (const IoError& e) {
    throw IoError(path.string() + ": " + e.what());
  }
}

std::vector<std::uint8_t> encode_png(const Rgba8Frame& frame, bool fast) {
  png_image image{};
  image.version = PNG_IMAGE_VERSION;
  image.width = static_cast<png_uint_32>(frame.width());
  image.height = static_cast<png_uint_32>(frame.height());
  image.format = PNG_FORMAT_RGBA;
  image.flags = fast ? PNG_IMAGE_FLAG_FAST : 0;
  ImageGuard guard{&image};

  png_alloc_size_t size = 0;
  if (!png_image_write_to_memory(&image, nullptr, &size, 0, frame.data(), 0, nullptr)) {
    throw IoError(std::string("png: ") + image.message);
  }
  std::vector<std::uint8_t> out(size);
  if (!png_image_write_to_memory(&image, out.data(), &size, 0, frame.data(), 0, nullptr)) {
    throw IoError(std::string("png: ") + image.message);
  }
  out.resize(size);
  return out;
}

void write_png(const std::filesystem::path& path, const Rgba8Frame& frame, bool fast) {
  const auto bytes = encode_png(frame, fast);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write " + path.string());
  out.write(reinterpret_cast<const char*>(bytes.data()),
            static_cast<std::streamsize>(bytes.size()));
  if (!out) throw IoError("short write to " + path.string());
}

Rgba8Frame unpremultiply(const Rgba8Frame& frame) {
  if (!frame.premultiplied()) return frame;
  Rgba8Frame out = frame;
  std::uint8_t* p = out.data();
  const std::size_t n = static_cast<std::size_t>(out.width()) * out.height();
  for (std::size_t i = 0; i < n; ++i, p += 4) {
    const std::uint32_t a = p[3];
    if (a == 255) continue;
    if (a == 0) {
      p[0] = p[1] = p[2] = 0;
      continue;
    }
    for (int c = 0; c < 3; ++c) {
      p[c] = static_cast<std::uint8_t>(std::min<std::uint32_t>(255, (p[c] * 255u + a / 2) / a));
    }
  }
  out.set_premultiplied(false);
  return out;
}

}  // namespace snowframe
