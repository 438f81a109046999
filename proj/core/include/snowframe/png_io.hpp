#pragma once

#include <cstdint>
#include <filesystem>
#include <vector>

#include "snowframe/image.hpp"

namespace snowframe {

/// Decodes any 8/16-bit PNG into straight-alpha RGBA8 (premultiplied = false).
Rgba8Frame decode_png(std::span<const std::uint8_t> bytes);
Rgba8Frame read_png(const std::filesystem::path& path);

/// Encodes the frame's bytes as-is (RGBA8). Output is deterministic for a
/// given frame and `fast` setting.
std::vector<std::uint8_t> encode_png(const Rgba8Frame& frame, bool fast = true);
void write_png(const std::filesystem::path& path, const Rgba8Frame& frame,
               bool fast = true);

/// Frame with color channels divided back out of alpha, for export.
Rgba8Frame unpremultiply(const Rgba8Frame& frame);

}  // namespace snowframe
