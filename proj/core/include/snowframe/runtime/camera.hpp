#pragma once

#include <memory>
#include <string>

#include "snowframe/runtime/source.hpp"

namespace snowframe::runtime {

/// Whether this build can talk to a live camera.
bool camera_supported() noexcept;

/// Live capture (V4L2, YUYV) from `device`. Opening fails with IoError when
/// the device is missing or cannot deliver YUYV frames.
std::unique_ptr<FrameSource> make_camera_source(std::string device, Size size, double fps);

/// YUYV 4:2:2 to opaque RGBA using integer BT.601 limited-range coefficients.
Rgba8Frame yuyv_to_rgba(const std::uint8_t* data, int width, int height, std::size_t stride);

}  // namespace snowframe::runtime
