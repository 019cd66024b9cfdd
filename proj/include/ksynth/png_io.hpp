#pragma once

#include <string>

#include "ksynth/image.hpp"

namespace ksynth {

// 16-bit grayscale PNG preview, linearly windowed from [lo, hi]. Display
// only; KSIM files stay authoritative.
void save_png16(const std::string& path, const Image& img, double lo, double hi);

// Windowed at the image min/max.
void save_png16(const std::string& path, const Image& img);

}  // namespace ksynth
