#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <string>

#include "gasketpile/engine.hpp"

namespace gp {

/// Raster/vector dot plot of a configuration: one dot per vertex at its
/// Euclidean position. The default palette is the usual identity coloring
/// (2 -> red, 3 -> blue); heights without a palette entry are an error.
struct RenderSpec {
    enum class Format { Ppm, Svg };

    Format format = Format::Ppm;
    int width = 512;
    double dot_radius = 0;  // pixels; 0 = auto from vertex spacing
    std::map<std::uint64_t, std::array<std::uint8_t, 3>> palette = {
        {0, {255, 255, 255}},  // white
        {1, {128, 128, 128}},  // gray
        {2, {255, 0, 0}},      // red
        {3, {0, 0, 255}},      // blue
    };
};

/// Deterministic image bytes: binary PPM (P6) on black background, or SVG
/// with circles in canonical vertex order.
std::string render(const SandpileConfig& c, const RenderSpec& spec);

}  // namespace gp
