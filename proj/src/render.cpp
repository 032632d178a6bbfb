#include "gasketpile/render.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>
#include <vector>

namespace gp {

namespace {

constexpr double kSqrt3Half = 0.8660254037844386;

struct Layout {
    int width, height;
    double margin, scale;

    // Euclidean position of a lattice vertex, y axis flipped for images.
    std::pair<double, double> at(VertexKey v, std::int64_t s) const {
        const double ex = (static_cast<double>(v.p) + v.q / 2.0) / s;
        const double ey = v.q * kSqrt3Half / s;
        return {margin + ex * scale, margin + (kSqrt3Half - ey) * scale};
    }
};

std::array<std::uint8_t, 3> color_of(const RenderSpec& spec, std::uint64_t h) {
    auto it = spec.palette.find(h);
    if (it == spec.palette.end())
        throw std::invalid_argument("no palette entry for height " +
                                    std::to_string(h));
    return it->second;
}

std::string render_ppm(const SandpileConfig& c, const RenderSpec& spec,
                       const Layout& lay, double radius) {
    const GasketGraph& g = *c.graph;
    std::vector<std::uint8_t> pix(
        static_cast<std::size_t>(lay.width) * lay.height * 3, 0);
    const double r2 = radius * radius;
    for (std::size_t i = 0; i < g.vertex_count(); ++i) {
        const auto rgb = color_of(spec, c.heights[i]);
        const auto [cx, cy] = lay.at(g.vertex(i), g.scale());
        const int x0 = std::max(0, static_cast<int>(std::floor(cx - radius)));
        const int x1 = std::min(lay.width - 1, static_cast<int>(std::ceil(cx + radius)));
        const int y0 = std::max(0, static_cast<int>(std::floor(cy - radius)));
        const int y1 = std::min(lay.height - 1, static_cast<int>(std::ceil(cy + radius)));
        for (int y = y0; y <= y1; ++y)
            for (int x = x0; x <= x1; ++x) {
                const double dx = x + 0.5 - cx, dy = y + 0.5 - cy;
                if (dx * dx + dy * dy > r2) continue;
                const std::size_t o =
                    (static_cast<std::size_t>(y) * lay.width + x) * 3;
                pix[o] = rgb[0];
                pix[o + 1] = rgb[1];
                pix[o + 2] = rgb[2];
            }
    }
    std::ostringstream out;
    out << "P6\n" << lay.width << " " << lay.height << "\n255\n";
    out.write(reinterpret_cast<const char*>(pix.data()),
              static_cast<std::streamsize>(pix.size()));
    return out.str();
}

std::string hex_color(const std::array<std::uint8_t, 3>& rgb) {
    static const char* digits = "0123456789abcdef";
    std::string s = "#";
    for (std::uint8_t v : rgb) {
        s.push_back(digits[v >> 4]);
        s.push_back(digits[v & 15]);
    }
    return s;
}

std::string render_svg(const SandpileConfig& c, const RenderSpec& spec,
                       const Layout& lay, double radius) {
    const GasketGraph& g = *c.graph;
    std::ostringstream out;
    out.precision(3);
    out << std::fixed;
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << lay.width
        << "\" height=\"" << lay.height << "\">\n";
    out << "<rect width=\"100%\" height=\"100%\" fill=\"#000000\"/>\n";
    for (std::size_t i = 0; i < g.vertex_count(); ++i) {
        const auto [cx, cy] = lay.at(g.vertex(i), g.scale());
        out << "<circle cx=\"" << cx << "\" cy=\"" << cy << "\" r=\"" << radius
            << "\" fill=\"" << hex_color(color_of(spec, c.heights[i]))
            << "\"/>\n";
    }
    out << "</svg>\n";
    return out.str();
}

}  // namespace

std::string render(const SandpileConfig& c, const RenderSpec& spec) {
    const GasketGraph& g = *c.graph;
    if (spec.format == RenderSpec::Format::Ppm && g.level() > 10)
        throw std::invalid_argument("raster output supports level <= 10");
    if (spec.width < 16) throw std::invalid_argument("width too small");

    double radius = spec.dot_radius;
    if (radius <= 0)
        radius = std::max(1.0, spec.width / (4.0 * static_cast<double>(g.scale())));
    Layout lay;
    lay.margin = radius + 2;
    lay.scale = spec.width - 2 * lay.margin;
    lay.width = spec.width;
    lay.height =
        static_cast<int>(std::ceil(lay.scale * kSqrt3Half + 2 * lay.margin));

    return spec.format == RenderSpec::Format::Ppm
               ? render_ppm(c, spec, lay, radius)
               : render_svg(c, spec, lay, radius);
}

}  // namespace gp
