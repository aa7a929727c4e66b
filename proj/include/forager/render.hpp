#pragma once

#include <cstdint>
#include <fstream>
#include <string>
#include <vector>

#include "forager/config.hpp"
#include "forager/world.hpp"

namespace forager {

struct Image {
  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> rgb;

  Rgb pixel(int x, int y) const {
    const std::size_t i = (static_cast<std::size_t>(y) * width + x) * 3;
    return {rgb[i], rgb[i + 1], rgb[i + 2]};
  }
};

inline Rgb blend_half(Rgb a, Rgb b) {
  return {static_cast<std::uint8_t>((a.r + b.r) / 2), static_cast<std::uint8_t>((a.g + b.g) / 2),
          static_cast<std::uint8_t>((a.b + b.b) / 2)};
}

/// Top-down view of the whole torus, `cell_px` pixels per cell. The agent's
/// field of view gets a half-transparent light-blue overlay (wrapping at the
/// edges) and the agent cell is solid blue.
inline Image render_frame(const World& world, int cell_px = 8, bool fov_overlay = true) {
  const Dims dims = world.dims();
  Image img{dims.width * cell_px, dims.height * cell_px, {}};
  img.rgb.resize(static_cast<std::size_t>(img.width) * img.height * 3);

  std::vector<std::uint8_t> in_fov(dims.area(), 0);
  if (fov_overlay) {
    const int fov = world.config().effective_fov();
    const int half = fov / 2;
    for (int dy = -half; dy <= half; ++dy) {
      for (int dx = -half; dx <= half; ++dx) in_fov[dims.index(wrap(world.agent(), {dx, dy}, dims))] = 1;
    }
  }

  for (int y = 0; y < dims.height; ++y) {
    for (int x = 0; x < dims.width; ++x) {
      const Position p{x, y};
      const Cell c = world.at(p);
      Rgb col = c.is_wall() ? colors::kWall : c.is_object() ? world.species_color(c.slot()) : colors::kBackground;
      if (in_fov[dims.index(p)]) col = blend_half(col, colors::kFovOverlay);
      if (p == world.agent()) col = colors::kAgent;
      for (int py = 0; py < cell_px; ++py) {
        std::uint8_t* row = img.rgb.data() + ((static_cast<std::size_t>(y) * cell_px + py) * img.width + x * cell_px) * 3;
        for (int px = 0; px < cell_px; ++px) {
          row[px * 3] = col.r;
          row[px * 3 + 1] = col.g;
          row[px * 3 + 2] = col.b;
        }
      }
    }
  }
  return img;
}

/// Binary portable pixmap (P6, maxval 255).
inline void write_ppm(const Image& img, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  out << "P6\n" << img.width << ' ' << img.height << "\n255\n";
  out.write(reinterpret_cast<const char*>(img.rgb.data()), static_cast<std::streamsize>(img.rgb.size()));
  if (!out) throw IoError("failed writing '" + path + "'");
}

}  // namespace forager
