#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

namespace predatw {

/// Symmetric pinhole frustum.
struct ProjectionModel {
  double hfov_deg = 90.0;
  double vfov_deg = 90.0;

  /// Throws std::invalid_argument unless both angles lie in (0, 180).
  void validate() const;
  double focal_x(int width) const;   // (width/2) / tan(hfov/2)
  double focal_y(int height) const;  // (height/2) / tan(vfov/2)

  /// Projection whose vfov matches `hfov_deg` for a width x height raster (square pixels).
  static ProjectionModel square_pixels(double hfov_deg, int width, int height);

  bool operator==(const ProjectionModel&) const = default;
};

using Rgb = std::array<std::uint8_t, 3>;

/// Row-major 8-bit RGB raster. Width and height are positive multiples of 8.
class FrameImage {
 public:
  FrameImage(int width, int height, ProjectionModel projection, Rgb fill = {0, 0, 0});
  FrameImage(int width, int height, ProjectionModel projection, std::vector<std::uint8_t> rgb);

  int width() const noexcept { return width_; }
  int height() const noexcept { return height_; }
  const ProjectionModel& projection() const noexcept { return projection_; }

  std::span<const std::uint8_t> rgb() const noexcept { return rgb_; }
  std::span<std::uint8_t> rgb() noexcept { return rgb_; }

  Rgb at(int x, int y) const;
  void set(int x, int y, Rgb c);

  bool operator==(const FrameImage&) const = default;

 private:
  int width_;
  int height_;
  ProjectionModel projection_;
  std::vector<std::uint8_t> rgb_;
};

/// Binary PPM (P6, maxval 255). The projection is not stored in the file;
/// `read_ppm` attaches the one supplied by the caller.
FrameImage read_ppm(const std::filesystem::path& path, const ProjectionModel& projection);
void write_ppm(const FrameImage& image, const std::filesystem::path& path);

}  // namespace predatw
