#include "predatw/timewarp.hpp"

#include <algorithm>
#include <cmath>

namespace predatw {

WarpMapping::WarpMapping(int width, int height, const ProjectionModel& projection, const Pose& render_pose,
                         const Pose& display_pose)
    : width_(width),
      height_(height),
      fx_(projection.focal_x(width)),
      fy_(projection.focal_y(height)),
      cx_(width / 2.0),
      cy_(height / 2.0),
      back_(rotation_delta(render_pose, display_pose).rotation().transpose()) {}

std::optional<Eigen::Vector2d> WarpMapping::source(double u, double v) const {
  const Eigen::Vector3d ray((u - cx_) / fx_, (v - cy_) / fy_, 1.0);
  const Eigen::Vector3d src = back_ * ray;
  if (src.z() <= 0.0) return std::nullopt;
  const double su = fx_ * src.x() / src.z() + cx_;
  const double sv = fy_ * src.y() / src.z() + cy_;
  if (!(su >= 0.0 && su < width_ && sv >= 0.0 && sv < height_)) return std::nullopt;
  return Eigen::Vector2d(su, sv);
}

namespace {

Rgb sample_bilinear(const FrameImage& img, double su, double sv) {
  // Pixel centres sit at integer + 0.5.
  const double fx = su - 0.5;
  const double fy = sv - 0.5;
  const double x0f = std::floor(fx);
  const double y0f = std::floor(fy);
  const double ax = fx - x0f;
  const double ay = fy - y0f;
  const int w = img.width();
  const int h = img.height();
  const int x0 = std::clamp(static_cast<int>(x0f), 0, w - 1);
  const int x1 = std::clamp(static_cast<int>(x0f) + 1, 0, w - 1);
  const int y0 = std::clamp(static_cast<int>(y0f), 0, h - 1);
  const int y1 = std::clamp(static_cast<int>(y0f) + 1, 0, h - 1);
  const Rgb p00 = img.at(x0, y0), p10 = img.at(x1, y0), p01 = img.at(x0, y1), p11 = img.at(x1, y1);
  Rgb out;
  for (int c = 0; c < 3; ++c) {
    const double top = p00[c] + ax * (p10[c] - p00[c]);
    const double bottom = p01[c] + ax * (p11[c] - p01[c]);
    const double value = top + ay * (bottom - top);
    out[c] = static_cast<std::uint8_t>(std::clamp(std::floor(value + 0.5), 0.0, 255.0));
  }
  return out;
}

}  // namespace

FrameImage timewarp(const FrameImage& frame, const Pose& render_pose, const Pose& display_pose,
                    const WarpConfig& cfg) {
  const int w = frame.width();
  const int h = frame.height();
  const WarpMapping mapping(w, h, frame.projection(), render_pose, display_pose);
  FrameImage out(w, h, frame.projection(), cfg.fill_rgb);

  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      const auto src = mapping.source(x + 0.5, y + 0.5);
      if (!src) continue;
      if (cfg.sampling == Sampling::Nearest) {
        const int sx = std::min(static_cast<int>(std::floor(src->x())), w - 1);
        const int sy = std::min(static_cast<int>(std::floor(src->y())), h - 1);
        out.set(x, y, frame.at(sx, sy));
      } else {
        out.set(x, y, sample_bilinear(frame, src->x(), src->y()));
      }
    }
  }
  return out;
}

}  // namespace predatw
