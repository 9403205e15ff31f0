#pragma once

#include <Eigen/Core>
#include <optional>

#include "predatw/frame_image.hpp"
#include "predatw/pose.hpp"

namespace predatw {

enum class Sampling { Nearest, Bilinear };

struct WarpConfig {
  Rgb fill_rgb = {0, 0, 0};  // pixels whose source ray leaves the input frustum
  Sampling sampling = Sampling::Bilinear;
};

/// Per-pixel back-projection for one (render, display) pose pair:
/// source = K · R_deltaᵀ · K⁻¹ · output, with K the pinhole intrinsics of the
/// frame and R_delta = display · render⁻¹. Pixel (x, y) has its centre at
/// (x + 0.5, y + 0.5); the principal point is the raster centre.
class WarpMapping {
 public:
  WarpMapping(int width, int height, const ProjectionModel& projection, const Pose& render_pose,
              const Pose& display_pose);

  /// Continuous source coordinate for a continuous output coordinate, or
  /// nullopt if the ray points behind the render camera or leaves the raster.
  std::optional<Eigen::Vector2d> source(double u, double v) const;

 private:
  int width_;
  int height_;
  double fx_, fy_, cx_, cy_;
  Eigen::Matrix3d back_;  // R_deltaᵀ
};

/// Rotational reprojection of `frame` (rendered at `render_pose`) to `display_pose`.
FrameImage timewarp(const FrameImage& frame, const Pose& render_pose, const Pose& display_pose,
                    const WarpConfig& cfg = {});

}  // namespace predatw
