#include <algorithm>
#include <cmath>
#include <numbers>

#include <Eigen/Core>

#include "predatw/rng.hpp"
#include "predatw/workload.hpp"

namespace predatw {

namespace {

struct Wave {
  Eigen::Vector3d k;
  double phase;
  std::array<double, 3> amplitude;
};

std::vector<Wave> make_waves(const PanoramaScene& scene) {
  Rng rng(scene.seed);
  std::vector<Wave> waves(static_cast<std::size_t>(std::max(0, scene.n_waves)));
  const double amp = 110.0 / std::sqrt(static_cast<double>(std::max(1, scene.n_waves)));
  for (auto& w : waves) {
    w.k = Eigen::Vector3d(rng.normal(), rng.normal(), rng.normal()).normalized() * rng.uniform(1.0, scene.max_frequency);
    w.phase = rng.uniform(0.0, 2.0 * std::numbers::pi);
    for (double& a : w.amplitude) a = amp * rng.uniform(0.3, 1.0);
  }
  return waves;
}

}  // namespace

FrameImage render_view(const PanoramaScene& scene, const Pose& view, int width, int height,
                       const ProjectionModel& projection) {
  FrameImage img(width, height, projection);
  const auto waves = make_waves(scene);
  const Eigen::Matrix3d head_to_world = view.rotation().transpose();
  const double fx = projection.focal_x(width), fy = projection.focal_y(height);
  const double cx = width / 2.0, cy = height / 2.0;
  auto px = img.rgb().begin();
  for (int y = 0; y < height; ++y) {
    for (int x = 0; x < width; ++x) {
      const Eigen::Vector3d d = (head_to_world * Eigen::Vector3d((x + 0.5 - cx) / fx, (y + 0.5 - cy) / fy, 1.0)).normalized();
      std::array<double, 3> c = {128.0, 128.0, 128.0};
      for (const auto& w : waves) {
        const double s = std::sin(w.k.dot(d) + w.phase);
        for (int ch = 0; ch < 3; ++ch) c[ch] += w.amplitude[ch] * s;
      }
      for (double v : c) *px++ = static_cast<std::uint8_t>(std::clamp(std::floor(v + 0.5), 0.0, 255.0));
    }
  }
  return img;
}

std::vector<Pose> head_trajectory(std::size_t n, double step_sd_deg, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<Pose> out;
  out.reserve(n);
  double yaw = 0.0, pitch = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    if (i > 0) {
      yaw += step_sd_deg * rng.normal();
      pitch = 0.98 * pitch + 0.5 * step_sd_deg * rng.normal();
      pitch = std::clamp(pitch, -60.0, 60.0);
    }
    out.push_back(pose_from_euler(yaw, pitch, 0.0, static_cast<double>(i) * 11.11));
  }
  return out;
}

}  // namespace predatw
