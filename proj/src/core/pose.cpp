#include "predatw/pose.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace predatw {
namespace {

double deg2rad(double d) { return d * std::numbers::pi / 180.0; }

void validate(const Eigen::Matrix4d& m, double t_ms) {
  if (!m.allFinite()) throw std::invalid_argument("Pose: non-finite matrix entry");
  if (!std::isfinite(t_ms) || t_ms < 0.0) throw std::invalid_argument("Pose: timestamp must be finite and >= 0");
  for (int i = 0; i < 3; ++i) {
    if (std::abs(m(3, i)) > Pose::kTolerance || std::abs(m(i, 3)) > Pose::kTolerance)
      throw std::invalid_argument("Pose: fourth row/column must be (0,0,0,1)");
  }
  if (std::abs(m(3, 3) - 1.0) > Pose::kTolerance) throw std::invalid_argument("Pose: m(3,3) must be 1");
  const Eigen::Matrix3d r = m.topLeftCorner<3, 3>();
  if (((r.transpose() * r) - Eigen::Matrix3d::Identity()).cwiseAbs().maxCoeff() > Pose::kTolerance)
    throw std::invalid_argument("Pose: rotation block is not orthonormal");
  if (std::abs(r.determinant() - 1.0) > Pose::kTolerance)
    throw std::invalid_argument("Pose: rotation block must have determinant +1");
}

}  // namespace

Pose::Pose() : m_(Eigen::Matrix4d::Identity()), timestamp_ms_(0.0) {}

Pose::Pose(const Eigen::Matrix4d& m, double timestamp_ms) : m_(m), timestamp_ms_(timestamp_ms) {
  validate(m_, timestamp_ms_);
}

Pose Pose::from_rotation(const Eigen::Matrix3d& r, double timestamp_ms) {
  Eigen::Matrix4d m = Eigen::Matrix4d::Identity();
  m.topLeftCorner<3, 3>() = r;
  return Pose(m, timestamp_ms);
}

Pose Pose::inverse() const {
  Pose out;
  out.m_.topLeftCorner<3, 3>() = m_.topLeftCorner<3, 3>().transpose();
  out.timestamp_ms_ = timestamp_ms_;
  return out;
}

Pose Pose::operator*(const Pose& rhs) const {
  Pose out;
  out.m_.topLeftCorner<3, 3>() = m_.topLeftCorner<3, 3>() * rhs.m_.topLeftCorner<3, 3>();
  out.timestamp_ms_ = std::max(timestamp_ms_, rhs.timestamp_ms_);
  return out;
}

Pose pose_from_euler(double yaw_deg, double pitch_deg, double roll_deg, double t_ms) {
  if (!std::isfinite(yaw_deg) || !std::isfinite(pitch_deg) || !std::isfinite(roll_deg) || !std::isfinite(t_ms))
    throw std::invalid_argument("pose_from_euler: non-finite input");
  const Eigen::Matrix3d r = (Eigen::AngleAxisd(deg2rad(yaw_deg), Eigen::Vector3d::UnitY()) *
                             Eigen::AngleAxisd(deg2rad(pitch_deg), Eigen::Vector3d::UnitX()) *
                             Eigen::AngleAxisd(deg2rad(roll_deg), Eigen::Vector3d::UnitZ()))
                                .toRotationMatrix();
  return Pose::from_rotation(r, t_ms);
}

Pose rotation_delta(const Pose& render_pose, const Pose& display_pose) {
  const Eigen::Matrix3d r = display_pose.rotation() * render_pose.rotation().transpose();
  Eigen::Matrix4d m = Eigen::Matrix4d::Identity();
  m.topLeftCorner<3, 3>() = r;
  return Pose(m, display_pose.timestamp_ms());
}

double rotation_angle_deg(const Pose& p) {
  const double c = std::clamp((p.rotation().trace() - 1.0) / 2.0, -1.0, 1.0);
  return std::acos(c) * 180.0 / std::numbers::pi;
}

}  // namespace predatw
