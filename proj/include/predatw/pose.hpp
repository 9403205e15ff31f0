#pragma once

#include <Eigen/Core>

namespace predatw {

/// Head orientation as a 4x4 homogeneous matrix.
///
/// The matrix is a view rotation: it maps world directions into the head
/// frame (x right, y down, z forward). Only rotation is carried; the
/// translation column is always zero because reprojection here is
/// rotation-only. Construction validates orthonormality (RᵀR = I and
/// det R = +1, both within 1e-9) and the homogeneous row/column.
class Pose {
 public:
  static constexpr double kTolerance = 1e-9;

  Pose();  // identity at t = 0
  Pose(const Eigen::Matrix4d& m, double timestamp_ms);

  static Pose from_rotation(const Eigen::Matrix3d& r, double timestamp_ms);

  const Eigen::Matrix4d& matrix() const noexcept { return m_; }
  Eigen::Matrix3d rotation() const { return m_.topLeftCorner<3, 3>(); }
  double timestamp_ms() const noexcept { return timestamp_ms_; }

  /// Inverse; equal to the transpose of the rotation block.
  Pose inverse() const;

  /// Matrix product; the result takes `rhs`'s timestamp only if this one is older.
  Pose operator*(const Pose& rhs) const;

 private:
  Eigen::Matrix4d m_;
  double timestamp_ms_;
};

/// R = R_yaw(Y) * R_pitch(X) * R_roll(Z); angles in degrees.
/// Throws std::invalid_argument on non-finite input.
Pose pose_from_euler(double yaw_deg, double pitch_deg, double roll_deg, double t_ms);

/// display * render⁻¹, stamped with the display pose's timestamp.
Pose rotation_delta(const Pose& render_pose, const Pose& display_pose);

/// Rotation angle of the pose in degrees, in [0, 180].
double rotation_angle_deg(const Pose& p);

}  // namespace predatw
