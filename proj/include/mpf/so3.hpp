#pragma once

#include <Eigen/Dense>

namespace mpf {

using Vec2 = Eigen::Vector2d;
using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;

/// Skew-symmetric 3x3 matrix held by its three independent entries, so the
/// type itself guarantees skew-symmetry. Use skew_project to coerce a general
/// matrix, hat/vee to move between vector and matrix form.
struct Skew3 {
    Vec3 v{Vec3::Zero()};

    Mat3 matrix() const;
};

/// Cross-product matrix: hat(v).matrix() * w == v x w.
Skew3 hat(const Vec3& v);

/// Inverse of hat; exact round trip vee(hat(v)) == v.
Vec3 vee(const Skew3& s);

/// Skew part (m - m^T)/2 of a general matrix.
Skew3 skew_project(const Mat3& m);

/// Frobenius deviation from orthonormality, |m^T m - I|_F.
double orthonormality_error(const Mat3& m);

/// Rotation matrix with enforced SO(3) membership.
class Rot3 {
  public:
    Rot3() : m_(Mat3::Identity()) {}

    /// Wrap a matrix that must already be a rotation. Throws
    /// std::invalid_argument if it deviates from orthonormality by more than
    /// 1e-9 (Frobenius) or has non-positive determinant.
    static Rot3 from_matrix(const Mat3& m);

    /// Wrap without validation; caller guarantees m is in SO(3).
    static Rot3 from_matrix_unchecked(const Mat3& m) { return Rot3(m); }

    static Rot3 from_columns(const Vec3& c0, const Vec3& c1, const Vec3& c2);

    const Mat3& matrix() const { return m_; }
    Vec3 col(int i) const { return m_.col(i); }

    Rot3 transposed() const { return Rot3(m_.transpose()); }

    Rot3 operator*(const Rot3& o) const { return Rot3(m_ * o.m_); }
    Vec3 operator*(const Vec3& v) const { return m_ * v; }

  private:
    explicit Rot3(const Mat3& m) : m_(m) {}
    Mat3 m_;
};

/// Rodrigues exponential: rotation by angle |v| about v/|v|. Below 1e-6 rad
/// the sin/cos coefficients switch to series form to avoid cancellation.
Rot3 exp_so3(const Vec3& v);

/// Inverse of exp_so3: rotation vector with angle in [0, pi]. At pi the sign
/// of the axis is arbitrary; both choices map back to the same rotation.
Vec3 log_so3(const Mat3& r);

/// Intrinsic Z-Y-X composition: Rz(yaw) * Ry(pitch) * Rx(roll).
Rot3 rot_zyx(double roll, double pitch, double yaw);

/// Nearest rotation in the polar-decomposition sense. Throws
/// std::invalid_argument on rank-deficient input, where no nearest rotation
/// is meaningful.
Rot3 reorthonormalize(const Mat3& m);

} // namespace mpf
