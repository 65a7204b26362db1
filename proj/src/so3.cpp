#include "mpf/so3.hpp"

#include <cmath>
#include <stdexcept>

namespace mpf {

Mat3 Skew3::matrix() const {
    Mat3 m;
    m << 0.0, -v.z(), v.y(), v.z(), 0.0, -v.x(), -v.y(), v.x(), 0.0;
    return m;
}

Skew3 hat(const Vec3& v) { return Skew3{v}; }

Vec3 vee(const Skew3& s) { return s.v; }

Skew3 skew_project(const Mat3& m) {
    Mat3 a = 0.5 * (m - m.transpose());
    return Skew3{Vec3(a(2, 1), a(0, 2), a(1, 0))};
}

double orthonormality_error(const Mat3& m) {
    return (m.transpose() * m - Mat3::Identity()).norm();
}

Rot3 Rot3::from_matrix(const Mat3& m) {
    if (orthonormality_error(m) > 1e-9 || m.determinant() <= 0.0)
        throw std::invalid_argument("Rot3::from_matrix: input is not a rotation");
    return Rot3(m);
}

Rot3 Rot3::from_columns(const Vec3& c0, const Vec3& c1, const Vec3& c2) {
    Mat3 m;
    m.col(0) = c0;
    m.col(1) = c1;
    m.col(2) = c2;
    return Rot3(m);
}

Rot3 exp_so3(const Vec3& v) {
    const double th2 = v.squaredNorm();
    double a, b; // R = I + a*K + b*K^2, K = hat(v)
    if (th2 < 1e-12) {
        a = 1.0 - th2 / 6.0;
        b = 0.5 - th2 / 24.0;
    } else {
        const double th = std::sqrt(th2);
        a = std::sin(th) / th;
        b = (1.0 - std::cos(th)) / th2;
    }
    const Mat3 k = hat(v).matrix();
    return Rot3::from_matrix_unchecked(Mat3(Mat3::Identity() + a * k + b * (k * k)));
}

Vec3 log_so3(const Mat3& r) {
    const double c = std::clamp((r.trace() - 1.0) / 2.0, -1.0, 1.0);
    const double th = std::acos(c);
    const Vec3 s = 0.5 * Vec3(r(2, 1) - r(1, 2), r(0, 2) - r(2, 0), r(1, 0) - r(0, 1));
    if (th < 1e-3) {
        // s = sin(th)*u; th/sin(th) expanded to keep full precision near 0.
        const double th2 = th * th;
        return s * (1.0 + th2 / 6.0 + th2 * th2 * (7.0 / 360.0));
    }
    if (th < 3.0) return s * (th / std::sin(th));
    // Near pi the antisymmetric part cancels; recover |u| from the diagonal,
    // relative signs from the symmetric off-diagonals, overall sign from s.
    Vec3 u;
    for (int i = 0; i < 3; ++i) u(i) = std::sqrt(std::max(0.0, (r(i, i) - c) / (1.0 - c)));
    int m = 0;
    for (int i = 1; i < 3; ++i)
        if (u(i) > u(m)) m = i;
    for (int i = 0; i < 3; ++i)
        if (i != m && r(m, i) + r(i, m) < 0.0) u(i) = -u(i);
    if (s(m) < 0.0) u = -u;
    return th * u.normalized();
}

Rot3 rot_zyx(double roll, double pitch, double yaw) {
    const double cr = std::cos(roll), sr = std::sin(roll);
    const double cp = std::cos(pitch), sp = std::sin(pitch);
    const double cy = std::cos(yaw), sy = std::sin(yaw);
    Mat3 m;
    m << cy * cp, cy * sp * sr - sy * cr, cy * sp * cr + sy * sr, //
        sy * cp, sy * sp * sr + cy * cr, sy * sp * cr - cy * sr,  //
        -sp, cp * sr, cp * cr;
    return Rot3::from_matrix_unchecked(m);
}

Rot3 reorthonormalize(const Mat3& m) {
    Eigen::JacobiSVD<Mat3> svd(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
    const Vec3 sv = svd.singularValues();
    if (!(sv(2) > 1e-12 * std::max(1.0, sv(0))))
        throw std::invalid_argument("reorthonormalize: rank-deficient input");
    Mat3 uvt = svd.matrixU() * svd.matrixV().transpose();
    if (uvt.determinant() < 0.0) {
        Mat3 flip = Mat3::Identity();
        flip(2, 2) = -1.0;
        uvt = svd.matrixU() * flip * svd.matrixV().transpose();
    }
    return Rot3::from_matrix_unchecked(uvt);
}

} // namespace mpf
