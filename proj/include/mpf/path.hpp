#pragma once

#include "mpf/so3.hpp"

#include <string>
#include <vector>

namespace mpf {

/// Description of a geometric path expressed in target-frame coordinates as a
/// function of a raw parameter u. Analytic kinds are periodic; sampled paths
/// are open and interpolated with a natural cubic spline.
struct PathSpec {
    enum class Kind { Lemniscate, Circle, Sampled };
    Kind kind = Kind::Lemniscate;

    double scale = 50.0;  // lemniscate size [m]
    double freq = 0.01;   // lemniscate raw-parameter frequency [1/m]
    double radius = 50.0; // circle radius [m]

    std::vector<double> knots; // sampled: strictly increasing raw parameter
    std::vector<Vec3> points;  // sampled: at least four positions
};

PathSpec lemniscate_path(double scale, double freq);
PathSpec circle_path(double radius);
PathSpec sampled_path(std::vector<double> knots, std::vector<Vec3> points);

/// Load a sampled path from CSV with header "u,x,y,z".
PathSpec load_sampled_path_csv(const std::string& file);

/// Raw-parameter evaluation of a path: position and first two derivatives.
/// Validates the spec on construction (throws std::invalid_argument).
class PathGeometry {
  public:
    explicit PathGeometry(PathSpec spec);

    Vec3 pos(double u) const;
    Vec3 d1(double u) const; // dp/du
    Vec3 d2(double u) const; // d2p/du2

    bool periodic() const { return spec_.kind != PathSpec::Kind::Sampled; }
    double raw_period() const; // periodic paths only
    double u_begin() const;    // one period for periodic, knot range for sampled
    double u_end() const;

    const PathSpec& spec() const { return spec_; }

  private:
    PathSpec spec_;
    // natural cubic spline data (sampled paths): second derivatives per axis
    std::vector<Vec3> m2_;
    int locate(double u) const;
};

/// Monotone arc-length parameterization built by adaptive Simpson quadrature
/// of |dp/du|. Maps between unwrapped arc length s and the raw parameter, and
/// evaluates the path by arc length with exact chain-rule derivatives. The
/// geometry must outlive the table. Throws RegularityViolation when |dp/du|
/// drops below 1e-9 anywhere in the evaluated range.
class ArcLengthTable {
  public:
    explicit ArcLengthTable(const PathGeometry& geom, double tol = 1e-8);

    /// Arc length of one raw period (periodic) or of the sampled range.
    double length() const { return total_; }

    double u_of_s(double s) const;
    double s_of_u(double u) const;

    Vec3 pos(double s) const;
    /// Unit tangent dp/ds.
    Vec3 tangent(double s) const;
    /// Curvature vector d2p/ds2, orthogonal to the tangent by construction.
    Vec3 curvature(double s) const;

    /// |dp/du| at raw parameter u.
    double raw_speed(double u) const;

    /// Tangent and curvature in one lookup (either may be null); returns u.
    double eval(double s, Vec3* tangent, Vec3* curvature) const;

  private:
    const PathGeometry* geom_;
    std::vector<double> u_, s_, g_; // nodes over one period / full range
    double total_ = 0.0;
};

/// Orthonormal moving frame of the path at arc length s, in target-frame
/// coordinates. f1 is the unit tangent; f2/f3 are transported with zero twist
/// about f1. k1/k2 are the curvature components on f2/f3.
struct TransportFrame {
    double s = 0.0;
    Vec3 f1, f2, f3;
    double k1 = 0.0, k2 = 0.0;

    Rot3 basis() const { return Rot3::from_columns(f1, f2, f3); }
};

/// Angular velocity of the transport frame relative to the path's parent
/// frame, expressed in the transport frame, for progression rate sdot. The
/// first component is exactly zero: the frame never twists about the tangent.
Vec3 frame_angular_velocity(const TransportFrame& fr, double sdot);

/// Rotation-minimizing frame field along a path, cached at regular arc-length
/// nodes (double-reflection transport) and extended on demand in either
/// direction of unwrapped s. Queries between nodes blend the cached normals
/// and re-anchor them on the exact tangent. Not thread-safe.
class TransportFrameField {
  public:
    explicit TransportFrameField(PathSpec spec, double quad_tol = 1e-8, double node_spacing = 0.1);

    TransportFrame at(double s);

    const PathGeometry& geometry() const { return geom_; }
    const ArcLengthTable& table() const { return table_; }
    double node_spacing() const { return h_; }

  private:
    struct Node {
        Vec3 f2;
    };
    PathGeometry geom_;
    ArcLengthTable table_;
    double h_;
    std::vector<Node> fwd_; // node i at s = i*h, i >= 0
    std::vector<Node> bwd_; // node -(j+1) at s = -(j+1)*h
    void ensure(long lo, long hi);
    const Vec3& node_f2(long i) const;
    Vec3 transport_f2(double s0, const Vec3& n0, double s1) const;
};

} // namespace mpf
