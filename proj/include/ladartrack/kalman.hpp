#pragma once

#include <array>

#include <Eigen/Dense>

#include "ladartrack/geometry.hpp"

namespace ladar {

/// Noise settings shared by every constant-velocity filter. Units are voxels
/// and tracker steps.
struct KalmanParams {
    double q = 0.01;       ///< white-noise acceleration intensity
    double r = 0.1;        ///< measurement variance per axis
    double p0_pos = 1.0;   ///< initial position variance
    double p0_vel = 10.0;  ///< initial velocity variance

    void validate() const;
};

/// Constant-velocity Kalman filter over `Axes` independent spatial axes.
/// State layout is [positions..., velocities...]; only positions are measured.
template <int Axes>
struct CvFilter {
    static constexpr int kDim = 2 * Axes;
    using State = Eigen::Matrix<double, kDim, 1>;
    using Cov = Eigen::Matrix<double, kDim, kDim>;
    using Measurement = Eigen::Matrix<double, Axes, 1>;

    State x = State::Zero();
    Cov P = Cov::Identity();
    KalmanParams params;

    static CvFilter init(const Measurement& position, const KalmanParams& params);

    /// Advance `dt` steps: x <- F x, P <- F P F' + Q(dt).
    CvFilter predicted(int dt) const;

    /// Fold in a position measurement. Throws SingularInnovation.
    CvFilter updated(const Measurement& z) const;

    Measurement position() const { return x.template head<Axes>(); }
    Measurement velocity() const { return x.template tail<Axes>(); }
};

extern template struct CvFilter<3>;
extern template struct CvFilter<1>;

/// Centroid filter: 3 positions + 3 velocities.
using KalmanState = CvFilter<3>;

KalmanState kf_init(const Point3& centroid, const KalmanParams& params = {});

struct KalmanPrediction {
    Point3 centroid;
    KalmanState state;
};

KalmanPrediction kf_predict(const KalmanState& s, int dt = 1);
KalmanState kf_update(const KalmanState& s, const Point3& z);

Point3 position_of(const KalmanState& s);
Point3 velocity_of(const KalmanState& s);

/// Closed ball: true iff |predicted - observed| <= radius.
bool centroid_gate(const Point3& predicted, const Point3& observed, double radius);

/// Six scalar CV filters tracking min x/y/z and max x/y/z of a bounding box.
struct BoxKalman {
    std::array<CvFilter<1>, 6> axes;
};

BoxKalman box_kf_init(const BoundingBox& box, const KalmanParams& params = {});
BoxKalman box_kf_predict(const BoxKalman& s, int dt = 1);
BoxKalman box_kf_update(const BoxKalman& s, const BoundingBox& box);

/// Current estimate rounded to the voxel lattice (min <= max enforced).
BoundingBox box_kf_bbox(const BoxKalman& s);

}  // namespace ladar
