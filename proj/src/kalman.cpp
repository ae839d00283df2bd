#include "ladartrack/kalman.hpp"

#include <algorithm>
#include <cmath>

#include "ladartrack/errors.hpp"

namespace ladar {

void KalmanParams::validate() const {
    if (!(q >= 0.0) || !(r >= 0.0)) {
        throw InvalidConfig("Kalman q and r must be >= 0");
    }
    if (!(p0_pos > 0.0) || !(p0_vel > 0.0)) {
        throw InvalidConfig("Kalman initial variances must be > 0");
    }
}

template <int Axes>
CvFilter<Axes> CvFilter<Axes>::init(const Measurement& position, const KalmanParams& params) {
    CvFilter f;
    f.params = params;
    f.x.setZero();
    f.x.template head<Axes>() = position;
    f.P.setZero();
    for (int i = 0; i < Axes; ++i) {
        f.P(i, i) = params.p0_pos;
        f.P(Axes + i, Axes + i) = params.p0_vel;
    }
    return f;
}

template <int Axes>
CvFilter<Axes> CvFilter<Axes>::predicted(int dt) const {
    const double t = static_cast<double>(dt);
    Cov F = Cov::Identity();
    Cov Q = Cov::Zero();
    // Discrete white-noise acceleration, per axis: q * [t^4/4 t^3/2; t^3/2 t^2].
    for (int i = 0; i < Axes; ++i) {
        F(i, Axes + i) = t;
        Q(i, i) = params.q * t * t * t * t / 4.0;
        Q(i, Axes + i) = params.q * t * t * t / 2.0;
        Q(Axes + i, i) = Q(i, Axes + i);
        Q(Axes + i, Axes + i) = params.q * t * t;
    }
    CvFilter out = *this;
    out.x = F * x;
    out.P = F * P * F.transpose() + Q;
    out.P = 0.5 * (out.P + out.P.transpose()).eval();
    return out;
}

template <int Axes>
CvFilter<Axes> CvFilter<Axes>::updated(const Measurement& z) const {
    using SMat = Eigen::Matrix<double, Axes, Axes>;
    using HMat = Eigen::Matrix<double, Axes, kDim>;
    HMat H = HMat::Zero();
    H.template leftCols<Axes>().setIdentity();

    const Measurement y = z - H * x;
    const SMat S = H * P * H.transpose() + params.r * SMat::Identity();
    const Eigen::SelfAdjointEigenSolver<SMat> eig(S, Eigen::EigenvaluesOnly);
    const double lo = eig.eigenvalues().minCoeff();
    const double hi = eig.eigenvalues().cwiseAbs().maxCoeff();
    if (!(lo > 1e-12 * std::max(1.0, hi))) {
        throw SingularInnovation("innovation covariance is singular; check Kalman noise settings");
    }
    const Eigen::Matrix<double, kDim, Axes> K = P * H.transpose() * S.inverse();

    CvFilter out = *this;
    out.x = x + K * y;
    out.P = (Cov::Identity() - K * H) * P;
    out.P = 0.5 * (out.P + out.P.transpose()).eval();
    return out;
}

template struct CvFilter<3>;
template struct CvFilter<1>;

namespace {

Eigen::Vector3d to_vec(const Point3& p) { return {p.x, p.y, p.z}; }
Point3 to_point(const Eigen::Vector3d& v) { return {v.x(), v.y(), v.z()}; }

std::array<double, 6> box_values(const BoundingBox& b) {
    return {double(b.min.x), double(b.min.y), double(b.min.z),
            double(b.max.x), double(b.max.y), double(b.max.z)};
}

}  // namespace

KalmanState kf_init(const Point3& centroid, const KalmanParams& params) {
    return KalmanState::init(to_vec(centroid), params);
}

KalmanPrediction kf_predict(const KalmanState& s, int dt) {
    KalmanState next = s.predicted(dt);
    return {to_point(next.position()), next};
}

KalmanState kf_update(const KalmanState& s, const Point3& z) {
    if (!std::isfinite(z.x) || !std::isfinite(z.y) || !std::isfinite(z.z)) {
        throw InvalidConfig("Kalman measurement must be finite");
    }
    return s.updated(to_vec(z));
}

Point3 position_of(const KalmanState& s) { return to_point(s.position()); }
Point3 velocity_of(const KalmanState& s) { return to_point(s.velocity()); }

bool centroid_gate(const Point3& predicted, const Point3& observed, double radius) {
    return distance(predicted, observed) <= radius;
}

BoxKalman box_kf_init(const BoundingBox& box, const KalmanParams& params) {
    BoxKalman out;
    const auto v = box_values(box);
    for (std::size_t i = 0; i < 6; ++i) {
        out.axes[i] = CvFilter<1>::init(CvFilter<1>::Measurement(v[i]), params);
    }
    return out;
}

BoxKalman box_kf_predict(const BoxKalman& s, int dt) {
    BoxKalman out;
    for (std::size_t i = 0; i < 6; ++i) {
        out.axes[i] = s.axes[i].predicted(dt);
    }
    return out;
}

BoxKalman box_kf_update(const BoxKalman& s, const BoundingBox& box) {
    BoxKalman out;
    const auto v = box_values(box);
    for (std::size_t i = 0; i < 6; ++i) {
        out.axes[i] = s.axes[i].updated(CvFilter<1>::Measurement(v[i]));
    }
    return out;
}

BoundingBox box_kf_bbox(const BoxKalman& s) {
    std::array<int, 6> r{};
    for (std::size_t i = 0; i < 6; ++i) {
        r[i] = static_cast<int>(std::lround(s.axes[i].x(0)));
    }
    for (std::size_t i = 0; i < 3; ++i) {
        if (r[i] > r[i + 3]) {
            std::swap(r[i], r[i + 3]);
        }
    }
    return {{r[0], r[1], r[2]}, {r[3], r[4], r[5]}};
}

}  // namespace ladar
