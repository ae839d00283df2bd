#include "ladartrack/features.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include "ladartrack/kalman.hpp"
#include "ladartrack/track.hpp"

namespace ladar {

namespace {

using Mat3 = std::array<std::array<double, 3>, 3>;
using Vec3 = std::array<double, 3>;

Mat3 multiply(const Mat3& a, const Mat3& b) {
    Mat3 c{};
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            for (int k = 0; k < 3; ++k) c[i][j] += a[i][k] * b[k][j];
    return c;
}

double frobenius(const Mat3& a) {
    double s = 0.0;
    for (const auto& row : a)
        for (double v : row) s += v * v;
    return std::sqrt(s);
}

double norm(const Vec3& v) { return std::sqrt(v[0] * v[0] + v[1] * v[1] + v[2] * v[2]); }

constexpr Point3 kDefaultAxis{1.0, 0.0, 0.0};

}  // namespace

const std::array<std::string_view, FeatureVector::kSize>& FeatureVector::names() {
    static const std::array<std::string_view, kSize> kNames{
        "centroid_x", "centroid_y",     "centroid_z",    "bbox_min_x",    "bbox_min_y",
        "bbox_min_z", "bbox_max_x",     "bbox_max_y",    "bbox_max_z",    "volume",
        "total_photons", "peak_photons", "velocity_x",   "velocity_y",    "velocity_z",
        "speed",      "accel_x",        "accel_y",       "accel_z",       "orientation_x",
        "orientation_y", "orientation_z", "age"};
    return kNames;
}

Point3 principal_orientation(std::span<const Voxel> voxels) {
    if (voxels.size() < 2) {
        return kDefaultAxis;
    }
    Vec3 mean{};
    for (const Voxel& v : voxels) {
        mean[0] += v.x;
        mean[1] += v.y;
        mean[2] += v.z;
    }
    const auto n = static_cast<double>(voxels.size());
    for (double& m : mean) m /= n;

    Mat3 cov{};
    for (const Voxel& v : voxels) {
        const Vec3 d{v.x - mean[0], v.y - mean[1], v.z - mean[2]};
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) cov[i][j] += d[i] * d[j];
    }
    for (auto& row : cov)
        for (double& c : row) c /= n;

    const double trace = cov[0][0] + cov[1][1] + cov[2][2];
    if (trace <= 1e-12) {
        return kDefaultAxis;
    }
    double off_iso = 0.0;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            off_iso = std::max(off_iso, std::abs(cov[i][j] - (i == j ? trace / 3.0 : 0.0)));
    if (off_iso <= 1e-9 * trace) {
        return kDefaultAxis;
    }

    // Power iteration on cov^16: same eigenvectors, eigenvalue gaps raised to
    // the 16th power, so 100 iterations suffice even for close eigenvalues.
    Mat3 b = cov;
    for (int s = 0; s < 4; ++s) {
        const double f = frobenius(b);
        for (auto& row : b)
            for (double& c : row) c /= f;
        b = multiply(b, b);
    }
    Vec3 v{};
    double best = -1.0;
    for (int j = 0; j < 3; ++j) {
        const Vec3 col{b[0][j], b[1][j], b[2][j]};
        if (norm(col) > best) {
            best = norm(col);
            v = col;
        }
    }
    if (best <= 0.0) {
        return kDefaultAxis;
    }
    for (double& c : v) c /= best;

    for (int it = 0; it < 100; ++it) {
        Vec3 w{};
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) w[i] += b[i][j] * v[j];
        const double wn = norm(w);
        if (wn == 0.0) {
            break;
        }
        for (double& c : w) c /= wn;
        const double change = norm({w[0] - v[0], w[1] - v[1], w[2] - v[2]});
        v = w;
        if (change < 1e-10) {
            break;
        }
    }

    for (double c : v) {
        if (std::abs(c) > 1e-12) {
            if (c < 0) {
                for (double& x : v) x = -x;
            }
            break;
        }
    }
    return {v[0], v[1], v[2]};
}

FeatureVector compute_features(const Track& track, const Track* prev) {
    FeatureVector f;
    const TargetObservation& o = track.obs;
    const Point3 vel = velocity_of(track.kf);
    const Point3 accel = prev ? Point3{vel.x - velocity_of(prev->kf).x,
                                       vel.y - velocity_of(prev->kf).y,
                                       vel.z - velocity_of(prev->kf).z}
                              : Point3{};
    const Point3 axis = principal_orientation(o.voxels);

    using F = FeatureVector;
    f[F::kCentroidX] = track.centroid.x;
    f[F::kCentroidY] = track.centroid.y;
    f[F::kCentroidZ] = track.centroid.z;
    f[F::kBboxMinX] = track.bbox.min.x;
    f[F::kBboxMinY] = track.bbox.min.y;
    f[F::kBboxMinZ] = track.bbox.min.z;
    f[F::kBboxMaxX] = track.bbox.max.x;
    f[F::kBboxMaxY] = track.bbox.max.y;
    f[F::kBboxMaxZ] = track.bbox.max.z;
    f[F::kVolume] = static_cast<double>(o.volume);
    f[F::kTotalPhotons] = static_cast<double>(o.total_photons);
    f[F::kPeakPhotons] = static_cast<double>(o.peak_photons);
    f[F::kVelocityX] = vel.x;
    f[F::kVelocityY] = vel.y;
    f[F::kVelocityZ] = vel.z;
    f[F::kSpeed] = std::sqrt(vel.x * vel.x + vel.y * vel.y + vel.z * vel.z);
    f[F::kAccelX] = accel.x;
    f[F::kAccelY] = accel.y;
    f[F::kAccelZ] = accel.z;
    f[F::kOrientationX] = axis.x;
    f[F::kOrientationY] = axis.y;
    f[F::kOrientationZ] = axis.z;
    f[F::kAge] = track.age;
    return f;
}

}  // namespace ladar
