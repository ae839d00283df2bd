#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <string_view>

#include "ladartrack/geometry.hpp"

namespace ladar {

struct Track;

/// The 23 per-target features recorded at every step. The order is part of
/// the CSV format and must not change.
struct FeatureVector {
    enum Index : std::size_t {
        kCentroidX,
        kCentroidY,
        kCentroidZ,
        kBboxMinX,
        kBboxMinY,
        kBboxMinZ,
        kBboxMaxX,
        kBboxMaxY,
        kBboxMaxZ,
        kVolume,
        kTotalPhotons,
        kPeakPhotons,
        kVelocityX,
        kVelocityY,
        kVelocityZ,
        kSpeed,
        kAccelX,
        kAccelY,
        kAccelZ,
        kOrientationX,
        kOrientationY,
        kOrientationZ,
        kAge,
        kCount
    };

    static constexpr std::size_t kSize = kCount;
    static const std::array<std::string_view, kSize>& names();

    std::array<double, kSize> values{};

    double operator[](Index i) const { return values[i]; }
    double& operator[](Index i) { return values[i]; }
};

static_assert(FeatureVector::kSize == 23);

/// Dominant axis of the voxel scatter, as a unit vector whose first nonzero
/// component is positive. Single voxels and isotropic scatter give (1, 0, 0).
Point3 principal_orientation(std::span<const Voxel> voxels);

/// `prev` is the same track one step earlier (nullptr for a fresh track);
/// acceleration is the change in filtered velocity since then.
FeatureVector compute_features(const Track& track, const Track* prev);

}  // namespace ladar
