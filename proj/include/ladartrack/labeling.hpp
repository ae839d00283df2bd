#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <vector>

#include "ladartrack/geometry.hpp"
#include "ladartrack/voxelizer.hpp"

namespace ladar {

/// Neighbourhood used for 3D connectivity: faces, faces+edges, or the full cube.
enum class Connectivity { Six = 6, Eighteen = 18, TwentySix = 26 };

/// Throws InvalidConfig for anything but 6, 18 or 26.
Connectivity connectivity_from_int(int n);

/// One connected component of the target mask.
struct TargetObservation {
    std::uint32_t label = 0;
    std::vector<Voxel> voxels;
    std::size_t volume = 0;
    BoundingBox bbox;
    Point3 centroid;  ///< photon-weighted, voxel units
    std::uint64_t total_photons = 0;
    std::uint64_t peak_photons = 0;
};

struct Labeling {
    LabelGrid labels;  ///< 0 = background, components numbered 1..count
    std::uint32_t count = 0;
};

/// Union-find labeling. Labels follow the raster order (x fastest) of each
/// component's first voxel, so output is deterministic.
Labeling label_components(const BinaryMask& mask, Connectivity connectivity);

/// Per-label voxel list, tight bbox, volume and photon statistics taken from
/// `source`. The centroid falls back to uniform weights when every voxel of a
/// component has zero photons.
std::vector<TargetObservation> extract_observations(const LabelGrid& labels,
                                                    const Grid3<std::uint32_t>& source);

/// Weights of the importance score; the score is the weighted sum of features.
struct ImportanceConfig {
    double volume = 1.0;
    double speed = 0.0;
    double total_photons = 0.0;

    void validate() const;
};

double importance_score(const TargetObservation& obs, const ImportanceConfig& cfg, double speed);

/// Stable descending sort by score; equal scores keep ascending label order.
/// `prior_speeds` maps label to speed; labels without an entry score speed 0.
std::vector<TargetObservation> importance_sort(std::vector<TargetObservation> obs,
                                               const ImportanceConfig& cfg,
                                               const std::map<std::uint32_t, double>* prior_speeds =
                                                   nullptr);

/// Keep the first `t_max` entries. Returns how many were dropped.
template <class T>
std::size_t truncate_targets(std::vector<T>& sorted, std::size_t t_max) {
    if (sorted.size() <= t_max) {
        return 0;
    }
    const std::size_t dropped = sorted.size() - t_max;
    sorted.erase(sorted.begin() + static_cast<std::ptrdiff_t>(t_max), sorted.end());
    return dropped;
}

}  // namespace ladar
