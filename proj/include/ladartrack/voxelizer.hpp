#pragma once

#include <cstdint>

#include "ladartrack/geometry.hpp"
#include "ladartrack/raw_ingest.hpp"

namespace ladar {

/// Photon-count histogram g(x, y, z) of one pulse train.
struct VoxelGrid {
    Grid3<std::uint32_t> counts;
    std::size_t group_index = 0;

    const Dims& dims() const { return counts.dims(); }
};

Dims grid_dims(const SensorConfig& cfg);

/// counts(x, y, z) = number of frames whose pixel (x, y) equals offset + z.
/// Values outside [offset, ceiling - offset) are ignored.
/// Throws ConfigMismatch when frame dimensions disagree with `cfg`.
VoxelGrid build_histogram(const FrameGroup& group, const SensorConfig& cfg);

struct GridStats {
    std::uint64_t total_photons = 0;
    std::uint32_t max_count = 0;
    Voxel max_voxel;  ///< first voxel (raster order) holding max_count
    std::size_t nonzero = 0;
};

GridStats grid_stats(const VoxelGrid& grid);

}  // namespace ladar
