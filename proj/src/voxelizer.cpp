#include "ladartrack/voxelizer.hpp"

#include <string>

#include "ladartrack/errors.hpp"

namespace ladar {

Dims grid_dims(const SensorConfig& cfg) {
    return {static_cast<std::size_t>(cfg.width), static_cast<std::size_t>(cfg.height),
            static_cast<std::size_t>(cfg.depth())};
}

VoxelGrid build_histogram(const FrameGroup& group, const SensorConfig& cfg) {
    cfg.validate();
    VoxelGrid grid{Grid3<std::uint32_t>(grid_dims(cfg)), group.group_index};
    const Dims d = grid.dims();
    const std::size_t plane = d.nx * d.ny;
    const int lo = cfg.offset;
    const int hi = cfg.ceiling - cfg.offset;  // exclusive

    if (group.frames.size() != static_cast<std::size_t>(cfg.pulses_per_group)) {
        throw ConfigMismatch("group holds " + std::to_string(group.frames.size()) +
                             " frames, sensor expects " + std::to_string(cfg.pulses_per_group));
    }

    auto counts = grid.counts.data();
    for (const RawFrame& frame : group.frames) {
        if (frame.width != cfg.width || frame.height != cfg.height ||
            frame.pixels.size() != plane) {
            throw ConfigMismatch("frame is " + std::to_string(frame.width) + "x" +
                                 std::to_string(frame.height) + ", sensor is " +
                                 std::to_string(cfg.width) + "x" + std::to_string(cfg.height));
        }
        // Pixel index y*W + x equals the grid index of (x, y, 0).
        for (std::size_t p = 0; p < plane; ++p) {
            const int v = frame.pixels[p];
            if (v >= lo && v < hi) {
                ++counts[p + plane * static_cast<std::size_t>(v - lo)];
            }
        }
    }
    return grid;
}

GridStats grid_stats(const VoxelGrid& grid) {
    GridStats s;
    const auto counts = grid.counts.data();
    std::size_t argmax = 0;
    for (std::size_t i = 0; i < counts.size(); ++i) {
        const std::uint32_t c = counts[i];
        s.total_photons += c;
        if (c != 0) {
            ++s.nonzero;
        }
        if (c > s.max_count) {
            s.max_count = c;
            argmax = i;
        }
    }
    if (!counts.empty()) {
        s.max_voxel = grid.counts.coords(argmax);
    }
    return s;
}

}  // namespace ladar
