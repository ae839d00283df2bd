#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <vector>

#include "ladartrack/geometry.hpp"
#include "ladartrack/raw_ingest.hpp"

namespace ladar {

/// Velocity in effect from `start_step` until the next segment begins.
struct VelocitySegment {
    std::size_t start_step = 0;
    Point3 velocity;  ///< pixels / range bins per step
};

/// Axis-aligned box moving through sensor space. Positions are in pixel
/// columns/rows and raw range bins (not histogram z).
struct SceneTarget {
    std::array<int, 3> size{1, 1, 1};
    Point3 start;  ///< box centre at step 0
    std::vector<VelocitySegment> velocity;
    double reflectivity = 0.0;  ///< mean signal photons per pulse for the whole target

    Point3 centre_at(std::size_t step) const;
    /// Integer box (sensor coordinates, unclipped) at a step.
    BoundingBox box_at(std::size_t step) const;
};

struct SceneSpec {
    std::vector<SceneTarget> targets;
    double noise_rate = 0.0;  ///< mean dark counts per frame over the whole array
    std::size_t n_groups = 1;
    std::uint64_t seed = 1;
    SensorConfig sensor;  ///< optional sensor keys of the scene file

    void validate() const;
};

struct TruthRecord {
    bool alive = false;  ///< some part of the box is inside the histogram volume
    Point3 centroid;     ///< centre of the clipped box, histogram coordinates
    BoundingBox bbox;    ///< clipped box, histogram coordinates
};

struct GroundTruth {
    std::vector<std::vector<TruthRecord>> steps;  ///< [step][target]
};

/// Pulse train for one step. Each group draws from its own RNG stream
/// seeded by (scene seed, group index), so groups are independent.
FrameGroup simulate_group(const SceneSpec& scene, const SensorConfig& cfg,
                          std::size_t group_index);

std::vector<TruthRecord> truth_at(const SceneSpec& scene, const SensorConfig& cfg,
                                  std::size_t step);

struct Simulation {
    std::vector<FrameGroup> groups;
    GroundTruth truth;
};

Simulation simulate(const SceneSpec& scene, const SensorConfig& cfg);

/// Emit frames in the raw file format. Returns bytes written; throws IoFailure.
std::uint64_t write_raw(std::span<const RawFrame> frames, std::ostream& sink);

/// Scene text: `key = value` lines, `#` comments, `[target]` opens a target
/// block. See README for the key list. Throws ParseError.
SceneSpec parse_scene(std::istream& in);
SceneSpec load_scene(const std::filesystem::path& path);

}  // namespace ladar
