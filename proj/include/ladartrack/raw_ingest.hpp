#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <span>
#include <vector>

namespace ladar {

/// Geometry and range-gating of the photon-counting focal plane.
///
/// A pixel value equal to `ceiling` means no photon arrived during the
/// integration window. Histogram bins cover [offset, ceiling - offset), so the
/// range depth of a voxel grid is `ceiling - 2 * offset` (600 with defaults).
struct SensorConfig {
    int width = 32;
    int height = 32;
    int pulses_per_group = 200;
    int ceiling = 620;
    int offset = 10;

    /// Throws InvalidConfig when any invariant is broken.
    void validate() const;

    int depth() const { return ceiling - 2 * offset; }
    std::size_t frame_pixels() const { return static_cast<std::size_t>(width) * height; }
    std::size_t frame_bytes() const { return frame_pixels() * 2; }
};

/// Laser pulse repetition rate of the reference sensor.
inline constexpr double kPulseRateHz = 12000.0;

/// Sensor time spanned by `groups` pulse trains, in seconds.
double sensor_seconds(std::size_t groups, const SensorConfig& cfg);

/// One pulse return: a height x width image of range bins.
struct RawFrame {
    int width = 0;
    int height = 0;
    std::vector<std::uint16_t> pixels;

    RawFrame() = default;
    RawFrame(int w, int h, std::uint16_t fill)
        : width(w), height(h), pixels(static_cast<std::size_t>(w) * h, fill) {}

    std::uint16_t& at(int x, int y) { return pixels[static_cast<std::size_t>(y) * width + x]; }
    std::uint16_t at(int x, int y) const { return pixels[static_cast<std::size_t>(y) * width + x]; }

    bool operator==(const RawFrame&) const = default;
};

/// A pulse train that becomes one 3D histogram.
struct FrameGroup {
    std::vector<RawFrame> frames;
    std::size_t group_index = 0;
};

struct ParsedFrames {
    std::vector<RawFrame> frames;
    std::size_t clamped = 0;  ///< pixels above ceiling that were clamped
};

struct GroupedFrames {
    std::vector<FrameGroup> groups;
    std::size_t discarded = 0;  ///< frames in the trailing partial group
};

/// Number of frames in a raw stream of `byte_length` bytes.
/// Throws EmptyInput / TruncatedFile.
std::size_t frame_count_for(std::uint64_t byte_length, const SensorConfig& cfg);

/// Decode a headerless stream of little-endian uint16 frames (row-major, x fastest).
ParsedFrames parse_frames(std::span<const std::byte> bytes, const SensorConfig& cfg);

GroupedFrames group_frames(std::vector<RawFrame> frames, const SensorConfig& cfg);

/// Random access to pulse trains of a raw file without loading it whole.
class RawFileReader {
public:
    RawFileReader(const std::filesystem::path& path, const SensorConfig& cfg);

    std::size_t frame_count() const { return frames_; }
    std::size_t group_count() const { return frames_ / cfg_.pulses_per_group; }
    std::size_t discarded_frames() const { return frames_ % cfg_.pulses_per_group; }
    std::size_t clamped() const { return clamped_; }

    /// Throws std::out_of_range for a missing group, IoFailure on read errors.
    FrameGroup read_group(std::size_t index);

private:
    SensorConfig cfg_;
    std::ifstream in_;
    std::size_t frames_ = 0;
    std::size_t clamped_ = 0;
    std::vector<std::byte> buffer_;
};

}  // namespace ladar
