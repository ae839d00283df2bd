#include "ladartrack/raw_ingest.hpp"

#include <stdexcept>
#include <string>

#include "ladartrack/errors.hpp"

namespace ladar {

namespace {

// Decode one frame, clamping values above the ceiling. Returns clamp count.
std::size_t decode_frame(const std::byte* src, const SensorConfig& cfg, RawFrame& frame) {
    const auto ceiling = static_cast<std::uint16_t>(cfg.ceiling);
    std::size_t clamped = 0;
    for (std::size_t i = 0; i < frame.pixels.size(); ++i) {
        const auto lo = std::to_integer<std::uint16_t>(src[2 * i]);
        const auto hi = std::to_integer<std::uint16_t>(src[2 * i + 1]);
        auto v = static_cast<std::uint16_t>(lo | (hi << 8));
        if (v > ceiling) {
            v = ceiling;
            ++clamped;
        }
        frame.pixels[i] = v;
    }
    return clamped;
}

}  // namespace

void SensorConfig::validate() const {
    if (width < 1 || height < 1) {
        throw InvalidConfig("sensor width and height must be >= 1");
    }
    if (pulses_per_group < 1) {
        throw InvalidConfig("pulses_per_group must be >= 1");
    }
    if (offset < 0) {
        throw InvalidConfig("offset must be >= 0");
    }
    if (ceiling > 65535) {
        throw InvalidConfig("ceiling must fit in 16 bits");
    }
    if (depth() < 1) {
        throw InvalidConfig("ceiling - 2 * offset must be >= 1");
    }
}

double sensor_seconds(std::size_t groups, const SensorConfig& cfg) {
    return static_cast<double>(groups) * cfg.pulses_per_group / kPulseRateHz;
}

std::size_t frame_count_for(std::uint64_t byte_length, const SensorConfig& cfg) {
    if (byte_length == 0) {
        throw EmptyInput("raw input is empty");
    }
    const std::uint64_t frame_bytes = cfg.frame_bytes();
    if (byte_length % frame_bytes != 0) {
        throw TruncatedFile("raw input of " + std::to_string(byte_length) +
                            " bytes is not a multiple of the " + std::to_string(frame_bytes) +
                            "-byte frame size");
    }
    return static_cast<std::size_t>(byte_length / frame_bytes);
}

ParsedFrames parse_frames(std::span<const std::byte> bytes, const SensorConfig& cfg) {
    cfg.validate();
    const std::size_t count = frame_count_for(bytes.size(), cfg);
    const std::size_t frame_bytes = cfg.frame_bytes();

    ParsedFrames out;
    out.frames.reserve(count);
    for (std::size_t f = 0; f < count; ++f) {
        RawFrame frame(cfg.width, cfg.height, 0);
        out.clamped += decode_frame(bytes.data() + f * frame_bytes, cfg, frame);
        out.frames.push_back(std::move(frame));
    }
    return out;
}

GroupedFrames group_frames(std::vector<RawFrame> frames, const SensorConfig& cfg) {
    cfg.validate();
    const auto per_group = static_cast<std::size_t>(cfg.pulses_per_group);
    GroupedFrames out;
    const std::size_t n_groups = frames.size() / per_group;
    out.discarded = frames.size() % per_group;
    out.groups.reserve(n_groups);
    auto it = std::make_move_iterator(frames.begin());
    for (std::size_t g = 0; g < n_groups; ++g) {
        FrameGroup group;
        group.group_index = g;
        group.frames.assign(it, it + static_cast<std::ptrdiff_t>(per_group));
        it += static_cast<std::ptrdiff_t>(per_group);
        out.groups.push_back(std::move(group));
    }
    return out;
}

RawFileReader::RawFileReader(const std::filesystem::path& path, const SensorConfig& cfg)
    : cfg_(cfg) {
    cfg_.validate();
    std::error_code ec;
    const auto size = std::filesystem::file_size(path, ec);
    if (ec) {
        throw IoFailure("cannot stat " + path.string() + ": " + ec.message());
    }
    frames_ = frame_count_for(size, cfg_);
    in_.open(path, std::ios::binary);
    if (!in_) {
        throw IoFailure("cannot open " + path.string());
    }
}

FrameGroup RawFileReader::read_group(std::size_t index) {
    if (index >= group_count()) {
        throw std::out_of_range("group " + std::to_string(index) + " out of range (file has " +
                                std::to_string(group_count()) + " groups)");
    }
    const std::size_t frame_bytes = cfg_.frame_bytes();
    const std::size_t per_group = static_cast<std::size_t>(cfg_.pulses_per_group);
    buffer_.resize(frame_bytes * per_group);
    in_.clear();
    in_.seekg(static_cast<std::streamoff>(index * per_group * frame_bytes));
    in_.read(reinterpret_cast<char*>(buffer_.data()), static_cast<std::streamsize>(buffer_.size()));
    if (!in_) {
        throw IoFailure("short read in group " + std::to_string(index));
    }

    FrameGroup group;
    group.group_index = index;
    group.frames.reserve(per_group);
    for (std::size_t f = 0; f < per_group; ++f) {
        RawFrame frame(cfg_.width, cfg_.height, 0);
        clamped_ += decode_frame(buffer_.data() + f * frame_bytes, cfg_, frame);
        group.frames.push_back(std::move(frame));
    }
    return group;
}

}  // namespace ladar
