#pragma once

#include <cstddef>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "ladartrack/raw_ingest.hpp"
#include "ladartrack/simulator.hpp"

namespace testing {

inline std::vector<std::byte> to_bytes(const std::string& s) {
    std::vector<std::byte> out(s.size());
    for (std::size_t i = 0; i < s.size(); ++i) out[i] = static_cast<std::byte>(s[i]);
    return out;
}

inline std::vector<std::byte> encode(const std::vector<ladar::RawFrame>& frames) {
    std::ostringstream os;
    ladar::write_raw(frames, os);
    return to_bytes(os.str());
}

inline ladar::FrameGroup random_group(const ladar::SensorConfig& cfg, std::mt19937& rng,
                                      std::size_t index = 0) {
    std::uniform_int_distribution<int> v(0, cfg.ceiling);
    ladar::FrameGroup g;
    g.group_index = index;
    for (int f = 0; f < cfg.pulses_per_group; ++f) {
        ladar::RawFrame frame(cfg.width, cfg.height, 0);
        for (auto& p : frame.pixels) p = static_cast<std::uint16_t>(v(rng));
        g.frames.push_back(std::move(frame));
    }
    return g;
}

}  // namespace testing
