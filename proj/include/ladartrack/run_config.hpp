#pragma once

#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>

#include "ladartrack/denoise.hpp"
#include "ladartrack/labeling.hpp"
#include "ladartrack/raw_ingest.hpp"
#include "ladartrack/track_manager.hpp"

namespace ladar {

/// Everything the `track` command needs, settable by key.
struct RunConfig {
    SensorConfig sensor;
    DenoiseConfig denoise;
    Connectivity connectivity = Connectivity::TwentySix;
    TrackerConfig tracker;

    /// Throws ParseError for unknown keys or malformed values.
    void set(std::string_view key, std::string_view value);
    void validate() const;

private:
    // Threshold keys may arrive in any order; denoise.mode is rebuilt from them.
    std::string threshold_mode_ = "fixed";
    double threshold_ = 2.0;
    double alpha_ = 0.5;
    double beta_ = 0.5;
};

RunConfig parse_run_config(std::istream& in);
RunConfig load_run_config(const std::filesystem::path& path);

/// Apply `key=value` strings in order; later ones win.
void apply_overrides(RunConfig& cfg, std::span<const std::string> assignments);

}  // namespace ladar
