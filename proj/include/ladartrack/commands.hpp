#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace ladar {

inline constexpr int kExitOk = 0;
inline constexpr int kExitParse = 1;
inline constexpr int kExitIo = 2;
inline constexpr int kExitInternal = 3;

struct SimulateOptions {
    std::filesystem::path scene;
    std::filesystem::path out;
    std::optional<std::filesystem::path> truth;
};

struct TrackOptions {
    std::filesystem::path raw;
    std::optional<std::filesystem::path> config;
    std::filesystem::path out_dir;
    std::vector<std::string> overrides;
    bool projections = false;
};

struct InspectOptions {
    std::filesystem::path raw;
    std::size_t group = 0;
    std::optional<std::filesystem::path> config;
    std::vector<std::string> overrides;
    std::filesystem::path out_dir = ".";
};

int cmd_simulate(const SimulateOptions& opt, std::ostream& out, std::ostream& err);
int cmd_track(const TrackOptions& opt, std::ostream& out, std::ostream& err);
int cmd_inspect(const InspectOptions& opt, std::ostream& out, std::ostream& err);

}  // namespace ladar
