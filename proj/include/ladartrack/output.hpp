#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "ladartrack/simulator.hpp"
#include "ladartrack/track_manager.hpp"
#include "ladartrack/voxelizer.hpp"

namespace ladar {

/// Nine significant digits, `.` decimal point, no locale.
std::string format_real(double v);

void write_tracks_header(std::ostream& out);
void write_track_rows(std::ostream& out, const HistoryEntry& entry);

void write_links_header(std::ostream& out);
/// One row per backward link of `entry` (mirrors the forward links of the
/// previous step): step, old_slot, new_slot, track_id.
void write_link_rows(std::ostream& out, const HistoryEntry& entry);

void write_truth_header(std::ostream& out);
void write_truth_rows(std::ostream& out, std::size_t step, const std::vector<TruthRecord>& truth);

enum class ProjectionAxis { X, Y, Z };

/// 8-bit grey image, row-major.
struct Image8 {
    std::size_t width = 0;
    std::size_t height = 0;
    std::vector<std::uint8_t> pixels;
};

/// Maximum-intensity projection along `axis`, rescaled linearly so the
/// largest value maps to 255. Z gives an x-by-y image; Y gives x-by-z; X gives y-by-z.
Image8 max_projection(const VoxelGrid& grid, ProjectionAxis axis);

/// Binary PGM (P5). Throws IoFailure.
void write_pgm(const std::filesystem::path& path, const Image8& image);

/// Writes <stem>_xy.pgm, <stem>_xz.pgm, <stem>_yz.pgm into `dir`.
void write_projections(const std::filesystem::path& dir, const std::string& stem,
                       const VoxelGrid& grid);

/// Per-track lifespan bookkeeping for summary.json.
class TrackSummary {
public:
    void observe(const HistoryEntry& entry);
    std::string to_json(std::size_t steps, double sensor_seconds) const;

private:
    struct Life {
        std::size_t first_step = 0;
        std::size_t last_step = 0;
        std::size_t points = 0;
        std::size_t observed = 0;
        std::string final_state;
    };
    std::map<std::uint64_t, Life> lives_;
};

}  // namespace ladar
