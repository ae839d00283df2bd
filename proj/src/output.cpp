#include "ladartrack/output.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <ostream>

#include <json.hpp>

#include "ladartrack/errors.hpp"
#include "ladartrack/features.hpp"

namespace ladar {

std::string format_real(double v) {
    if (v == 0.0) {
        v = 0.0;  // fold -0 into 0
    }
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.9g", v);
    return buf;
}

void write_tracks_header(std::ostream& out) {
    out << "step,track_id,state,bad_count";
    for (std::string_view name : FeatureVector::names()) {
        out << ',' << name;
    }
    out << '\n';
}

void write_track_rows(std::ostream& out, const HistoryEntry& entry) {
    for (const Track& t : entry.tracks) {
        out << entry.step << ',' << t.track_id << ',' << to_string(t.state) << ',' << t.bad_count;
        for (double v : t.features.values) {
            out << ',' << format_real(v);
        }
        out << '\n';
    }
}

void write_links_header(std::ostream& out) { out << "step,old_slot,new_slot,track_id\n"; }

void write_link_rows(std::ostream& out, const HistoryEntry& entry) {
    for (std::size_t nt = 0; nt < entry.bw.size(); ++nt) {
        if (entry.bw[nt]) {
            out << entry.step << ',' << *entry.bw[nt] << ',' << nt << ','
                << entry.tracks[nt].track_id << '\n';
        }
    }
}

void write_truth_header(std::ostream& out) {
    out << "step,target,alive,centroid_x,centroid_y,centroid_z,"
           "bbox_min_x,bbox_min_y,bbox_min_z,bbox_max_x,bbox_max_y,bbox_max_z\n";
}

void write_truth_rows(std::ostream& out, std::size_t step, const std::vector<TruthRecord>& truth) {
    for (std::size_t k = 0; k < truth.size(); ++k) {
        const TruthRecord& r = truth[k];
        out << step << ',' << k << ',' << (r.alive ? 1 : 0) << ',' << format_real(r.centroid.x)
            << ',' << format_real(r.centroid.y) << ',' << format_real(r.centroid.z) << ','
            << r.bbox.min.x << ',' << r.bbox.min.y << ',' << r.bbox.min.z << ',' << r.bbox.max.x
            << ',' << r.bbox.max.y << ',' << r.bbox.max.z << '\n';
    }
}

Image8 max_projection(const VoxelGrid& grid, ProjectionAxis axis) {
    const Dims d = grid.dims();
    Image8 img;
    switch (axis) {
        case ProjectionAxis::Z:
            img.width = d.nx;
            img.height = d.ny;
            break;
        case ProjectionAxis::Y:
            img.width = d.nx;
            img.height = d.nz;
            break;
        case ProjectionAxis::X:
            img.width = d.ny;
            img.height = d.nz;
            break;
    }
    std::vector<std::uint32_t> acc(img.width * img.height, 0);
    for (std::size_t z = 0; z < d.nz; ++z) {
        for (std::size_t y = 0; y < d.ny; ++y) {
            for (std::size_t x = 0; x < d.nx; ++x) {
                const std::uint32_t v = grid.counts(x, y, z);
                std::size_t p = 0;
                switch (axis) {
                    case ProjectionAxis::Z:
                        p = y * img.width + x;
                        break;
                    case ProjectionAxis::Y:
                        p = z * img.width + x;
                        break;
                    case ProjectionAxis::X:
                        p = z * img.width + y;
                        break;
                }
                acc[p] = std::max(acc[p], v);
            }
        }
    }
    const std::uint32_t peak = acc.empty() ? 0 : *std::max_element(acc.begin(), acc.end());
    img.pixels.resize(acc.size(), 0);
    if (peak > 0) {
        for (std::size_t i = 0; i < acc.size(); ++i) {
            img.pixels[i] = static_cast<std::uint8_t>((255ull * acc[i] + peak / 2) / peak);
        }
    }
    return img;
}

void write_pgm(const std::filesystem::path& path, const Image8& image) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw IoFailure("cannot create " + path.string());
    }
    out << "P5\n" << image.width << ' ' << image.height << "\n255\n";
    out.write(reinterpret_cast<const char*>(image.pixels.data()),
              static_cast<std::streamsize>(image.pixels.size()));
    if (!out) {
        throw IoFailure("write failed for " + path.string());
    }
}

void write_projections(const std::filesystem::path& dir, const std::string& stem,
                       const VoxelGrid& grid) {
    write_pgm(dir / (stem + "_xy.pgm"), max_projection(grid, ProjectionAxis::Z));
    write_pgm(dir / (stem + "_xz.pgm"), max_projection(grid, ProjectionAxis::Y));
    write_pgm(dir / (stem + "_yz.pgm"), max_projection(grid, ProjectionAxis::X));
}

void TrackSummary::observe(const HistoryEntry& entry) {
    for (const Track& t : entry.tracks) {
        auto [it, inserted] = lives_.try_emplace(t.track_id);
        Life& life = it->second;
        if (inserted) {
            life.first_step = entry.step;
        }
        life.last_step = entry.step;
        ++life.points;
        if (t.state != TrackState::Coasting) {
            ++life.observed;
        }
        life.final_state = std::string(to_string(t.state));
    }
}

std::string TrackSummary::to_json(std::size_t steps, double seconds) const {
    nlohmann::ordered_json doc;
    doc["steps"] = steps;
    doc["sensor_seconds"] = seconds;
    doc["track_count"] = lives_.size();
    auto& tracks = doc["tracks"] = nlohmann::ordered_json::array();
    for (const auto& [id, life] : lives_) {
        nlohmann::ordered_json t;
        t["track_id"] = id;
        t["first_step"] = life.first_step;
        t["last_step"] = life.last_step;
        t["lifespan"] = life.last_step - life.first_step + 1;
        t["final_state"] = life.final_state;
        t["trajectory_points"] = life.points;
        t["observed_points"] = life.observed;
        tracks.push_back(std::move(t));
    }
    return doc.dump(2) + "\n";
}

}  // namespace ladar
