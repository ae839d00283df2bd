#include "ladartrack/commands.hpp"

#include <cstdio>
#include <fstream>
#include <ostream>
#include <stdexcept>

#include "ladartrack/errors.hpp"
#include "ladartrack/output.hpp"
#include "ladartrack/pipeline.hpp"
#include "ladartrack/run_config.hpp"
#include "ladartrack/simulator.hpp"
#include "ladartrack/voxelizer.hpp"

namespace ladar {

namespace {

std::string step_stem(std::size_t step) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "step_%05zu", step);
    return buf;
}

RunConfig resolve_config(const std::optional<std::filesystem::path>& path,
                         const std::vector<std::string>& overrides) {
    RunConfig cfg = path ? load_run_config(*path) : RunConfig{};
    apply_overrides(cfg, overrides);
    cfg.validate();
    return cfg;
}

void ensure_dir(const std::filesystem::path& dir) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) {
        throw IoFailure("cannot create directory " + dir.string() + ": " + ec.message());
    }
}

std::ofstream open_out(const std::filesystem::path& path, std::ios::openmode mode = {}) {
    std::ofstream out(path, std::ios::out | std::ios::trunc | mode);
    if (!out) {
        throw IoFailure("cannot create " + path.string());
    }
    return out;
}

// Map library errors onto the documented exit codes.
template <class Body>
int guarded(std::ostream& err, Body&& body) {
    try {
        return body();
    } catch (const InvariantViolation& e) {
        err << "internal error: " << e.what() << '\n';
        return kExitInternal;
    } catch (const IoFailure& e) {
        err << "I/O error: " << e.what() << '\n';
        return kExitIo;
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return kExitParse;
    } catch (const std::out_of_range& e) {
        err << "error: " << e.what() << '\n';
        return kExitParse;
    } catch (const std::exception& e) {
        err << "internal error: " << e.what() << '\n';
        return kExitInternal;
    }
}

}  // namespace

int cmd_simulate(const SimulateOptions& opt, std::ostream& out, std::ostream& err) {
    return guarded(err, [&] {
        const SceneSpec scene = load_scene(opt.scene);
        const SensorConfig& cfg = scene.sensor;
        std::ofstream raw = open_out(opt.out, std::ios::binary);
        std::ofstream truth;
        if (opt.truth) {
            truth = open_out(*opt.truth);
            write_truth_header(truth);
        }
        std::uint64_t bytes = 0;
        for (std::size_t g = 0; g < scene.n_groups; ++g) {
            const FrameGroup group = simulate_group(scene, cfg, g);
            bytes += write_raw(group.frames, raw);
            if (opt.truth) {
                write_truth_rows(truth, g, truth_at(scene, cfg, g));
            }
        }
        raw.close();
        if (!raw || (opt.truth && !truth)) {
            throw IoFailure("failed to finish writing outputs");
        }
        out << "wrote " << bytes << " bytes, " << scene.n_groups << " groups ("
            << scene.n_groups * static_cast<std::size_t>(cfg.pulses_per_group) << " frames)\n";
        return kExitOk;
    });
}

int cmd_track(const TrackOptions& opt, std::ostream& out, std::ostream& err) {
    return guarded(err, [&] {
        const RunConfig cfg = resolve_config(opt.config, opt.overrides);
        RawFileReader reader(opt.raw, cfg.sensor);
        if (reader.discarded_frames() > 0) {
            err << "warning: discarding " << reader.discarded_frames()
                << " frames of a trailing partial group\n";
        }
        ensure_dir(opt.out_dir);
        const auto proj_dir = opt.out_dir / "projections";
        if (opt.projections) {
            ensure_dir(proj_dir);
        }
        std::ofstream tracks = open_out(opt.out_dir / "tracks.csv");
        std::ofstream links = open_out(opt.out_dir / "links.csv");
        write_tracks_header(tracks);
        write_links_header(links);

        TrackSummary summary;
        std::size_t steps = 0;
        run_pipeline(reader, cfg, [&](const StepInput& in, const Tracker& tracker) {
            const HistoryEntry& entry = tracker.ring().newest();
            write_track_rows(tracks, entry);
            write_link_rows(links, entry);
            summary.observe(entry);
            if (opt.projections) {
                write_projections(proj_dir, step_stem(in.step), in.grid);
            }
            ++steps;
        });

        tracks.close();
        links.close();
        if (!tracks || !links) {
            throw IoFailure("failed to finish writing CSV outputs");
        }
        const double seconds = sensor_seconds(steps, cfg.sensor);
        std::ofstream json = open_out(opt.out_dir / "summary.json");
        json << summary.to_json(steps, seconds);
        if (reader.clamped() > 0) {
            err << "warning: clamped " << reader.clamped() << " pixel values above ceiling\n";
        }
        out << "tracked " << steps << " steps (" << format_real(seconds)
            << " s of sensor time)\n";
        return kExitOk;
    });
}

int cmd_inspect(const InspectOptions& opt, std::ostream& out, std::ostream& err) {
    return guarded(err, [&] {
        const RunConfig cfg = resolve_config(opt.config, opt.overrides);
        RawFileReader reader(opt.raw, cfg.sensor);
        const FrameGroup group = reader.read_group(opt.group);
        const VoxelGrid grid = build_histogram(group, cfg.sensor);
        const GridStats s = grid_stats(grid);
        ensure_dir(opt.out_dir);
        write_projections(opt.out_dir, step_stem(opt.group), grid);
        const Dims d = grid.dims();
        out << "group " << opt.group << " of " << reader.group_count() << '\n'
            << "grid " << d.nx << 'x' << d.ny << 'x' << d.nz << '\n'
            << "photons " << s.total_photons << '\n'
            << "nonzero_voxels " << s.nonzero << '\n'
            << "max_count " << s.max_count << " at " << s.max_voxel.x << ',' << s.max_voxel.y
            << ',' << s.max_voxel.z << '\n';
        return kExitOk;
    });
}

}  // namespace ladar
