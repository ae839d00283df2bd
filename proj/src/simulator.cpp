#include "ladartrack/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <ostream>
#include <random>
#include <string>

#include "ladartrack/errors.hpp"
#include "ladartrack/keyvalue.hpp"

namespace ladar {

Point3 SceneTarget::centre_at(std::size_t step) const {
    Point3 c = start;
    std::vector<VelocitySegment> segs = velocity;
    std::stable_sort(segs.begin(), segs.end(),
                     [](const auto& a, const auto& b) { return a.start_step < b.start_step; });
    for (std::size_t k = 0; k < segs.size(); ++k) {
        const std::size_t from = segs[k].start_step;
        const std::size_t to = k + 1 < segs.size() ? segs[k + 1].start_step : step;
        const std::size_t end = std::min(to, step);
        if (end <= from) {
            continue;
        }
        const auto n = static_cast<double>(end - from);
        c.x += n * segs[k].velocity.x;
        c.y += n * segs[k].velocity.y;
        c.z += n * segs[k].velocity.z;
    }
    return c;
}

BoundingBox SceneTarget::box_at(std::size_t step) const {
    const Point3 c = centre_at(step);
    auto lo = [](double centre, int extent) {
        return static_cast<int>(std::floor(centre - (extent - 1) / 2.0 + 0.5));
    };
    const Voxel min{lo(c.x, size[0]), lo(c.y, size[1]), lo(c.z, size[2])};
    return {min, {min.x + size[0] - 1, min.y + size[1] - 1, min.z + size[2] - 1}};
}

void SceneSpec::validate() const {
    sensor.validate();
    if (!(noise_rate >= 0.0)) {
        throw InvalidConfig("noise_rate must be >= 0");
    }
    if (n_groups < 1) {
        throw InvalidConfig("n_groups must be >= 1");
    }
    for (const SceneTarget& t : targets) {
        if (!(t.reflectivity >= 0.0)) {
            throw InvalidConfig("reflectivity must be >= 0");
        }
        if (t.size[0] < 1 || t.size[1] < 1 || t.size[2] < 1) {
            throw InvalidConfig("target size must be >= 1 in every axis");
        }
    }
}

std::vector<TruthRecord> truth_at(const SceneSpec& scene, const SensorConfig& cfg,
                                  std::size_t step) {
    std::vector<TruthRecord> out;
    out.reserve(scene.targets.size());
    const int z_lo = cfg.offset;
    const int z_hi = cfg.ceiling - cfg.offset - 1;
    for (const SceneTarget& t : scene.targets) {
        const BoundingBox b = t.box_at(step);
        TruthRecord r;
        BoundingBox c{{std::max(b.min.x, 0), std::max(b.min.y, 0), std::max(b.min.z, z_lo)},
                      {std::min(b.max.x, cfg.width - 1), std::min(b.max.y, cfg.height - 1),
                       std::min(b.max.z, z_hi)}};
        r.alive = c.min.x <= c.max.x && c.min.y <= c.max.y && c.min.z <= c.max.z;
        if (r.alive) {
            c.min.z -= cfg.offset;
            c.max.z -= cfg.offset;
            r.bbox = c;
            r.centroid = {(c.min.x + c.max.x) / 2.0, (c.min.y + c.max.y) / 2.0,
                          (c.min.z + c.max.z) / 2.0};
        }
        out.push_back(r);
    }
    return out;
}

FrameGroup simulate_group(const SceneSpec& scene, const SensorConfig& cfg,
                          std::size_t group_index) {
    scene.validate();
    cfg.validate();
    const auto seed = scene.seed;
    const auto g = static_cast<std::uint64_t>(group_index);
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(g), static_cast<std::uint32_t>(g >> 32)};
    std::mt19937_64 rng(seq);

    struct Emitter {
        BoundingBox box;
        int columns;
        std::poisson_distribution<int> photons;
        std::uniform_int_distribution<int> column;
    };
    std::vector<Emitter> emitters;
    for (const SceneTarget& t : scene.targets) {
        if (t.reflectivity <= 0.0) {
            continue;
        }
        const int columns = t.size[0] * t.size[1];
        emitters.push_back({t.box_at(group_index), columns,
                            std::poisson_distribution<int>(t.reflectivity),
                            std::uniform_int_distribution<int>(0, columns - 1)});
    }
    const int pixels = cfg.width * cfg.height;
    std::poisson_distribution<int> dark(scene.noise_rate > 0 ? scene.noise_rate : 1.0);
    std::uniform_int_distribution<int> dark_pixel(0, pixels - 1);
    std::uniform_int_distribution<int> dark_bin(0, cfg.ceiling - 1);

    const auto ceiling = static_cast<std::uint16_t>(cfg.ceiling);
    FrameGroup group;
    group.group_index = group_index;
    group.frames.reserve(static_cast<std::size_t>(cfg.pulses_per_group));
    for (int p = 0; p < cfg.pulses_per_group; ++p) {
        RawFrame frame(cfg.width, cfg.height, ceiling);
        // The pixel keeps the earliest arrival of the window.
        auto arrive = [&](int x, int y, int bin) {
            if (x < 0 || y < 0 || x >= cfg.width || y >= cfg.height || bin < 0 ||
                bin >= cfg.ceiling) {
                return;
            }
            auto& v = frame.at(x, y);
            v = std::min(v, static_cast<std::uint16_t>(bin));
        };
        for (Emitter& e : emitters) {
            const int n = e.photons(rng);
            const int width = e.box.max.x - e.box.min.x + 1;
            for (int k = 0; k < n; ++k) {
                const int c = e.column(rng);
                // Only the face nearest the sensor is visible.
                arrive(e.box.min.x + c % width, e.box.min.y + c / width, e.box.min.z);
            }
        }
        if (scene.noise_rate > 0) {
            const int n = dark(rng);
            for (int k = 0; k < n; ++k) {
                const int pix = dark_pixel(rng);
                const int bin = dark_bin(rng);
                arrive(pix % cfg.width, pix / cfg.width, bin);
            }
        }
        group.frames.push_back(std::move(frame));
    }
    return group;
}

Simulation simulate(const SceneSpec& scene, const SensorConfig& cfg) {
    Simulation sim;
    sim.groups.reserve(scene.n_groups);
    sim.truth.steps.reserve(scene.n_groups);
    for (std::size_t g = 0; g < scene.n_groups; ++g) {
        sim.groups.push_back(simulate_group(scene, cfg, g));
        sim.truth.steps.push_back(truth_at(scene, cfg, g));
    }
    return sim;
}

std::uint64_t write_raw(std::span<const RawFrame> frames, std::ostream& sink) {
    std::uint64_t written = 0;
    std::vector<char> buf;
    for (const RawFrame& f : frames) {
        if (!frames.empty() && (f.width != frames[0].width || f.height != frames[0].height)) {
            throw ConfigMismatch("frames passed to write_raw differ in size");
        }
        buf.resize(f.pixels.size() * 2);
        for (std::size_t i = 0; i < f.pixels.size(); ++i) {
            buf[2 * i] = static_cast<char>(f.pixels[i] & 0xFF);
            buf[2 * i + 1] = static_cast<char>(f.pixels[i] >> 8);
        }
        sink.write(buf.data(), static_cast<std::streamsize>(buf.size()));
        if (!sink) {
            throw IoFailure("write failed after " + std::to_string(written) + " bytes");
        }
        written += buf.size();
    }
    return written;
}

namespace {

Point3 point_from(const std::vector<double>& v, const KeyValueLine& kv, std::size_t at = 0) {
    if (v.size() != at + 3) {
        throw ParseError("line " + std::to_string(kv.line) + ": '" + kv.key + "' expects " +
                         std::to_string(at + 3) + " numbers");
    }
    return {v[at], v[at + 1], v[at + 2]};
}

}  // namespace

SceneSpec parse_scene(std::istream& in) {
    SceneSpec scene;
    SceneTarget* current = nullptr;
    for (const KeyValueLine& kv : parse_key_value_lines(in)) {
        const auto where = "line " + std::to_string(kv.line) + ": ";
        if (kv.is_section) {
            if (kv.key != "target") {
                throw ParseError(where + "unknown section [" + kv.key + "]");
            }
            scene.targets.emplace_back();
            current = &scene.targets.back();
            continue;
        }
        try {
            if (!current) {
                if (kv.key == "noise_rate") {
                    scene.noise_rate = parse_real(kv.value, kv.key);
                } else if (kv.key == "n_groups") {
                    const long long n = parse_integer(kv.value, kv.key);
                    if (n < 1) {
                        throw ParseError("n_groups must be >= 1");
                    }
                    scene.n_groups = static_cast<std::size_t>(n);
                } else if (kv.key == "seed") {
                    scene.seed = static_cast<std::uint64_t>(parse_integer(kv.value, kv.key));
                } else if (kv.key == "width") {
                    scene.sensor.width = static_cast<int>(parse_integer(kv.value, kv.key));
                } else if (kv.key == "height") {
                    scene.sensor.height = static_cast<int>(parse_integer(kv.value, kv.key));
                } else if (kv.key == "pulses_per_group") {
                    scene.sensor.pulses_per_group = static_cast<int>(parse_integer(kv.value, kv.key));
                } else if (kv.key == "ceiling") {
                    scene.sensor.ceiling = static_cast<int>(parse_integer(kv.value, kv.key));
                } else if (kv.key == "offset") {
                    scene.sensor.offset = static_cast<int>(parse_integer(kv.value, kv.key));
                } else {
                    throw ParseError("unknown scene key '" + kv.key + "'");
                }
                continue;
            }
            if (kv.key == "size") {
                const auto v = parse_reals(kv.value, kv.key);
                const Point3 p = point_from(v, kv);
                current->size = {static_cast<int>(p.x), static_cast<int>(p.y), static_cast<int>(p.z)};
            } else if (kv.key == "position") {
                current->start = point_from(parse_reals(kv.value, kv.key), kv);
            } else if (kv.key == "velocity") {
                current->velocity.push_back({0, point_from(parse_reals(kv.value, kv.key), kv)});
            } else if (kv.key == "velocity_from") {
                const auto v = parse_reals(kv.value, kv.key);
                const Point3 p = point_from(v, kv, 1);
                if (v[0] < 0) {
                    throw ParseError("velocity_from step must be >= 0");
                }
                current->velocity.push_back({static_cast<std::size_t>(v[0]), p});
            } else if (kv.key == "reflectivity") {
                current->reflectivity = parse_real(kv.value, kv.key);
            } else {
                throw ParseError("unknown target key '" + kv.key + "'");
            }
        } catch (const ParseError& e) {
            const std::string msg = e.what();
            throw ParseError(msg.rfind("line ", 0) == 0 ? msg : where + msg);
        }
    }
    try {
        scene.validate();
    } catch (const InvalidConfig& e) {
        throw ParseError(std::string("invalid scene: ") + e.what());
    }
    return scene;
}

SceneSpec load_scene(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw IoFailure("cannot open scene file " + path.string());
    }
    return parse_scene(in);
}

}  // namespace ladar
