// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any failure.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "ladartrack/commands.hpp"
#include "ladartrack/denoise.hpp"
#include "ladartrack/kalman.hpp"
#include "ladartrack/labeling.hpp"
#include "ladartrack/pipeline.hpp"
#include "ladartrack/raw_ingest.hpp"
#include "ladartrack/run_config.hpp"
#include "ladartrack/simulator.hpp"
#include "ladartrack/track_manager.hpp"
#include "ladartrack/voxelizer.hpp"
#include "oracles.hpp"

using namespace ladar;
namespace fs = std::filesystem;

namespace {

struct Outcome {
    bool pass = false;
    std::string detail;
};

std::string fmt(const char* f, double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, f, v);
    return buf;
}

struct TempDir {
    fs::path path;
    TempDir() {
        path = fs::temp_directory_path() /
               ("ladartrack_accept_" + std::to_string(std::random_device{}()));
        fs::create_directories(path);
    }
    ~TempDir() {
        std::error_code ec;
        fs::remove_all(path, ec);
    }
};

template <class T>
oracle::Cube<T> to_cube(const Grid3<T>& g) {
    const Dims d = g.dims();
    auto c = oracle::make_cube<T>(d.nx, d.ny, d.nz);
    for (std::size_t x = 0; x < d.nx; ++x)
        for (std::size_t y = 0; y < d.ny; ++y)
            for (std::size_t z = 0; z < d.nz; ++z) c[x][y][z] = g(x, y, z);
    return c;
}

// ---- 1 ----
Outcome grid_shape() {
    const SensorConfig cfg;
    FrameGroup g;
    for (int f = 0; f < cfg.pulses_per_group; ++f) g.frames.emplace_back(cfg.width, cfg.height, 0);
    const Dims d = build_histogram(g, cfg).dims();
    const bool ok = d == Dims{32, 32, 600} && grid_dims(cfg) == d;
    return {ok, std::to_string(d.nx) + "x" + std::to_string(d.ny) + "x" + std::to_string(d.nz)};
}

// ---- 2 ----
Outcome file_arithmetic() {
    const SensorConfig cfg;
    const std::uint64_t bytes = 300ull * static_cast<std::uint64_t>(cfg.pulses_per_group) *
                                cfg.frame_bytes();
    const std::size_t frames = frame_count_for(bytes, cfg);
    const double rel = std::abs(double(bytes) - 125e6) / 125e6;
    const bool ok = bytes == 122'880'000ull && frames == 60'000 &&
                    frames / static_cast<std::size_t>(cfg.pulses_per_group) == 300 && rel <= 0.02;
    return {ok, std::to_string(bytes) + " bytes, " + fmt("%.2f%% from 125e6", 100 * rel)};
}

// ---- 3 ----
Outcome majority_oracle() {
    std::mt19937 rng(3);
    std::uniform_real_distribution<double> density(0.05, 0.95);
    std::size_t mismatches = 0, runs = 0;
    for (int trial = 0; trial < 1000; ++trial) {
        BinaryMask m(Dims{8, 8, 8});
        std::bernoulli_distribution bit(density(rng));
        for (auto& b : m.data()) b = bit(rng);
        auto cube = oracle::make_cube<int>(8, 8, 8);
        for (std::size_t x = 0; x < 8; ++x)
            for (std::size_t y = 0; y < 8; ++y)
                for (std::size_t z = 0; z < 8; ++z) cube[x][y][z] = m(x, y, z);
        for (int k : {0, 2, 13, 26}) {
            const auto got = majority_rule(m, k);
            const auto want = oracle::majority(cube, k);
            for (std::size_t x = 0; x < 8; ++x)
                for (std::size_t y = 0; y < 8; ++y)
                    for (std::size_t z = 0; z < 8; ++z)
                        mismatches += got(x, y, z) != want[x][y][z];
            ++runs;
        }
    }
    return {mismatches == 0,
            std::to_string(runs) + " mask/threshold pairs, " + std::to_string(mismatches) +
                " voxel mismatches"};
}

// ---- 4 ----
bool same_partition(const LabelGrid& labels, const oracle::Cube<int>& comp) {
    std::map<std::uint32_t, int> fwd;
    std::map<int, std::uint32_t> back;
    const Dims d = labels.dims();
    for (std::size_t x = 0; x < d.nx; ++x)
        for (std::size_t y = 0; y < d.ny; ++y)
            for (std::size_t z = 0; z < d.nz; ++z) {
                const std::uint32_t l = labels(x, y, z);
                const int c = comp[x][y][z];
                if ((l == 0) != (c < 0)) return false;
                if (l == 0) continue;
                if (fwd.emplace(l, c).first->second != c) return false;
                if (back.emplace(c, l).first->second != l) return false;
            }
    return true;
}

Outcome ccl_oracle() {
    std::mt19937 rng(4);
    std::uniform_real_distribution<double> density(0.1, 0.6);
    std::size_t bad_partition = 0, bad_order = 0;
    for (int trial = 0; trial < 500; ++trial) {
        BinaryMask m(Dims{6, 6, 6});
        std::bernoulli_distribution bit(density(rng));
        for (auto& b : m.data()) b = bit(rng);
        auto cube = oracle::make_cube<int>(6, 6, 6);
        for (int x = 0; x < 6; ++x)
            for (int y = 0; y < 6; ++y)
                for (int z = 0; z < 6; ++z) cube[x][y][z] = m(x, y, z);
        std::map<int, std::uint32_t> counts;
        for (int c : {6, 18, 26}) {
            const auto lab = label_components(m, connectivity_from_int(c));
            const auto [comp, n] = oracle::flood_fill(cube, c);
            if (static_cast<int>(lab.count) != n || !same_partition(lab.labels, comp)) ++bad_partition;
            counts[c] = lab.count;
        }
        if (!(counts[26] <= counts[18] && counts[18] <= counts[6])) ++bad_order;
    }
    return {bad_partition == 0 && bad_order == 0,
            "1500 labelings, " + std::to_string(bad_partition) + " partition mismatches, " +
                std::to_string(bad_order) + " monotonicity violations"};
}

// ---- 5 ----
Outcome parzen_separability() {
    std::mt19937 rng(5);
    std::uniform_real_distribution<double> sig(0.5, 2.0), val(0.0, 10.0);
    double worst = 0, worst_mass = 0;
    for (int trial = 0; trial < 100; ++trial) {
        const std::array<double, 3> s{sig(rng), sig(rng), sig(rng)};
        RealGrid g(Dims{8, 8, 8});
        for (auto& v : g.data()) v = val(rng);
        const auto got = parzen_smooth(g, s, 3.0);
        const auto want = oracle::direct_convolution(to_cube(g), s, 3.0);
        double diff = 0, peak = 0;
        for (std::size_t x = 0; x < 8; ++x)
            for (std::size_t y = 0; y < 8; ++y)
                for (std::size_t z = 0; z < 8; ++z) {
                    diff = std::max(diff, std::abs(got(x, y, z) - want[x][y][z]));
                    peak = std::max(peak, std::abs(want[x][y][z]));
                }
        worst = std::max(worst, diff / peak);

        // impulse far enough from the border that the kernel fits
        RealGrid impulse(Dims{15, 15, 15});
        impulse(7, 7, 7) = 1.0;
        const auto spread = parzen_smooth(impulse, s, 3.0);
        double mass = 0;
        for (double v : spread.data()) mass += v;
        worst_mass = std::max(worst_mass, std::abs(mass - 1.0));
    }
    return {worst < 1e-9 && worst_mass < 1e-6,
            "max relative error " + fmt("%.3g", worst) + ", impulse mass error " +
                fmt("%.3g", worst_mass)};
}

// ---- 6 ----
Outcome kalman_oracle() {
    std::mt19937_64 rng(6);
    std::uniform_real_distribution<double> u(-100, 100), qd(1e-3, 1.0), rd(1e-2, 5.0);
    std::uniform_int_distribution<int> dt(1, 3);
    double worst = 0, asym = 0;
    int cycles = 0;
    for (int run = 0; run < 50; ++run) {
        KalmanParams p;
        p.q = qd(rng);
        p.r = rd(rng);
        auto s = kf_init({u(rng), u(rng), u(rng)}, p);
        oracle::DenseKf d;
        for (int i = 0; i < 6; ++i) {
            d.x[i] = s.x(i);
            for (int j = 0; j < 6; ++j) d.P[i][j] = s.P(i, j);
        }
        for (int k = 0; k < 20; ++k, ++cycles) {
            const int h = dt(rng);
            s = kf_predict(s, h).state;
            d = oracle::dense_predict(d, h, p.q);
            asym = std::max(asym, (s.P - s.P.transpose()).cwiseAbs().maxCoeff());
            const Point3 z{u(rng), u(rng), u(rng)};
            s = kf_update(s, z);
            d = oracle::dense_update(d, {z.x, z.y, z.z}, p.r);
            asym = std::max(asym, (s.P - s.P.transpose()).cwiseAbs().maxCoeff());
            for (int i = 0; i < 6; ++i) {
                worst = std::max(worst, std::abs(s.x(i) - d.x[i]) / std::max(1.0, std::abs(d.x[i])));
                for (int j = 0; j < 6; ++j)
                    worst = std::max(worst, std::abs(s.P(i, j) - d.P[i][j]) /
                                                std::max(1.0, std::abs(d.P[i][j])));
            }
        }
    }

    // noiseless constant velocity, filter started at rest on the first point
    int slowest = 0;
    std::uniform_real_distribution<double> vel(-2, 2);
    for (int run = 0; run < 20; ++run) {
        const Point3 p0{u(rng), u(rng), u(rng)}, v{vel(rng), vel(rng), vel(rng)};
        auto s = kf_init(p0);
        int first_ok = -1;
        for (int k = 1; k <= 20; ++k) {
            const Point3 truth{p0.x + v.x * k, p0.y + v.y * k, p0.z + v.z * k};
            s = kf_update(kf_predict(s).state, truth);
            if (distance(position_of(s), truth) < 1e-3) {
                if (first_ok < 0) first_ok = k;
            } else {
                first_ok = -1;
            }
        }
        slowest = std::max(slowest, first_ok < 0 ? 99 : first_ok);
    }
    return {worst < 1e-9 && asym < 1e-12 && slowest <= 20,
            std::to_string(cycles) + " cycles, max error " + fmt("%.3g", worst) + ", asymmetry " +
                fmt("%.3g", asym) + ", converged by step " + std::to_string(slowest)};
}

// ---- 7 ----
TargetObservation box_obs(int x, int y, int z, int size, std::uint32_t label = 1) {
    TargetObservation o;
    o.label = label;
    o.bbox = {{x, y, z}, {x + size - 1, y + size - 1, z + size - 1}};
    for (int a = 0; a < size; ++a)
        for (int b = 0; b < size; ++b)
            for (int c = 0; c < size; ++c) o.voxels.push_back({x + a, y + b, z + c});
    o.volume = o.voxels.size();
    o.total_photons = o.volume;
    o.peak_photons = 1;
    const double h = 0.5 * (size - 1);
    o.centroid = {x + h, y + h, z + h};
    return o;
}

Outcome state_machine() {
    std::size_t scripts = 0, mismatches = 0;
    for (int max_coast : {1, 2, 3, 7}) {
        for (int len = 1; len <= 6; ++len) {
            for (unsigned bits = 0; bits < (1u << len); ++bits) {
                std::vector<bool> hits(static_cast<std::size_t>(len));
                for (int i = 0; i < len; ++i) hits[static_cast<std::size_t>(i)] = (bits >> i) & 1u;
                const auto want = oracle::reference_states(hits, max_coast);
                TrackerConfig cfg;
                cfg.max_coast = max_coast;
                Tracker tr(cfg);
                bool ok = true;
                for (std::size_t i = 0; i < hits.size(); ++i) {
                    if (hits[i]) {
                        tr.step(std::vector{box_obs(8, 8, 8, 2)});
                    } else {
                        tr.step({});
                    }
                    tr.check_invariants();
                    std::string got = "-";
                    if (!tr.tracks().empty()) {
                        const Track& t = tr.tracks()[0];
                        got = t.state == TrackState::Coasting
                                  ? "coasting:" + std::to_string(t.bad_count)
                                  : std::string(to_string(t.state));
                    }
                    ok = ok && tr.tracks().size() <= 1 && got == want[i];
                }
                ++scripts;
                mismatches += !ok;
            }
        }
    }
    return {mismatches == 0,
            std::to_string(scripts) + " scripts, " + std::to_string(mismatches) + " mismatches"};
}

// ---- 8 ----
SceneSpec random_scene(std::mt19937& rng, std::size_t groups) {
    std::uniform_int_distribution<int> count(1, 5), sz(1, 4), px(0, 31), bin(40, 560);
    std::uniform_real_distribution<double> v(-0.8, 0.8), vz(-3, 3), refl(0.3, 4.0), noise(0, 120);
    SceneSpec s;
    s.seed = rng();
    s.n_groups = groups;
    s.noise_rate = noise(rng);
    for (int i = count(rng); i > 0; --i) {
        SceneTarget t;
        t.size = {sz(rng), sz(rng), 1};
        t.start = {double(px(rng)), double(px(rng)), double(bin(rng))};
        t.velocity = {{0, {v(rng), v(rng), vz(rng)}}};
        t.reflectivity = refl(rng);
        s.targets.push_back(t);
    }
    return s;
}

std::string check_links(const HistoryRing& ring) {
    if (ring.size() > HistoryRing::kCapacity) return "ring holds " + std::to_string(ring.size());
    const auto& es = ring.entries();
    for (std::size_t k = 0; k + 1 < es.size(); ++k) {
        const auto& a = es[k];
        const auto& b = es[k + 1];
        for (std::size_t mt = 0; mt < a.fw.size(); ++mt)
            if (a.fw[mt] && b.bw.at(*a.fw[mt]) != mt) return "fw not inverted by bw";
        for (std::size_t nt = 0; nt < b.bw.size(); ++nt) {
            if (!b.bw[nt]) continue;
            if (a.fw.at(*b.bw[nt]) != nt) return "bw not inverted by fw";
            if (a.tracks[*b.bw[nt]].track_id != b.tracks[nt].track_id) return "link changes id";
        }
    }
    for (const auto& e : es) {
        for (std::size_t slot = 0; slot < e.tracks.size(); ++slot) {
            const auto f = reconstruct_forward(ring, e.step, slot);
            auto b = reconstruct_backward(ring, f.back().step, f.back().slot);
            std::reverse(b.begin(), b.end());
            // the backward chain may reach further into the past than our start
            const auto from = std::find_if(b.begin(), b.end(),
                                           [&](const StepSlot& s) { return s.step == e.step; });
            if (from == b.end() || !std::equal(from, b.end(), f.begin(), f.end()))
                return "forward chain differs from reversed backward chain";
        }
    }
    return {};
}

Outcome link_consistency() {
    std::mt19937 rng(8);
    std::uniform_int_distribution<int> coast(1, 7), tmax(2, 10);
    std::size_t steps = 0, links = 0, max_ring = 0;
    std::string failure;
    for (int run = 0; run < 50 && failure.empty(); ++run) {
        const SceneSpec scene = random_scene(rng, 24);
        RunConfig cfg;
        cfg.tracker.max_coast = coast(rng);
        cfg.tracker.t_max = static_cast<std::size_t>(tmax(rng));
        AcquisitionStage stage(cfg);
        Tracker tracker(cfg.tracker);
        for (std::size_t g = 0; g < scene.n_groups && failure.empty(); ++g) {
            const auto in = stage.process(simulate_group(scene, cfg.sensor, g));
            tracker.step(in.observations);
            tracker.check_invariants();
            failure = check_links(tracker.ring());
            max_ring = std::max(max_ring, tracker.ring().size());
            for (const auto& l : tracker.ring().newest().bw) links += l.has_value();
            ++steps;
        }
    }
    return {failure.empty() && max_ring <= 10,
            failure.empty() ? std::to_string(steps) + " steps, " + std::to_string(links) +
                                  " links, ring peak " + std::to_string(max_ring)
                            : failure};
}

// ---- 9 ----
struct TrackingScore {
    double worst_coverage = 1.0;
    std::size_t spurious = 0;
    std::uint64_t min_photons = 0;
};

SceneSpec crossing_scene(std::uint64_t seed) {
    SceneSpec s;
    s.seed = seed;
    s.n_groups = 100;
    s.noise_rate = 50.0;
    SceneTarget a;
    a.size = {3, 3, 1};
    a.start = {4, 13, 150};
    a.velocity = {{0, {0.24, 0.06, 0}}};
    a.reflectivity = 1.0;
    SceneTarget b = a;
    b.start = {28, 19, 400};
    b.velocity = {{0, {-0.24, -0.06, 0}}};
    s.targets = {a, b};
    return s;
}

TrackingScore score_crossing(std::uint64_t seed, const fs::path& dir) {
    const SceneSpec scene = crossing_scene(seed);
    TrackingScore out;

    // photon budget of each target on its own, without dark counts
    out.min_photons = UINT64_MAX;
    for (std::size_t i = 0; i < scene.targets.size(); ++i) {
        SceneSpec solo = scene;
        solo.targets = {scene.targets[i]};
        solo.noise_rate = 0;
        for (std::size_t g : {std::size_t{0}, std::size_t{50}, std::size_t{99}})
            out.min_photons = std::min(
                out.min_photons,
                grid_stats(build_histogram(simulate_group(solo, scene.sensor, g), scene.sensor))
                    .total_photons);
    }

    const Simulation sim = simulate(scene, scene.sensor);
    const fs::path raw = dir / ("crossing_" + std::to_string(seed) + ".raw");
    {
        std::ofstream f(raw, std::ios::binary);
        for (const auto& g : sim.groups) write_raw(g.frames, f);
    }
    RunConfig cfg;
    cfg.set("scheme", "threshold_majority");
    cfg.set("threshold_mode", "fixed");
    cfg.set("threshold", "2");
    cfg.set("majority_min", "2");
    cfg.set("assoc_mode", "bbox_expansion");
    cfg.set("expansion", "2");

    std::vector<std::vector<Track>> per_step;
    RawFileReader reader(raw, cfg.sensor);
    run_pipeline(reader, cfg, [&](const StepInput&, const Tracker& t) {
        per_step.push_back(t.tracks());
    });

    std::set<std::uint64_t> owners;
    for (std::size_t target = 0; target < scene.targets.size(); ++target) {
        std::map<std::uint64_t, std::size_t> hits;
        std::size_t alive = 0;
        for (std::size_t s = 0; s < per_step.size(); ++s) {
            const TruthRecord& truth = sim.truth.steps[s][target];
            if (!truth.alive) continue;
            ++alive;
            const Track* best = nullptr;
            double best_d = 2.5;
            for (const Track& t : per_step[s]) {
                const double d = distance(t.centroid, truth.centroid);
                if (d <= best_d) {
                    best_d = d;
                    best = &t;
                }
            }
            if (best) ++hits[best->track_id];
        }
        std::uint64_t owner = 0;
        std::size_t owned = 0;
        for (const auto& [id, n] : hits)
            if (n > owned) {
                owner = id;
                owned = n;
            }
        owners.insert(owner);
        out.worst_coverage =
            std::min(out.worst_coverage, alive ? double(owned) / double(alive) : 0.0);
    }
    std::map<std::uint64_t, std::size_t> lifetime;
    for (const auto& tracks : per_step)
        for (const Track& t : tracks) ++lifetime[t.track_id];
    for (const auto& [id, n] : lifetime)
        if (!owners.count(id) && n > 3) ++out.spurious;
    return out;
}

Outcome end_to_end() {
    TempDir dir;
    bool ok = true;
    std::string detail;
    for (std::uint64_t seed : {101u, 202u, 303u, 404u, 505u}) {
        const auto start = std::chrono::steady_clock::now();
        const TrackingScore s = score_crossing(seed, dir.path);
        const double secs =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        const bool run_ok =
            s.worst_coverage >= 0.9 && s.spurious <= 1 && s.min_photons >= 20 && secs < 60;
        ok = ok && run_ok;
        if (!detail.empty()) detail += "; ";
        detail += "seed " + std::to_string(seed) + ": coverage " +
                  fmt("%.2f", s.worst_coverage) + ", spurious " + std::to_string(s.spurious) +
                  ", photons >= " + std::to_string(s.min_photons) + fmt(", %.1fs", secs);
    }
    return {ok, detail};
}

// ---- 10 ----
Outcome determinism() {
    TempDir dir;
    SceneSpec scene = crossing_scene(7);
    scene.n_groups = 40;
    scene.noise_rate = 200;
    {
        std::ofstream f(dir.path / "d.raw", std::ios::binary);
        for (std::size_t g = 0; g < scene.n_groups; ++g)
            write_raw(simulate_group(scene, scene.sensor, g).frames, f);
    }
    auto slurp = [](const fs::path& p) {
        std::ifstream in(p, std::ios::binary);
        std::ostringstream os;
        os << in.rdbuf();
        return os.str();
    };
    std::vector<std::string> tracks, links;
    for (const char* sub : {"a", "b", "c"}) {
        TrackOptions opt;
        opt.raw = dir.path / "d.raw";
        opt.out_dir = dir.path / sub;
        opt.overrides = {"expansion=2"};
        std::ostringstream out, err;
        if (cmd_track(opt, out, err) != kExitOk) return {false, "track failed: " + err.str()};
        tracks.push_back(slurp(opt.out_dir / "tracks.csv"));
        links.push_back(slurp(opt.out_dir / "links.csv"));
    }
    const bool ok = tracks[0] == tracks[1] && tracks[1] == tracks[2] && links[0] == links[1] &&
                    links[1] == links[2] && tracks[0].size() > 100;
    return {ok, "3 runs, tracks.csv " + std::to_string(tracks[0].size()) + " bytes, links.csv " +
                    std::to_string(links[0].size()) + " bytes"};
}

}  // namespace

int main() {
    struct Criterion {
        int id;
        const char* name;
        std::function<Outcome()> run;
    };
    const std::vector<Criterion> criteria{
        {1, "grid shape 32x32x600", grid_shape},
        {2, "raw file arithmetic", file_arithmetic},
        {3, "majority rule vs brute force", majority_oracle},
        {4, "connected components vs flood fill", ccl_oracle},
        {5, "separable Parzen smoothing", parzen_separability},
        {6, "Kalman filter vs dense reference", kalman_oracle},
        {7, "track state machine", state_machine},
        {8, "history link consistency", link_consistency},
        {9, "end-to-end crossing targets", end_to_end},
        {10, "output determinism", determinism},
    };
    int failed = 0;
    for (const auto& c : criteria) {
        const auto start = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = c.run();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        const double secs =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        std::printf("criterion %2d %s  %s: %s (%.2fs)\n", c.id, o.pass ? "PASS" : "FAIL", c.name,
                    o.detail.c_str(), secs);
        std::fflush(stdout);
        failed += !o.pass;
    }
    std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed,
                criteria.size());
    return failed == 0 ? 0 : 1;
}
