#include "ladartrack/labeling.hpp"

#include <algorithm>
#include <array>
#include <limits>
#include <numeric>
#include <string>

#include "ladartrack/errors.hpp"

namespace ladar {

namespace {

struct Offset {
    int dx, dy, dz;
};

// Neighbours that precede a voxel in raster order (x fastest, then y, then z).
std::vector<Offset> backward_neighbours(Connectivity c) {
    const int max_manhattan = c == Connectivity::Six ? 1 : (c == Connectivity::Eighteen ? 2 : 3);
    std::vector<Offset> out;
    for (int dz = -1; dz <= 1; ++dz) {
        for (int dy = -1; dy <= 1; ++dy) {
            for (int dx = -1; dx <= 1; ++dx) {
                const int m = std::abs(dx) + std::abs(dy) + std::abs(dz);
                if (m == 0 || m > max_manhattan) {
                    continue;
                }
                const bool before = dz < 0 || (dz == 0 && (dy < 0 || (dy == 0 && dx < 0)));
                if (before) {
                    out.push_back({dx, dy, dz});
                }
            }
        }
    }
    return out;
}

class DisjointSet {
public:
    explicit DisjointSet(std::size_t n) : parent_(n) { std::iota(parent_.begin(), parent_.end(), 0); }

    std::size_t find(std::size_t i) {
        while (parent_[i] != i) {
            parent_[i] = parent_[parent_[i]];
            i = parent_[i];
        }
        return i;
    }

    void unite(std::size_t a, std::size_t b) {
        a = find(a);
        b = find(b);
        if (a == b) {
            return;
        }
        // Smaller index becomes the root, so a root is always its set's first voxel.
        if (b < a) {
            std::swap(a, b);
        }
        parent_[b] = a;
    }

private:
    std::vector<std::size_t> parent_;
};

}  // namespace

Connectivity connectivity_from_int(int n) {
    switch (n) {
        case 6:
            return Connectivity::Six;
        case 18:
            return Connectivity::Eighteen;
        case 26:
            return Connectivity::TwentySix;
        default:
            throw InvalidConfig("connectivity must be 6, 18 or 26, got " + std::to_string(n));
    }
}

Labeling label_components(const BinaryMask& mask, Connectivity connectivity) {
    const Dims d = mask.dims();
    Labeling out{LabelGrid(d), 0};
    const std::size_t n = mask.size();
    if (n == 0) {
        return out;
    }

    const auto offsets = backward_neighbours(connectivity);
    DisjointSet sets(n);
    for (std::size_t z = 0; z < d.nz; ++z) {
        for (std::size_t y = 0; y < d.ny; ++y) {
            for (std::size_t x = 0; x < d.nx; ++x) {
                const std::size_t i = mask.index(x, y, z);
                if (mask[i] == 0) {
                    continue;
                }
                for (const Offset& o : offsets) {
                    const auto nx = static_cast<std::ptrdiff_t>(x) + o.dx;
                    const auto ny = static_cast<std::ptrdiff_t>(y) + o.dy;
                    const auto nz = static_cast<std::ptrdiff_t>(z) + o.dz;
                    if (nx < 0 || ny < 0 || nz < 0 || nx >= static_cast<std::ptrdiff_t>(d.nx) ||
                        ny >= static_cast<std::ptrdiff_t>(d.ny)) {
                        continue;
                    }
                    const std::size_t j = mask.index(static_cast<std::size_t>(nx),
                                                     static_cast<std::size_t>(ny),
                                                     static_cast<std::size_t>(nz));
                    if (mask[j] != 0) {
                        sets.unite(i, j);
                    }
                }
            }
        }
    }

    // Roots are first voxels, so numbering roots as they appear gives raster order.
    for (std::size_t i = 0; i < n; ++i) {
        if (mask[i] == 0) {
            continue;
        }
        const std::size_t root = sets.find(i);
        if (root == i) {
            out.labels[i] = ++out.count;
        } else {
            out.labels[i] = out.labels[root];
        }
    }
    return out;
}

std::vector<TargetObservation> extract_observations(const LabelGrid& labels,
                                                    const Grid3<std::uint32_t>& source) {
    if (labels.dims() != source.dims()) {
        throw ConfigMismatch("label grid and source grid dimensions differ");
    }
    std::uint32_t count = 0;
    for (std::uint32_t l : labels.data()) {
        count = std::max(count, l);
    }

    struct Accum {
        double wx = 0, wy = 0, wz = 0, w = 0;
        double ux = 0, uy = 0, uz = 0;
    };
    std::vector<TargetObservation> obs(count);
    std::vector<Accum> acc(count);
    for (std::uint32_t k = 0; k < count; ++k) {
        obs[k].label = k + 1;
        obs[k].bbox.min = {std::numeric_limits<int>::max(), std::numeric_limits<int>::max(),
                           std::numeric_limits<int>::max()};
        obs[k].bbox.max = {std::numeric_limits<int>::min(), std::numeric_limits<int>::min(),
                           std::numeric_limits<int>::min()};
    }

    for (std::size_t i = 0; i < labels.size(); ++i) {
        const std::uint32_t l = labels[i];
        if (l == 0) {
            continue;
        }
        TargetObservation& o = obs[l - 1];
        Accum& a = acc[l - 1];
        const Voxel v = labels.coords(i);
        const std::uint32_t photons = source[i];
        o.voxels.push_back(v);
        o.total_photons += photons;
        o.peak_photons = std::max<std::uint64_t>(o.peak_photons, photons);
        o.bbox.min = {std::min(o.bbox.min.x, v.x), std::min(o.bbox.min.y, v.y),
                      std::min(o.bbox.min.z, v.z)};
        o.bbox.max = {std::max(o.bbox.max.x, v.x), std::max(o.bbox.max.y, v.y),
                      std::max(o.bbox.max.z, v.z)};
        a.wx += static_cast<double>(photons) * v.x;
        a.wy += static_cast<double>(photons) * v.y;
        a.wz += static_cast<double>(photons) * v.z;
        a.w += photons;
        a.ux += v.x;
        a.uy += v.y;
        a.uz += v.z;
    }

    std::vector<TargetObservation> out;
    out.reserve(count);
    for (std::uint32_t k = 0; k < count; ++k) {
        TargetObservation& o = obs[k];
        if (o.voxels.empty()) {
            continue;  // label gap
        }
        const Accum& a = acc[k];
        o.volume = o.voxels.size();
        if (a.w > 0) {
            o.centroid = {a.wx / a.w, a.wy / a.w, a.wz / a.w};
        } else {
            const auto n = static_cast<double>(o.volume);
            o.centroid = {a.ux / n, a.uy / n, a.uz / n};
        }
        out.push_back(std::move(o));
    }
    return out;
}

void ImportanceConfig::validate() const {
    if (volume < 0 || speed < 0 || total_photons < 0) {
        throw InvalidConfig("importance weights must be nonnegative");
    }
    if (!(volume > 0 || speed > 0 || total_photons > 0)) {
        throw InvalidConfig("at least one importance weight must be positive");
    }
}

double importance_score(const TargetObservation& obs, const ImportanceConfig& cfg, double speed) {
    return cfg.volume * static_cast<double>(obs.volume) + cfg.speed * speed +
           cfg.total_photons * static_cast<double>(obs.total_photons);
}

std::vector<TargetObservation> importance_sort(std::vector<TargetObservation> obs,
                                               const ImportanceConfig& cfg,
                                               const std::map<std::uint32_t, double>* prior_speeds) {
    std::vector<std::pair<double, std::size_t>> keyed;
    keyed.reserve(obs.size());
    for (std::size_t i = 0; i < obs.size(); ++i) {
        double speed = 0.0;
        if (prior_speeds) {
            if (auto it = prior_speeds->find(obs[i].label); it != prior_speeds->end()) {
                speed = it->second;
            }
        }
        keyed.emplace_back(importance_score(obs[i], cfg, speed), i);
    }
    std::stable_sort(keyed.begin(), keyed.end(), [&](const auto& a, const auto& b) {
        if (a.first != b.first) {
            return a.first > b.first;
        }
        return obs[a.second].label < obs[b.second].label;
    });
    std::vector<TargetObservation> out;
    out.reserve(obs.size());
    for (const auto& [score, i] : keyed) {
        out.push_back(std::move(obs[i]));
    }
    return out;
}

}  // namespace ladar
