#include "ladartrack/association.hpp"

#include <algorithm>
#include <cmath>
#include <tuple>

#include "ladartrack/errors.hpp"

namespace ladar {

void AssociationConfig::validate() const {
    if (expansion < 0) {
        throw InvalidConfig("bbox expansion must be >= 0");
    }
    if (!(gate_radius > 0.0)) {
        throw InvalidConfig("gate_radius must be > 0");
    }
    if (weights.bbox_match < 0 || weights.proximity < 0 || weights.volume_ratio < 0) {
        throw InvalidConfig("association weights must be nonnegative");
    }
}

BoundingBox expand_bbox(const BoundingBox& b, int e) {
    return {{b.min.x - e, b.min.y - e, b.min.z - e}, {b.max.x + e, b.max.y + e, b.max.z + e}};
}

bool contains(const BoundingBox& outer, const BoundingBox& inner) {
    return outer.min.x <= inner.min.x && outer.min.y <= inner.min.y &&
           outer.min.z <= inner.min.z && inner.max.x <= outer.max.x &&
           inner.max.y <= outer.max.y && inner.max.z <= outer.max.z;
}

bool bbox_match(const BoundingBox& old_box, const BoundingBox& new_box, int e) {
    return contains(expand_bbox(new_box, e), old_box) && contains(expand_bbox(old_box, e), new_box);
}

AssociationCandidate predict_candidate(const Track& track, const AssociationConfig& cfg) {
    AssociationCandidate c;
    const KalmanPrediction pred = kf_predict(track.kf, 1);
    c.kf = pred.state;
    c.box_kf = box_kf_predict(track.box_kf, 1);
    c.volume = track.obs.volume;
    c.centroid = pred.centroid;
    switch (cfg.mode) {
        case AssociationMode::BBoxExpansion:
        case AssociationMode::KalmanCentroid:
            c.bbox = track.bbox;
            break;
        case AssociationMode::KalmanBBox:
            c.bbox = box_kf_bbox(c.box_kf);
            break;
    }
    return c;
}

double association_score(const AssociationCandidate& old_target, const TargetObservation& fresh,
                         const AssociationConfig& cfg) {
    const double d = distance(old_target.centroid, fresh.centroid);
    const double proximity = 1.0 / (1.0 + d);
    double criterion = 0.0;
    switch (cfg.mode) {
        case AssociationMode::BBoxExpansion:
        case AssociationMode::KalmanBBox:
            criterion = bbox_match(old_target.bbox, fresh.bbox, cfg.expansion) ? 1.0 : 0.0;
            break;
        case AssociationMode::KalmanCentroid:
            criterion = centroid_gate(old_target.centroid, fresh.centroid, cfg.gate_radius)
                            ? proximity
                            : 0.0;
            break;
    }
    if (criterion == 0.0) {
        return 0.0;
    }
    const auto lo = static_cast<double>(std::min(old_target.volume, fresh.volume));
    const auto hi = static_cast<double>(std::max(old_target.volume, fresh.volume));
    const double volume_ratio = hi > 0 ? lo / hi : 0.0;
    return cfg.weights.bbox_match * criterion + cfg.weights.proximity * proximity +
           cfg.weights.volume_ratio * volume_ratio;
}

AssociationMatrix build_association_matrix(std::span<const AssociationCandidate> old_targets,
                                           std::span<const TargetObservation> fresh,
                                           const AssociationConfig& cfg) {
    cfg.validate();
    AssociationMatrix m(old_targets.size(), fresh.size());
    for (std::size_t i = 0; i < old_targets.size(); ++i) {
        for (std::size_t j = 0; j < fresh.size(); ++j) {
            m.at(i, j) = association_score(old_targets[i], fresh[j], cfg);
        }
    }
    return m;
}

AssociationMatrix build_association_matrix(std::span<const Track> old_tracks,
                                           std::span<const TargetObservation> fresh,
                                           const AssociationConfig& cfg) {
    std::vector<AssociationCandidate> candidates;
    candidates.reserve(old_tracks.size());
    for (const Track& t : old_tracks) {
        candidates.push_back(predict_candidate(t, cfg));
    }
    return build_association_matrix(std::span<const AssociationCandidate>(candidates), fresh, cfg);
}

std::size_t MatchSet::matched() const {
    return static_cast<std::size_t>(
        std::count_if(fw.begin(), fw.end(), [](const auto& v) { return v.has_value(); }));
}

MatchSet resolve_matches(const AssociationMatrix& m) {
    MatchSet out;
    out.fw.assign(m.rows, std::nullopt);
    out.bw.assign(m.cols, std::nullopt);

    // Sorting all positive entries once is equivalent to repeated max-picking
    // under the (score desc, row asc, col asc) order.
    std::vector<std::tuple<double, std::size_t, std::size_t>> entries;
    for (std::size_t i = 0; i < m.rows; ++i) {
        for (std::size_t j = 0; j < m.cols; ++j) {
            if (m.at(i, j) > 0.0) {
                entries.emplace_back(m.at(i, j), i, j);
            }
        }
    }
    std::sort(entries.begin(), entries.end(), [](const auto& a, const auto& b) {
        if (std::get<0>(a) != std::get<0>(b)) {
            return std::get<0>(a) > std::get<0>(b);
        }
        if (std::get<1>(a) != std::get<1>(b)) {
            return std::get<1>(a) < std::get<1>(b);
        }
        return std::get<2>(a) < std::get<2>(b);
    });
    for (const auto& [score, i, j] : entries) {
        if (out.fw[i] || out.bw[j]) {
            continue;
        }
        out.fw[i] = j;
        out.bw[j] = i;
    }
    return out;
}

}  // namespace ladar
