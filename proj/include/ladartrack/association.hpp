#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "ladartrack/geometry.hpp"
#include "ladartrack/kalman.hpp"
#include "ladartrack/labeling.hpp"
#include "ladartrack/track.hpp"

namespace ladar {

enum class AssociationMode {
    BBoxExpansion,   ///< symmetric containment of expanded boxes
    KalmanCentroid,  ///< predicted centroid within gate_radius
    KalmanBBox,      ///< predicted box, then symmetric containment
};

/// Nonnegative weights of the attribute scores summed into a matrix entry.
/// An entry is 0 unless the mode's criterion holds.
///   bbox_match   - the criterion itself: 1 for the box modes, 1/(1+d) for
///                  KalmanCentroid (d = predicted-to-observed distance)
///   proximity    - 1/(1+d) in every mode
///   volume_ratio - min(volume) / max(volume)
struct AssociationWeights {
    double bbox_match = 1.0;
    double proximity = 0.0;
    double volume_ratio = 0.0;
};

struct AssociationConfig {
    AssociationMode mode = AssociationMode::BBoxExpansion;
    int expansion = 1;  ///< box growth e, voxels per side
    double gate_radius = 3.0;
    AssociationWeights weights;

    void validate() const;
};

/// Lower every minimum and raise every maximum by e. No clamping.
BoundingBox expand_bbox(const BoundingBox& b, int e);

/// inner lies entirely within outer (inclusive bounds).
bool contains(const BoundingBox& outer, const BoundingBox& inner);

/// Each box lies inside the other's e-expansion. Symmetric by construction.
bool bbox_match(const BoundingBox& old_box, const BoundingBox& new_box, int e);

/// What an old track offers to association at the next step.
struct AssociationCandidate {
    BoundingBox bbox;
    Point3 centroid;
    std::size_t volume = 0;
    KalmanState kf;      ///< prior for the step being associated
    BoxKalman box_kf;
};

/// Advance the track's filters one step and pick the box/centroid the
/// configured mode compares against.
AssociationCandidate predict_candidate(const Track& track, const AssociationConfig& cfg);

/// Rows are old targets, columns new ones. Scores are nonnegative.
struct AssociationMatrix {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<double> scores;  ///< row-major

    AssociationMatrix() = default;
    AssociationMatrix(std::size_t r, std::size_t c) : rows(r), cols(c), scores(r * c, 0.0) {}

    double& at(std::size_t i, std::size_t j) { return scores[i * cols + j]; }
    double at(std::size_t i, std::size_t j) const { return scores[i * cols + j]; }
};

double association_score(const AssociationCandidate& old_target, const TargetObservation& fresh,
                         const AssociationConfig& cfg);

AssociationMatrix build_association_matrix(std::span<const AssociationCandidate> old_targets,
                                           std::span<const TargetObservation> fresh,
                                           const AssociationConfig& cfg);

AssociationMatrix build_association_matrix(std::span<const Track> old_tracks,
                                           std::span<const TargetObservation> fresh,
                                           const AssociationConfig& cfg);

/// fw[old] = new and bw[new] = old. Empty optionals mark unmatched targets.
struct MatchSet {
    std::vector<std::optional<std::size_t>> fw;
    std::vector<std::optional<std::size_t>> bw;

    std::size_t matched() const;
};

/// Greedy one-to-one assignment: repeatedly take the largest positive score
/// (ties to the smaller row, then smaller column) and strike its row and column.
MatchSet resolve_matches(const AssociationMatrix& m);

}  // namespace ladar
