#pragma once

#include <cstdint>
#include <string_view>

#include "ladartrack/features.hpp"
#include "ladartrack/kalman.hpp"
#include "ladartrack/labeling.hpp"

namespace ladar {

/// Display colours in the original tool: yellow, green, red, magenta.
enum class TrackState { Coasting, New, Reacquired, Matched };

std::string_view to_string(TrackState s);

struct Track {
    std::uint64_t track_id = 0;
    TrackState state = TrackState::New;
    int bad_count = 0;  ///< consecutive missed steps, nonzero only while coasting
    int age = 1;        ///< steps since creation, counting the creation step
    TargetObservation obs;  ///< last real observation; kept unchanged while coasting
    Point3 centroid;        ///< current estimate: observed, or predicted while coasting
    BoundingBox bbox;       ///< current estimate, shifted along with the prediction
    KalmanState kf;
    BoxKalman box_kf;
    FeatureVector features;
};

}  // namespace ladar
