#include "ladartrack/run_config.hpp"

#include <fstream>
#include <istream>
#include <string>

#include "ladartrack/errors.hpp"
#include "ladartrack/keyvalue.hpp"

namespace ladar {

namespace {

int to_int(std::string_view v, std::string_view key) {
    return static_cast<int>(parse_integer(v, key));
}

[[noreturn]] void unknown_choice(std::string_view key, std::string_view v) {
    throw ParseError("key '" + std::string(key) + "': unknown choice '" + std::string(v) + "'");
}

}  // namespace

void RunConfig::set(std::string_view key, std::string_view value) {
    // sensor
    if (key == "width") {
        sensor.width = to_int(value, key);
    } else if (key == "height") {
        sensor.height = to_int(value, key);
    } else if (key == "pulses_per_group") {
        sensor.pulses_per_group = to_int(value, key);
    } else if (key == "ceiling") {
        sensor.ceiling = to_int(value, key);
    } else if (key == "offset") {
        sensor.offset = to_int(value, key);
    }
    // denoise
    else if (key == "scheme") {
        if (value == "threshold") {
            denoise.scheme = DenoiseScheme::Threshold;
        } else if (value == "threshold_majority") {
            denoise.scheme = DenoiseScheme::ThresholdMajority;
        } else if (value == "parzen_threshold") {
            denoise.scheme = DenoiseScheme::ParzenThreshold;
        } else {
            unknown_choice(key, value);
        }
    } else if (key == "threshold_mode") {
        if (value != "fixed" && value != "peak_fraction" && value != "moving_average") {
            unknown_choice(key, value);
        }
        threshold_mode_ = std::string(value);
    } else if (key == "threshold") {
        threshold_ = parse_real(value, key);
    } else if (key == "alpha") {
        alpha_ = parse_real(value, key);
    } else if (key == "beta") {
        beta_ = parse_real(value, key);
    } else if (key == "majority_min") {
        denoise.majority_min = to_int(value, key);
    } else if (key == "sigma") {
        const auto v = parse_reals(value, key);
        if (v.size() == 1) {
            denoise.sigmas = {v[0], v[0], v[0]};
        } else if (v.size() == 3) {
            denoise.sigmas = {v[0], v[1], v[2]};
        } else {
            throw ParseError("key 'sigma': expected 1 or 3 numbers");
        }
    } else if (key == "kernel_radius_factor") {
        denoise.kernel_radius_factor = parse_real(value, key);
    }
    // labeling
    else if (key == "connectivity") {
        try {
            connectivity = connectivity_from_int(to_int(value, key));
        } catch (const InvalidConfig& e) {
            throw ParseError(e.what());
        }
    }
    // tracker
    else if (key == "t_max") {
        const long long n = parse_integer(value, key);
        if (n < 1) {
            throw ParseError("key 't_max': must be >= 1");
        }
        tracker.t_max = static_cast<std::size_t>(n);
    } else if (key == "max_coast") {
        tracker.max_coast = to_int(value, key);
    } else if (key == "assoc_mode") {
        if (value == "bbox_expansion") {
            tracker.assoc.mode = AssociationMode::BBoxExpansion;
        } else if (value == "kalman_centroid") {
            tracker.assoc.mode = AssociationMode::KalmanCentroid;
        } else if (value == "kalman_bbox") {
            tracker.assoc.mode = AssociationMode::KalmanBBox;
        } else {
            unknown_choice(key, value);
        }
    } else if (key == "expansion") {
        tracker.assoc.expansion = to_int(value, key);
    } else if (key == "gate_radius") {
        tracker.assoc.gate_radius = parse_real(value, key);
    } else if (key == "assoc_weight_bbox_match") {
        tracker.assoc.weights.bbox_match = parse_real(value, key);
    } else if (key == "assoc_weight_proximity") {
        tracker.assoc.weights.proximity = parse_real(value, key);
    } else if (key == "assoc_weight_volume_ratio") {
        tracker.assoc.weights.volume_ratio = parse_real(value, key);
    } else if (key == "importance_volume") {
        tracker.importance.volume = parse_real(value, key);
    } else if (key == "importance_speed") {
        tracker.importance.speed = parse_real(value, key);
    } else if (key == "importance_total_photons") {
        tracker.importance.total_photons = parse_real(value, key);
    } else if (key == "kalman_q") {
        tracker.kalman.q = parse_real(value, key);
    } else if (key == "kalman_r") {
        tracker.kalman.r = parse_real(value, key);
    } else if (key == "kalman_p0_pos") {
        tracker.kalman.p0_pos = parse_real(value, key);
    } else if (key == "kalman_p0_vel") {
        tracker.kalman.p0_vel = parse_real(value, key);
    } else {
        throw ParseError("unknown configuration key '" + std::string(key) + "'");
    }

    if (threshold_mode_ == "fixed") {
        denoise.mode = FixedThreshold{threshold_};
    } else if (threshold_mode_ == "peak_fraction") {
        denoise.mode = PeakFraction{alpha_};
    } else {
        denoise.mode = MovingAverage{alpha_, beta_};
    }
}

void RunConfig::validate() const {
    sensor.validate();
    denoise.validate();
    tracker.validate();
}

RunConfig parse_run_config(std::istream& in) {
    RunConfig cfg;
    for (const KeyValueLine& kv : parse_key_value_lines(in)) {
        if (kv.is_section) {
            throw ParseError("line " + std::to_string(kv.line) +
                             ": sections are not used in run configs");
        }
        try {
            cfg.set(kv.key, kv.value);
        } catch (const ParseError& e) {
            throw ParseError("line " + std::to_string(kv.line) + ": " + e.what());
        }
    }
    return cfg;
}

RunConfig load_run_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw IoFailure("cannot open config file " + path.string());
    }
    return parse_run_config(in);
}

void apply_overrides(RunConfig& cfg, std::span<const std::string> assignments) {
    for (const std::string& a : assignments) {
        const KeyValueLine kv = split_assignment(a);
        cfg.set(kv.key, kv.value);
    }
}

}  // namespace ladar
