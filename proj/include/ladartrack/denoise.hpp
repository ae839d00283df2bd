#pragma once

#include <array>
#include <optional>
#include <variant>
#include <vector>

#include "ladartrack/geometry.hpp"
#include "ladartrack/voxelizer.hpp"

namespace ladar {

enum class DenoiseScheme { Threshold, ThresholdMajority, ParzenThreshold };

struct FixedThreshold {
    double t = 2.0;
};

/// t = alpha * peak voxel value.
struct PeakFraction {
    double alpha = 0.5;
};

/// t_n = beta * (alpha * peak) + (1 - beta) * t_{n-1}.
struct MovingAverage {
    double alpha = 0.5;
    double beta = 0.5;
};

using ThresholdMode = std::variant<FixedThreshold, PeakFraction, MovingAverage>;

struct DenoiseConfig {
    DenoiseScheme scheme = DenoiseScheme::ThresholdMajority;
    ThresholdMode mode = FixedThreshold{};
    int majority_min = 2;
    std::array<double, 3> sigmas{1.0, 1.0, 1.0};
    double kernel_radius_factor = 3.0;

    void validate() const;
};

struct ThresholdResult {
    BinaryMask mask;
    double threshold = 0.0;
};

/// Bit set iff value > t.
template <class T>
BinaryMask threshold_fixed(const Grid3<T>& grid, double t);

template <class T>
ThresholdResult threshold_peak_fraction(const Grid3<T>& grid, double alpha);

template <class T>
ThresholdResult threshold_moving_average(const Grid3<T>& grid, double alpha, double beta,
                                         double t_prev);

/// Output bit is 1 iff more than `majority_min` of the 27 voxels in the
/// 3x3x3 neighbourhood (centre included) are set. Only internal voxels are
/// evaluated; the one-voxel outer shell is always 0. Reads the input only.
BinaryMask majority_rule(const BinaryMask& mask, int majority_min);

/// Normalised 1D Gaussian taps, length 2 * ceil(factor * sigma) + 1.
std::vector<double> gaussian_kernel(double sigma, double radius_factor);

/// Separable Gaussian smoothing with zero padding (x, then y, then z pass).
template <class T>
RealGrid parzen_smooth(const Grid3<T>& grid, const std::array<double, 3>& sigmas,
                       double radius_factor);

/// Apply the configured scheme. `t_prev` feeds the moving-average mode and
/// defaults to alpha * peak when absent (first step). The returned threshold is
/// the one actually used and should be passed back in at the next step.
ThresholdResult denoise(const VoxelGrid& grid, const DenoiseConfig& cfg,
                        std::optional<double> t_prev = std::nullopt);

}  // namespace ladar
