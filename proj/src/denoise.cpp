#include "ladartrack/denoise.hpp"

#include <algorithm>
#include <cmath>
#include <type_traits>

#include "ladartrack/errors.hpp"

namespace ladar {

namespace {

template <class T>
double peak(const Grid3<T>& grid) {
    const auto data = grid.data();
    if (data.empty()) {
        return 0.0;
    }
    return static_cast<double>(*std::max_element(data.begin(), data.end()));
}

// In-place 1D convolution along one axis with zero padding.
// `stride` is the index step along the axis, `n` its length; `lines` lists
// the base index of every line parallel to the axis.
void convolve_axis(std::vector<double>& data, const std::vector<double>& kernel,
                   std::size_t n, std::size_t stride, const std::vector<std::size_t>& lines) {
    const auto radius = static_cast<std::ptrdiff_t>(kernel.size() / 2);
    if (radius == 0) {
        // Single normalised tap is the identity.
        return;
    }
    std::vector<double> line(n);
    for (std::size_t base : lines) {
        for (std::size_t i = 0; i < n; ++i) {
            line[i] = data[base + i * stride];
        }
        const auto len = static_cast<std::ptrdiff_t>(n);
        for (std::ptrdiff_t i = 0; i < len; ++i) {
            double acc = 0.0;
            const std::ptrdiff_t k_lo = std::max<std::ptrdiff_t>(-radius, -i);
            const std::ptrdiff_t k_hi = std::min<std::ptrdiff_t>(radius, len - 1 - i);
            for (std::ptrdiff_t k = k_lo; k <= k_hi; ++k) {
                acc += kernel[static_cast<std::size_t>(k + radius)] *
                       line[static_cast<std::size_t>(i + k)];
            }
            data[base + static_cast<std::size_t>(i) * stride] = acc;
        }
    }
}

}  // namespace

void DenoiseConfig::validate() const {
    std::visit(
        [](const auto& m) {
            using M = std::decay_t<decltype(m)>;
            if constexpr (std::is_same_v<M, FixedThreshold>) {
                if (!(m.t >= 0.0)) {
                    throw InvalidConfig("fixed threshold must be >= 0");
                }
            } else {
                if (!(m.alpha > 0.0 && m.alpha <= 1.0)) {
                    throw InvalidConfig("alpha must lie in (0, 1]");
                }
                if constexpr (std::is_same_v<M, MovingAverage>) {
                    if (!(m.beta >= 0.0 && m.beta <= 1.0)) {
                        throw InvalidConfig("beta must lie in [0, 1]");
                    }
                }
            }
        },
        mode);
    if (majority_min < 0 || majority_min > 27) {
        throw InvalidConfig("majority_min must lie in [0, 27]");
    }
    for (double s : sigmas) {
        if (!(s > 0.0)) {
            throw InvalidConfig("Parzen sigmas must be > 0");
        }
    }
    if (!(kernel_radius_factor >= 0.0)) {
        throw InvalidConfig("kernel_radius_factor must be >= 0");
    }
}

template <class T>
BinaryMask threshold_fixed(const Grid3<T>& grid, double t) {
    BinaryMask mask(grid.dims());
    const auto src = grid.data();
    auto dst = mask.data();
    for (std::size_t i = 0; i < src.size(); ++i) {
        dst[i] = static_cast<double>(src[i]) > t ? 1 : 0;
    }
    return mask;
}

template <class T>
ThresholdResult threshold_peak_fraction(const Grid3<T>& grid, double alpha) {
    const double t = alpha * peak(grid);
    return {threshold_fixed(grid, t), t};
}

template <class T>
ThresholdResult threshold_moving_average(const Grid3<T>& grid, double alpha, double beta,
                                         double t_prev) {
    const double t = beta * (alpha * peak(grid)) + (1.0 - beta) * t_prev;
    return {threshold_fixed(grid, t), t};
}

BinaryMask majority_rule(const BinaryMask& mask, int majority_min) {
    const Dims d = mask.dims();
    BinaryMask out(d);
    if (d.nx < 3 || d.ny < 3 || d.nz < 3) {
        return out;  // no internal voxels
    }

    // Box sums of width 3 along x, then y, then z. Each pass is only valid
    // away from the faces it shrinks, which is all the interior needs.
    const std::size_t n = mask.size();
    const std::size_t sy = d.nx;
    const std::size_t sz = d.nx * d.ny;
    std::vector<std::uint8_t> a(n, 0);
    std::vector<std::uint8_t> b(n, 0);
    const auto src = mask.data();
    for (std::size_t i = 1; i + 1 < n; ++i) {
        a[i] = static_cast<std::uint8_t>((src[i - 1] != 0) + (src[i] != 0) + (src[i + 1] != 0));
    }
    for (std::size_t i = sy; i + sy < n; ++i) {
        b[i] = static_cast<std::uint8_t>(a[i - sy] + a[i] + a[i + sy]);
    }
    for (std::size_t z = 1; z + 1 < d.nz; ++z) {
        for (std::size_t y = 1; y + 1 < d.ny; ++y) {
            const std::size_t row = y * sy + z * sz;
            for (std::size_t x = 1; x + 1 < d.nx; ++x) {
                const std::size_t i = row + x;
                const int count = b[i - sz] + b[i] + b[i + sz];
                out[i] = count > majority_min ? 1 : 0;
            }
        }
    }
    return out;
}

std::vector<double> gaussian_kernel(double sigma, double radius_factor) {
    const auto radius = static_cast<std::size_t>(std::ceil(radius_factor * sigma));
    std::vector<double> k(2 * radius + 1);
    double sum = 0.0;
    for (std::size_t i = 0; i < k.size(); ++i) {
        const double u = static_cast<double>(i) - static_cast<double>(radius);
        k[i] = std::exp(-0.5 * u * u / (sigma * sigma));
        sum += k[i];
    }
    for (double& v : k) {
        v /= sum;
    }
    // Enforce exact mirror symmetry after rounding.
    for (std::size_t i = 0; i < radius; ++i) {
        k[k.size() - 1 - i] = k[i];
    }
    return k;
}

template <class T>
RealGrid parzen_smooth(const Grid3<T>& grid, const std::array<double, 3>& sigmas,
                       double radius_factor) {
    const Dims d = grid.dims();
    std::vector<double> data(grid.size());
    std::copy(grid.data().begin(), grid.data().end(), data.begin());

    std::vector<std::size_t> lines;
    // x lines
    lines.clear();
    for (std::size_t z = 0; z < d.nz; ++z)
        for (std::size_t y = 0; y < d.ny; ++y) lines.push_back(grid.index(0, y, z));
    convolve_axis(data, gaussian_kernel(sigmas[0], radius_factor), d.nx, 1, lines);
    // y lines
    lines.clear();
    for (std::size_t z = 0; z < d.nz; ++z)
        for (std::size_t x = 0; x < d.nx; ++x) lines.push_back(grid.index(x, 0, z));
    convolve_axis(data, gaussian_kernel(sigmas[1], radius_factor), d.ny, d.nx, lines);
    // z lines
    lines.clear();
    for (std::size_t y = 0; y < d.ny; ++y)
        for (std::size_t x = 0; x < d.nx; ++x) lines.push_back(grid.index(x, y, 0));
    convolve_axis(data, gaussian_kernel(sigmas[2], radius_factor), d.nz, d.nx * d.ny, lines);

    RealGrid out(d);
    std::copy(data.begin(), data.end(), out.data().begin());
    return out;
}

namespace {

template <class T>
ThresholdResult apply_threshold(const Grid3<T>& grid, const ThresholdMode& mode,
                                std::optional<double> t_prev) {
    return std::visit(
        [&](const auto& m) -> ThresholdResult {
            using M = std::decay_t<decltype(m)>;
            if constexpr (std::is_same_v<M, FixedThreshold>) {
                return {threshold_fixed(grid, m.t), m.t};
            } else if constexpr (std::is_same_v<M, PeakFraction>) {
                return threshold_peak_fraction(grid, m.alpha);
            } else {
                const double prev = t_prev ? *t_prev : m.alpha * peak(grid);
                return threshold_moving_average(grid, m.alpha, m.beta, prev);
            }
        },
        mode);
}

}  // namespace

ThresholdResult denoise(const VoxelGrid& grid, const DenoiseConfig& cfg,
                        std::optional<double> t_prev) {
    cfg.validate();
    switch (cfg.scheme) {
        case DenoiseScheme::Threshold:
            return apply_threshold(grid.counts, cfg.mode, t_prev);
        case DenoiseScheme::ThresholdMajority: {
            ThresholdResult r = apply_threshold(grid.counts, cfg.mode, t_prev);
            r.mask = majority_rule(r.mask, cfg.majority_min);
            return r;
        }
        case DenoiseScheme::ParzenThreshold: {
            const RealGrid smooth = parzen_smooth(grid.counts, cfg.sigmas, cfg.kernel_radius_factor);
            return apply_threshold(smooth, cfg.mode, t_prev);
        }
    }
    throw InvalidConfig("unknown denoise scheme");
}

template BinaryMask threshold_fixed(const Grid3<std::uint32_t>&, double);
template BinaryMask threshold_fixed(const Grid3<double>&, double);
template ThresholdResult threshold_peak_fraction(const Grid3<std::uint32_t>&, double);
template ThresholdResult threshold_peak_fraction(const Grid3<double>&, double);
template ThresholdResult threshold_moving_average(const Grid3<std::uint32_t>&, double, double,
                                                  double);
template ThresholdResult threshold_moving_average(const Grid3<double>&, double, double, double);
template RealGrid parzen_smooth(const Grid3<std::uint32_t>&, const std::array<double, 3>&, double);
template RealGrid parzen_smooth(const Grid3<double>&, const std::array<double, 3>&, double);

}  // namespace ladar
