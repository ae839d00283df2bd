#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace ladar {

struct Point3 {
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;

    bool operator==(const Point3&) const = default;
};

double distance(const Point3& a, const Point3& b);

/// Integer voxel coordinate; z is the range axis.
struct Voxel {
    int x = 0;
    int y = 0;
    int z = 0;

    bool operator==(const Voxel&) const = default;
    auto operator<=>(const Voxel&) const = default;
};

/// Axis-aligned box with inclusive integer corners.
struct BoundingBox {
    Voxel min;
    Voxel max;

    bool operator==(const BoundingBox&) const = default;
};

struct Dims {
    std::size_t nx = 0;
    std::size_t ny = 0;
    std::size_t nz = 0;

    std::size_t size() const { return nx * ny * nz; }
    bool operator==(const Dims&) const = default;
};

/// Dense 3D array stored with x varying fastest, then y, then z.
template <class T>
class Grid3 {
public:
    Grid3() = default;
    explicit Grid3(Dims dims, T fill = T{}) : dims_(dims), data_(dims.size(), fill) {}

    const Dims& dims() const { return dims_; }
    std::size_t size() const { return data_.size(); }

    std::size_t index(std::size_t x, std::size_t y, std::size_t z) const {
        return x + dims_.nx * (y + dims_.ny * z);
    }
    Voxel coords(std::size_t i) const {
        return {static_cast<int>(i % dims_.nx), static_cast<int>((i / dims_.nx) % dims_.ny),
                static_cast<int>(i / (dims_.nx * dims_.ny))};
    }

    T& operator()(std::size_t x, std::size_t y, std::size_t z) { return data_[index(x, y, z)]; }
    const T& operator()(std::size_t x, std::size_t y, std::size_t z) const {
        return data_[index(x, y, z)];
    }
    T& operator[](std::size_t i) { return data_[i]; }
    const T& operator[](std::size_t i) const { return data_[i]; }

    std::span<T> data() { return data_; }
    std::span<const T> data() const { return data_; }

    bool operator==(const Grid3&) const = default;

private:
    Dims dims_;
    std::vector<T> data_;
};

using BinaryMask = Grid3<std::uint8_t>;
using RealGrid = Grid3<double>;
using LabelGrid = Grid3<std::uint32_t>;

}  // namespace ladar
