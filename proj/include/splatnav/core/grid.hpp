// Copyright 2026 splatnav contributors
// Licensed under the Apache License, Version 2.0.

#pragma once

#include <Eigen/Core>
#include <cmath>
#include <cstdint>

#include "splatnav/core/errors.hpp"

namespace splatnav {

namespace detail {
// Cell centers sit exactly on the floor boundary in this convention, so a
// one-ulp rounding in (p - origin) / resolution would flip them into the
// neighbor cell; snap within 1e-9 of a cell width.
inline int floor_cell(double x) { return static_cast<int>(std::floor(x + 1e-9)); }
}  // namespace detail

/// 2D metric raster. `origin` is the world position of cell (0,0)'s center;
/// values live at cell centers and a world point maps to the cell
/// floor((p - origin) / resolution).
struct Grid2Spec {
    double resolution = 0.1;
    Eigen::Vector2d origin{0.0, 0.0};
    int nx = 1;
    int ny = 1;

    bool valid() const { return resolution > 0.0 && nx >= 1 && ny >= 1; }
    std::size_t size() const { return static_cast<std::size_t>(nx) * ny; }
    std::size_t index(int i, int j) const { return static_cast<std::size_t>(j) * nx + i; }
    bool in_bounds(int i, int j) const { return i >= 0 && i < nx && j >= 0 && j < ny; }

    Eigen::Vector2i cell_of(const Eigen::Vector2d& p) const {
        return {detail::floor_cell((p.x() - origin.x()) / resolution),
                detail::floor_cell((p.y() - origin.y()) / resolution)};
    }
    Eigen::Vector2d center_of(int i, int j) const {
        return origin + resolution * Eigen::Vector2d(i, j);
    }

    bool operator==(const Grid2Spec& o) const {
        return resolution == o.resolution && origin == o.origin && nx == o.nx && ny == o.ny;
    }
};

/// 3D voxel lattice, same center/floor conventions as Grid2Spec.
struct Grid3Spec {
    double resolution = 0.1;
    Eigen::Vector3d origin{0.0, 0.0, 0.0};
    int nx = 1;
    int ny = 1;
    int nz = 1;

    bool valid() const { return resolution > 0.0 && nx >= 1 && ny >= 1 && nz >= 1; }
    std::size_t size() const { return static_cast<std::size_t>(nx) * ny * nz; }
    std::size_t index(int i, int j, int k) const {
        return (static_cast<std::size_t>(k) * ny + j) * nx + i;
    }
    bool in_bounds(int i, int j, int k) const {
        return i >= 0 && i < nx && j >= 0 && j < ny && k >= 0 && k < nz;
    }

    Eigen::Vector3i cell_of(const Eigen::Vector3d& p) const {
        return {detail::floor_cell((p.x() - origin.x()) / resolution),
                detail::floor_cell((p.y() - origin.y()) / resolution),
                detail::floor_cell((p.z() - origin.z()) / resolution)};
    }
    Eigen::Vector3d center_of(int i, int j, int k) const {
        return origin + resolution * Eigen::Vector3d(i, j, k);
    }

    /// The xy footprint as a 2D spec (used when rasterizing volumes to ground).
    Grid2Spec footprint() const {
        return Grid2Spec{resolution, origin.head<2>(), nx, ny};
    }
};

}  // namespace splatnav
