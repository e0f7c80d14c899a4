// Copyright 2026 splatnav contributors
// Licensed under the Apache License, Version 2.0.

#include "splatnav/esdf/esdf.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>
#include <random>

#include "splatnav/core/kernels.hpp"

namespace splatnav {
namespace {

constexpr double kInf = 1e20;

// Felzenszwalb-Huttenlocher 1D squared-distance transform.
void dt1d(const double* f, int n, double* d, int* v, double* z) {
    int k = 0;
    v[0] = 0;
    z[0] = -kInf;
    z[1] = kInf;
    for (int q = 1; q < n; ++q) {
        double s = ((f[q] + static_cast<double>(q) * q) -
                    (f[v[k]] + static_cast<double>(v[k]) * v[k])) /
                   (2.0 * q - 2.0 * v[k]);
        while (s <= z[k]) {
            --k;
            s = ((f[q] + static_cast<double>(q) * q) -
                 (f[v[k]] + static_cast<double>(v[k]) * v[k])) /
                (2.0 * q - 2.0 * v[k]);
        }
        ++k;
        v[k] = q;
        z[k] = s;
        z[k + 1] = kInf;
    }
    k = 0;
    for (int q = 0; q < n; ++q) {
        while (z[k + 1] < q) ++k;
        const double dq = q - v[k];
        d[q] = dq * dq + f[v[k]];
    }
}

// In-place 2D squared EDT; f holds 0 at sources and kInf elsewhere.
void dt2d(std::vector<double>& f, int nx, int ny) {
    const int m = std::max(nx, ny);
    std::vector<double> line(m), out(m), z(m + 1);
    std::vector<int> v(m);
    for (int i = 0; i < nx; ++i) {
        for (int j = 0; j < ny; ++j) line[j] = f[static_cast<std::size_t>(j) * nx + i];
        dt1d(line.data(), ny, out.data(), v.data(), z.data());
        for (int j = 0; j < ny; ++j) f[static_cast<std::size_t>(j) * nx + i] = out[j];
    }
    for (int j = 0; j < ny; ++j) {
        double* row = f.data() + static_cast<std::size_t>(j) * nx;
        std::copy(row, row + nx, line.begin());
        dt1d(line.data(), nx, out.data(), v.data(), z.data());
        std::copy(out.begin(), out.begin() + nx, row);
    }
}

}  // namespace

EsdfGrid2D edt_signed(const OccupancyGrid2D& occ, double d_max) {
    if (!occ.spec.valid() || occ.occupied.size() != occ.spec.size()) {
        throw ConfigError("edt_signed: inconsistent occupancy grid");
    }
    const int nx = occ.spec.nx, ny = occ.spec.ny;
    const std::size_t n = occ.spec.size();

    std::size_t occupied_count = 0;
    for (auto o : occ.occupied) occupied_count += o ? 1 : 0;

    EsdfGrid2D out = EsdfGrid2D::filled(occ.spec, d_max);
    if (occupied_count == 0) return out;
    if (occupied_count == n) {
        std::fill(out.d.begin(), out.d.end(), -d_max);
        return out;
    }

    std::vector<double> to_occ(n), to_free(n);
    for (std::size_t i = 0; i < n; ++i) {
        to_occ[i] = occ.occupied[i] ? 0.0 : kInf;
        to_free[i] = occ.occupied[i] ? kInf : 0.0;
    }
    dt2d(to_occ, nx, ny);
    dt2d(to_free, nx, ny);

    const double res = occ.spec.resolution;
    for (std::size_t i = 0; i < n; ++i) {
        if (occ.occupied[i]) {
            out.d[i] = -std::min(std::sqrt(to_free[i]) * res, d_max);
        } else {
            out.d[i] = std::min(std::sqrt(to_occ[i]) * res, d_max);
        }
    }
    return out;
}

VoxelGrid build_cost_volume(const SplatField& field, const Grid3Spec& spec, VolumeMode mode,
                            double fraction, std::uint64_t seed, int n_pts) {
    if (!spec.valid()) throw ConfigError("build_cost_volume: invalid grid spec");
    if (mode == VolumeMode::SampledPoints && !(fraction > 0.0 && fraction <= 1.0)) {
        throw ConfigError("build_cost_volume: fraction must be in (0,1]");
    }
    VoxelGrid vol = VoxelGrid::filled(spec, 0.0);
    const auto& kern = kernels::active_kernels();

    if (mode == VolumeMode::Analytic) {
        const double res = spec.resolution;
        for (const auto& g : field.primitives) {
            const double reach = 3.0 * g.max_scale();
            const Eigen::Matrix3d p = precision_of(g);
            const double mu[3] = {g.mu.x(), g.mu.y(), g.mu.z()};
            const double prec[6] = {p(0, 0), p(0, 1), p(0, 2), p(1, 1), p(1, 2), p(2, 2)};
            const double w = g.alpha_base() * g.cost;
            const double r2max = reach * reach;

            const Eigen::Vector3i lo = spec.cell_of(g.mu - Eigen::Vector3d::Constant(reach));
            const Eigen::Vector3i hi = spec.cell_of(g.mu + Eigen::Vector3d::Constant(reach));
            const int i0 = std::max(0, lo.x()), i1 = std::min(spec.nx - 1, hi.x());
            const int j0 = std::max(0, lo.y()), j1 = std::min(spec.ny - 1, hi.y());
            const int k0 = std::max(0, lo.z()), k1 = std::min(spec.nz - 1, hi.z());
            if (i0 > i1 || j0 > j1 || k0 > k1) continue;

            const double x0 = spec.origin.x() + res * i0;
            for (int k = k0; k <= k1; ++k) {
                const double z = spec.origin.z() + res * k;
                for (int j = j0; j <= j1; ++j) {
                    const double y = spec.origin.y() + res * j;
                    double* row = vol.values.data() + spec.index(i0, j, k);
                    kern.gauss_accum_row(row, static_cast<std::size_t>(i1 - i0 + 1), x0, res,
                                         y, z, mu, prec, w, r2max);
                }
            }
        }
        kern.clamp01(vol.values.data(), vol.values.size());
        return vol;
    }

    // sampled / means-only deposits with max-accumulation
    const int n_samples =
        mode == VolumeMode::MeansOnly
            ? 1
            : static_cast<int>(std::ceil(fraction * static_cast<double>(n_pts)));
    for (std::size_t gi = 0; gi < field.primitives.size(); ++gi) {
        const auto& g = field.primitives[gi];
        const double w = g.alpha_base() * g.cost;
        const Eigen::Matrix3d rot = g.rot.toRotationMatrix();

        std::mt19937_64 rng(seed ^ (0x9e3779b97f4a7c15ULL * (gi + 1)));
        std::uniform_real_distribution<double> uni(0.0, 1.0);

        for (int s = 0; s < n_samples; ++s) {
            Eigen::Vector3d pt = g.mu;
            if (mode == VolumeMode::SampledPoints) {
                // Box-Muller; explicit so the draw sequence is pinned
                const double u1 = 1.0 - uni(rng), u2 = uni(rng);
                const double u3 = 1.0 - uni(rng), u4 = uni(rng);
                const double r1 = std::sqrt(-2.0 * std::log(u1));
                const double r2 = std::sqrt(-2.0 * std::log(u3));
                const Eigen::Vector3d zn(r1 * std::cos(2.0 * M_PI * u2),
                                         r1 * std::sin(2.0 * M_PI * u2),
                                         r2 * std::cos(2.0 * M_PI * u4));
                pt += rot * g.scale.cwiseProduct(zn);
            }
            const Eigen::Vector3i c = spec.cell_of(pt);
            if (!spec.in_bounds(c.x(), c.y(), c.z())) continue;
            double& cell = vol.values[spec.index(c.x(), c.y(), c.z())];
            cell = std::max(cell, w);
        }
    }
    kern.clamp01(vol.values.data(), vol.values.size());
    return vol;
}

VoxelGrid volume_to_distance(const VoxelGrid& costs, double d_max) {
    if (d_max <= 0.0) throw ConfigError("volume_to_distance: d_max must be positive");
    VoxelGrid out{costs.spec, std::vector<double>(costs.values.size())};
    const auto& kern = kernels::active_kernels();
    // (1 - c) * d_max, staged so both steps stay elementwise-exact
    kern.affine_map(costs.values.data(), out.values.data(), out.values.size(), -1.0, 1.0);
    kern.affine_map(out.values.data(), out.values.data(), out.values.size(), d_max, 0.0);
    return out;
}

EsdfGrid2D rasterize_to_ground(const VoxelGrid& distances, double z_min, double z_max) {
    const auto& spec = distances.spec;
    std::vector<int> layers;
    for (int k = 0; k < spec.nz; ++k) {
        const double z = spec.origin.z() + spec.resolution * k;
        if (z >= z_min && z <= z_max) layers.push_back(k);
    }
    if (layers.empty()) throw EmptyBand("rasterize_to_ground: band contains no voxel layer");

    EsdfGrid2D out{spec.footprint(), {}};
    const std::size_t slab = out.spec.size();
    out.d.assign(distances.values.begin() + layers[0] * slab,
                 distances.values.begin() + (layers[0] + 1) * slab);
    const auto& kern = kernels::active_kernels();
    for (std::size_t li = 1; li < layers.size(); ++li) {
        kern.min_inplace(out.d.data(), distances.values.data() + layers[li] * slab, slab);
    }
    return out;
}

EsdfGrid2D inflate_soft(const EsdfGrid2D& esdf, double r_infl, double sigma) {
    if (r_infl < 0.0 || sigma <= 0.0) throw ConfigError("inflate_soft: bad parameters");
    EsdfGrid2D out = esdf;
    kernels::active_kernels().soft_inflate(out.d.data(), out.d.size(), r_infl,
                                           1.0 / (2.0 * sigma * sigma));
    return out;
}

EsdfGrid2D fuse(const EsdfGrid2D& gsplat, const EsdfGrid2D& lidar, const Pose3& robot_pose,
                const FrontRegion& region) {
    if (!(gsplat.spec == lidar.spec)) throw SpecMismatch("fuse: grids differ in spec");
    if (region.depth <= 0.0 || region.width <= 0.0) throw ConfigError("fuse: bad front region");

    const double yaw = robot_pose.yaw();
    const double c = std::cos(yaw), s = std::sin(yaw);
    const double rx = robot_pose.trans.x(), ry = robot_pose.trans.y();
    const double half_w = 0.5 * region.width;

    EsdfGrid2D out = lidar;
    for (int j = 0; j < out.spec.ny; ++j) {
        for (int i = 0; i < out.spec.nx; ++i) {
            const Eigen::Vector2d p = out.spec.center_of(i, j);
            const double dx = p.x() - rx, dy = p.y() - ry;
            const double xr = c * dx + s * dy;
            const double yr = -s * dx + c * dy;
            if (xr >= 0.0 && xr <= region.depth && std::fabs(yr) <= half_w) {
                out.d[out.spec.index(i, j)] = gsplat.d[gsplat.spec.index(i, j)];
            }
        }
    }
    return out;
}

EsdfGrid2D lidar_esdf(const std::vector<Eigen::Vector3d>& points_world, const Grid2Spec& spec,
                      const EsdfConfig& cfg) {
    OccupancyGrid2D occ = OccupancyGrid2D::empty(spec);
    for (const auto& p : points_world) {
        if (p.z() < cfg.z_min || p.z() > cfg.z_max) continue;
        const auto c = spec.cell_of(p.head<2>());
        if (spec.in_bounds(c.x(), c.y())) occ.occupied[spec.index(c.x(), c.y())] = 1;
    }
    return edt_signed(occ, cfg.lidar_truncation);
}

double sample_esdf(const EsdfGrid2D& esdf, const Eigen::Vector2d& p, double outside_value) {
    const auto& spec = esdf.spec;
    const double gx = (p.x() - spec.origin.x()) / spec.resolution;
    const double gy = (p.y() - spec.origin.y()) / spec.resolution;
    if (gx < 0.0 || gy < 0.0 || gx > spec.nx - 1 || gy > spec.ny - 1) return outside_value;

    const int i0 = std::min(static_cast<int>(gx), spec.nx - 2 < 0 ? 0 : spec.nx - 2);
    const int j0 = std::min(static_cast<int>(gy), spec.ny - 2 < 0 ? 0 : spec.ny - 2);
    const int i1 = std::min(i0 + 1, spec.nx - 1);
    const int j1 = std::min(j0 + 1, spec.ny - 1);
    const double tx = gx - i0, ty = gy - j0;

    const double v00 = esdf.d[spec.index(i0, j0)];
    const double v10 = esdf.d[spec.index(i1, j0)];
    const double v01 = esdf.d[spec.index(i0, j1)];
    const double v11 = esdf.d[spec.index(i1, j1)];
    const double a = v00 + tx * (v10 - v00);
    const double b = v01 + tx * (v11 - v01);
    return a + ty * (b - a);
}

void write_pfm(const EsdfGrid2D& esdf, const std::string& path, double d_max) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw IoError("cannot write " + path);
    os << "Pf\n" << esdf.spec.nx << " " << esdf.spec.ny << "\n-1.0\n";
    // PFM scanlines run bottom-to-top; row j=0 is the grid's bottom row
    std::vector<float> row(esdf.spec.nx);
    for (int j = 0; j < esdf.spec.ny; ++j) {
        for (int i = 0; i < esdf.spec.nx; ++i) {
            row[i] = static_cast<float>(esdf.d[esdf.spec.index(i, j)]);
        }
        os.write(reinterpret_cast<const char*>(row.data()),
                 static_cast<std::streamsize>(row.size() * sizeof(float)));
    }
    if (!os) throw IoError("short write on " + path);

    std::ofstream meta(path + ".meta");
    if (!meta) throw IoError("cannot write " + path + ".meta");
    char buf[128];
    std::snprintf(buf, sizeof(buf), "resolution %.9g\norigin %.9g %.9g\nd_max %.9g\n",
                  esdf.spec.resolution, esdf.spec.origin.x(), esdf.spec.origin.y(), d_max);
    meta << buf;
}

EsdfGrid2D read_pfm(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw IoError("cannot read " + path);
    std::string magic;
    int nx = 0, ny = 0;
    double scale = 0.0;
    is >> magic >> nx >> ny >> scale;
    if (magic != "Pf" || nx < 1 || ny < 1 || scale >= 0.0) {
        throw IoError("not a little-endian grayscale PFM: " + path);
    }
    is.get();  // single whitespace after the header

    EsdfGrid2D out;
    out.spec.nx = nx;
    out.spec.ny = ny;
    out.d.resize(static_cast<std::size_t>(nx) * ny);
    std::vector<float> row(nx);
    for (int j = 0; j < ny; ++j) {
        is.read(reinterpret_cast<char*>(row.data()),
                static_cast<std::streamsize>(row.size() * sizeof(float)));
        for (int i = 0; i < nx; ++i) out.d[out.spec.index(i, j)] = row[i];
    }
    if (!is) throw IoError("truncated PFM: " + path);

    std::ifstream meta(path + ".meta");
    if (meta) {
        std::string key;
        while (meta >> key) {
            if (key == "resolution") meta >> out.spec.resolution;
            else if (key == "origin") meta >> out.spec.origin.x() >> out.spec.origin.y();
            else { std::string rest; std::getline(meta, rest); }
        }
    }
    return out;
}

}  // namespace splatnav
