#include "spectrade/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "spectrade/errors.hpp"

namespace spectrade::geometry {

namespace {

constexpr double kClamp = 1e-9;

int positive_mod(long long v, int m) {
    long long r = v % m;
    if (r < 0) r += m;
    return int(r);
}

// Valid reuse colorings on the axial hex lattice: adjacent cells never share
// a color, and for 7 the same-color translation vector has hex norm sqrt(7).
int base_color(int q, int r, int reuse_factor) {
    switch (reuse_factor) {
        case 1:
            return 0;
        case 3:
            return positive_mod(q + 2ll * r, 3);
        case 4:
            return positive_mod(q, 2) + 2 * positive_mod(r, 2);
        case 7:
            return positive_mod(q + 3ll * r, 7);
        default:
            throw ConfigError("build_footprint: unsupported reuse factor " +
                              std::to_string(reuse_factor));
    }
}

struct Axial {
    int q;
    int r;
};

} // namespace

double slant_range_km(double arc_distance_km, double altitude_km, double earth_radius_km) {
    if (earth_radius_km <= 0.0) throw DomainError("slant_range_km: earth radius must be positive");
    double beta = arc_distance_km / earth_radius_km;
    double rs = earth_radius_km + altitude_km;
    double d2 = earth_radius_km * earth_radius_km + rs * rs -
                2.0 * earth_radius_km * rs * std::cos(beta);
    return std::sqrt(std::max(d2, 0.0));
}

double deviation_angle(const CellGeometry& cell, const UserPosition& user,
                       const EarthModel& earth) {
    const double a = cell.center_to_sat_km;
    const double b = user.to_sat_km;
    const double arc = user.to_center_km;
    const double R = earth.radius_km;
    if (R <= 0.0) throw DomainError("deviation_angle: earth radius must be positive");
    if (a <= 0.0 || b <= 0.0) throw DomainError("deviation_angle: slant ranges must be positive");
    if (arc < 0.0) throw DomainError("deviation_angle: negative ground distance");

    // 2R^2 (1 - cos(arc/R)) is the squared chord between user and cell center;
    // the sine form keeps precision for small central angles.
    double chord = 2.0 * R * std::sin(arc / (2.0 * R));
    double arg = (a * a + b * b - chord * chord) / (2.0 * a * b);
    if (arg > 1.0 + kClamp || arg < -1.0 - kClamp) {
        char msg[192];
        std::snprintf(msg, sizeof(msg),
                      "deviation_angle: inconsistent geometry (center_to_sat=%g km, "
                      "to_sat=%g km, to_center=%g km, arccos arg=%.12g)",
                      a, b, arc, arg);
        throw DomainError(msg);
    }
    arg = std::clamp(arg, -1.0, 1.0);
    return std::acos(arg);
}

std::vector<CellGeometry> build_footprint(const FootprintParams& params,
                                          std::uint64_t layout_seed) {
    if (params.n_cells < 1) throw ConfigError("build_footprint: n_cells must be >= 1");
    if (params.reuse_factor != 1 && params.reuse_factor != 3 &&
        params.reuse_factor != 4 && params.reuse_factor != 7) {
        throw ConfigError("build_footprint: unsupported reuse factor " +
                          std::to_string(params.reuse_factor));
    }
    if (params.cell_pitch_km <= 0.0) throw ConfigError("build_footprint: cell pitch must be positive");
    if (params.sat_altitude_km <= 0.0) throw ConfigError("build_footprint: altitude must be positive");

    // Axial spiral outward from the subsatellite cell.
    static const Axial kDirections[6] = {{1, 0}, {1, -1}, {0, -1}, {-1, 0}, {-1, 1}, {0, 1}};
    std::vector<Axial> coords;
    coords.push_back({0, 0});
    for (int ring = 1; int(coords.size()) < params.n_cells; ++ring) {
        Axial cur{-ring, ring}; // = direction 4 scaled by ring
        for (int side = 0; side < 6 && int(coords.size()) < params.n_cells; ++side) {
            for (int step = 0; step < ring && int(coords.size()) < params.n_cells; ++step) {
                coords.push_back(cur);
                cur = {cur.q + kDirections[side].q, cur.r + kDirections[side].r};
            }
        }
    }

    int color_offset = int(layout_seed % std::uint64_t(params.reuse_factor));
    std::vector<CellGeometry> cells;
    cells.reserve(coords.size());
    const double root3_2 = std::sqrt(3.0) / 2.0;
    for (std::size_t i = 0; i < coords.size(); ++i) {
        const Axial& ax = coords[i];
        CellGeometry c;
        c.cell_id = int(i);
        c.center.x_km = params.cell_pitch_km * (double(ax.q) + double(ax.r) / 2.0);
        c.center.y_km = params.cell_pitch_km * root3_2 * double(ax.r);
        double arc = std::hypot(c.center.x_km, c.center.y_km);
        c.center_to_sat_km = slant_range_km(arc, params.sat_altitude_km, params.earth_radius_km);
        c.reuse_color =
            (base_color(ax.q, ax.r, params.reuse_factor) + color_offset) % params.reuse_factor;
        cells.push_back(c);
    }
    return cells;
}

bool cells_co_channel(const CellGeometry& a, const CellGeometry& b) {
    return a.cell_id != b.cell_id && a.reuse_color == b.reuse_color;
}

std::vector<int> co_channel_cells(std::span<const CellGeometry> footprint, int cell_id) {
    const CellGeometry* self = nullptr;
    for (const auto& c : footprint) {
        if (c.cell_id == cell_id) {
            self = &c;
            break;
        }
    }
    if (!self) throw LookupError("co_channel_cells: unknown cell " + std::to_string(cell_id));
    std::vector<int> out;
    for (const auto& c : footprint) {
        if (cells_co_channel(*self, c)) out.push_back(c.cell_id);
    }
    return out;
}

std::string serialize_footprint(std::span<const CellGeometry> footprint) {
    std::ostringstream os;
    for (const auto& c : footprint) {
        char line[160];
        std::snprintf(line, sizeof(line), "cell = %d %.12g %d %.12g %.12g\n", c.cell_id,
                      c.center_to_sat_km, c.reuse_color, c.center.x_km, c.center.y_km);
        os << line;
    }
    return os.str();
}

} // namespace spectrade::geometry
