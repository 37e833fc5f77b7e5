#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace spectrade::geometry {

// Spherical earth. All distances in this module are kilometers.
struct EarthModel {
    double radius_km = 6371.0;
};

// Position on the ground expressed as tangent-plane arc coordinates relative
// to the subsatellite point.
struct ArcPosition {
    double x_km = 0.0;
    double y_km = 0.0;
};

struct CellGeometry {
    int cell_id = 0;
    double center_to_sat_km = 0.0; // slant range from cell center to the satellite
    ArcPosition center;
    int reuse_color = 0;
};

struct UserPosition {
    int user_id = 0;
    int cell_id = 0;
    double to_sat_km = 0.0;    // straight-line user-to-satellite distance
    double to_center_km = 0.0; // great-circle distance user -> cell center
};

struct FootprintParams {
    int n_cells = 7;
    int reuse_factor = 3; // one of 1, 3, 4, 7
    double sat_altitude_km = 35786.0;
    double cell_pitch_km = 500.0;
    double earth_radius_km = 6371.0;
};

// Slant range from a ground point at the given arc distance from the
// subsatellite point to a satellite at the given altitude.
double slant_range_km(double arc_distance_km, double altitude_km, double earth_radius_km);

// Oblique-projection deviation angle at the satellite between the cell-center
// direction and the user direction. Returns radians in [0, pi]. The arccos
// argument is clamped by at most 1e-9; anything further out means the three
// distances cannot coexist on the given sphere and raises DomainError.
double deviation_angle(const CellGeometry& cell, const UserPosition& user,
                       const EarthModel& earth);

// Hexagonal lattice of cells in spiral order with a standard reuse coloring.
// layout_seed only rotates the color labels; the lattice itself is fixed.
std::vector<CellGeometry> build_footprint(const FootprintParams& params,
                                          std::uint64_t layout_seed);

bool cells_co_channel(const CellGeometry& a, const CellGeometry& b);

std::vector<int> co_channel_cells(std::span<const CellGeometry> footprint, int cell_id);

// Footprint as scenario-config lines: "cell = <id> <d_o_s> <color> <x> <y>".
std::string serialize_footprint(std::span<const CellGeometry> footprint);

} // namespace spectrade::geometry
