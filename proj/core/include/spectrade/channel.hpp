#pragma once

#include <span>

namespace spectrade::channel {

// Gaussian-rolloff beam pattern with a floor. Injectable so tests can pin
// constant gains.
struct AntennaPattern {
    double peak_gain = 1.0;
    double rolloff_3db_rad = 0.05;
    double floor_gain = 1e-3;

    double gain(double angle_rad) const;
};

// One uplink. Distances in kilometers, wavelength in meters, gains linear.
// fading >= 1 is a loss factor (it divides). reuse_color < 0 means unchecked.
struct LinkParams {
    double tx_power_w = 0.0;
    double user_gain = 1.0;
    double sat_gain = 1.0;
    double distance_km = 1.0;
    double wavelength_m = 0.15;
    double fading = 1.0;
    double activity = 1.0;
    double polarization_isolation = 1.0;
    int reuse_color = -1;
};

struct NoiseModel {
    double n0_w_per_hz = 1e-20;
    double bandwidth_hz = 1e6;

    double power_w() const { return n0_w_per_hz * bandwidth_hz; }
};

struct LinkBudget {
    double receive_power_w = 0.0;
    double interference_w = 0.0;
    double sinr = 0.0;
    double capacity_bps_hz = 0.0;
};

// Free-space uplink receive power p g G / ((4 pi d / lambda)^2 f).
double receive_power(const LinkParams& link);

// Sum of receive_power * activity * polarization_isolation over co-channel
// interferers. If victim_color >= 0, every listed link carrying a color must
// match it (ProtocolError otherwise).
double aggregate_interference(std::span<const LinkParams> co_channel_links,
                              int victim_color = -1);

// Compose the two into SINR and per-Hz capacity log2(1 + sinr). The victim
// color for the interferer check is taken from the signal link.
LinkBudget sinr_capacity(const LinkParams& signal, std::span<const LinkParams> interferers,
                         const NoiseModel& noise);

} // namespace spectrade::channel
