#include "spectrade/channel.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "spectrade/errors.hpp"

namespace spectrade::channel {

double AntennaPattern::gain(double angle_rad) const {
    if (peak_gain < floor_gain || floor_gain <= 0.0) {
        throw DomainError("AntennaPattern: need peak_gain >= floor_gain > 0");
    }
    if (rolloff_3db_rad <= 0.0) throw DomainError("AntennaPattern: rolloff angle must be positive");
    double x = angle_rad / rolloff_3db_rad;
    double g = peak_gain * std::exp(-std::numbers::ln2 * x * x);
    return std::max(g, floor_gain);
}

double receive_power(const LinkParams& link) {
    if (link.distance_km <= 0.0) throw DomainError("receive_power: distance must be positive");
    if (link.wavelength_m <= 0.0) throw DomainError("receive_power: wavelength must be positive");
    if (link.fading <= 0.0) throw DomainError("receive_power: fading factor must be positive");
    if (link.tx_power_w < 0.0) throw DomainError("receive_power: negative transmit power");

    double d_m = link.distance_km * 1000.0;
    double spreading = 4.0 * std::numbers::pi * d_m / link.wavelength_m;
    return link.tx_power_w * link.user_gain * link.sat_gain / (spreading * spreading * link.fading);
}

double aggregate_interference(std::span<const LinkParams> co_channel_links, int victim_color) {
    double total = 0.0;
    for (std::size_t i = 0; i < co_channel_links.size(); ++i) {
        const LinkParams& link = co_channel_links[i];
        if (victim_color >= 0 && link.reuse_color >= 0 && link.reuse_color != victim_color) {
            throw ProtocolError("aggregate_interference: link " + std::to_string(i) +
                                " has reuse color " + std::to_string(link.reuse_color) +
                                ", victim uses " + std::to_string(victim_color));
        }
        if (link.activity < 0.0 || link.activity > 1.0) {
            throw DomainError("aggregate_interference: activity factor outside [0,1]");
        }
        if (link.polarization_isolation < 0.0 || link.polarization_isolation > 1.0) {
            throw DomainError("aggregate_interference: polarization isolation outside [0,1]");
        }
        total += receive_power(link) * link.activity * link.polarization_isolation;
    }
    return total;
}

LinkBudget sinr_capacity(const LinkParams& signal, std::span<const LinkParams> interferers,
                         const NoiseModel& noise) {
    if (noise.n0_w_per_hz <= 0.0 || noise.bandwidth_hz <= 0.0) {
        throw DomainError("sinr_capacity: noise density and bandwidth must be positive");
    }
    LinkBudget out;
    out.receive_power_w = receive_power(signal);
    out.interference_w = aggregate_interference(interferers, signal.reuse_color);
    out.sinr = out.receive_power_w / (out.interference_w + noise.power_w());
    out.capacity_bps_hz = std::log2(1.0 + out.sinr);
    return out;
}

} // namespace spectrade::channel
