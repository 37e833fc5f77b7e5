#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "spectrade/identity.hpp"
#include "spectrade/ledger.hpp"
#include "spectrade/rng.hpp"

namespace spectrade::market {

// Preference density g(theta). Uniform with positive support, or a point
// mass (degenerate density handled specially by the integrator).
struct ThetaDensity {
    enum class Kind { uniform, point_mass };
    Kind kind = Kind::uniform;
    double lo = 0.5;
    double hi = 1.5;

    static ThetaDensity uniform(double lo, double hi);
    static ThetaDensity point_mass(double at);

    double pdf(double theta) const;
    double sample(RandomStream& rng) const;
    void validate() const;
};

// Parameters of the pricing game. The entrant buys access at a bandwidth
// price plus an interference charge price * preference * power * gain; the
// incumbent is protected by the shared QoS threshold.
struct MarketParams {
    double rate_value_coeff = 1.0;      // coin per bit/s/Hz of entrant throughput
    double bandwidth_price = 1e-4;      // coin per Hz of leased bandwidth
    double cost_coeff = 0.5;            // scales the marginal cost
    double marginal_cost = 1.0;         // coin
    int channel_count = 5;              // number of channels of this spectrum type
    double bandwidth = 200.0;           // leased bandwidth (Hz, abstract units)
    double noise_bw_entrant = 200.0;    // noise bandwidth in the entrant's SINR
    double noise_bw_incumbent = 200.0;  // noise bandwidth in the incumbent's SINR
    double entrant_gain = 0.2;          // combined channel coefficient entrant -> satellite
    double incumbent_gain = 0.1;        // combined channel coefficient incumbent -> satellite
    double incumbent_power = 10.0;      // exogenous incumbent transmit power (W)
    double noise_density_entrant = 1e-3;
    double noise_density_incumbent = 2e-3;
    double qos_threshold = 0.25;        // SINR floor for both users
    ThetaDensity theta;

    void validate() const;

    // Interference-plus-noise floor seen by the entrant.
    double entrant_noise_floor() const {
        return incumbent_power * incumbent_gain + noise_density_entrant * noise_bw_entrant;
    }
};

double entrant_sinr(const MarketParams& p, double power);
double incumbent_sinr(const MarketParams& p, double power);

// Entrant utility: value of rate minus bandwidth cost minus interference
// charge.
double user_utility(const MarketParams& p, double price, double theta, double power);

enum class Binding { interior, qos_floor, incumbent_cap, infeasible };

struct BestResponse {
    double power_w = 0.0;
    bool feasible = false;
    Binding binding = Binding::infeasible;
};

// Closed-form stationary point of the concave utility, clamped to the
// interval where both SINR constraints hold.
BestResponse best_response_power(const MarketParams& p, double price, double theta);

// A feasible entrant still walks away when the trade is worth less than not
// trading at all; that cut shapes the revenue at high prices.
bool participates(const MarketParams& p, double price, double theta, const BestResponse& br);

// Expected interference payment price * theta * power * gain integrated
// against g(theta) over the participating region (adaptive Simpson, absolute
// tolerance 1e-9, split at the clamp-regime boundaries).
double expected_payment(const MarketParams& p, double price);

// Per-channel-type profit: channel_count * (expected payment + bandwidth
// revenue - cost).
double satellite_utility(const MarketParams& p, double price);

struct Interval {
    double lo = 0.0;
    double hi = 1.0;
};

struct PricingSolution {
    double price = 0.0;
    double profit = 0.0;
    double expected_payment = 0.0;
};

// Coarse grid scan plus golden-section refinement of the best bracket.
// Ties break toward the smaller price.
PricingSolution optimal_price(const MarketParams& p, Interval price_range, int grid);

// Total charge for one trade: bandwidth price plus interference charge.
double trade_charge(const MarketParams& p, double price, double theta, double power);

// Settlement: builds the signed purchase, rounding the charge half-even to
// milli-coins. No trade when the buyer would not participate.
std::optional<ledger::Transaction> build_trade(const MarketParams& p,
                                               const PricingSolution& solution, double theta,
                                               const std::string& buyer,
                                               const std::string& seller,
                                               const IdentityRegistry& ids,
                                               std::uint64_t timestamp);

} // namespace spectrade::market
