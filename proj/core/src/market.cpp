#include "spectrade/market.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>
#include <vector>

#include "spectrade/errors.hpp"
#include "spectrade/numerics.hpp"

namespace spectrade::market {

ThetaDensity ThetaDensity::uniform(double lo, double hi) {
    ThetaDensity d;
    d.kind = Kind::uniform;
    d.lo = lo;
    d.hi = hi;
    d.validate();
    return d;
}

ThetaDensity ThetaDensity::point_mass(double at) {
    ThetaDensity d;
    d.kind = Kind::point_mass;
    d.lo = at;
    d.hi = at;
    d.validate();
    return d;
}

void ThetaDensity::validate() const {
    if (kind == Kind::uniform) {
        if (!(lo > 0.0) || !(hi > lo)) {
            throw ConfigError("ThetaDensity: uniform support needs 0 < lo < hi");
        }
    } else {
        if (!(lo > 0.0) || lo != hi) {
            throw ConfigError("ThetaDensity: point mass needs a positive atom");
        }
    }
}

double ThetaDensity::pdf(double theta) const {
    if (kind == Kind::point_mass) {
        throw DomainError("ThetaDensity: point mass has no density");
    }
    if (theta < lo || theta > hi) return 0.0;
    return 1.0 / (hi - lo);
}

double ThetaDensity::sample(RandomStream& rng) const {
    if (kind == Kind::point_mass) return lo;
    return rng.next_range(lo, hi);
}

void MarketParams::validate() const {
    auto positive = [](double v, const char* name) {
        if (!(v > 0.0)) throw ConfigError(std::string("MarketParams: ") + name + " must be positive");
    };
    positive(rate_value_coeff, "rate_value_coeff");
    if (bandwidth_price < 0.0) throw ConfigError("MarketParams: negative bandwidth_price");
    positive(cost_coeff, "cost_coeff");
    if (marginal_cost < 0.0) throw ConfigError("MarketParams: negative marginal_cost");
    if (channel_count < 1) throw ConfigError("MarketParams: channel_count must be >= 1");
    positive(bandwidth, "bandwidth");
    positive(noise_bw_entrant, "noise_bw_entrant");
    positive(noise_bw_incumbent, "noise_bw_incumbent");
    positive(entrant_gain, "entrant_gain");
    positive(incumbent_gain, "incumbent_gain");
    if (incumbent_power < 0.0) throw ConfigError("MarketParams: negative incumbent_power");
    positive(noise_density_entrant, "noise_density_entrant");
    positive(noise_density_incumbent, "noise_density_incumbent");
    positive(qos_threshold, "qos_threshold");
    theta.validate();
}

double entrant_sinr(const MarketParams& p, double power) {
    return power * p.entrant_gain / p.entrant_noise_floor();
}

double incumbent_sinr(const MarketParams& p, double power) {
    return p.incumbent_power * p.incumbent_gain /
           (power * p.entrant_gain + p.noise_density_incumbent * p.noise_bw_incumbent);
}

double user_utility(const MarketParams& p, double price, double theta, double power) {
    if (power < 0.0) throw DomainError("user_utility: negative power");
    double rate = std::log2(1.0 + entrant_sinr(p, power));
    return p.rate_value_coeff * rate - p.bandwidth_price * p.bandwidth -
           price * theta * power * p.entrant_gain;
}

namespace {

// Feasible power interval [lo, hi] under both SINR constraints; hi < lo (or
// hi < 0) means no power satisfies them.
struct PowerBounds {
    double lo;
    double hi;
};

PowerBounds feasible_bounds(const MarketParams& p) {
    double floor = p.entrant_noise_floor();
    double lo = p.qos_threshold * floor / p.entrant_gain;
    double hi = (p.incumbent_power * p.incumbent_gain / p.qos_threshold -
                 p.noise_density_incumbent * p.noise_bw_incumbent) /
                p.entrant_gain;
    return {lo, hi};
}

} // namespace

BestResponse best_response_power(const MarketParams& p, double price, double theta) {
    if (!(price > 0.0)) throw DomainError("best_response_power: price must be positive");
    if (!(theta > 0.0)) throw DomainError("best_response_power: theta must be positive");

    PowerBounds bounds = feasible_bounds(p);
    if (bounds.hi < 0.0 || bounds.lo > bounds.hi) {
        return BestResponse{0.0, false, Binding::infeasible};
    }

    // stationary point of the concave utility
    double interior = (p.rate_value_coeff / (std::numbers::ln2 * price * theta) -
                       p.entrant_noise_floor()) /
                      p.entrant_gain;

    BestResponse br;
    br.feasible = true;
    if (interior <= bounds.lo) {
        br.power_w = bounds.lo;
        br.binding = Binding::qos_floor;
    } else if (interior >= bounds.hi) {
        br.power_w = bounds.hi;
        br.binding = Binding::incumbent_cap;
    } else {
        br.power_w = interior;
        br.binding = Binding::interior;
    }
    return br;
}

bool participates(const MarketParams& p, double price, double theta, const BestResponse& br) {
    if (!br.feasible) return false;
    return user_utility(p, price, theta, br.power_w) >= 0.0;
}

namespace {

// Payment of the theta-user at its best response, zero if it stays out.
double payment_at(const MarketParams& p, double price, double theta) {
    BestResponse br = best_response_power(p, price, theta);
    if (!participates(p, price, theta, br)) return 0.0;
    return price * theta * br.power_w * p.entrant_gain;
}

// The entrant's indirect utility is strictly decreasing in theta (the charge
// scales with theta while the rate term does not improve), so the
// participating region is a single prefix [lo, theta_cut].
double participation_cut(const MarketParams& p, double price, double lo, double hi) {
    BestResponse at_lo = best_response_power(p, price, lo);
    if (!participates(p, price, lo, at_lo)) return lo;
    BestResponse at_hi = best_response_power(p, price, hi);
    if (participates(p, price, hi, at_hi)) return hi;
    double a = lo, b = hi;
    for (int i = 0; i < 200 && (b - a) > 1e-13 * std::max(1.0, hi); ++i) {
        double m = 0.5 * (a + b);
        BestResponse br = best_response_power(p, price, m);
        if (participates(p, price, m, br)) {
            a = m;
        } else {
            b = m;
        }
    }
    return 0.5 * (a + b);
}

} // namespace

double expected_payment(const MarketParams& p, double price) {
    if (price < 0.0) throw DomainError("expected_payment: negative price");
    if (price == 0.0) return 0.0;

    if (p.theta.kind == ThetaDensity::Kind::point_mass) {
        return payment_at(p, price, p.theta.lo);
    }

    PowerBounds bounds = feasible_bounds(p);
    if (bounds.hi < 0.0 || bounds.lo > bounds.hi) return 0.0;

    double lo = p.theta.lo;
    double hi = participation_cut(p, price, p.theta.lo, p.theta.hi);
    if (hi <= lo) return 0.0;

    // split where the clamp regime changes so each piece is smooth:
    // interior power equals a bound at theta = omega / (ln2 * price * (floor + gain * bound))
    std::vector<double> cuts{lo, hi};
    double floor = p.entrant_noise_floor();
    for (double bound : {bounds.lo, bounds.hi}) {
        double denom = std::numbers::ln2 * price * (floor + p.entrant_gain * bound);
        if (denom > 0.0) {
            double theta_cross = p.rate_value_coeff / denom;
            if (theta_cross > lo && theta_cross < hi) cuts.push_back(theta_cross);
        }
    }
    std::sort(cuts.begin(), cuts.end());

    double total = 0.0;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
        double a = cuts[i], b = cuts[i + 1];
        if (b <= a) continue;
        total += adaptive_simpson(
            [&](double theta) { return payment_at(p, price, theta) * p.theta.pdf(theta); }, a,
            b, 1e-9);
    }
    return total;
}

double satellite_utility(const MarketParams& p, double price) {
    if (price < 0.0) throw DomainError("satellite_utility: negative price");
    double fixed = p.bandwidth_price * p.bandwidth - p.cost_coeff * p.marginal_cost;
    return double(p.channel_count) * (expected_payment(p, price) + fixed);
}

PricingSolution optimal_price(const MarketParams& p, Interval price_range, int grid) {
    if (!(price_range.lo > 0.0) || !(price_range.hi > price_range.lo)) {
        throw DomainError("optimal_price: need 0 < lo < hi");
    }
    if (grid < 3) throw DomainError("optimal_price: grid must be >= 3");

    const double width = price_range.hi - price_range.lo;
    std::vector<double> value(grid);
    double best_pi = price_range.lo;
    double best_u = -std::numeric_limits<double>::infinity();
    int best_idx = 0;
    for (int i = 0; i < grid; ++i) {
        double pi = price_range.lo + width * double(i) / double(grid - 1);
        value[i] = satellite_utility(p, pi);
        // strict improvement only: ties stay at the smaller price
        if (value[i] > best_u) {
            best_u = value[i];
            best_pi = pi;
            best_idx = i;
        }
    }

    double lo = price_range.lo + width * double(std::max(0, best_idx - 1)) / double(grid - 1);
    double hi = price_range.lo + width * double(std::min(grid - 1, best_idx + 1)) / double(grid - 1);
    MaxResult refined = golden_section_max([&](double pi) { return satellite_utility(p, pi); },
                                           lo, hi, 1e-8 * width);
    if (refined.value > best_u) {
        best_u = refined.value;
        best_pi = refined.arg;
    }

    PricingSolution sol;
    sol.price = best_pi;
    sol.profit = best_u;
    sol.expected_payment = expected_payment(p, best_pi);
    return sol;
}

double trade_charge(const MarketParams& p, double price, double theta, double power) {
    return p.bandwidth_price * p.bandwidth + price * theta * power * p.entrant_gain;
}

std::optional<ledger::Transaction> build_trade(const MarketParams& p,
                                               const PricingSolution& solution, double theta,
                                               const std::string& buyer,
                                               const std::string& seller,
                                               const IdentityRegistry& ids,
                                               std::uint64_t timestamp) {
    BestResponse br = best_response_power(p, solution.price, theta);
    if (!participates(p, solution.price, theta, br)) {
        return std::nullopt;
    }
    double charge = trade_charge(p, solution.price, theta, br.power_w);
    std::uint64_t amount = charge_to_millicoin(charge);
    char memo[160];
    std::snprintf(memo, sizeof(memo), "B=%.12g;pi=%.12g;pc=%.12g;theta=%.12g", p.bandwidth,
                  solution.price, br.power_w, theta);
    return ledger::make_purchase(buyer, seller, amount, memo, timestamp, ids);
}

} // namespace spectrade::market
