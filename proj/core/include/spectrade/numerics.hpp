#pragma once

#include <cstdint>
#include <functional>

namespace spectrade {

// Adaptive Simpson quadrature with absolute tolerance. Recursion is capped;
// the cap is generous enough that hitting it means the integrand is broken.
double adaptive_simpson(const std::function<double(double)>& f, double lo, double hi,
                        double abs_tol, int max_depth = 48);

struct MaxResult {
    double arg;
    double value;
};

// Golden-section search for the maximum of a unimodal function on [lo, hi].
// Stops once the bracket width falls below width_tol.
MaxResult golden_section_max(const std::function<double(double)>& f, double lo,
                             double hi, double width_tol);

// Round to nearest integer, ties to even. Input must be finite.
double round_half_even(double v);

// Coins -> integer milli-coins at the settlement boundary (round half even,
// clamped at zero).
std::uint64_t charge_to_millicoin(double coins);

} // namespace spectrade
