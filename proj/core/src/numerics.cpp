#include "spectrade/numerics.hpp"

#include <cmath>

#include "spectrade/errors.hpp"

namespace spectrade {

namespace {

double simpson_slice(const std::function<double(double)>& f, double a, double b,
                     double fa, double fm, double fb) {
    (void)f;
    return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
}

double simpson_recurse(const std::function<double(double)>& f, double a, double b,
                       double fa, double fm, double fb, double whole, double tol,
                       int depth) {
    double m = 0.5 * (a + b);
    double lm = 0.5 * (a + m);
    double rm = 0.5 * (m + b);
    double flm = f(lm);
    double frm = f(rm);
    double left = simpson_slice(f, a, m, fa, flm, fm);
    double right = simpson_slice(f, m, b, fm, frm, fb);
    double delta = left + right - whole;
    if (depth <= 0 || std::abs(delta) <= 15.0 * tol) {
        return left + right + delta / 15.0;
    }
    return simpson_recurse(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
           simpson_recurse(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

} // namespace

double adaptive_simpson(const std::function<double(double)>& f, double lo, double hi,
                        double abs_tol, int max_depth) {
    if (!(hi >= lo)) throw DomainError("adaptive_simpson: inverted interval");
    if (lo == hi) return 0.0;
    double m = 0.5 * (lo + hi);
    double fa = f(lo);
    double fm = f(m);
    double fb = f(hi);
    double whole = simpson_slice(f, lo, hi, fa, fm, fb);
    return simpson_recurse(f, lo, hi, fa, fm, fb, whole, abs_tol, max_depth);
}

MaxResult golden_section_max(const std::function<double(double)>& f, double lo,
                             double hi, double width_tol) {
    if (!(hi >= lo)) throw DomainError("golden_section_max: inverted interval");
    const double inv_phi = 0.6180339887498948482;
    double a = lo, b = hi;
    double x1 = b - inv_phi * (b - a);
    double x2 = a + inv_phi * (b - a);
    double f1 = f(x1);
    double f2 = f(x2);
    while (b - a > width_tol) {
        if (f1 >= f2) {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - inv_phi * (b - a);
            f1 = f(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + inv_phi * (b - a);
            f2 = f(x2);
        }
    }
    double xm = 0.5 * (a + b);
    double fm = f(xm);
    MaxResult best{xm, fm};
    if (f1 > best.value) best = {x1, f1};
    if (f2 > best.value) best = {x2, f2};
    return best;
}

double round_half_even(double v) {
    double floor_v = std::floor(v);
    double frac = v - floor_v;
    if (frac > 0.5) return floor_v + 1.0;
    if (frac < 0.5) return floor_v;
    // exact tie
    return (std::fmod(floor_v, 2.0) == 0.0) ? floor_v : floor_v + 1.0;
}

std::uint64_t charge_to_millicoin(double coins) {
    if (!std::isfinite(coins)) throw DomainError("charge_to_millicoin: non-finite charge");
    double milli = round_half_even(coins * 1000.0);
    if (milli <= 0.0) return 0;
    return std::uint64_t(milli);
}

} // namespace spectrade
