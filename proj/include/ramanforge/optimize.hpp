#pragma once

// One-dimensional maximization for oscillatory objectives: a dense grid scan
// locates the best basin, golden-section search refines inside it.

#include <cmath>
#include <stdexcept>

namespace ramanforge::optimize {

struct Maximum {
    double x = 0.0;
    double value = 0.0;
};

// Golden-section search for a maximum of a unimodal f on [lo, hi]; stops when
// the bracket is narrower than tol.
template <class F>
Maximum golden_section_maximize(F&& f, double lo, double hi, double tol) {
    if (!(hi > lo) || !(tol > 0.0)) throw std::invalid_argument("golden_section_maximize: bad bracket");
    const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
    double a = lo, b = hi;
    double c = b - inv_phi * (b - a);
    double d = a + inv_phi * (b - a);
    double fc = f(c), fd = f(d);
    while (b - a > tol) {
        if (fc > fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = f(d);
        }
    }
    const double x = 0.5 * (a + b);
    return {x, f(x)};
}

// Scan lo, lo+step, ..., hi (hi always included), then refine around the best
// grid point with golden-section search to width tol. Endpoints are kept if
// they beat the refined interior point.
template <class F>
Maximum scan_and_refine(F&& f, double lo, double hi, double step, double tol) {
    if (!(hi >= lo) || !(step > 0.0)) throw std::invalid_argument("scan_and_refine: bad window");
    Maximum best{lo, f(lo)};
    const auto count = static_cast<long>(std::floor((hi - lo) / step));
    for (long i = 1; i <= count + 1; ++i) {
        const double x = (i <= count) ? lo + static_cast<double>(i) * step : hi;
        const double v = f(x);
        if (v > best.value) best = {x, v};
    }
    const double left = std::max(lo, best.x - step);
    const double right = std::min(hi, best.x + step);
    if (right - left > tol) {
        const Maximum refined = golden_section_maximize(f, left, right, tol);
        if (refined.value > best.value) best = refined;
    }
    return best;
}

}  // namespace ramanforge::optimize
