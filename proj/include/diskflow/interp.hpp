#pragma once

// Piecewise-cubic Hermite interpolation on non-uniform 1D node sets, used
// in tensor fashion over the polar grid. Two slope choices:
//   limited   - PCHIP-style monotone slopes; reproduces constants exactly
//               and never leaves the local data range (transported fields),
//   unlimited - parabolic slopes, C1 with smooth derivatives (stream data).

#include <algorithm>
#include <cmath>

namespace diskflow::interp {

struct Cubic {
    double x0, h, f0, f1, m0, m1;

    double eval(double x) const {
        const double t = (x - x0) / h;
        const double t2 = t * t, t3 = t2 * t;
        return (2 * t3 - 3 * t2 + 1) * f0 + (t3 - 2 * t2 + t) * h * m0 +
               (-2 * t3 + 3 * t2) * f1 + (t3 - t2) * h * m1;
    }
    double deriv(double x) const {
        const double t = (x - x0) / h;
        const double t2 = t * t;
        return (6 * t2 - 6 * t) * (f0 - f1) / h + (3 * t2 - 4 * t + 1) * m0 +
               (3 * t2 - 2 * t) * m1;
    }
};

// Slope at window node w (0..3) from the three secants of a 4-node window.
inline double node_slope(const double* x, const double* f, int w, bool limited) {
    const double h0 = x[1] - x[0], h1 = x[2] - x[1], h2 = x[3] - x[2];
    const double d0 = (f[1] - f[0]) / h0;
    const double d1 = (f[2] - f[1]) / h1;
    const double d2 = (f[3] - f[2]) / h2;

    auto edge = [&](double ha, double hb, double da, double db) {
        double m = ((2 * ha + hb) * da - ha * db) / (ha + hb);
        if (limited) {
            if (m * da <= 0.0) m = 0.0;
            else if (std::abs(m) > 3 * std::abs(da)) m = 3 * da;
        }
        return m;
    };
    auto interior = [&](double ha, double hb, double da, double db) {
        if (limited) {
            if (da * db <= 0.0) return 0.0;
            const double w1 = 2 * hb + ha, w2 = hb + 2 * ha;
            return (w1 + w2) / (w1 / da + w2 / db);
        }
        return (hb * da + ha * db) / (ha + hb);
    };

    switch (w) {
        case 0: return edge(h0, h1, d0, d1);
        case 1: return interior(h0, h1, d0, d1);
        case 2: return interior(h1, h2, d1, d2);
        default: return edge(h2, h1, d2, d1);
    }
}

// Cubic for the window segment [seg, seg+1], seg in {0,1,2}.
inline Cubic window_cubic(const double* x, const double* f, int seg, bool limited) {
    return {x[seg], x[seg + 1] - x[seg], f[seg], f[seg + 1],
            node_slope(x, f, seg, limited), node_slope(x, f, seg + 1, limited)};
}

// 4-node window start for a cell index within n nodes; the cell lands at
// window segment cell - start.
inline int window_start(int cell, int n) {
    return std::clamp(cell - 1, 0, n - 4);
}

} // namespace diskflow::interp
