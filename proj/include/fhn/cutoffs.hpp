#pragma once

#include <cmath>

namespace fhn {

// C-infinity step: 0 for s <= 0, 1 for s >= 1, strictly monotone between.
inline double smooth_step(double s) {
    if (s <= 0.0) return 0.0;
    if (s >= 1.0) return 1.0;
    const double a = std::exp(-1.0 / s);
    const double b = std::exp(-1.0 / (1.0 - s));
    return a / (a + b);
}

// Temporal cutoff: identically 0 on [0,1], identically 1 on [2,infinity).
inline double chi_cutoff(double t) { return smooth_step(t - 1.0); }

// d/dt of chi_cutoff (closed form of the smooth step derivative).
inline double chi_cutoff_deriv(double t) {
    const double s = t - 1.0;
    if (s <= 0.0 || s >= 1.0) return 0.0;
    const double a = std::exp(-1.0 / s);
    const double b = std::exp(-1.0 / (1.0 - s));
    const double ap = a / (s * s);
    const double bp = -b / ((1.0 - s) * (1.0 - s));
    return (ap * (a + b) - a * (ap + bp)) / ((a + b) * (a + b));
}

// Frequency bump: identically 1 on [-xi0/2, xi0/2], supported in (-xi0, xi0).
inline double rho_bump(double xi, double xi0) {
    return smooth_step((xi0 - std::abs(xi)) / (0.5 * xi0));
}

}  // namespace fhn
