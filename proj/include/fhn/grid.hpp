#pragma once

#include "fhn/fields.hpp"

namespace fhn {

// Periodic collocation grid: `cells` copies of one cell of length `period`,
// n points per cell. Nodes are zeta_j = j * spacing on [0, cells*period).
struct Grid {
    int n = 64;
    int cells = 1;
    double period = 1.0;

    void validate() const;  // n >= 8 and even, cells >= 1, period > 0

    int total() const { return n * cells; }
    double spacing() const { return period / n; }
    double length() const { return cells * period; }
    Grid cell() const { return {n, 1, period}; }

    ArrayXd nodes() const;
};

}  // namespace fhn
