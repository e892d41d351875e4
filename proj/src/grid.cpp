#include "fhn/grid.hpp"

#include <cmath>
#include <stdexcept>

namespace fhn {

void Grid::validate() const {
    if (n < 8) throw std::invalid_argument("Grid: n must be at least 8");
    if (n % 2 != 0) throw std::invalid_argument("Grid: n must be even");
    if (cells < 1) throw std::invalid_argument("Grid: cells must be at least 1");
    if (!(period > 0.0) || !std::isfinite(period))
        throw std::invalid_argument("Grid: period must be positive and finite");
}

ArrayXd Grid::nodes() const {
    const int m = total();
    const double h = spacing();
    ArrayXd z(m);
    for (int j = 0; j < m; ++j) z[j] = h * j;
    return z;
}

}  // namespace fhn
