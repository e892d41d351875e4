#include "fhn/fields.hpp"

#include <cmath>

namespace fhn {

void check_finite(const ArrayXd& f, const std::string& component) {
    for (Index i = 0; i < f.size(); ++i)
        if (!std::isfinite(f[i])) throw NonFiniteFieldError(component, i);
}

void check_finite(const FieldPair& f) {
    check_finite(f.u, "u");
    check_finite(f.v, "v");
}

}  // namespace fhn
