#pragma once

#include "fhn/fields.hpp"
#include "fhn/params.hpp"

namespace fhn {

// Cubic nonlinearity f(u) = u(1-u)(u-mu) and its u-derivatives.
inline double cubic(double u, double mu) { return u * (1.0 - u) * (u - mu); }
inline double cubic_d1(double u, double mu) {
    return -3.0 * u * u + 2.0 * (1.0 + mu) * u - mu;
}
inline double cubic_d2(double u, double mu) { return -6.0 * u + 2.0 * (1.0 + mu); }

// F(u,v) = (u(1-u)(u-mu) - v, eps (u - gamma v - v_offset)). The standard
// formulation has v_offset = mu (rest state (mu,0)); the rescaled excitable
// formulation produced by rescale_excitable has v_offset = 0 (rest state at
// the origin). Rejects non-finite input with the index of the first
// offending entry.
FieldPair evaluate_reaction(const FieldPair& state, const FhnParams& p, double v_offset);
inline FieldPair evaluate_reaction(const FieldPair& state, const FhnParams& p) {
    return evaluate_reaction(state, p, p.mu);
}

// Pointwise Jacobian of F. Only dF1/du varies with the state; the remaining
// entries are parameter constants.
struct ReactionJacobian {
    ArrayXd f_u;                    // d/du of the cubic at each node
    double j12 = 0.0, j21 = 0.0, j22 = 0.0;

    FieldPair apply(const FieldPair& w) const {
        return {f_u * w.u + j12 * w.v, j21 * w.u + j22 * w.v};
    }
    ComplexFieldPair apply(const ComplexFieldPair& w) const {
        return {f_u.cast<Cplx>() * w.u + j12 * w.v, j21 * w.u + j22 * w.v};
    }
};
ReactionJacobian reaction_jacobian(const FieldPair& state, const FhnParams& p);

// Symmetric bilinear form F''(state): only the first component is nonzero
// because F2 is linear. F''(a,b) = (f''(u) a_u b_u, 0).
struct ReactionHessian {
    ArrayXd f_uu;

    FieldPair apply(const FieldPair& a, const FieldPair& b) const {
        return {f_uu * a.u * b.u, ArrayXd::Zero(f_uu.size())};
    }
};
ReactionHessian reaction_hessian(const FieldPair& state, const FhnParams& p);

}  // namespace fhn
