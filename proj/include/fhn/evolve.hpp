#pragma once

#include <functional>

#include "fhn/fields.hpp"
#include "fhn/grid.hpp"
#include "fhn/params.hpp"

namespace fhn {

// Constant-coefficient implicit symbols per DFT bin. The stiff part of the
// co-moving FHN operator (diffusion, frame advection, linear v-damping) is
// diagonal in Fourier space; everything else steps explicitly.
struct ImexOperator {
    ArrayXcd symbol_u;  // -k^2 + i c0 k
    ArrayXcd symbol_v;  // i c0 k - eps*gamma
};

ImexOperator comoving_symbols(const Grid& grid, const FhnParams& p, double c0);

// Semi-implicit two-step scheme: Crank-Nicolson on the constant-coefficient
// symbols, Adams-Bashforth-2 on the supplied explicit right-hand side
// (semi-implicit Euler bootstrap on the first step).
class ImexStepper {
  public:
    using Rhs = std::function<FieldPair(const FieldPair&, double)>;

    ImexStepper(Grid grid, ImexOperator op, Rhs explicit_rhs, double dt);

    void reset(const FieldPair& state, double t0 = 0.0);
    void step();
    // Integrates forward by whole steps; t_end should be a step multiple.
    void advance_to(double t_end);

    const FieldPair& state() const { return state_; }
    double time() const { return t_; }
    double dt() const { return dt_; }

  private:
    Grid grid_;
    ImexOperator op_;
    Rhs rhs_;
    double dt_;
    double t_ = 0.0;
    bool have_prev_ = false;
    FieldPair state_;        // physical space, kept in sync with spectral state
    ArrayXcd hat_u_, hat_v_;
    ArrayXcd prev_nu_, prev_nv_;

    void sync_physical();
};

// Explicit right-hand side of the full nonlinear system matching
// comoving_symbols: reaction terms minus what the symbols already carry.
ImexStepper::Rhs nonlinear_rhs(const FhnParams& p, double v_offset);

}  // namespace fhn
