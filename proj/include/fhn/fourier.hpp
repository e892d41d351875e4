#pragma once

#include "fhn/fields.hpp"

namespace fhn {

// Forward DFT, c_q = sum_j f_j exp(-2 pi i q j / N); inverse carries the 1/N.
ArrayXcd dft(const ArrayXcd& f);
ArrayXcd idft(const ArrayXcd& c);
ArrayXcd dft(const ArrayXd& f);
ArrayXd idft_real(const ArrayXcd& c);

// Signed mode index of bin q in an N-point transform (Nyquist stays +N/2).
inline int signed_mode(int q, int n) { return q <= n / 2 ? q : q - n; }

// d^order/dx^order of periodic samples on a domain of the given length.
// Odd orders zero the Nyquist bin so real input stays real.
ArrayXd spectral_derivative(const ArrayXd& f, double length, int order = 1);
ArrayXcd spectral_derivative(const ArrayXcd& f, double length, int order = 1);

// Exact evaluation of the trigonometric interpolant at arbitrary points.
// O(N) per point; use PeriodicInterpolant for bulk repeated sampling.
double trig_interpolate(const ArrayXd& f, double length, double point);
ArrayXd trig_interpolate(const ArrayXd& f, double length, const ArrayXd& points);

// Band-limited upsampling by an integer factor (zero padding in frequency).
ArrayXd upsample(const ArrayXd& f, int factor);

// Fast off-grid sampling of a periodic signal: band-limited refinement of the
// sample table once, then local 4-point cubic interpolation per query.
class PeriodicInterpolant {
  public:
    PeriodicInterpolant() = default;
    PeriodicInterpolant(const ArrayXd& samples, double length, int refine = 8);

    double operator()(double x) const;
    ArrayXd operator()(const ArrayXd& x) const;

  private:
    ArrayXd table_;
    double length_ = 1.0;
    double h_ = 1.0;
};

}  // namespace fhn
