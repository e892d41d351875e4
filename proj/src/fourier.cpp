#include "fhn/fourier.hpp"

#include <fftw3.h>

#include <cmath>
#include <cstring>
#include <map>
#include <stdexcept>

namespace fhn {

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;

// Cached FFTW plans per transform size. Plans are created with FFTW_ESTIMATE
// so planning is deterministic; data moves through plan-owned buffers.
class FftEngine {
  public:
    static FftEngine& instance() {
        static FftEngine engine;
        return engine;
    }

    ArrayXcd execute(const ArrayXcd& in, int sign) {
        const int n = static_cast<int>(in.size());
        if (n == 0) return in;
        Slot& slot = acquire(n);
        std::memcpy(slot.buf_in, in.data(), sizeof(Cplx) * n);
        fftw_execute(sign == FFTW_FORWARD ? slot.fwd : slot.bwd);
        ArrayXcd out(n);
        std::memcpy(out.data(), slot.buf_out, sizeof(Cplx) * n);
        return out;
    }

  private:
    struct Slot {
        fftw_complex* buf_in = nullptr;
        fftw_complex* buf_out = nullptr;
        fftw_plan fwd = nullptr;
        fftw_plan bwd = nullptr;
    };

    Slot& acquire(int n) {
        auto it = slots_.find(n);
        if (it != slots_.end()) return it->second;
        Slot slot;
        slot.buf_in = fftw_alloc_complex(n);
        slot.buf_out = fftw_alloc_complex(n);
        slot.fwd = fftw_plan_dft_1d(n, slot.buf_in, slot.buf_out, FFTW_FORWARD, FFTW_ESTIMATE);
        slot.bwd = fftw_plan_dft_1d(n, slot.buf_in, slot.buf_out, FFTW_BACKWARD, FFTW_ESTIMATE);
        if (!slot.fwd || !slot.bwd) throw std::runtime_error("FFTW plan creation failed");
        return slots_.emplace(n, slot).first->second;
    }

    std::map<int, Slot> slots_;
};

}  // namespace

ArrayXcd dft(const ArrayXcd& f) { return FftEngine::instance().execute(f, FFTW_FORWARD); }

ArrayXcd idft(const ArrayXcd& c) {
    ArrayXcd out = FftEngine::instance().execute(c, FFTW_BACKWARD);
    return out / static_cast<double>(c.size() == 0 ? 1 : c.size());
}

ArrayXcd dft(const ArrayXd& f) { return dft(ArrayXcd(f.cast<Cplx>())); }

ArrayXd idft_real(const ArrayXcd& c) { return idft(c).real(); }

namespace {

ArrayXcd derivative_coeffs(const ArrayXcd& c, double length, int order) {
    const int n = static_cast<int>(c.size());
    ArrayXcd out(n);
    for (int q = 0; q < n; ++q) {
        int m = signed_mode(q, n);
        if (order % 2 == 1 && 2 * q == n) m = 0;  // odd derivative of the Nyquist mode
        const Cplx ik(0.0, kTwoPi * m / length);
        Cplx factor = 1.0;
        for (int p = 0; p < order; ++p) factor *= ik;
        out[q] = factor * c[q];
    }
    return out;
}

}  // namespace

ArrayXd spectral_derivative(const ArrayXd& f, double length, int order) {
    if (order == 0) return f;
    return idft_real(derivative_coeffs(dft(f), length, order));
}

ArrayXcd spectral_derivative(const ArrayXcd& f, double length, int order) {
    if (order == 0) return f;
    return idft(derivative_coeffs(dft(f), length, order));
}

double trig_interpolate(const ArrayXd& f, double length, double point) {
    const ArrayXd pts = ArrayXd::Constant(1, point);
    return trig_interpolate(f, length, pts)[0];
}

ArrayXd trig_interpolate(const ArrayXd& f, double length, const ArrayXd& points) {
    const int n = static_cast<int>(f.size());
    if (n == 0) throw std::invalid_argument("trig_interpolate: empty input");
    const ArrayXcd c = dft(f);
    ArrayXd out(points.size());
    for (Index j = 0; j < points.size(); ++j) {
        const double x = points[j];
        double acc = c[0].real();
        for (int q = 1; q < n / 2; ++q) {
            const double th = kTwoPi * q * x / length;
            acc += 2.0 * (c[q].real() * std::cos(th) - c[q].imag() * std::sin(th));
        }
        if (n % 2 == 0)
            acc += c[n / 2].real() * std::cos(kTwoPi * (n / 2) * x / length);
        out[j] = acc / n;
    }
    return out;
}

ArrayXd upsample(const ArrayXd& f, int factor) {
    if (factor < 1) throw std::invalid_argument("upsample: factor must be >= 1");
    if (factor == 1) return f;
    const int n = static_cast<int>(f.size());
    const int m = n * factor;
    const ArrayXcd c = dft(f);
    ArrayXcd padded = ArrayXcd::Zero(m);
    for (int q = 0; q < n / 2; ++q) padded[q] = c[q];
    for (int q = n / 2 + 1; q < n; ++q) padded[m - n + q] = c[q];
    if (n % 2 == 0) {
        // Split the Nyquist bin symmetrically so the refined signal stays real.
        padded[n / 2] = 0.5 * c[n / 2];
        padded[m - n / 2] = 0.5 * c[n / 2];
    }
    return idft_real(padded) * factor;
}

PeriodicInterpolant::PeriodicInterpolant(const ArrayXd& samples, double length, int refine)
    : table_(upsample(samples, refine)), length_(length), h_(length / table_.size()) {
    if (samples.size() < 4) throw std::invalid_argument("PeriodicInterpolant: too few samples");
}

double PeriodicInterpolant::operator()(double x) const {
    const int m = static_cast<int>(table_.size());
    double s = std::fmod(x, length_);
    if (s < 0.0) s += length_;
    double cell;
    const double t = std::modf(s / h_, &cell);
    const int j = static_cast<int>(cell) % m;
    // 4-point cubic Lagrange on nodes j-1, j, j+1, j+2 (t in [0,1) past node j).
    const double fm1 = table_[(j - 1 + m) % m];
    const double f0 = table_[j];
    const double f1 = table_[(j + 1) % m];
    const double f2 = table_[(j + 2) % m];
    const double a = -t * (t - 1.0) * (t - 2.0) / 6.0;
    const double b = (t + 1.0) * (t - 1.0) * (t - 2.0) / 2.0;
    const double cfa = -(t + 1.0) * t * (t - 2.0) / 2.0;
    const double d = (t + 1.0) * t * (t - 1.0) / 6.0;
    return a * fm1 + b * f0 + cfa * f1 + d * f2;
}

ArrayXd PeriodicInterpolant::operator()(const ArrayXd& x) const {
    ArrayXd out(x.size());
    for (Index i = 0; i < x.size(); ++i) out[i] = (*this)(x[i]);
    return out;
}

}  // namespace fhn
