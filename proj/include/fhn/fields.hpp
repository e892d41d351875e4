#pragma once

#include <Eigen/Dense>
#include <complex>
#include <cstddef>
#include <stdexcept>
#include <string>

namespace fhn {

using Eigen::ArrayXcd;
using Eigen::ArrayXd;
using Eigen::Index;
using Cplx = std::complex<double>;

// Thrown when a field contains NaN/Inf; records where it was first seen.
struct NonFiniteFieldError : std::runtime_error {
    NonFiniteFieldError(std::string component_, Index index_)
        : std::runtime_error("non-finite value in component '" + component_ +
                             "' at index " + std::to_string(index_)),
          component(std::move(component_)),
          index(index_) {}
    std::string component;
    Index index;
};

// Sampled (u,v) pair on a periodic grid; both components share one length.
struct FieldPair {
    ArrayXd u, v;

    FieldPair() = default;
    FieldPair(ArrayXd u_, ArrayXd v_) : u(std::move(u_)), v(std::move(v_)) {
        if (u.size() != v.size())
            throw std::invalid_argument("FieldPair: component length mismatch");
    }
    static FieldPair zero(Index n) { return {ArrayXd::Zero(n), ArrayXd::Zero(n)}; }

    Index size() const { return u.size(); }

    FieldPair& operator+=(const FieldPair& o) { u += o.u; v += o.v; return *this; }
    FieldPair& operator-=(const FieldPair& o) { u -= o.u; v -= o.v; return *this; }
    FieldPair& operator*=(double a) { u *= a; v *= a; return *this; }

    friend FieldPair operator+(FieldPair a, const FieldPair& b) { return a += b; }
    friend FieldPair operator-(FieldPair a, const FieldPair& b) { return a -= b; }
    friend FieldPair operator*(double a, FieldPair f) { return f *= a; }
};

// Complex-valued counterpart used for Bloch eigenfunctions.
struct ComplexFieldPair {
    ArrayXcd u, v;

    ComplexFieldPair() = default;
    ComplexFieldPair(ArrayXcd u_, ArrayXcd v_) : u(std::move(u_)), v(std::move(v_)) {
        if (u.size() != v.size())
            throw std::invalid_argument("ComplexFieldPair: component length mismatch");
    }
    static ComplexFieldPair zero(Index n) {
        return {ArrayXcd::Zero(n), ArrayXcd::Zero(n)};
    }
    static ComplexFieldPair from_real(const FieldPair& f) {
        return {f.u.cast<Cplx>(), f.v.cast<Cplx>()};
    }

    Index size() const { return u.size(); }

    ComplexFieldPair& operator+=(const ComplexFieldPair& o) { u += o.u; v += o.v; return *this; }
    ComplexFieldPair& operator-=(const ComplexFieldPair& o) { u -= o.u; v -= o.v; return *this; }
    ComplexFieldPair& operator*=(Cplx a) { u *= a; v *= a; return *this; }

    friend ComplexFieldPair operator+(ComplexFieldPair a, const ComplexFieldPair& b) { return a += b; }
    friend ComplexFieldPair operator-(ComplexFieldPair a, const ComplexFieldPair& b) { return a -= b; }
    friend ComplexFieldPair operator*(Cplx a, ComplexFieldPair f) { return f *= a; }

    FieldPair real() const { return {u.real(), v.real()}; }
};

inline double sup_norm(const ArrayXd& f) { return f.size() ? f.abs().maxCoeff() : 0.0; }
inline double sup_norm(const ArrayXcd& f) { return f.size() ? f.abs().maxCoeff() : 0.0; }
inline double sup_norm(const FieldPair& f) { return std::max(sup_norm(f.u), sup_norm(f.v)); }
inline double sup_norm(const ComplexFieldPair& f) { return std::max(sup_norm(f.u), sup_norm(f.v)); }

// Throws NonFiniteFieldError at the first NaN/Inf entry.
void check_finite(const ArrayXd& f, const std::string& component);
void check_finite(const FieldPair& f);

// Periodic quadrature: the composite trapezoid rule on an equispaced periodic
// grid is the plain average. mean_inner(a, b) approximates (1/T) \int_0^T a* b.
inline double mean(const ArrayXd& f) { return f.size() ? f.mean() : 0.0; }
inline Cplx mean_inner(const ArrayXcd& a, const ArrayXcd& b) {
    return (a.conjugate() * b).mean();
}
inline double mean_inner(const ArrayXd& a, const ArrayXd& b) { return (a * b).mean(); }
inline Cplx mean_inner(const ComplexFieldPair& a, const ComplexFieldPair& b) {
    return (a.u.conjugate() * b.u + a.v.conjugate() * b.v).mean();
}
inline double mean_inner(const FieldPair& a, const FieldPair& b) {
    return (a.u * b.u + a.v * b.v).mean();
}

}  // namespace fhn
