#pragma once

// Order-2 jets (value, gradient, Hessian of a scalar field with respect to
// its inputs) and a forward-mode dual scalar. Differential operators are
// written once as generic functors over the jet's scalar type: instantiated
// with double they evaluate the operator, instantiated with Dual they carry
// one directional parameter-derivative through it.

#include <array>
#include <cmath>
#include <cstdint>
#include <stdexcept>

namespace anagram {

/// First-order dual number a + b·eps with eps² = 0.
struct Dual {
    double a = 0.0;  ///< primal value
    double b = 0.0;  ///< tangent

    Dual() = default;
    Dual(double value) : a(value) {}
    Dual(double value, double tangent) : a(value), b(tangent) {}

    Dual& operator+=(const Dual& o) { a += o.a; b += o.b; return *this; }
    Dual& operator-=(const Dual& o) { a -= o.a; b -= o.b; return *this; }
    Dual operator-() const { return {-a, -b}; }
};

inline Dual operator+(Dual x, const Dual& y) { x += y; return x; }
inline Dual operator-(Dual x, const Dual& y) { x -= y; return x; }
inline Dual operator*(const Dual& x, const Dual& y) { return {x.a * y.a, x.a * y.b + x.b * y.a}; }
inline Dual operator*(double s, const Dual& x) { return {s * x.a, s * x.b}; }
inline Dual operator*(const Dual& x, double s) { return {s * x.a, s * x.b}; }
inline Dual operator+(double s, const Dual& x) { return {s + x.a, x.b}; }
inline Dual operator+(const Dual& x, double s) { return {s + x.a, x.b}; }
inline Dual operator-(double s, const Dual& x) { return {s - x.a, -x.b}; }
inline Dual operator-(const Dual& x, double s) { return {x.a - s, x.b}; }
inline Dual operator/(const Dual& x, double s) { return {x.a / s, x.b / s}; }

inline Dual sin(const Dual& x) { return {std::sin(x.a), std::cos(x.a) * x.b}; }
inline Dual cos(const Dual& x) { return {std::cos(x.a), -std::sin(x.a) * x.b}; }
inline Dual tanh(const Dual& x) { double t = std::tanh(x.a); return {t, (1.0 - t * t) * x.b}; }
inline Dual exp(const Dual& x) { double e = std::exp(x.a); return {e, e * x.b}; }

/// Largest supported input dimension for jets (the benchmark set tops out at 5).
inline constexpr int kMaxJetDim = 5;

/// Order-2 jet of a scalar field u at a point: u, ∇u, ∇²u. The scalar type T
/// is double for plain evaluation and Dual when a parameter-tangent rides
/// along every component.
template <typename T>
struct Jet {
    int dim = 0;
    T value{};
    std::array<T, kMaxJetDim> grad{};
    std::array<T, kMaxJetDim * kMaxJetDim> hess{};

    /// First derivative with respect to input axis i.
    const T& d(int i) const {
        if (i < 0 || i >= dim) throw std::out_of_range("Jet: derivative axis out of range");
        return grad[static_cast<std::size_t>(i)];
    }
    /// Second derivative with respect to axes (i, j).
    const T& d2(int i, int j) const {
        if (i < 0 || i >= dim || j < 0 || j >= dim)
            throw std::out_of_range("Jet: second-derivative axis out of range");
        return hess[static_cast<std::size_t>(i * dim + j)];
    }
};

using Jet2 = Jet<double>;
using JetDual = Jet<Dual>;

/// Hidden-layer activations. Smooth to all orders; sine is offered because
/// high-precision collocation residuals need well-behaved high derivatives.
enum class Activation : std::uint8_t { Tanh, Sine };

inline const char* to_string(Activation a) {
    return a == Activation::Tanh ? "tanh" : "sine";
}

/// Value and first three derivatives of the activation at v.
struct ActivationJet {
    double s0, s1, s2, s3;
};

inline ActivationJet activation_jet(Activation act, double v) {
    if (act == Activation::Tanh) {
        double t = std::tanh(v);
        double d1 = 1.0 - t * t;
        double d2 = -2.0 * t * d1;
        double d3 = -2.0 * (d1 * d1 + t * d2);
        return {t, d1, d2, d3};
    }
    double s = std::sin(v), c = std::cos(v);
    return {s, c, -s, -c};
}

}  // namespace anagram
