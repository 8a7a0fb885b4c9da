#pragma once

#include <cmath>

namespace gdsq {

// Forward-mode AD scalar: value plus one derivative slot. Seeding d = 1 on one
// input coordinate and evaluating a function yields the partial derivative with
// respect to that coordinate, exact to rounding.
struct Dual {
    double v = 0.0;
    double d = 0.0;

    constexpr Dual() = default;
    constexpr Dual(double value) : v(value) {}
    constexpr Dual(double value, double deriv) : v(value), d(deriv) {}
};

constexpr Dual operator+(Dual a, Dual b) { return {a.v + b.v, a.d + b.d}; }
constexpr Dual operator-(Dual a, Dual b) { return {a.v - b.v, a.d - b.d}; }
constexpr Dual operator-(Dual a) { return {-a.v, -a.d}; }
constexpr Dual operator*(Dual a, Dual b) { return {a.v * b.v, a.d * b.v + a.v * b.d}; }
constexpr Dual operator/(Dual a, Dual b) {
    return {a.v / b.v, (a.d * b.v - a.v * b.d) / (b.v * b.v)};
}

constexpr Dual& operator+=(Dual& a, Dual b) { a = a + b; return a; }
constexpr Dual& operator-=(Dual& a, Dual b) { a = a - b; return a; }
constexpr Dual& operator*=(Dual& a, Dual b) { a = a * b; return a; }

constexpr bool operator<(Dual a, Dual b) { return a.v < b.v; }
constexpr bool operator>(Dual a, Dual b) { return a.v > b.v; }

inline Dual sin(Dual x) { return {std::sin(x.v), std::cos(x.v) * x.d}; }
inline Dual cos(Dual x) { return {std::cos(x.v), -std::sin(x.v) * x.d}; }
inline Dual exp(Dual x) { double e = std::exp(x.v); return {e, e * x.d}; }
inline Dual sqrt(Dual x) { double s = std::sqrt(x.v); return {s, x.d / (2.0 * s)}; }

// u^c with c constant: power rule, valid for negative u and integer exponents.
inline Dual pow(Dual u, double c) {
    return {std::pow(u.v, c), c * std::pow(u.v, c - 1.0) * u.d};
}

// General u^w. When the exponent carries no derivative the power rule applies;
// otherwise fall back to exp(w log u), which needs u > 0.
inline Dual pow(Dual u, Dual w) {
    if (w.d == 0.0) return pow(u, w.v);
    double p = std::pow(u.v, w.v);
    return {p, p * (w.d * std::log(u.v) + w.v * u.d / u.v)};
}

}  // namespace gdsq
