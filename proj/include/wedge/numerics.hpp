// numerics.hpp -- small self-contained numerical kernels used by the solver:
// an embedded Dormand-Prince 5(4) step, bracketed root finding, two
// independent quadrature rules and order-stable summation.
//
// These are deliberately minimal; the solver layers own all control flow
// (event detection, guards, tolerances) so nothing here keeps state.
#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <span>
#include <vector>

#include "wedge/errors.hpp"

namespace wedge::num {

// ---------------------------------------------------------------------------
// Dormand-Prince 5(4) embedded pair, fixed 2-dimensional state.
// ---------------------------------------------------------------------------

using State2 = std::array<double, 2>;
using Rhs2 = std::function<State2(double, const State2&)>;

struct StepResult {
    State2 y;
    double err;  // max component of |y5 - y4| scaled by (atol + rtol*|y|)
};

// One trial step of size h from (x, y). err <= 1 means acceptable.
inline StepResult dopri5_step(const Rhs2& f, double x, const State2& y, double h,
                              double rtol, double atol) {
    static constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
    static constexpr double a21 = 1.0 / 5;
    static constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
    static constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
    static constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187,
                            a53 = 64448.0 / 6561, a54 = -212.0 / 729;
    static constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                            a64 = 49.0 / 176, a65 = -5103.0 / 18656;
    static constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                            b5 = -2187.0 / 6784, b6 = 11.0 / 84;
    // 4th order weights (FSAL row)
    static constexpr double e1 = 5179.0 / 57600, e3 = 7571.0 / 16695, e4 = 393.0 / 640,
                            e5 = -92097.0 / 339200, e6 = 187.0 / 2100, e7 = 1.0 / 40;

    auto axpy = [](const State2& y0, double hh, std::initializer_list<std::pair<double, const State2*>> terms) {
        State2 r = y0;
        for (auto& [a, k] : terms) {
            r[0] += hh * a * (*k)[0];
            r[1] += hh * a * (*k)[1];
        }
        return r;
    };

    const State2 k1 = f(x, y);
    const State2 k2 = f(x + c2 * h, axpy(y, h, {{a21, &k1}}));
    const State2 k3 = f(x + c3 * h, axpy(y, h, {{a31, &k1}, {a32, &k2}}));
    const State2 k4 = f(x + c4 * h, axpy(y, h, {{a41, &k1}, {a42, &k2}, {a43, &k3}}));
    const State2 k5 = f(x + c5 * h, axpy(y, h, {{a51, &k1}, {a52, &k2}, {a53, &k3}, {a54, &k4}}));
    const State2 k6 = f(x + h, axpy(y, h, {{a61, &k1}, {a62, &k2}, {a63, &k3}, {a64, &k4}, {a65, &k5}}));
    State2 y5 = axpy(y, h, {{b1, &k1}, {b3, &k3}, {b4, &k4}, {b5, &k5}, {b6, &k6}});
    const State2 k7 = f(x + h, y5);
    State2 y4 = axpy(y, h, {{e1, &k1}, {e3, &k3}, {e4, &k4}, {e5, &k5}, {e6, &k6}, {e7, &k7}});

    double err = 0.0;
    for (int i = 0; i < 2; ++i) {
        const double sc = atol + rtol * std::max(std::abs(y[i]), std::abs(y5[i]));
        err = std::max(err, std::abs(y5[i] - y4[i]) / sc);
    }
    return {y5, err};
}

// Integrate from (x0,y0) to x1 with adaptive steps; calls `on_sample` at every
// accepted point (including the end, excluding the start). h_max caps the step
// so downstream interpolation of the samples stays accurate.
template <typename OnSample>
inline State2 dopri5_integrate(const Rhs2& f, double x0, State2 y, double x1, double rtol,
                               double atol, double h_max, OnSample&& on_sample) {
    const double dir = (x1 >= x0) ? 1.0 : -1.0;
    double x = x0;
    double h = dir * std::min(h_max, std::max(1e-10, 1e-3 * std::abs(x1 - x0)));
    int rejects_in_a_row = 0;
    while (dir * (x1 - x) > 0) {
        if (dir * (x + h - x1) > 0) h = x1 - x;
        StepResult s = dopri5_step(f, x, y, h, rtol, atol);
        if (!std::isfinite(s.err) || !std::isfinite(s.y[0]) || !std::isfinite(s.y[1])) {
            h *= 0.25;
            if (std::abs(h) < 1e-15 * std::max(1.0, std::abs(x)))
                throw NumericalFailure("dopri5: step size underflow on non-finite state");
            continue;
        }
        if (s.err <= 1.0) {
            x += h;
            y = s.y;
            on_sample(x, y);
            rejects_in_a_row = 0;
        } else if (++rejects_in_a_row > 60) {
            throw NumericalFailure("dopri5: persistent step rejection");
        }
        const double fac = std::clamp(0.9 * std::pow(std::max(s.err, 1e-10), -0.2), 0.2, 5.0);
        h = dir * std::min(std::abs(h) * fac, h_max);
        if (std::abs(h) < 1e-16 * std::max(1.0, std::abs(x)))
            throw NumericalFailure("dopri5: step size underflow");
    }
    return y;
}

// ---------------------------------------------------------------------------
// Cubic Hermite interpolation over a sampled monotone grid.
// ---------------------------------------------------------------------------

// Locate the interval [x[i], x[i+1]] containing xq (x strictly increasing).
inline std::size_t bracket_index(std::span<const double> x, double xq) {
    if (xq <= x.front()) return 0;
    if (xq >= x[x.size() - 2]) return x.size() - 2;
    std::size_t lo = 0, hi = x.size() - 1;
    while (hi - lo > 1) {
        const std::size_t mid = (lo + hi) / 2;
        (x[mid] <= xq ? lo : hi) = mid;
    }
    return lo;
}

inline double hermite_value(double x0, double x1, double y0, double y1, double d0, double d1,
                            double xq) {
    const double h = x1 - x0;
    const double t = (xq - x0) / h;
    const double t2 = t * t, t3 = t2 * t;
    return (2 * t3 - 3 * t2 + 1) * y0 + (t3 - 2 * t2 + t) * h * d0 +
           (-2 * t3 + 3 * t2) * y1 + (t3 - t2) * h * d1;
}

inline double hermite_deriv(double x0, double x1, double y0, double y1, double d0, double d1,
                            double xq) {
    const double h = x1 - x0;
    const double t = (xq - x0) / h;
    const double t2 = t * t;
    return ((6 * t2 - 6 * t) * y0 + (3 * t2 - 4 * t + 1) * h * d0 + (-6 * t2 + 6 * t) * y1 +
            (3 * t2 - 2 * t) * h * d1) /
           h;
}

// ---------------------------------------------------------------------------
// Root finding: plain bisection on a bracketing interval.
// ---------------------------------------------------------------------------

template <typename F>
inline double bisect(F&& f, double lo, double hi, double flo, double fhi, int max_iter,
                     double xtol) {
    if (flo == 0.0) return lo;
    if (fhi == 0.0) return hi;
    if ((flo > 0) == (fhi > 0))
        throw NumericalFailure("bisect: endpoints do not bracket a root");
    for (int i = 0; i < max_iter && (hi - lo) > xtol; ++i) {
        const double mid = 0.5 * (lo + hi);
        const double fm = f(mid);
        if (fm == 0.0) return mid;
        if ((fm > 0) == (flo > 0)) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

// ---------------------------------------------------------------------------
// Quadrature: two independent schemes (adaptive Simpson and composite
// Gauss-Legendre). Deliberately different algorithms so one can serve as an
// oracle for the other.
// ---------------------------------------------------------------------------

namespace detail {
template <typename F>
double simpson_rec(F& f, double a, double m, double b, double fa, double fm, double fb,
                   double whole, double tol, int depth) {
    const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    const double flm = f(lm), frm = f(rm);
    const double left = (m - a) / 6.0 * (fa + 4 * flm + fm);
    const double right = (b - m) / 6.0 * (fm + 4 * frm + fb);
    const double delta = left + right - whole;
    if (depth <= 0) throw NumericalFailure("adaptive Simpson: max depth reached");
    if (std::abs(delta) <= 15.0 * tol) return left + right + delta / 15.0;
    return simpson_rec(f, a, lm, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
           simpson_rec(f, m, rm, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}
}  // namespace detail

template <typename F>
inline double adaptive_simpson(F&& f, double a, double b, double tol, int max_depth = 50) {
    const double m = 0.5 * (a + b);
    const double fa = f(a), fm = f(m), fb = f(b);
    const double whole = (b - a) / 6.0 * (fa + 4 * fm + fb);
    return detail::simpson_rec(f, a, m, b, fa, fm, fb, whole, tol, max_depth);
}

// 20-point Gauss-Legendre nodes/weights on [-1,1] (positive half; symmetric).
inline constexpr std::array<double, 10> kGL20Nodes = {
    0.0765265211334973, 0.2277858511416451, 0.3737060887154195, 0.5108670019508271,
    0.6360536807265150, 0.7463319064601508, 0.8391169718222188, 0.9122344282513259,
    0.9639719272779138, 0.9931285991850949};
inline constexpr std::array<double, 10> kGL20Weights = {
    0.1527533871307258, 0.1491729864726037, 0.1420961093183820, 0.1316886384491766,
    0.1181945319615184, 0.1019301198172404, 0.0832767415767048, 0.0626720483341091,
    0.0406014298003869, 0.0176140071391521};

template <typename F>
inline double gauss_legendre(F&& f, double a, double b, int panels) {
    double total = 0.0;
    const double w = (b - a) / panels;
    for (int p = 0; p < panels; ++p) {
        const double pa = a + p * w;
        const double mid = pa + 0.5 * w, half = 0.5 * w;
        double s = 0.0;
        for (std::size_t i = 0; i < kGL20Nodes.size(); ++i)
            s += kGL20Weights[i] * (f(mid - half * kGL20Nodes[i]) + f(mid + half * kGL20Nodes[i]));
        total += s * half;
    }
    return total;
}

// ---------------------------------------------------------------------------
// Order-stable reduction: pairwise summation. The result depends only on the
// slot contents, not on the schedule that filled them.
// ---------------------------------------------------------------------------

inline double pairwise_sum(std::span<const double> v) {
    if (v.size() <= 8) {
        double s = 0.0;
        for (double x : v) s += x;
        return s;
    }
    const std::size_t half = v.size() / 2;
    return pairwise_sum(v.first(half)) + pairwise_sum(v.subspan(half));
}

}  // namespace wedge::num
