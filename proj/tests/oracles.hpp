#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <vector>

// Independent numerical oracles used by the test suites. These deliberately
// avoid the library's closed-form evaluation paths.

namespace veflab::test {

using Mat2 = std::array<double, 4>;  // row-major 2x2

inline Mat2 mat_mul(const Mat2& a, const Mat2& b) {
    return {a[0] * b[0] + a[1] * b[2], a[0] * b[1] + a[1] * b[3],
            a[2] * b[0] + a[3] * b[2], a[2] * b[1] + a[3] * b[3]};
}

/// exp(A) by scaling-and-squaring with a Taylor series, carried in extended
/// precision so that the repeated squarings at large ||A|| stay well below
/// the 1e-10 comparison tolerances.
inline Mat2 expm22(const Mat2& a) {
    using LMat = std::array<long double, 4>;
    auto lmul = [](const LMat& x, const LMat& y) {
        return LMat{x[0] * y[0] + x[1] * y[2], x[0] * y[1] + x[1] * y[3],
                    x[2] * y[0] + x[3] * y[2], x[2] * y[1] + x[3] * y[3]};
    };
    long double nrm = 0.0L;
    for (double v : a)
        nrm = std::max(nrm, static_cast<long double>(std::abs(v)));
    int s = 0;
    while (nrm > 0.25L) {
        nrm *= 0.5L;
        ++s;
    }
    long double scale = std::ldexp(1.0L, -s);
    LMat b{a[0] * scale, a[1] * scale, a[2] * scale, a[3] * scale};
    LMat result{1.0L, 0.0L, 0.0L, 1.0L};
    LMat term{1.0L, 0.0L, 0.0L, 1.0L};
    for (int k = 1; k <= 40; ++k) {
        term = lmul(term, b);
        long double inv = 1.0L / k;
        for (auto& v : term)
            v *= inv;
        long double tn = 0.0L;
        for (int i = 0; i < 4; ++i) {
            result[i] += term[i];
            tn = std::max(tn, std::abs(term[i]));
        }
        if (tn < 1e-24L)
            break;
    }
    for (int k = 0; k < s; ++k)
        result = lmul(result, result);
    return {static_cast<double>(result[0]), static_cast<double>(result[1]),
            static_cast<double>(result[2]), static_cast<double>(result[3])};
}

/// Classic RK4 on a complex linear/nonlinear system dy/dt = f(t, y).
template <typename F, typename Vec>
Vec rk4_integrate(F f, Vec y, double t0, double t1, int nsteps) {
    double h = (t1 - t0) / nsteps;
    double t = t0;
    Vec k1 = y, k2 = y, k3 = y, k4 = y, tmp = y;
    for (int s = 0; s < nsteps; ++s) {
        k1 = f(t, y);
        for (std::size_t i = 0; i < y.size(); ++i)
            tmp[i] = y[i] + 0.5 * h * k1[i];
        k2 = f(t + 0.5 * h, tmp);
        for (std::size_t i = 0; i < y.size(); ++i)
            tmp[i] = y[i] + 0.5 * h * k2[i];
        k3 = f(t + 0.5 * h, tmp);
        for (std::size_t i = 0; i < y.size(); ++i)
            tmp[i] = y[i] + h * k3[i];
        k4 = f(t + h, tmp);
        for (std::size_t i = 0; i < y.size(); ++i)
            y[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
        t += h;
    }
    return y;
}

/// Gauss-Legendre 64-point quadrature on [a,b] by composite 8-panel rule,
/// good to ~1e-13 for smooth integrands; used for closed-form cross-checks.
template <typename F>
double simpson_integrate(F f, double a, double b, int n = 4096) {
    // composite Simpson with n (even) intervals
    double h = (b - a) / n;
    double s = f(a) + f(b);
    for (int i = 1; i < n; ++i)
        s += f(a + i * h) * (i % 2 == 1 ? 4.0 : 2.0);
    return s * h / 3.0;
}

}  // namespace veflab::test
