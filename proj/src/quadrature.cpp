#include "veflab/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <stdexcept>

namespace veflab {

namespace {

// 15-point Kronrod nodes on [-1,1] (symmetric; first 8 listed) and weights,
// with the embedded 7-point Gauss weights on the odd-indexed nodes.
constexpr double kXgk[8] = {
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144838258730,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000};

constexpr double kWgk[8] = {
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714};

constexpr double kWg[4] = {
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327};

struct Panel {
    double a, b;
    double value;
    double err;
};

Panel eval_panel(const std::function<double(double)>& f, double a, double b) {
    const double c = 0.5 * (a + b);
    const double h = 0.5 * (b - a);
    double fv[15];
    for (int i = 0; i < 7; ++i) {
        fv[i] = f(c - h * kXgk[i]);
        fv[14 - i] = f(c + h * kXgk[i]);
    }
    fv[7] = f(c);
    double kronrod = kWgk[7] * fv[7];
    double gauss = kWg[3] * fv[7];
    for (int i = 0; i < 7; ++i)
        kronrod += kWgk[i] * (fv[i] + fv[14 - i]);
    for (int i = 0; i < 3; ++i)
        gauss += kWg[i] * (fv[2 * i + 1] + fv[13 - 2 * i]);
    kronrod *= h;
    gauss *= h;
    return {a, b, kronrod, std::abs(kronrod - gauss)};
}

struct WorseError {
    bool operator()(const Panel& x, const Panel& y) const { return x.err < y.err; }
};

}  // namespace

QuadratureResult integrate_adaptive(const std::function<double(double)>& f,
                                    const std::vector<double>& breakpoints,
                                    const QuadratureConfig& cfg) {
    if (breakpoints.size() < 2)
        throw std::invalid_argument("integrate_adaptive: need at least two breakpoints");
    std::priority_queue<Panel, std::vector<Panel>, WorseError> panels;
    double total = 0.0, toterr = 0.0;
    for (std::size_t i = 0; i + 1 < breakpoints.size(); ++i) {
        Panel p = eval_panel(f, breakpoints[i], breakpoints[i + 1]);
        total += p.value;
        toterr += p.err;
        panels.push(p);
    }
    std::size_t n = panels.size();
    while (n < cfg.max_panels) {
        double goal = std::max(cfg.abs_tol, cfg.rel_tol * std::abs(total));
        if (toterr <= goal)
            break;
        Panel worst = panels.top();
        panels.pop();
        double mid = 0.5 * (worst.a + worst.b);
        if (mid <= worst.a || mid >= worst.b) {
            // interval at floating point resolution; accept as is
            panels.push({worst.a, worst.b, worst.value, 0.0});
            toterr -= worst.err;
            continue;
        }
        Panel left = eval_panel(f, worst.a, mid);
        Panel right = eval_panel(f, mid, worst.b);
        total += left.value + right.value - worst.value;
        toterr += left.err + right.err - worst.err;
        panels.push(left);
        panels.push(right);
        ++n;
    }
    double goal = std::max(cfg.abs_tol, cfg.rel_tol * std::abs(total));
    return {total, toterr, n, toterr <= goal};
}

std::vector<double> radial_breakpoints(double R, double r_fine, double max_width_osc) {
    std::vector<double> pts;
    pts.push_back(0.0);
    double rf = std::min(r_fine, R);
    if (rf > 0.0 && max_width_osc > 0.0) {
        std::size_t nf = static_cast<std::size_t>(std::ceil(rf / max_width_osc));
        nf = std::min<std::size_t>(nf, 60000);
        for (std::size_t i = 1; i <= nf; ++i)
            pts.push_back(rf * static_cast<double>(i) / static_cast<double>(nf));
    } else if (rf > 0.0) {
        pts.push_back(rf);
    }
    // geometric coarsening out to R
    double r = pts.back();
    if (r <= 0.0) {
        r = std::min(R, 1e-3);
        pts.push_back(r);
    }
    while (r < R) {
        r = std::min(R, r * 1.5 + 1e-30);
        pts.push_back(r);
    }
    if (pts.back() < R)
        pts.push_back(R);
    return pts;
}

}  // namespace veflab
