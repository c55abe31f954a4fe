#include "veflab/operators.hpp"

#include <cmath>
#include <cstdlib>
#include <stdexcept>
#include <string>

namespace veflab {

namespace {

void require_rank(const SpectralField& f, int rank, const char* op) {
    if (f.rank() != rank)
        throw std::invalid_argument(std::string(op) + ": wrong field rank");
}

}  // namespace

SpectralField lambda_power(const SpectralField& f, double s) {
    SpectralField out = f;
    if (s == 0.0)
        return out;
    const Grid& g = f.grid();
    for (std::size_t m = 0; m < f.num_modes(); ++m) {
        double x2 = g.xi_sq(m);
        double w = x2 == 0.0 ? 0.0 : std::pow(x2, 0.5 * s);
        for (int c = 0; c < f.ncomp(); ++c)
            out.at(c, m) *= w;
    }
    return out;
}

SpectralField leray_project(const SpectralField& v) {
    require_rank(v, 1, "leray_project");
    const Grid& g = v.grid();
    const int d = g.dim();
    SpectralField out = v;
    for (std::size_t m = 0; m < v.num_modes(); ++m) {
        double x2 = g.xi_sq(m);
        if (x2 == 0.0)
            continue;
        auto xi = g.xi_vec(m);
        Complex dot(0.0, 0.0);
        for (int i = 0; i < d; ++i)
            dot += xi[i] * v.at(i, m);
        dot /= x2;
        for (int i = 0; i < d; ++i)
            out.at(i, m) -= xi[i] * dot;
    }
    return out;
}

HodgeParts hodge_decompose(const SpectralField& E) {
    require_rank(E, 2, "hodge_decompose");
    const Grid& g = E.grid();
    const int d = g.dim();
    HodgeParts parts{SpectralField(g, 2), SpectralField(g, 2)};
    for (std::size_t m = 0; m < E.num_modes(); ++m) {
        double x2 = g.xi_sq(m);
        if (x2 == 0.0) {
            for (int c = 0; c < E.ncomp(); ++c)
                parts.div_part.at(c, m) = E.at(c, m);
            continue;
        }
        auto xi = g.xi_vec(m);
        for (int i = 0; i < d; ++i) {
            Complex dot(0.0, 0.0);
            for (int k = 0; k < d; ++k)
                dot += E.tensor_at(i, k, m) * xi[k];
            dot /= x2;
            for (int j = 0; j < d; ++j) {
                Complex dp = dot * xi[j];
                parts.div_part.tensor_at(i, j, m) = dp;
                parts.curl_part.tensor_at(i, j, m) = E.tensor_at(i, j, m) - dp;
            }
        }
    }
    return parts;
}

namespace {

// Derivative multiplier i*xi_a per mode, with the Nyquist frequency zeroed.
inline Complex deriv_factor(const Grid& g, int axis_idx) {
    int k = g.freq(axis_idx);
    if (k == -g.n() / 2)
        return Complex(0.0, 0.0);
    return Complex(0.0, g.xi(axis_idx));
}

}  // namespace

SpectralField grad(const SpectralField& f) {
    require_rank(f, 0, "grad");
    const Grid& g = f.grid();
    const int d = g.dim();
    SpectralField out(g, 1);
    for (std::size_t m = 0; m < f.num_modes(); ++m) {
        auto idx = g.unravel(m);
        for (int i = 0; i < d; ++i)
            out.at(i, m) = deriv_factor(g, idx[i]) * f.at(0, m);
    }
    return out;
}

SpectralField tensor_grad(const SpectralField& u) {
    require_rank(u, 1, "tensor_grad");
    const Grid& g = u.grid();
    const int d = g.dim();
    SpectralField out(g, 2);
    for (std::size_t m = 0; m < u.num_modes(); ++m) {
        auto idx = g.unravel(m);
        for (int j = 0; j < d; ++j) {
            Complex f = deriv_factor(g, idx[j]);
            for (int i = 0; i < d; ++i)
                out.tensor_at(i, j, m) = f * u.at(i, m);
        }
    }
    return out;
}

SpectralField div_tensor(const SpectralField& E) {
    require_rank(E, 2, "div_tensor");
    const Grid& g = E.grid();
    const int d = g.dim();
    SpectralField out(g, 1);
    for (std::size_t m = 0; m < E.num_modes(); ++m) {
        auto idx = g.unravel(m);
        for (int i = 0; i < d; ++i) {
            Complex s(0.0, 0.0);
            for (int j = 0; j < d; ++j)
                s += deriv_factor(g, idx[j]) * E.tensor_at(i, j, m);
            out.at(i, m) = s;
        }
    }
    return out;
}

SpectralField div_vector(const SpectralField& v) {
    require_rank(v, 1, "div_vector");
    const Grid& g = v.grid();
    const int d = g.dim();
    SpectralField out(g, 0);
    for (std::size_t m = 0; m < v.num_modes(); ++m) {
        auto idx = g.unravel(m);
        Complex s(0.0, 0.0);
        for (int i = 0; i < d; ++i)
            s += deriv_factor(g, idx[i]) * v.at(i, m);
        out.at(0, m) = s;
    }
    return out;
}

SpectralField curl_rows(const SpectralField& E) {
    require_rank(E, 2, "curl_rows");
    const Grid& g = E.grid();
    const int d = g.dim();
    SpectralField out(g, d == 3 ? 2 : 1);
    for (std::size_t m = 0; m < E.num_modes(); ++m) {
        auto idx = g.unravel(m);
        Complex dx[3];
        for (int a = 0; a < d; ++a)
            dx[a] = deriv_factor(g, idx[a]);
        if (d == 2) {
            for (int i = 0; i < 2; ++i)
                out.at(i, m) = dx[0] * E.tensor_at(i, 1, m) - dx[1] * E.tensor_at(i, 0, m);
        } else {
            for (int i = 0; i < 3; ++i) {
                out.tensor_at(i, 0, m) = dx[1] * E.tensor_at(i, 2, m) - dx[2] * E.tensor_at(i, 1, m);
                out.tensor_at(i, 1, m) = dx[2] * E.tensor_at(i, 0, m) - dx[0] * E.tensor_at(i, 2, m);
                out.tensor_at(i, 2, m) = dx[0] * E.tensor_at(i, 1, m) - dx[1] * E.tensor_at(i, 0, m);
            }
        }
    }
    return out;
}

SpectralField laplacian(const SpectralField& f) {
    SpectralField out = f;
    const Grid& g = f.grid();
    for (std::size_t m = 0; m < f.num_modes(); ++m) {
        double w = -g.xi_sq(m);
        for (int c = 0; c < f.ncomp(); ++c)
            out.at(c, m) *= w;
    }
    return out;
}

SpectralField transpose(const SpectralField& E) {
    if (E.rank() != 2)
        throw std::invalid_argument("transpose: rank-2 field required");
    const int d = E.grid().dim();
    SpectralField out(E.grid(), 2);
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) {
            auto src = E.comp(i * d + j);
            auto dst = out.comp(j * d + i);
            std::copy(src.begin(), src.end(), dst.begin());
        }
    return out;
}

bool is_dealiased_mode(const Grid& g, std::size_t m) {
    auto idx = g.unravel(m);
    const double cut = g.n() / 3.0;
    for (int a = 0; a < g.dim(); ++a)
        if (std::abs(g.freq(idx[a])) > cut)
            return false;
    return true;
}

void dealias(SpectralField& f) {
    const Grid& g = f.grid();
    for (std::size_t m = 0; m < f.num_modes(); ++m) {
        if (is_dealiased_mode(g, m))
            continue;
        for (int c = 0; c < f.ncomp(); ++c)
            f.at(c, m) = Complex(0.0, 0.0);
    }
}

void enforce_hermitian(SpectralField& f) {
    const Grid& g = f.grid();
    for (std::size_t m = 0; m < f.num_modes(); ++m) {
        std::size_t c = g.conjugate_index(m);
        if (c < m)
            continue;
        for (int k = 0; k < f.ncomp(); ++k) {
            if (c == m) {
                f.at(k, m) = Complex(f.at(k, m).real(), 0.0);
            } else {
                Complex avg = 0.5 * (f.at(k, m) + std::conj(f.at(k, c)));
                f.at(k, m) = avg;
                f.at(k, c) = std::conj(avg);
            }
        }
    }
}

void zero_mean(SpectralField& f) {
    for (int c = 0; c < f.ncomp(); ++c)
        f.at(c, 0) = Complex(0.0, 0.0);
}

double max_mode_divergence(const SpectralField& v) {
    if (v.rank() != 1)
        throw std::invalid_argument("max_mode_divergence: rank-1 field required");
    const Grid& g = v.grid();
    const int d = g.dim();
    double worst = 0.0;
    for (std::size_t m = 0; m < v.num_modes(); ++m) {
        auto xi = g.xi_vec(m);
        Complex s(0.0, 0.0);
        for (int i = 0; i < d; ++i)
            s += xi[i] * v.at(i, m);
        worst = std::max(worst, std::abs(s));
    }
    return worst / static_cast<double>(g.num_points());
}

}  // namespace veflab
