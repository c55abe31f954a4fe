#include "veflab/transform.hpp"

#include <fftw3.h>

#include <map>
#include <mutex>

namespace veflab {

namespace {

// One cached c2c plan pair per (dim, N). Plans are created with FFTW_ESTIMATE
// so the algorithm choice (and hence the rounding pattern) is deterministic
// across runs; execution is serialized on the cache mutex and goes through a
// scratch buffer owned by the cache.
struct PlanEntry {
    fftw_plan forward = nullptr;
    fftw_plan backward = nullptr;
    fftw_complex* scratch = nullptr;
    std::size_t n_modes = 0;
};

class PlanCache {
  public:
    static PlanCache& instance() {
        static PlanCache cache;
        return cache;
    }

    void execute(const Grid& g, const Complex* in, Complex* out, int sign) {
        std::lock_guard<std::mutex> lock(mutex_);
        PlanEntry& e = entry(g);
        for (std::size_t m = 0; m < e.n_modes; ++m) {
            e.scratch[m][0] = in[m].real();
            e.scratch[m][1] = in[m].imag();
        }
        fftw_execute(sign == FFTW_FORWARD ? e.forward : e.backward);
        for (std::size_t m = 0; m < e.n_modes; ++m)
            out[m] = Complex(e.scratch[m][0], e.scratch[m][1]);
    }

  private:
    PlanEntry& entry(const Grid& g) {
        auto key = std::make_pair(g.dim(), g.n());
        auto it = entries_.find(key);
        if (it != entries_.end())
            return it->second;
        PlanEntry e;
        e.n_modes = g.num_points();
        e.scratch = fftw_alloc_complex(e.n_modes);
        int n[3] = {g.n(), g.n(), g.n()};
        e.forward = fftw_plan_dft(g.dim(), n, e.scratch, e.scratch, FFTW_FORWARD, FFTW_ESTIMATE);
        e.backward = fftw_plan_dft(g.dim(), n, e.scratch, e.scratch, FFTW_BACKWARD, FFTW_ESTIMATE);
        return entries_.emplace(key, e).first->second;
    }

    std::mutex mutex_;
    std::map<std::pair<int, int>, PlanEntry> entries_;
};

}  // namespace

SpectralField to_spectral(const PhysicalField& f) {
    SpectralField out(f.grid, f.rank);
    const std::size_t nm = f.grid.num_points();
    std::vector<Complex> buf(nm);
    for (int c = 0; c < f.ncomp(); ++c) {
        auto src = f.comp(c);
        for (std::size_t m = 0; m < nm; ++m)
            buf[m] = Complex(src[m], 0.0);
        PlanCache::instance().execute(f.grid, buf.data(), out.comp(c).data(), FFTW_FORWARD);
    }
    return out;
}

PhysicalField to_physical(const SpectralField& f) {
    PhysicalField out;
    out.grid = f.grid();
    out.rank = f.rank();
    const std::size_t nm = f.num_modes();
    out.values.assign(static_cast<std::size_t>(f.ncomp()) * nm, 0.0);
    const double scale = 1.0 / static_cast<double>(nm);
    std::vector<Complex> buf(nm);
    for (int c = 0; c < f.ncomp(); ++c) {
        PlanCache::instance().execute(f.grid(), f.comp(c).data(), buf.data(), FFTW_BACKWARD);
        auto dst = out.comp(c);
        for (std::size_t m = 0; m < nm; ++m)
            dst[m] = buf[m].real() * scale;
    }
    return out;
}

double transform_roundtrip_error(const SpectralField& f) {
    SpectralField back = to_spectral(to_physical(f));
    double worst = 0.0;
    for (std::size_t i = 0; i < f.data().size(); ++i)
        worst = std::max(worst, std::abs(f.data()[i] - back.data()[i]));
    return worst;
}

}  // namespace veflab
