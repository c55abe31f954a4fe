#include "doctest.h"

#include <cmath>

#include "veflab/initial_data.hpp"
#include "veflab/invariants.hpp"
#include "veflab/operators.hpp"

using namespace veflab;

TEST_CASE("zero-strain recipe") {
    Grid g(2, 32, 2.0 * M_PI);

    SUBCASE("residuals vanish identically and the norm is exact") {
        auto data = make_zero_strain(1e-2, 7, g);
        CHECK(det_deviation(data.state.E) == 0.0);
        CHECK(div_FT_norm(data.state.E) == 0.0);
        CHECK(piola_residual(data.state.E) == 0.0);
        CHECK(std::abs(h2_norm(data.state.u) - 1e-2) <= 1e-14);
        CHECK(max_mode_divergence(data.state.u) <= 1e-12 * l2_norm(data.state.u));
        CHECK(hermitian_defect(data.state.u) <= 1e-12);
    }

    SUBCASE("equal seeds give bit-identical data") {
        auto a = make_zero_strain(1e-2, 42, g);
        auto b = make_zero_strain(1e-2, 42, g);
        REQUIRE(a.state.u.data().size() == b.state.u.data().size());
        for (std::size_t i = 0; i < a.state.u.data().size(); ++i)
            CHECK(a.state.u.data()[i] == b.state.u.data()[i]);
        auto c = make_zero_strain(1e-2, 43, g);
        bool differs = false;
        for (std::size_t i = 0; i < a.state.u.data().size(); ++i)
            if (a.state.u.data()[i] != c.state.u.data()[i])
                differs = true;
        CHECK(differs);
    }
}

TEST_CASE("lagrangian strain recipe") {
    Grid g(2, 64, 2.0 * M_PI);

    SUBCASE("flow_time = 0 gives exactly zero strain") {
        auto data = make_lagrangian_strain(1e-2, 3, g, 0.0, 1e-12);
        CHECK(l2_norm(data.state.E) == 0.0);
    }

    SUBCASE("admissibility residuals at delta=1e-2, N=64, 2D") {
        auto data = make_lagrangian_strain(1e-2, 11, g, 1.0, 1e-12);
        CHECK(data.report.det_dev <= 1e-6);
        CHECK(data.report.divFT_norm <= 1e-6);
        CHECK(data.report.piola_res <= 1e-6);
        CHECK(data.report.min_det_flow > 0.5);
        double total = h2_norm(data.state.u) + h2_norm(data.state.E);
        CHECK(total >= 0.9 * 1e-2);
        CHECK(total <= 1.1 * 1e-2);
        CHECK(data.report.e_h2 > 0.0);
        CHECK(hermitian_defect(data.state.E) <= 1e-10);
    }

    SUBCASE("refinement improves the construction down to the roundoff floor") {
        auto coarse = make_lagrangian_strain(1e-2, 11, Grid(2, 32, 2.0 * M_PI), 1.0, 1e-12, 8);
        auto fine = make_lagrangian_strain(1e-2, 11, Grid(2, 64, 2.0 * M_PI), 1.0, 1e-12, 8);
        double floor = 1e-12;
        CHECK(fine.report.piola_res <= std::max(0.5 * coarse.report.piola_res, floor));
        CHECK(fine.report.divFT_norm <= std::max(0.5 * coarse.report.divFT_norm, floor));
        CHECK(fine.report.det_dev <= std::max(0.5 * coarse.report.det_dev, floor));
    }

    SUBCASE("3D construction stays admissible") {
        auto data = make_lagrangian_strain(1e-2, 5, Grid(3, 32, 2.0 * M_PI), 1.0, 1e-10, 2);
        CHECK(data.report.det_dev <= 1e-5);
        CHECK(data.report.divFT_norm <= 1e-5);
        CHECK(data.report.piola_res <= 1e-5);
    }
}

TEST_CASE("spectral profiles") {
    SUBCASE("c0 = delta = 1 normalizes the peak") {
        SpectralProfile p = make_profile(1.0, 1.0, 0.5);
        CHECK(p.u_amp(0.0) == doctest::Approx(1.0));
    }

    SUBCASE("delta=1e-2, zeta=0.5 certifies the floor at c0=0.1") {
        SpectralProfile p = make_profile(1e-2, 0.1, 0.5);
        CHECK(p.c0 == doctest::Approx(0.1));
        CHECK(p.certified_floor >= 0.95 * 0.1);
        CHECK(p.xi_floor == doctest::Approx(0.1));
    }

    SUBCASE("infeasible floors are rejected") {
        CHECK_THROWS(make_profile(1e-2, 0.2, 0.5));          // above delta^zeta
        CHECK_THROWS(make_profile(1e-2, 0.1, 0.5, "highpass"));  // floor on a high-pass
        CHECK_NOTHROW(make_profile(1e-2, 0.0, 0.5, "highpass"));
    }
}
