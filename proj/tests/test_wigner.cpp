#include "qiopa/amplifier.hpp"
#include "qiopa/wigner.hpp"

#include "support/oracles.hpp"

#include <catch2/catch_amalgamated.hpp>

using namespace qiopa;
using Catch::Approx;

namespace {

PhasePoint random_point(Rng& rng, double scale) {
    PhasePoint pt;
    for (int i = 0; i < 4; ++i)
        pt.coord(i) = cplx(scale * (2.0 * rng.u01() - 1.0), scale * (2.0 * rng.u01() - 1.0));
    return pt;
}

} // namespace

TEST_CASE("Wigner function at the origin is -16/pi^4 for every g and Phi") {
    const double expected = -16.0 / std::pow(pi, 4.0);
    for (double g : {0.0, 0.11, 0.5, 1.2})
        for (double phi : {0.0, 0.7, pi / 2.0, pi})
            REQUIRE(wigner_closed_form(PhasePoint{}, AmplifierParams(g, phi)) ==
                    Approx(expected).margin(1e-12));
}

TEST_CASE("the bracket's zero surface gives W = 0 exactly") {
    const AmplifierParams p(0.11, 0.0);
    PhasePoint pt;
    pt.alpha1 = 1.0 / (std::sqrt(2.0) * p.C()); // |e^{i Phi} Delta_A|^2 = 1
    REQUIRE(std::abs(wigner_closed_form(pt, p)) < 1e-15);
}

TEST_CASE("W is real in complex intermediate arithmetic") {
    Rng rng(53);
    const AmplifierParams p(0.3, 0.9);
    for (int trial = 0; trial < 50; ++trial) {
        const PhasePoint pt = random_point(rng, 1.5);
        const SqueezedVariables a(pt.alpha1, pt.alpha2, p.g);
        const SqueezedVariables ap(pt.beta1, pt.beta2, p.g);
        const cplx mix = std::exp(cplx(0.0, p.phi)) * a.delta() + ap.delta();
        const cplx bracket = cplx(1.0, 0.0) - mix * std::conj(mix);
        const cplx wc = -cplx(16.0 / std::pow(pi, 4.0), 0.0) *
                        std::exp(cplx(-a.gaussian_exponent() - ap.gaussian_exponent(), 0.0)) * bracket;
        REQUIRE(std::abs(wc.imag()) < 1e-14);
        REQUIRE(wc.real() == Approx(wigner_closed_form(pt, p)).margin(1e-14));
    }
}

TEST_CASE("Phi enters only through the interference cross term") {
    Rng rng(59);
    for (int trial = 0; trial < 100; ++trial) {
        const double g = rng.u01();
        const double phi = 2.0 * pi * rng.u01();
        const PhasePoint pt = random_point(rng, 1.2);
        const double w_sum = wigner_closed_form(pt, AmplifierParams(g, phi)) +
                             wigner_closed_form(pt, AmplifierParams(g, phi + pi));
        const SqueezedVariables a(pt.alpha1, pt.alpha2, g);
        const SqueezedVariables ap(pt.beta1, pt.beta2, g);
        const double wbar_a = 4.0 / (pi * pi) * std::exp(-a.gaussian_exponent());
        const double wbar_ap = 4.0 / (pi * pi) * std::exp(-ap.gaussian_exponent());
        const double expected =
            -2.0 * wbar_a * wbar_ap * (1.0 - std::norm(a.delta()) - std::norm(ap.delta()));
        REQUIRE(w_sum == Approx(expected).margin(1e-12));
    }
}

TEST_CASE("closed form matches the displaced-parity oracle without amplification") {
    // at g = 0 the state is the bare balanced qubit and truncation is exact
    const AmplifierParams p(0.0, 0.0);
    const StateVector state = evolve_qubit(testing::WignerConventionMap::qubit(p), p, 10);
    Rng rng(61);
    for (int trial = 0; trial < 12; ++trial) {
        const PhasePoint pt = random_point(rng, 0.9);
        cplx a1, a2, b1, b2;
        testing::WignerConventionMap::physical_coords(pt, p, a1, a2, b1, b2);
        const double oracle = testing::displaced_parity_wigner(state, a1, a2, b1, b2);
        REQUIRE(wigner_closed_form(pt, p) == Approx(oracle).margin(1e-9));
    }
}

TEST_CASE("closed form matches the displaced-parity oracle at g = 0.11") {
    const AmplifierParams p(0.11, 0.0);
    const StateVector state = evolve_qubit(testing::WignerConventionMap::qubit(p), p, 12);
    Rng rng(67);
    for (int trial = 0; trial < 10; ++trial) {
        const PhasePoint pt = random_point(rng, 0.8);
        cplx a1, a2, b1, b2;
        testing::WignerConventionMap::physical_coords(pt, p, a1, a2, b1, b2);
        const double oracle = testing::displaced_parity_wigner(state, a1, a2, b1, b2);
        REQUIRE(wigner_closed_form(pt, p) == Approx(oracle).margin(2e-3));
    }
}

TEST_CASE("closed form tracks the oracle off the universal phase") {
    const AmplifierParams p(0.11, pi / 2.0);
    const StateVector state = evolve_qubit(testing::WignerConventionMap::qubit(p), p, 12);
    Rng rng(71);
    for (int trial = 0; trial < 6; ++trial) {
        const PhasePoint pt = random_point(rng, 0.7);
        cplx a1, a2, b1, b2;
        testing::WignerConventionMap::physical_coords(pt, p, a1, a2, b1, b2);
        REQUIRE(wigner_closed_form(pt, p) ==
                Approx(testing::displaced_parity_wigner(state, a1, a2, b1, b2)).margin(2e-3));
    }
}

TEST_CASE("analytic and numeric Wigner values agree on a coarse lattice") {
    const AmplifierParams p(0.11, 0.0);
    const StateVector state = evolve_qubit(testing::WignerConventionMap::qubit(p), p, 12);
    const double axis[4] = {-0.75, -0.25, 0.25, 0.75};
    for (double xr : axis)
        for (double xi : axis)
            for (double yr : axis)
                for (double yi : axis) {
                    PhasePoint pt;
                    pt.alpha1 = cplx(xr, xi);
                    pt.beta1 = cplx(yr, yi);
                    cplx a1, a2, b1, b2;
                    testing::WignerConventionMap::physical_coords(pt, p, a1, a2, b1, b2);
                    const double oracle = testing::displaced_parity_wigner(state, a1, a2, b1, b2);
                    REQUIRE(wigner_closed_form(pt, p) == Approx(oracle).margin(5e-3));
                }
}

TEST_CASE("characteristic oracle basics") {
    const StateVector vac = StateVector::basis_ket(OccupationKet(0, 0, 0, 0), 10);
    REQUIRE(std::abs(characteristic_oracle(vac, 0, 0, 0, 0).value - cplx(1.0)) < 1e-12);

    const cplx eta(0.4, -0.3);
    const CharacteristicValue v = characteristic_oracle(vac, eta, 0, 0, 0);
    REQUIRE(std::abs(v.value - std::exp(-0.5 * std::norm(eta))) < 1e-10);
    REQUIRE_FALSE(v.accuracy_warning);

    REQUIRE(characteristic_oracle(vac, cplx(2.5, 0.0), 0, 0, 0).accuracy_warning);

    StateVector leaky(4);
    leaky.accumulate(OccupationKet(0, 0, 0, 0), 1.0);
    leaky.add_leakage(1e-3);
    REQUIRE_THROWS_AS(characteristic_oracle(leaky, 0, 0, 0, 0), Error);
}

TEST_CASE("characteristic oracle agrees with the closed-form transform pair") {
    const AmplifierParams p(0.11, 0.0);
    const StateVector spdc = spdc_output(p, 12);
    Rng rng(73);
    for (int trial = 0; trial < 10; ++trial) {
        const cplx e1(0.5 * (2 * rng.u01() - 1), 0.5 * (2 * rng.u01() - 1));
        const cplx e2(0.5 * (2 * rng.u01() - 1), 0.5 * (2 * rng.u01() - 1));
        const cplx x1(0.5 * (2 * rng.u01() - 1), 0.5 * (2 * rng.u01() - 1));
        const cplx x2(0.5 * (2 * rng.u01() - 1), 0.5 * (2 * rng.u01() - 1));
        const cplx numeric = characteristic_oracle(spdc, e1, e2, x1, x2).value;
        REQUIRE(std::abs(numeric - testing::analytic_chi_spdc(e1, e2, x1, x2, p)) < 1e-3);
    }

    Rng qrng(79);
    const PolarizationQubit q = sample_qubit(qrng);
    const StateVector injected = evolve_qubit(q, p, 12);
    for (int trial = 0; trial < 8; ++trial) {
        const cplx e1(0.4 * (2 * rng.u01() - 1), 0.4 * (2 * rng.u01() - 1));
        const cplx e2(0.4 * (2 * rng.u01() - 1), 0.4 * (2 * rng.u01() - 1));
        const cplx x1(0.4 * (2 * rng.u01() - 1), 0.4 * (2 * rng.u01() - 1));
        const cplx x2(0.4 * (2 * rng.u01() - 1), 0.4 * (2 * rng.u01() - 1));
        const cplx numeric = characteristic_oracle(injected, e1, e2, x1, x2).value;
        REQUIRE(std::abs(numeric - testing::analytic_chi_injected(q, e1, e2, x1, x2, p)) < 1e-3);
    }
}

TEST_CASE("negativity scan sees the origin dip") {
    PhasePlane plane; // alpha1 x beta1 through the origin
    GridSpec grid{-2.0, 2.0, 0.5, -2.0, 2.0, 0.5};
    const NegativityScan scan = negativity_scan(plane, grid, AmplifierParams(0.11, 0.0));
    REQUIRE(scan.rows.size() == 81);
    REQUIRE(scan.min_w <= -0.164);
    REQUIRE(scan.negative_fraction > 0.0);
}

TEST_CASE("far from the origin the Gaussian envelopes win") {
    const AmplifierParams p(0.11, 0.0);
    PhasePlane plane;
    plane.base.alpha2 = cplx(5.0, 0.0);
    plane.base.beta2 = cplx(5.0, 0.0);
    GridSpec grid{4.5, 5.5, 0.25, 4.5, 5.5, 0.25};
    const NegativityScan scan = negativity_scan(plane, grid, p);
    REQUIRE(scan.negative_fraction == 0.0);
    for (const auto& row : scan.rows) REQUIRE(std::abs(row.w) < 1e-6);
}

TEST_CASE("flipping Phi by pi mirrors the scan along the interference axis") {
    PhasePlane plane; // alpha1 x beta1
    GridSpec grid{-1.5, 1.5, 0.25, -1.5, 1.5, 0.25};
    const NegativityScan w0 = negativity_scan(plane, grid, AmplifierParams(0.0, 0.0));
    const NegativityScan wpi = negativity_scan(plane, grid, AmplifierParams(0.0, pi));
    const long n1 = grid.points1();
    const long n2 = grid.points2();
    for (long i = 0; i < n1; ++i)
        for (long j = 0; j < n2; ++j) {
            const double a = w0.rows[i * n2 + j].w;
            const double b = wpi.rows[i * n2 + (n2 - 1 - j)].w; // beta1 -> -beta1
            REQUIRE(a == Approx(b).margin(1e-12));
        }
}

TEST_CASE("oversized grids are refused") {
    PhasePlane plane;
    GridSpec grid{-10.0, 10.0, 0.001, -10.0, 10.0, 0.001};
    try {
        negativity_scan(plane, grid, AmplifierParams(0.11, 0.0));
        FAIL("expected a throw");
    } catch (const Error& e) {
        REQUIRE(e.kind() == ErrorKind::resource_limit);
    }
}
