#include <cmath>
#include <random>
#include <stdexcept>

#include <doctest.h>

#include "fixtures.hpp"
#include "uiv/model.hpp"

using namespace uiv;

TEST_CASE("reproduction number and critical value")
{
    const auto mp = fixtures::patient_a();
    const auto rn = reproduction_number(mp);
    CHECK(rn.r == mp.beta * mp.p / (mp.c * mp.delta));
    CHECK(rn.u_star == 1.0 / rn.r);
    CHECK(rn.r == doctest::Approx(1.84e-8).epsilon(0.01));
    CHECK(rn.u_star == doctest::Approx(5.44e7).epsilon(0.01));

    const auto toy = reproduction_number(fixtures::toy_params());
    CHECK(toy.r == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(toy.u_star == doctest::Approx(1.0).epsilon(1e-14));

    // R depends on beta and p only through their product
    ModelParams scaled = mp;
    scaled.beta *= 2.0;
    scaled.p *= 0.5;
    CHECK(reproduction_number(scaled).r == doctest::Approx(rn.r).epsilon(1e-14));
}

TEST_CASE("time-varying reproduction number")
{
    const auto mp = fixtures::patient_a();
    const auto rn = reproduction_number(mp);
    CHECK(reproduction_number_t(mp, 0.0) == rn.r);
    CHECK(reproduction_number_t(mp, 0.5) == doctest::Approx(0.5 * rn.r).epsilon(1e-14));
    CHECK(reproduction_number_t(mp, 0.5) == doctest::Approx(9.2e-9).epsilon(0.01));
    CHECK_THROWS_AS(reproduction_number_t(mp, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(reproduction_number_t(mp, -0.1), std::invalid_argument);
}

TEST_CASE("drug efficacy")
{
    const auto pk = fixtures::patient_a_pk();
    CHECK(eta(0.0, pk) == 0.0);
    CHECK(eta(75.0, pk) == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(eta(1e12, pk) == pk.eta_max);

    PkPdParams low_cap = pk;
    low_cap.eta_max = 0.3;
    CHECK(eta(75.0, low_cap) == 0.3);
}

TEST_CASE("uncontrolled vector field on pinned states")
{
    const auto mp = fixtures::patient_a();
    const auto d0 = rhs_uncontrolled({4e8, 0.0, 0.31, 0.0}, mp);
    CHECK(d0[0] == doctest::Approx(-16.74).epsilon(1e-12));
    CHECK(d0[1] == doctest::Approx(16.74).epsilon(1e-12));
    CHECK(d0[2] == doctest::Approx(-0.744).epsilon(1e-12));

    // any point of the equilibrium set I = V = 0 is stationary
    for (double u : {0.0, 1.0, 4e8}) {
        const auto d = rhs_uncontrolled({u, 0.0, 0.0, 0.0}, mp);
        CHECK(d[0] == 0.0);
        CHECK(d[1] == 0.0);
        CHECK(d[2] == 0.0);
    }
}

TEST_CASE("controlled field reduces to the uncontrolled one without drug")
{
    const auto mp = fixtures::patient_a();
    const auto pk = fixtures::patient_a_pk();
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    for (int k = 0; k < 200; ++k) {
        HostState s{4e8 * unif(rng), 1e7 * unif(rng), 1e7 * unif(rng), 0.0};
        const auto a = rhs_uncontrolled(s, mp);
        const auto b = rhs_controlled(s, mp, pk);
        CHECK(b[0] == a[0]);
        CHECK(b[1] == a[1]);
        CHECK(b[2] == a[2]);
        CHECK(b[3] == 0.0);
    }
}

TEST_CASE("controlled field at half-maximal drug")
{
    const auto mp = fixtures::patient_a();
    const auto pk = fixtures::patient_a_pk();
    HostState s{4e8, 0.0, 0.31, 75.0};
    const auto d = rhs_controlled(s, mp, pk);
    CHECK(d[0] == doctest::Approx(-0.5 * 16.74).epsilon(1e-12));
    CHECK(d[3] == doctest::Approx(-2.0 * 75.0).epsilon(1e-14));
}

TEST_CASE("sign structure and positivity preservation")
{
    const auto mp = fixtures::patient_a();
    const auto pk = fixtures::potent_pk();
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    for (int k = 0; k < 500; ++k) {
        HostState s{5e8 * unif(rng), 2e8 * unif(rng), 2e7 * unif(rng), 100.0 * unif(rng)};
        const auto d = rhs_controlled(s, mp, pk);
        CHECK(d[0] <= 0.0); // U is non-increasing

        // a zero coordinate is never driven negative
        HostState z = s;
        z.u = 0.0;
        CHECK(rhs_controlled(z, mp, pk)[0] == 0.0);
        z = s;
        z.i = 0.0;
        CHECK(rhs_controlled(z, mp, pk)[1] >= 0.0);
        z = s;
        z.v = 0.0;
        CHECK(rhs_controlled(z, mp, pk)[2] >= 0.0);
        z = s;
        z.d = 0.0;
        CHECK(rhs_controlled(z, mp, pk)[3] == 0.0);

        const double e = eta(s.d, pk);
        CHECK(e >= 0.0);
        CHECK(e <= pk.eta_max);
    }
}

TEST_CASE("parameter validation and the clearance-separation flag")
{
    ModelParams bad = fixtures::patient_a();
    bad.beta = 0.0;
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);

    CHECK_FALSE(fixtures::patient_a().clearance_separation_weak()); // c/delta = 3.9
    ModelParams weak = fixtures::patient_a();
    weak.c = 0.9;
    CHECK(weak.clearance_separation_weak());

    PkPdParams pk = fixtures::patient_a_pk();
    pk.eta_max = 1.0;
    CHECK_THROWS_AS(pk.validate(), std::invalid_argument);
    pk = fixtures::patient_a_pk();
    pk.period_t = 0.0;
    CHECK_THROWS_AS(pk.validate(), std::invalid_argument);

    HostState neg{1.0, -0.5, 0.0, 0.0};
    CHECK_THROWS_AS(neg.validate(), std::invalid_argument);
}
