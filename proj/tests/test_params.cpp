#include <doctest.h>

#include "nanocool/errors.hpp"
#include "nanocool/params.hpp"
#include "test_util.hpp"

using namespace nanocool;

TEST_CASE("validate accepts the example nanosphere set") {
    SystemParams p = testutil::base_params();
    CHECK(p.omega_laser == doctest::Approx(consts::c_light * 3e6).epsilon(1e-15));
    CHECK_NOTHROW(validate(p));
}

TEST_CASE("validate rejects boundary violations") {
    SystemParams p = testutil::base_params();

    SUBCASE("zero mass") {
        p.mass = 0.0;
        CHECK_THROWS_WITH_AS(validate(p), doctest::Contains("mass_kg"), SimError);
    }
    SUBCASE("cos out of range") {
        p.cos_2k1x0 = 1.5;
        CHECK_THROWS_WITH_AS(validate(p), doctest::Contains("cos2k1x0"), SimError);
    }
    SUBCASE("negative mu") {
        p.mu = -1.0;
        CHECK_THROWS_AS(validate(p), SimError);
    }
    SUBCASE("negative temperature") {
        p.temperature = -1.0;
        CHECK_THROWS_AS(validate(p), SimError);
    }
    SUBCASE("kappa_ex1_fraction above one") {
        p.kappa_ex1_fraction = 1.01;
        CHECK_THROWS_AS(validate(p), SimError);
    }
}

TEST_CASE("drive strength") {
    SystemParams p = testutil::base_params();

    SUBCASE("zero power gives zero drive") {
        p.power = 0.0;
        CHECK(drive_strength(validate(p)).e == 0.0);
    }

    SUBCASE("scales as sqrt(P)") {
        const double e1 = drive_strength(p).e;
        p.power *= 2.0;
        const double e2 = drive_strength(validate(p)).e;
        CHECK(e2 / e1 == doctest::Approx(std::sqrt(2.0)).epsilon(1e-14));
    }

    SUBCASE("scales as sqrt(kappa_ex1)") {
        const double e1 = drive_strength(p).e;
        p.kappa_ex1_fraction = 1.0;
        const double e2 = drive_strength(validate(p)).e;
        CHECK(e2 / e1 == doctest::Approx(std::sqrt(2.0)).epsilon(1e-14));
    }

    SUBCASE("matches the defining expression") {
        const double expected =
            std::sqrt(0.5 * p.kappa1 * p.power / (consts::hbar * consts::c_light * p.k1));
        CHECK(drive_strength(p).e == doctest::Approx(expected).epsilon(1e-14));
    }
}

TEST_CASE("derived detunings satisfy delta2 - delta_tilde1 = d") {
    SystemParams p = testutil::base_params();
    for (double d : {-3e6, -1.0, 0.0, 2.5e5, 1.9e6}) {
        p.d = d;
        CHECK(p.delta2() - p.delta_tilde1 == d);
    }
}
