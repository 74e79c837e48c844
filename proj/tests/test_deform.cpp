#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "doctest.h"
#include "kdvsol/deform.hpp"
#include "kdvsol/errors.hpp"

using kdv::DeformationSpec;

namespace {

// Closed form of the one-step deformed potential at h = 1, v = [2].
double closed_form_h1_v2(double x) {
    const double c2 = std::cosh(x) * std::cosh(x);
    const double c4 = c2 * c2;
    return -30.0 * (4.0 * c4 - 8.0 * c2 + 5.0) / (c2 * (36.0 * c4 - 60.0 * c2 + 25.0));
}

// Closed form of the one-step deformed potential at h = 2, v = [2].
double closed_form_h2_v2(double x) {
    const double c2 = std::cosh(x) * std::cosh(x);
    const double c4 = c2 * c2;
    return -4.0 * (144.0 * c4 - 280.0 * c2 + 147.0) / (c2 * (64.0 * c4 - 112.0 * c2 + 49.0));
}

void check_schroedinger(const kdv::HyperbolicFunction& f, double h, double energy) {
    const kdv::HyperbolicFunction f2 = f.derivative().derivative();
    for (double x = -5.0; x <= 5.0 + 1e-12; x += 0.5) {
        const double lhs = -f2(x) + kdv::soliton_potential(h, x) * f(x);
        const double rhs = energy * f(x);
        const double scale = std::max(1.0, std::fabs(rhs));
        CHECK(std::fabs(lhs - rhs) <= 1e-8 * scale);
    }
}

} // namespace

TEST_SUITE("deform") {

TEST_CASE("spec validation") {
    CHECK_NOTHROW(DeformationSpec{1, {2}}.validate());
    CHECK_NOTHROW(DeformationSpec{0, {2, 5}}.validate());
    CHECK_NOTHROW(DeformationSpec{3, {}}.validate());
    CHECK_THROWS_AS(DeformationSpec({-1, {2}}).validate(), std::invalid_argument);
    CHECK_THROWS_AS(DeformationSpec({1, {2, 2}}).validate(), std::invalid_argument);
    CHECK_THROWS_AS(DeformationSpec({1, {5, 2}}).validate(), std::invalid_argument);
    CHECK_THROWS_AS(DeformationSpec({1, {-1}}).validate(), std::invalid_argument);

    const DeformationSpec spec{2, {2, 5}};
    CHECK(spec.M() == 2);
    CHECK(spec.N() == 4);
}

TEST_CASE("soliton potential closed values") {
    CHECK(kdv::soliton_potential(1.0, 0.0) == doctest::Approx(-2.0).epsilon(1e-15));
    CHECK(kdv::soliton_potential(2.0, 0.0) == doctest::Approx(-6.0).epsilon(1e-15));
    const double tail = -2.0 / (std::cosh(10.0) * std::cosh(10.0));
    CHECK(kdv::soliton_potential(1.0, 10.0) == doctest::Approx(tail).epsilon(1e-14));
    for (double x : {-3.0, 0.0, 1.7}) CHECK(kdv::soliton_potential(0.0, x) == 0.0);
    CHECK(kdv::soliton_potential(0.5, 0.0) == doctest::Approx(-0.75).epsilon(1e-15));
}

TEST_CASE("ground-state eigenfunctions") {
    for (double x : {-2.5, -1.0, 0.0, 0.8, 3.0}) {
        CHECK(kdv::eigenfunction(1, 0, x) ==
              doctest::Approx(1.0 / std::cosh(x)).epsilon(1e-14));
    }
    CHECK(kdv::eigenfunction(1, 0, 0.0) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(kdv::eigenfunction(2, 0, 0.0) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(kdv::eigenfunction(1, 0, 0.0, 1) == doctest::Approx(0.0));
}

TEST_CASE("eigenfunction level bounds") {
    CHECK_THROWS_AS(kdv::eigenfunction(1, 1, 0.0), std::out_of_range);
    CHECK_THROWS_AS(kdv::eigenfunction(1, -1, 0.0), std::out_of_range);
    CHECK_THROWS_AS(kdv::eigenfunction(0, 0, 0.0), std::out_of_range);
    CHECK_NOTHROW(kdv::eigenfunction(2, 1, 0.3));
    try {
        kdv::eigenfunction(1, 1, 0.0);
        FAIL("expected an out-of-range error");
    } catch (const std::out_of_range& e) {
        CHECK(std::string(e.what()).find("level out of range") != std::string::npos);
    }
}

TEST_CASE("seed values at the origin and beyond") {
    CHECK(kdv::seed_function(1, 2, 0.0) == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(kdv::seed_function(1, 2, 0.0, 1) == doctest::Approx(0.0));
    const double c1 = std::cosh(1.0), t1 = std::tanh(1.0);
    const double want = 0.5 * c1 * c1 * c1 * c1 * (1.0 + 5.0 * t1 * t1);
    CHECK(kdv::seed_function(1, 2, 1.0) == doctest::Approx(want).epsilon(1e-14));
    // h = 0, v = 0: the seed degenerates to cosh x.
    for (double x : {-1.5, 0.0, 2.0}) {
        CHECK(kdv::seed_function(0, 0, x) == doctest::Approx(std::cosh(x)).epsilon(1e-14));
    }
}

TEST_CASE("seed energies") {
    CHECK(kdv::seed_energy(1, 2) == -16.0);
    CHECK(kdv::seed_energy(0, 0) == -1.0);
    CHECK(kdv::seed_energy(2, 2) == -25.0);
}

TEST_CASE("seeds satisfy the Schroedinger equation") {
    const int cases[][2] = {{1, 2}, {2, 2}, {1, 5}, {0, 5}, {2, 4}, {3, 6}};
    for (const auto& hv : cases) {
        const int h = hv[0], v = hv[1];
        check_schroedinger(kdv::seed_profile(h, v), h, kdv::seed_energy(h, v));
    }
}

TEST_CASE("eigenfunctions satisfy the Schroedinger equation") {
    const int cases[][2] = {{1, 0}, {2, 0}, {2, 1}, {4, 2}};
    for (const auto& hn : cases) {
        const int h = hn[0], n = hn[1];
        const double energy = -static_cast<double>((h - n) * (h - n));
        check_schroedinger(kdv::eigen_profile(h, n), h, energy);
    }
}

TEST_CASE("single-seed wronskian is the seed itself") {
    for (int order = 0; order <= 2; ++order) {
        for (double x : {-2.0, -0.3, 0.0, 1.1, 4.0}) {
            const double w = kdv::wronskian(1, {2}, x, order);
            const double s = kdv::seed_function(1, 2, x, order);
            CHECK(w == doctest::Approx(s).epsilon(1e-13));
        }
    }
    CHECK(kdv::wronskian(1, {2}, 0.0) == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(kdv::wronskian(1, {2}, 0.0, 1) == doctest::Approx(0.0));
}

TEST_CASE("two-seed wronskian at the origin") {
    // phi_2 is even and phi_5 is odd, so W(0) collapses to phi_2(0) phi_5'(0).
    const double direct = kdv::wronskian(1, {2, 5}, 0.0);
    const double product = kdv::seed_function(1, 2, 0.0) * kdv::seed_function(1, 5, 0.0, 1);
    CHECK(direct == doctest::Approx(product).epsilon(1e-14));
    CHECK(direct == doctest::Approx(-0.375).epsilon(1e-14));
}

TEST_CASE("deformed potential golden origin values") {
    CHECK(kdv::deformed_potential({1, {2}}, 0.0) == doctest::Approx(-30.0).epsilon(1e-13));
    CHECK(kdv::deformed_potential({2, {2}}, 0.0) == doctest::Approx(-44.0).epsilon(1e-13));
    const double gap = kdv::deformed_potential({1, {2}}, 0.0) - kdv::soliton_potential(1.0, 0.0);
    CHECK(gap == doctest::Approx(-28.0).epsilon(1e-13));
    CHECK(std::fabs(kdv::deformed_potential({1, {2}}, 25.0)) < 1e-12);
    CHECK(std::fabs(kdv::deformed_potential({1, {2}}, -25.0)) < 1e-12);
}

TEST_CASE("one-step closed forms over the core domain") {
    for (int i = 0; i <= 400; ++i) {
        const double x = -10.0 + i * 0.05;
        CHECK(std::fabs(kdv::deformed_potential({1, {2}}, x) - closed_form_h1_v2(x)) <= 1e-10);
        CHECK(std::fabs(kdv::deformed_potential({2, {2}}, x) - closed_form_h2_v2(x)) <= 1e-10);
    }
}

TEST_CASE("deformed potentials are even") {
    const std::vector<DeformationSpec> specs = {{1, {2}}, {2, {2}}, {1, {2, 5}}, {0, {2, 5}}};
    for (const auto& spec : specs) {
        for (double x = 0.25; x <= 8.0; x += 0.25) {
            const double plus = kdv::deformed_potential(spec, x);
            const double minus = kdv::deformed_potential(spec, -x);
            CHECK(std::fabs(plus - minus) < 1e-12);
        }
    }
}

TEST_CASE("odd seed produces the singular shifted potential") {
    // For v = 1 the deformation adds -2(h+1)/cosh^2 x + 2/sinh^2 x, with a
    // pole at the origin; pointwise evaluation away from x = 0 still works.
    for (double x = 0.3; x <= 5.0 + 1e-12; x += 0.1) {
        const double got = kdv::deformed_potential({1, {1}}, x) - kdv::soliton_potential(1.0, x);
        const double ch = std::cosh(x), sh = std::sinh(x);
        const double want = -4.0 / (ch * ch) + 2.0 / (sh * sh);
        CHECK(std::fabs(got - want) <= 1e-8 * std::max(1.0, std::fabs(want)));
    }
}

TEST_CASE("wronskian node raises an error") {
    CHECK_THROWS_AS(kdv::deformed_potential({1, {1}}, 0.0), kdv::WronskianZero);
}

TEST_CASE("admissibility fixtures") {
    CHECK(kdv::check_nodeless({1, {2}}).admissible);
    CHECK(kdv::check_nodeless({2, {2}}).admissible);
    CHECK(kdv::check_nodeless({2, {4}}).admissible);
    CHECK(kdv::check_nodeless({2, {6}}).admissible);
    CHECK(kdv::check_nodeless({1, {2, 5}}).admissible);
    CHECK(kdv::check_nodeless({1, {2, 7}}).admissible);
    CHECK(kdv::check_nodeless({1, {4, 7}}).admissible);
    CHECK(kdv::check_nodeless({0, {2, 5}}).admissible);

    const kdv::AdmissibilityReport odd = kdv::check_nodeless({1, {1}});
    CHECK_FALSE(odd.admissible);
    CHECK(odd.node_at_origin);
    CHECK(odd.message.find("node bracketing x=0") != std::string::npos);

    const kdv::AdmissibilityReport even_gap = kdv::check_nodeless({1, {2, 4}});
    CHECK_FALSE(even_gap.admissible);
}

TEST_CASE("admissibility scan preconditions") {
    CHECK_THROWS_AS(kdv::check_nodeless({1, {2}}, 10.0, 20001), std::invalid_argument);
    CHECK_THROWS_AS(kdv::check_nodeless({1, {2}}, 25.0, 100), std::invalid_argument);
}

TEST_CASE("potential models evaluate their sources") {
    const kdv::PotentialModel plain = kdv::PotentialModel::soliton(1.0);
    CHECK_FALSE(plain.is_deformed());
    CHECK(plain.spec() == nullptr);
    CHECK(plain.strength() == 1.0);
    CHECK_FALSE(plain.name().empty());
    CHECK(plain(0.7) == doctest::Approx(kdv::soliton_potential(1.0, 0.7)).epsilon(1e-15));

    const DeformationSpec spec{1, {2}};
    const kdv::PotentialModel model = kdv::PotentialModel::deformed(spec);
    CHECK(model.is_deformed());
    REQUIRE(model.spec() != nullptr);
    CHECK(model.spec()->h == 1);
    CHECK(model(1.3) == doctest::Approx(kdv::deformed_potential(spec, 1.3)).epsilon(1e-13));

    const std::vector<kdv::PotentialModel> models = {
        kdv::PotentialModel::soliton(1.0), kdv::PotentialModel::soliton(2.0),
        kdv::PotentialModel::deformed({1, {2}}), kdv::PotentialModel::deformed({2, {2}}),
        kdv::PotentialModel::deformed({1, {2, 5}}), kdv::PotentialModel::deformed({0, {2, 5}})};
    for (const auto& m : models) {
        CHECK(std::fabs(m(25.0)) < 1e-15);
        CHECK(std::fabs(m(-25.0)) < 1e-15);
    }
}

TEST_CASE("hyperbolic family closure under differentiation") {
    const kdv::HyperbolicFunction f = kdv::seed_profile(1, 2);
    CHECK(f.alpha == doctest::Approx(4.0));
    CHECK(f(0.0) == doctest::Approx(0.5).epsilon(1e-15));

    const kdv::HyperbolicFunction df = f.derivative();
    const double step = 1e-6;
    const double fd = (f(0.7 + step) - f(0.7 - step)) / (2.0 * step);
    CHECK(df(0.7) == doctest::Approx(fd).epsilon(1e-8));

    CHECK(std::exp(f.log_abs(1.3)) == doctest::Approx(std::fabs(f(1.3))).epsilon(1e-12));
}

TEST_CASE("split wronskian cross-checks the direct evaluation") {
    const std::vector<kdv::HyperbolicFunction> seeds = {kdv::seed_profile(1, 2),
                                                        kdv::seed_profile(1, 5)};
    const kdv::SplitWronskian split(seeds);
    for (double x : {0.5, 1.5, 3.0, -2.2}) {
        const double w = kdv::wronskian(1, {2, 5}, x);
        CHECK(split.value(x) == doctest::Approx(w).epsilon(1e-12));

        const double w1 = kdv::wronskian(1, {2, 5}, x, 1);
        const double w2 = kdv::wronskian(1, {2, 5}, x, 2);
        const double direct = (w2 * w - w1 * w1) / (w * w);
        CHECK(split.d2_log(x) == doctest::Approx(direct).epsilon(1e-10));
    }
    CHECK(kdv::SplitWronskian({}).value(0.3) == doctest::Approx(1.0));
}

} // TEST_SUITE("deform")
