#include "support.hpp"

#include <doctest.h>

using namespace ilcbench;
using testing::kTs;

namespace {

// Step response of 1/(m s^2) + sum r/(s^2 + 2 z w s + w^2), from the textbook
// second-order formulas.
double analytic_step(double m, const std::vector<FlexibleMode>& modes, double t) {
    double y = t * t / (2.0 * m);
    for (const auto& md : modes) {
        const double w = md.natural_frequency, z = md.damping;
        const double wd = w * std::sqrt(1.0 - z * z);
        const double decay = std::exp(-z * w * t);
        y += md.residue / (w * w) * (1.0 - decay * (std::cos(wd * t) + z / std::sqrt(1.0 - z * z) * std::sin(wd * t)));
    }
    return y;
}

} // namespace

TEST_CASE("signal basics") {
    const Signal a({1.0, 2.0, 3.0}, kTs);
    CHECK(a.size() == 3);
    CHECK(a.norm2() == doctest::Approx(std::sqrt(14.0)));
    CHECK(a.max_abs() == 3.0);
    CHECK((a + a)[2] == 6.0);
    CHECK((a * -1.0)[0] == -1.0);

    CHECK_THROWS_AS(Signal({}, kTs), Error);
    CHECK_THROWS_AS(Signal({1.0}, 0.0), Error);
    CHECK_THROWS_AS(Signal({std::nan("")}, kTs), Error);

    const Signal other({1.0, 1.0, 1.0}, 2e-3);
    try {
        (void)(a + other);
        FAIL("expected an incompatibility error");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::Incompatible);
    }
}

TEST_CASE("modal plant") {
    SUBCASE("rigid body magnitude is 1/w^2") {
        const auto g = make_modal_plant(1.0);
        for (double w : {0.5, 3.0, 40.0}) CHECK(std::abs(g.evaluate({0.0, w})) == doctest::Approx(1.0 / (w * w)));
    }
    SUBCASE("flexible mode adds r/w^2 at DC") {
        const auto g = make_modal_plant(1.0, {{1.0, 0.05, 100.0}});
        const std::complex<double> s{0.0, 1e-3};
        const auto rigid = 1.0 / (s * s);
        CHECK(std::abs(g.evaluate(s) - rigid - 1e-4) < 1e-9);
    }
    SUBCASE("two modes match term-by-term evaluation") {
        const std::vector<FlexibleMode> modes{{0.3, 0.02, 150.0}, {-0.8, 0.1, 420.0}};
        const auto g = make_modal_plant(0.5, modes);
        for (int k = 0; k < 20; ++k) {
            const double w = 2.0 * std::pow(10.0, 0.15 * k);
            const std::complex<double> s{0.0, w};
            std::complex<double> ref = 1.0 / (0.5 * s * s);
            for (const auto& m : modes)
                ref += m.residue / (s * s + 2.0 * m.damping * m.natural_frequency * s + m.natural_frequency * m.natural_frequency);
            CHECK(std::abs(g.evaluate(s) - ref) <= 1e-12 * std::abs(ref));
        }
    }
    SUBCASE("invalid parameters") {
        CHECK_THROWS_AS(make_modal_plant(0.0), Error);
        CHECK_THROWS_AS(make_modal_plant(-1.0), Error);
        CHECK_THROWS_AS(make_modal_plant(1.0, {{1.0, 0.1, 0.0}}), Error);
        CHECK_THROWS_AS(make_modal_plant(1.0, {{1.0, 1.0, 10.0}}), Error);
    }
}

TEST_CASE("zero-order-hold discretization") {
    SUBCASE("double integrator closed form") {
        const auto g = discretize_zoh(make_modal_plant(1.0), kTs);
        // Ts^2 (z + 1) / (2 (z - 1)^2) = Ts^2/2 (q + q^2) / (1 - 2q + q^2)
        const double h = kTs * kTs / 2.0;
        REQUIRE(g.den().size() == 3);
        CHECK(g.den()[0] == doctest::Approx(1.0));
        CHECK(g.den()[1] == doctest::Approx(-2.0));
        CHECK(g.den()[2] == doctest::Approx(1.0));
        REQUIRE(g.num().size() == 3);
        CHECK(g.num()[0] == doctest::Approx(0.0));
        CHECK(g.num()[1] == doctest::Approx(h));
        CHECK(g.num()[2] == doctest::Approx(h));

        const auto y = simulate(g, Signal(std::vector<double>(200, 1.0), kTs));
        for (std::size_t k = 0; k < y.size(); ++k) {
            const double t = static_cast<double>(k) * kTs;
            CHECK(std::abs(y[k] - t * t / 2.0) <= 1e-9 * std::max(t * t / 2.0, 1e-12));
        }
    }
    SUBCASE("step response matches the analytic modal response") {
        const std::vector<FlexibleMode> modes{{-1.0, 0.15, 2.0 * M_PI * 60.0}, {0.4, 0.03, 2.0 * M_PI * 210.0}};
        const double m = 1.3;
        const auto g = discretize_zoh(make_modal_plant(m, modes), kTs);
        const auto y = simulate(g, Signal(std::vector<double>(500, 1.0), kTs));
        double worst = 0.0;
        for (std::size_t k = 1; k < y.size(); ++k) {
            const double ref = analytic_step(m, modes, static_cast<double>(k) * kTs);
            worst = std::max(worst, std::abs(y[k] - ref) / std::abs(ref));
        }
        CHECK(worst < 1e-9);
        CHECK(std::abs(make_modal_plant(m, modes).step_response(0.2) - analytic_step(m, modes, 0.2)) < 1e-12);
    }
    SUBCASE("rigid body alone is second order") { CHECK(discretize_zoh(make_modal_plant(2.0), kTs).den().size() == 3); }
    SUBCASE("mode above Nyquist") {
        try {
            (void)discretize_zoh(make_modal_plant(1.0, {{1.0, 0.1, 4000.0}}), kTs);
            FAIL("expected aliasing error");
        } catch (const Error& e) {
            CHECK(e.code() == ErrorCode::Aliasing);
        }
    }
}

TEST_CASE("simulate") {
    SUBCASE("pure delay") {
        const auto y = simulate(TransferFunction::delay(3, kTs), Signal::impulse(10, kTs));
        for (std::size_t k = 0; k < 10; ++k) CHECK(y[k] == (k == 3 ? 1.0 : 0.0));
    }
    SUBCASE("static gain") {
        const auto u = testing::random_signal(50, kTs, 1);
        CHECK(testing::max_abs_diff(simulate(TransferFunction::gain(2.5, kTs), u), u * 2.5) < 1e-15);
    }
    SUBCASE("random systems against the lifted matrix and a plain recursion") {
        std::mt19937_64 rng(7);
        for (int trial = 0; trial < 20; ++trial) {
            const std::size_t order = 1 + static_cast<std::size_t>(trial % 5);
            const auto sys = testing::random_stable_tf(rng, order, kTs);
            const std::size_t n = 64 + 8 * static_cast<std::size_t>(trial);
            const auto u = testing::random_signal(n, kTs, 100 + trial);
            const auto y = simulate(sys, u);
            const Eigen::VectorXd yl = lifted_matrix(sys, n).matrix * testing::to_vector(u);
            const auto yn = testing::naive_filter(sys.num(), sys.den(), u.values());
            for (std::size_t k = 0; k < n; ++k) {
                CHECK(std::abs(y[k] - yl(static_cast<Eigen::Index>(k))) < 1e-10);
                CHECK(std::abs(y[k] - yn[k]) < 1e-10);
            }
        }
    }
    SUBCASE("linearity") {
        std::mt19937_64 rng(11);
        const auto sys = testing::random_stable_tf(rng, 4, kTs);
        const auto u1 = testing::random_signal(300, kTs, 3), u2 = testing::random_signal(300, kTs, 4);
        const double a = 0.7, b = -2.3;
        const auto lhs = simulate(sys, u1 * a + u2 * b);
        const auto rhs = simulate(sys, u1) * a + simulate(sys, u2) * b;
        CHECK(testing::relative_diff(lhs, rhs) < 1e-10);
    }
    SUBCASE("sample time mismatch") {
        CHECK_THROWS_AS(simulate(TransferFunction::gain(1.0, kTs), Signal::zeros(4, 2e-3)), Error);
    }
    SUBCASE("overflow reports the first bad sample") {
        const TransferFunction unstable({1.0}, {1.0, -10.0}, kTs);
        try {
            (void)simulate(unstable, Signal::impulse(400, kTs));
            FAIL("expected overflow");
        } catch (const OverflowError& e) {
            CHECK(e.code() == ErrorCode::Overflow);
            CHECK(e.index() > 300);
            CHECK(e.index() < 400);
        }
    }
}

TEST_CASE("frequency response") {
    const auto grid = default_grid(kTs);
    CHECK(grid.size() == 400);
    CHECK(grid.front() == doctest::Approx(2.0 * M_PI));
    CHECK(grid.back() == doctest::Approx(M_PI / kTs));

    SUBCASE("delay") {
        const auto f = freq_response(TransferFunction::delay(1, kTs), grid);
        for (std::size_t k = 0; k < grid.size(); ++k) {
            CHECK(std::abs(f.value(k)) == doctest::Approx(1.0));
            CHECK(std::abs(f.value(k) - std::polar(1.0, -grid[k] * kTs)) < 1e-12);
        }
    }
    SUBCASE("gain") {
        const auto f = freq_response(TransferFunction::gain(3.0, kTs), grid);
        for (std::size_t k = 0; k < grid.size(); ++k) CHECK(std::abs(f.value(k) - 3.0) < 1e-14);
    }
    SUBCASE("out of range") {
        try {
            (void)freq_response(TransferFunction::gain(1.0, kTs), {1.0, 4000.0});
            FAIL("expected range error");
        } catch (const Error& e) {
            CHECK(e.code() == ErrorCode::Range);
        }
    }
    SUBCASE("printer loop against the DFT of its impulse response") {
        // The open-loop plant contains a double integrator; its loop maps are
        // the summable systems.
        const auto sc = default_printer_scenario();
        for (const auto* sys : {&sc.process_sensitivity(), &sc.sensitivity()}) {
            const std::size_t n = 20000;
            const auto h = simulate(*sys, Signal::impulse(n, kTs));
            const auto f = freq_response(*sys, grid);
            for (std::size_t k = 10; k + 10 < grid.size(); k += 13) {
                std::complex<double> acc = 0.0;
                for (std::size_t i = 0; i < n; ++i) acc += h[i] * std::polar(1.0, -grid[k] * kTs * static_cast<double>(i));
                CHECK(std::abs(acc - f.value(k)) <= 1e-6 * std::abs(f.value(k)));
            }
        }
    }
    SUBCASE("product of systems multiplies the responses") {
        std::mt19937_64 rng(5);
        const auto a = testing::random_stable_tf(rng, 3, kTs), b = testing::random_stable_tf(rng, 2, kTs);
        const auto fa = freq_response(a, grid), fb = freq_response(b, grid), fab = freq_response(a * b, grid);
        for (std::size_t k = 0; k < grid.size(); ++k)
            CHECK(std::abs(fab.value(k) - fa.value(k) * fb.value(k)) <= 1e-9 * std::max(1.0, std::abs(fab.value(k))));
    }
}

TEST_CASE("closed-loop maps") {
    SUBCASE("no feedback") {
        // open loop: the plant has to be stable on its own
        const TransferFunction g({0.0, 0.3, 0.1}, {1.0, -1.2, 0.5}, kTs);
        const auto cl = closed_loop_maps(g, TransferFunction::gain(0.0, kTs));
        const auto grid = log_grid(1.0, 3000.0, 30);
        for (double w : grid) {
            CHECK(std::abs(cl.sensitivity.evaluate(w) - 1.0) < 1e-12);
            CHECK(std::abs(cl.process_sensitivity.evaluate(w) - g.evaluate(w)) <= 1e-12 * std::abs(g.evaluate(w)));
        }
    }
    SUBCASE("unit loop halves the error") {
        const auto cl = closed_loop_maps(TransferFunction::gain(1.0, kTs), TransferFunction::gain(1.0, kTs));
        CHECK(std::abs(cl.sensitivity.evaluate(10.0) - 0.5) < 1e-15);
    }
    SUBCASE("loop algebra on the printer") {
        const auto sc = default_printer_scenario();
        const auto& g = sc.plant();
        const auto& k = sc.controller();
        // T = G K / (1 + G K) assembled from the raw polynomials
        const auto gk_num = poly::multiply(g.num(), k.num());
        const auto gk_den = poly::multiply(g.den(), k.den());
        const TransferFunction t(gk_num, poly::add(gk_den, gk_num), kTs);
        const auto r = testing::canonical_profile().position;
        const auto lhs = simulate(sc.sensitivity(), r);
        const auto rhs = r - simulate(t, r);
        CHECK(testing::max_abs_diff(lhs, rhs) < 1e-9);
    }
    SUBCASE("unstable loop lists its roots") {
        // proportional-only control of a double integrator
        const auto g = discretize_zoh(make_modal_plant(1.0), kTs);
        try {
            (void)closed_loop_maps(g, TransferFunction::gain(500.0, kTs));
            FAIL("expected instability");
        } catch (const InstabilityError& e) {
            CHECK(e.code() == ErrorCode::Instability);
            REQUIRE_FALSE(e.roots().empty());
            bool outside = false;
            for (const auto& z : e.roots()) outside = outside || std::abs(z) >= kStabilityRadius;
            CHECK(outside);
        }
    }
}

TEST_CASE("lifted matrices") {
    CHECK(lifted_matrix(TransferFunction::gain(1.0, kTs), 4).matrix.isApprox(Eigen::MatrixXd::Identity(4, 4)));
    Eigen::MatrixXd sub = Eigen::MatrixXd::Zero(3, 3);
    sub(1, 0) = sub(2, 1) = 1.0;
    CHECK(lifted_matrix(TransferFunction::delay(1, kTs), 3).matrix == sub);
    CHECK(lifted_matrix(NoncausalFilter::advance(1, kTs), 3).matrix == Eigen::MatrixXd(sub.transpose()));
    CHECK_THROWS_AS(lifted_matrix(TransferFunction::gain(1.0, kTs), 0), Error);

    const auto sc = default_printer_scenario();
    const auto j = lifted_matrix(sc.process_sensitivity(), 50);
    CHECK(j.matrix.isLowerTriangular());
    for (Eigen::Index i = 1; i < 50; ++i) CHECK(j.matrix(i, 1) == j.matrix(i - 1, 0));
}
