#include "support.hpp"

#include <doctest.h>

#include <Eigen/SVD>

using namespace ilcbench;
using testing::kTs;

namespace {

double worst_inverse_mismatch(const TransferFunction& g, const NoncausalFilter& L) {
    double worst = 0.0;
    for (double w : log_grid(1.0, M_PI / kTs, 300)) worst = std::max(worst, std::abs(g.evaluate(w) * L.evaluate(w) - 1.0));
    return worst;
}

std::vector<double> full_grid() { return log_grid(2.0 * M_PI, M_PI / kTs, 400); }

} // namespace

TEST_CASE("design_inverse_L") {
    SUBCASE("pure delay with gain") {
        const TransferFunction g({0.0, 0.0, 3.0}, {1.0}, kTs);
        const auto d = design_inverse_L(g, 10);
        CHECK(d.filter.preview() == 2);
        CHECK(d.filter.tap(-2) == doctest::Approx(1.0 / 3.0));
        CHECK(worst_inverse_mismatch(g, d.filter) < 1e-14);
    }
    SUBCASE("minimum phase first order") {
        const TransferFunction g({0.0, 0.5}, {1.0, -0.9}, kTs);
        const auto L = design_inverse_L(g, 10).filter;
        CHECK(L.preview() == 1);
        CHECK(L.tap(-1) == doctest::Approx(2.0));
        CHECK(L.tap(0) == doctest::Approx(-1.8));
        CHECK(worst_inverse_mismatch(g, L) < 1e-14);
    }
    SUBCASE("zero outside the circle is inverted anticausally") {
        // zero at z = -1.2
        const TransferFunction g({0.0, 1.0, 1.2}, {1.0, -0.5}, kTs);
        const auto d = design_inverse_L(g, 1000);
        CHECK(d.filter.preview() > 20);
        CHECK(d.truncation_bound < 1e-10);
        CHECK(worst_inverse_mismatch(g, d.filter) < 1e-9);

        // the lifted product is the identity away from both ends
        const auto x = testing::random_signal(600, kTs, 1);
        const auto y = apply_noncausal(d.filter, simulate(g, x));
        double interior = 0.0;
        for (std::size_t k = 10; k + d.filter.preview() + 10 < 600; ++k) interior = std::max(interior, std::abs(y[k] - x[k]));
        CHECK(interior < 1e-9);

        try {
            (void)design_inverse_L(g, 5);
            FAIL("budget was not enforced");
        } catch (const PreviewBudgetError& e) {
            CHECK(e.required() == d.filter.preview());
            CHECK(e.code() == ErrorCode::PreviewBudget);
        }
    }
    SUBCASE("random minimum and non-minimum phase models") {
        std::mt19937_64 rng(11);
        int done = 0;
        for (int trial = 0; trial < 40 && done < 15; ++trial) {
            const auto g = testing::random_stable_tf(rng, 3, kTs);
            bool on_circle = false;
            for (const auto& z : g.zeros()) on_circle = on_circle || std::abs(std::abs(z) - 1.0) < 0.05;
            if (on_circle || g.is_zero()) continue;
            ++done;
            CHECK(worst_inverse_mismatch(g, design_inverse_L(g, 5000).filter) < 1e-8);
        }
        CHECK(done == 15);
    }
    SUBCASE("unsupported models") {
        auto code_of = [](const TransferFunction& g) {
            try {
                (void)design_inverse_L(g, 100);
            } catch (const Error& e) {
                return e.code();
            }
            return ErrorCode::Io;
        };
        CHECK(code_of(TransferFunction({0.0, 1.0, 1.0}, {1.0}, kTs)) == ErrorCode::InversionSingularity);
        CHECK(code_of(TransferFunction({0.0, 1.0}, {1.0, -1.0}, kTs)) == ErrorCode::UnsupportedIntegrator);
        CHECK(code_of(TransferFunction({1.0, -1.0}, {1.0, -0.5}, kTs)) == ErrorCode::UnsupportedIntegrator);
    }
    SUBCASE("printer process sensitivity") {
        const auto gs = default_printer_scenario().process_sensitivity();
        CHECK(worst_inverse_mismatch(gs, design_inverse_L(gs, 2000).filter) < 1e-6);
    }
}

TEST_CASE("rigid-body learning filter") {
    const auto sc = default_printer_scenario();
    const auto L = rigid_body_learning_filter(1.0, sc.controller());
    CHECK(L.preview() == 1);
    // inverts the low-frequency (rigid) part of GS
    const double w = 2.0 * M_PI;
    CHECK(std::abs(1.0 - sc.process_sensitivity().evaluate(w) * L.evaluate(w)) < 0.01);
    // the belt mode pushes |1 - GS L| above one somewhere
    const auto grid = full_grid();
    const auto rep = check_convergence(freq_response(sc.process_sensitivity(), grid), L,
                                       NoncausalFilter::identity(kTs), full_mask(grid));
    CHECK_FALSE(rep.pass());
    CHECK_THROWS_AS(rigid_body_learning_filter(-1.0, sc.controller()), Error);
    CHECK_THROWS_AS(rigid_body_learning_filter(1.0, sc.sensitivity()), Error);
}

TEST_CASE("zero-phase magnitude") {
    const auto grid = full_grid();
    SUBCASE("identity") {
        const auto m = zero_phase_magnitude(NoncausalFilter::identity(kTs), grid);
        for (std::size_t k = 0; k < grid.size(); ++k) CHECK(std::abs(m.value(k) - 1.0) < 1e-15);
    }
    SUBCASE("two-tap average") {
        const auto m = zero_phase_magnitude(NoncausalFilter({0.5, 0.5}, 0, kTs), grid);
        for (std::size_t k = 0; k < grid.size(); ++k) {
            const double c = std::cos(grid[k] * kTs / 2.0);
            CHECK(std::abs(m.value(k) - c * c) < 1e-14);
        }
    }
    SUBCASE("random prototype") {
        const NoncausalFilter qt({0.1, -0.3, 0.7, 0.2, 0.05}, 2, kTs);
        const auto m = zero_phase_magnitude(qt, grid);
        for (std::size_t k = 0; k < grid.size(); ++k) {
            CHECK(std::abs(m.value(k).imag()) < 1e-14);
            CHECK(m.value(k).real() == doctest::Approx(std::norm(qt.evaluate(grid[k]))).epsilon(1e-12));
        }
    }
}

TEST_CASE("design_Q") {
    const auto sc = default_printer_scenario();
    const auto grid = full_grid();
    const auto frf = freq_response(sc.process_sensitivity(), grid);

    SUBCASE("an exact inverse needs no robustness filter") {
        const auto L = design_inverse_L(sc.process_sensitivity(), 2000).filter;
        const auto q = design_Q(frf, L, full_mask(grid));
        CHECK_FALSE(q.passband_edge.has_value());
        CHECK(q.filter.size() == 1);
        CHECK(q.sup_rho < 1e-5);
    }
    SUBCASE("the mismatched inverse gets a zero-phase lowpass") {
        const auto L = design_inverse_L(testing::mismatched_process_sensitivity(sc), 2000).filter;
        const auto q = design_Q(frf, L, full_mask(grid));
        REQUIRE(q.passband_edge.has_value());
        CHECK(q.sup_rho < 0.95);
        CHECK(q.margin == doctest::Approx(1.0 - q.sup_rho));
        CHECK(q.filter.is_symmetric(1e-14));
        CHECK(std::abs(q.filter.evaluate(grid.front()) - 1.0) < 1e-3);
        for (double w : grid) {
            const auto v = q.filter.evaluate(w);
            CHECK(std::abs(v.imag()) < 1e-10);
            CHECK(v.real() >= -1e-10);
            CHECK(v.real() <= 1.0 + 1e-10);
        }
        const auto rep = check_convergence(frf, L, q.filter, full_mask(grid));
        CHECK(rep.pass());
        CHECK(rep.sup_rho == doctest::Approx(q.sup_rho).epsilon(1e-9));
    }
    SUBCASE("the rigid-body filter can be made convergent") {
        const auto L = rigid_body_learning_filter(1.0, sc.controller());
        const auto q = design_Q(frf, L, full_mask(grid));
        CHECK(check_convergence(frf, L, q.filter, full_mask(grid)).pass());
    }
    SUBCASE("a sign error is infeasible") {
        const auto L = design_inverse_L(sc.process_sensitivity(), 2000).filter.scaled(-1.0);
        CHECK_THROWS_AS(design_Q(frf, L, full_mask(grid)), InfeasibleError);
    }
    SUBCASE("mask checks") {
        const auto L = NoncausalFilter::zero(kTs);
        CHECK_THROWS_AS(design_Q(frf, L, FrequencyMask(3, true)), Error);
        CHECK_THROWS_AS(design_Q(frf, L, FrequencyMask(grid.size(), false)), Error);
    }
}

TEST_CASE("check_convergence") {
    const auto sc = default_printer_scenario();
    const auto grid = full_grid();
    const auto frf = freq_response(sc.process_sensitivity(), grid);
    const NoncausalFilter q({0.25, 0.5, 0.25}, 1, kTs);

    SUBCASE("no learning leaves |Q|") {
        const auto rep = check_convergence(frf, NoncausalFilter::zero(kTs), q, full_mask(grid));
        for (std::size_t k = 0; k < grid.size(); ++k) CHECK(rep.rho[k] == doctest::Approx(std::abs(q.evaluate(grid[k]))));
    }
    SUBCASE("Q = 0 certifies trivially") {
        const auto rep = check_convergence(frf, NoncausalFilter::identity(kTs), NoncausalFilter::zero(kTs), full_mask(grid));
        CHECK(rep.sup_rho == 0.0);
        CHECK(rep.pass());
    }
    SUBCASE("points outside the mask are skipped") {
        const auto mask = band_mask(grid, 1.0, 20.0);
        const auto rep = check_convergence(frf, NoncausalFilter::zero(kTs), q, mask);
        for (std::size_t k = 0; k < grid.size(); ++k) CHECK(std::isnan(rep.rho[k]) == !mask[k]);
        CHECK(rep.omega_at_sup <= 2.0 * M_PI * 20.0);
    }
}

TEST_CASE("ilc_update") {
    const auto f = testing::random_signal(50, kTs, 1), e = testing::random_signal(50, kTs, 2);
    const auto id = NoncausalFilter::identity(kTs);
    CHECK(testing::max_abs_diff(ilc_update(f, e, id, id, 0.5), f + 0.5 * e) < 1e-15);
    CHECK(ilc_update(f, e, id, NoncausalFilter::zero(kTs)).max_abs() == 0.0);
    CHECK_THROWS_AS(ilc_update(f, e, id, id, 0.0), Error);
    CHECK_THROWS_AS(ilc_update(f, e, id, id, 1.5), Error);
    CHECK_THROWS_AS(ilc_update(f, Signal::zeros(49, kTs), id, id), Error);

    SUBCASE("matches the cascade away from the edges") {
        const NoncausalFilter L({1.0, -2.0, 0.5}, 1, kTs), Q({0.25, 0.5, 0.25}, 1, kTs);
        const auto cascade = apply_noncausal(Q, f + 0.7 * apply_noncausal(L, e));
        const auto merged = ilc_update(f, e, L, Q, 0.7);
        for (std::size_t k = 3; k + 3 < 50; ++k) CHECK(merged[k] == doctest::Approx(cascade[k]).epsilon(1e-12));
    }
}

TEST_CASE("run_ilc") {
    const auto r = testing::canonical_profile().position;

    SUBCASE("a pure delay is learned in one update") {
        const TransferFunction g({0.0, 0.0, 0.0, 1.0}, {1.0}, kTs);
        const Scenario sc(g, TransferFunction::gain(0.0, kTs), 0.0, 0.0, std::nullopt, 0);
        const auto h = run_ilc(sc, r, NoncausalFilter::advance(3, kTs), NoncausalFilter::identity(kTs), {.n_iter = 1});
        REQUIRE(h.tasks() == 2);
        CHECK(h.tail_margin == 3);
        CHECK(h.errors[1].max_abs() < 1e-15);
        CHECK_FALSE(h.diverged);
    }
    SUBCASE("divergence is flagged and stops the run") {
        const auto sc = default_printer_scenario().noise_free();
        const auto L = rigid_body_learning_filter(1.0, sc.controller());
        const auto h = run_ilc(sc, r, L, NoncausalFilter::identity(kTs), {.n_iter = 40});
        CHECK(h.diverged);
        REQUIRE(h.diverged_at.has_value());
        CHECK(h.tasks() == *h.diverged_at + 1);
        CHECK(h.error_norms.back() > 1e3 * h.error_norms.front());
        REQUIRE(h.first_rising.has_value());
        CHECK(*h.first_rising < *h.diverged_at);
    }
    SUBCASE("only the last signals are kept on request") {
        const auto sc = default_printer_scenario().noise_free();
        const auto L = design_inverse_L(sc.process_sensitivity(), 2000).filter;
        const auto h = run_ilc(sc, r, L, NoncausalFilter::identity(kTs), {.n_iter = 3, .keep_signals = false});
        CHECK(h.tasks() == 4);
        CHECK(h.errors.size() == 1);
        CHECK(h.error_norms.back() < 1e-6 * h.error_norms.front());
        // the tail window holds f at zero
        for (std::size_t k = r.size() - h.tail_margin; k < r.size(); ++k) CHECK(h.f_final[k] == 0.0);
    }
    SUBCASE("option checks") {
        const auto sc = default_printer_scenario();
        const auto id = NoncausalFilter::identity(kTs);
        CHECK_THROWS_AS(run_ilc(sc, r, id, id, {.alpha = 0.0}), Error);
        CHECK_THROWS_AS(run_ilc(sc, r, id, id, {.n_iter = 0}), Error);
        CHECK_THROWS_AS(run_ilc(sc, r, id, id, {.tail_margin = r.size()}), Error);
    }
}

TEST_CASE("asymptotic error") {
    const auto sc = default_printer_scenario().noise_free();
    const auto gs = sc.process_sensitivity();
    const auto e0 = simulate(sc.sensitivity(), testing::canonical_profile().position);
    const auto L = design_inverse_L(testing::mismatched_process_sensitivity(sc), 2000).filter;

    SUBCASE("Q = 0 keeps the initial error") {
        CHECK(testing::max_abs_diff(asymptotic_error(gs, L, NoncausalFilter::zero(kTs), e0), e0) < 1e-15);
        CHECK(asymptotic_feedforward(gs, L, NoncausalFilter::zero(kTs), e0).max_abs() < 1e-15);
    }
    SUBCASE("Q = 1 with a contracting learning filter removes all error") {
        const auto exact = design_inverse_L(gs, 2000).filter;
        CHECK(asymptotic_error(gs, exact, NoncausalFilter::identity(kTs), e0).max_abs() < 1e-8 * e0.max_abs());
    }
    SUBCASE("error and feedforward satisfy e = e0 - GS f") {
        const auto grid = full_grid();
        const auto Q = design_Q(freq_response(gs, grid), L, full_mask(grid)).filter;
        const auto e_inf = asymptotic_error(gs, L, Q, e0);
        const auto f_inf = asymptotic_feedforward(gs, L, Q, e0);
        const auto residual = e0 - simulate(gs, f_inf) - e_inf;
        // away from the end of the record, where f_inf is cut off
        double worst = 0.0;
        for (std::size_t k = 0; k + 300 < residual.size(); ++k) worst = std::max(worst, std::abs(residual[k]));
        CHECK(worst < 1e-7 * e0.max_abs());
    }
    SUBCASE("undefined when the loop gain reaches one") {
        const auto L0 = rigid_body_learning_filter(1.0, sc.controller());
        CHECK_THROWS_AS(asymptotic_error(gs, L0, NoncausalFilter::identity(kTs), e0), Error);
    }
}

TEST_CASE("lifted oracle") {
    SUBCASE("largest singular value against a full SVD") {
        std::mt19937_64 rng(5);
        std::normal_distribution<double> nd;
        for (int trial = 0; trial < 5; ++trial) {
            Eigen::MatrixXd a(60, 60);
            for (Eigen::Index i = 0; i < a.size(); ++i) a(i) = nd(rng);
            const double exact = Eigen::JacobiSVD<Eigen::MatrixXd>(a).singularValues()(0);
            CHECK(largest_singular_value(a) == doctest::Approx(exact).epsilon(1e-8));
        }
    }
    SUBCASE("explicit operators") {
        const std::size_t n = 80;
        const auto J = lifted_matrix(TransferFunction({0.0, 0.5}, {1.0, -0.9}, kTs), n);
        const LiftedOperator I{Eigen::MatrixXd::Identity(n, n), kTs}, Z{Eigen::MatrixXd::Zero(n, n), kTs};
        CHECK(lifted_contraction_oracle(J, Z, Z) == 0.0);
        CHECK(lifted_contraction_oracle(J, Z, I) == doctest::Approx(1.0).epsilon(1e-9));
        const auto L = lifted_matrix(NoncausalFilter({1.0, -1.0}, 0, kTs), n);
        const Eigen::MatrixXd full = I.matrix - L.matrix * J.matrix;
        const double exact = Eigen::JacobiSVD<Eigen::MatrixXd>(full).singularValues()(0);
        CHECK(lifted_contraction_oracle(J, L, I) == doctest::Approx(exact).epsilon(1e-8));
        Eigen::MatrixXd windowed = full;
        windowed.bottomRows(5).setZero();
        CHECK(lifted_contraction_oracle(J, L, I, 5) ==
              doctest::Approx(Eigen::JacobiSVD<Eigen::MatrixXd>(windowed).singularValues()(0)).epsilon(1e-8));
        CHECK_THROWS_AS(lifted_contraction_oracle(J, lifted_matrix(NoncausalFilter::identity(kTs), n - 1), I), Error);
    }
    SUBCASE("printer with the rigid-body filter and a designed Q") {
        const auto sc = default_printer_scenario();
        const auto L = rigid_body_learning_filter(1.0, sc.controller());
        const auto grid = full_grid();
        const auto frf = freq_response(sc.process_sensitivity(), grid);
        const auto q = design_Q(frf, L, full_mask(grid));
        const double sigma = lifted_contraction_oracle(sc, L, q.filter, 1500);
        CHECK(sigma < 1.0);
        CHECK(sigma == doctest::Approx(q.sup_rho).epsilon(0.05));
    }
}
