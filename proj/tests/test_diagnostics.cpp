#include "oracles.hpp"

#include "larscp/diagnostics.hpp"
#include "larscp/error.hpp"
#include "larscp/lars.hpp"

#include <doctest.h>

#include <cstring>

using namespace larscp;

namespace {

Dataset diabetes() { return load_csv(LARSCP_DATA_DIR "/diabetes.csv", "Y"); }

Dataset random_dataset(Index n, Index m, std::uint64_t seed, double noise = 1.5) {
    const Matrix x = oracle::seeded_normal(n, m, seed);
    Vector beta = Vector::LinSpaced(m, 2.0, -1.0);
    const Vector y = x * beta + noise * oracle::seeded_noise(n, seed + 1000);
    return make_dataset(oracle::names(m), x, y);
}

}  // namespace

TEST_CASE("full_model_info against an explicit projection") {
    const Matrix x{{1.0, 0.0}, {0.0, 1.0}, {1.0, 1.0}, {2.0, 0.5}, {-1.0, 3.0}};
    const Vector y{{1.0, 2.0, 2.5, 4.0, 0.0}};
    const FullModelInfo info = full_model_info(make_dataset({"a", "b"}, x, y));
    const Matrix p = oracle::explicit_projection(oracle::add_intercept(x));
    CHECK((info.hat_diagonals - p.diagonal()).cwiseAbs().maxCoeff() <= 1e-12);
    CHECK((info.y_hat - p * y).cwiseAbs().maxCoeff() <= 1e-12);
    CHECK(std::abs(info.sigma_hat_sq - (y - p * y).squaredNorm() / 2.0) <= 1e-12);
    CHECK(info.rank == 3);
}

TEST_CASE("diabetes hat diagonals sum to m + 1") {
    const FullModelInfo info = full_model_info(diabetes());
    CHECK(std::abs(info.hat_diagonals.sum() - 11.0) <= 1e-10);
    CHECK(info.hat_diagonals.minCoeff() > 0.0);
    CHECK(info.hat_diagonals.maxCoeff() < 1.0);
}

TEST_CASE("response in the column space gives zero sigma and cp_total refuses it") {
    const Matrix x = oracle::seeded_normal(10, 2, 3);
    const Vector y = (1.0 + 2.0 * x.col(0).array() - x.col(1).array()).matrix();
    const FullModelInfo info = full_model_info(make_dataset({"a", "b"}, x, y));
    CHECK(info.sigma_hat_sq <= 1e-20);
    try {
        (void)cp_total(y, 3.0, info);
        FAIL("expected an error");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::singular);
    }
}

TEST_CASE("full_model_info rank handling") {
    Matrix x = oracle::seeded_normal(12, 2, 4);
    Matrix dup(12, 3);
    dup << x, x.col(1);
    const Dataset d = make_dataset({"a", "b", "b2"}, dup, oracle::seeded_noise(12, 5));
    CHECK_THROWS_AS(full_model_info(d), Error);
    const FullModelInfo info = full_model_info(d, RankPolicy::allow_deficient);
    CHECK(info.rank == 3);
    CHECK(std::abs(info.hat_diagonals.sum() - 3.0) <= 1e-10);

    const Dataset tight = random_dataset(4, 3, 6);  // n - m - 1 = 0
    CHECK_THROWS_AS(full_model_info(tight), Error);
    CHECK(std::isnan(full_model_info(tight, RankPolicy::allow_deficient).sigma_hat_sq));
}

TEST_CASE("cp_total identities") {
    const Dataset d = random_dataset(30, 4, 11);
    const FullModelInfo info = full_model_info(d);
    // At the full fit Cp = m + 1.
    CHECK(std::abs(cp_total(info.y_hat, 5.0, info) - 5.0) <= 1e-9);
    // Direct formula.
    const Vector mu = Vector::Constant(30, d.y.mean());
    const double expected = (d.y - mu).squaredNorm() / info.sigma_hat_sq - 30.0 + 2.0;
    CHECK(std::abs(cp_total(mu, 1.0, info) - expected) <= 1e-9 * std::abs(expected));
}

TEST_CASE("case_cp decomposition") {
    const Dataset d = random_dataset(40, 5, 21);
    const LarsPath path = lars_path(d);
    const FullModelInfo& info = path.full_model;

    SUBCASE("records sum to the step Cp") {
        for (const LarsStep& s : path.steps) {
            const auto records = case_cp(s, info);
            REQUIRE(records.size() == 40);
            double total = 0.0;
            for (const auto& r : records) {
                total += r.c_pi;
                CHECK(std::abs(r.c_pi - (r.fit_term + r.cov_term - r.leverage_deficit)) <= 1e-12);
                CHECK(r.fit_term >= 0.0);
            }
            CHECK(std::abs(total - s.cp) <= 1e-8 * std::max(1.0, std::abs(s.cp)));
        }
    }
    SUBCASE("full-model step collapses to the hat diagonals") {
        const auto records = case_cp(path.steps.back(), info);
        for (const auto& r : records) {
            CHECK(std::abs(r.fit_term) <= 1e-12);
            CHECK(std::abs(r.c_pi - info.hat_diagonals(r.case_index)) <= 1e-10);
        }
    }
    SUBCASE("intercept-only step uses u_i = 1/n") {
        const auto records = case_cp(path.steps.front(), info);
        for (const auto& r : records) {
            const Index i = r.case_index;
            const double fit = std::pow(info.y_hat(i) - d.y.mean(), 2) / info.sigma_hat_sq;
            CHECK(std::abs(r.cov_term - 1.0 / 40.0) <= 1e-12);
            CHECK(std::abs(r.c_pi - (fit + 1.0 / 40.0 - (info.hat_diagonals(i) - 1.0 / 40.0))) <= 1e-10);
        }
    }
}

TEST_CASE("subset leverage is dominated by full leverage") {
    for (std::uint64_t seed = 100; seed < 120; ++seed) {
        const Dataset d = random_dataset(25, 6, seed);
        const LarsPath path = lars_path(d, LarsMode::lasso);
        for (const LarsStep& s : path.steps) {
            CHECK((s.subset_leverage.array() <= path.full_model.hat_diagonals.array() + 1e-10).all());
        }
        // Leverages grow along plain-path nesting.
        const LarsPath plain = lars_path(d);
        for (std::size_t k = 1; k < plain.steps.size(); ++k) {
            CHECK((plain.steps[k - 1].subset_leverage.array() <=
                   plain.steps[k].subset_leverage.array() + 1e-10).all());
        }
    }
}

TEST_CASE("simulate_cov") {
    SUBCASE("full-model step on an orthogonal design matches hat diagonals") {
        const Index n = 30;
        Matrix raw = oracle::seeded_normal(n, 3, 77);
        raw = raw.rowwise() - raw.colwise().mean();
        Eigen::HouseholderQR<Matrix> qr(raw);
        const Matrix x = qr.householderQ() * Matrix::Identity(n, 3);
        const Dataset d = make_dataset(oracle::names(3), x, x * Vector{{5.0, 3.0, 1.0}});
        CovSimulationConfig cfg;
        cfg.generator = NoiseGenerator::fixed_beta;
        cfg.beta = Vector{{5.0, 3.0, 1.0}};
        cfg.step_count = 3;
        cfg.replicates = 2000;
        const CovSimulation sim = simulate_cov(d, cfg);
        const Vector h = oracle::explicit_projection(oracle::add_intercept(x)).diagonal();
        CHECK(sim.used == 2000);
        CHECK(sim.excluded == 0);
        Index within = 0;
        for (Index i = 0; i < n; ++i) within += std::abs(sim.estimates(i) - h(i)) <= 3.0 * sim.standard_errors(i);
        CHECK(within >= 27);
        CHECK(sim.rng_algorithm == "mt19937_64+marsaglia-polar");
    }
    SUBCASE("same seed gives bit-identical estimates") {
        const Dataset d = random_dataset(20, 3, 31);
        CovSimulationConfig cfg;
        cfg.step_count = 2;
        cfg.replicates = 150;
        cfg.seed = 99;
        const CovSimulation a = simulate_cov(d, cfg);
        const CovSimulation b = simulate_cov(d, cfg);
        CHECK(std::memcmp(a.estimates.data(), b.estimates.data(), sizeof(double) * 20) == 0);
        cfg.seed = 100;
        const CovSimulation c = simulate_cov(d, cfg);
        CHECK((a.estimates - c.estimates).cwiseAbs().maxCoeff() > 0.0);
    }
    SUBCASE("step zero has covariance 1/n") {
        const Dataset d = random_dataset(20, 3, 32);
        CovSimulationConfig cfg;
        cfg.step_count = 0;
        cfg.replicates = 4000;
        const CovSimulation sim = simulate_cov(d, cfg);
        Index within = 0;
        for (Index i = 0; i < 20; ++i) within += std::abs(sim.estimates(i) - 0.05) <= 3.0 * sim.standard_errors(i);
        CHECK(within >= 18);
    }
    SUBCASE("vanishing noise with a strong signal tracks the noiseless u_i in total") {
        const Dataset d = random_dataset(40, 4, 36, 0.0);
        CovSimulationConfig cfg;
        cfg.generator = NoiseGenerator::fixed_beta;
        cfg.beta = Vector::LinSpaced(4, 2.0, -1.0);
        cfg.noise_sd = 1e-4;
        cfg.step_count = 2;
        cfg.replicates = 2000;
        const CovSimulation sim = simulate_cov(d, cfg);
        const LarsStep noiseless = lars_path(d, LarsMode::plain, 2).steps[2];
        const double gap = sim.estimates.sum() - noiseless.subset_leverage.sum();
        CHECK(std::abs(gap) <= 3.0 * sim.standard_errors.norm());
        CHECK(sim.estimates.minCoeff() > -0.05);
    }
    SUBCASE("paths that stop early are excluded and too many exclusions fail") {
        Matrix x = oracle::seeded_normal(20, 2, 33);
        Matrix dup(20, 3);
        dup << x, x.col(0);
        const Dataset d = make_dataset({"a", "b", "a2"}, dup, oracle::seeded_noise(20, 34));
        CovSimulationConfig cfg;
        cfg.generator = NoiseGenerator::fixed_beta;
        cfg.beta = Vector{{1.0, 1.0, 0.0}};
        cfg.step_count = 3;
        cfg.replicates = 100;
        try {
            (void)simulate_cov(d, cfg);
            FAIL("expected an error");
        } catch (const Error& e) {
            CHECK(e.kind() == ErrorKind::no_solution);
        }
    }
    SUBCASE("argument checks") {
        const Dataset d = random_dataset(20, 3, 35);
        CovSimulationConfig cfg;
        cfg.replicates = 99;
        CHECK_THROWS_AS(simulate_cov(d, cfg), Error);
        cfg.replicates = 100;
        cfg.noise_sd = 0.0;
        CHECK_THROWS_AS(simulate_cov(d, cfg), Error);
        cfg.noise_sd = 1.0;
        cfg.generator = NoiseGenerator::fixed_beta;
        cfg.beta = Vector::Ones(2);
        CHECK_THROWS_AS(simulate_cov(d, cfg), Error);
    }
}
