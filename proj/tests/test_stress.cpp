#include "oracles.hpp"

#include "larscp/error.hpp"
#include "larscp/stress.hpp"

#include <doctest.h>

#include <algorithm>
#include <cstring>

using namespace larscp;

namespace {

Dataset diabetes() { return load_csv(LARSCP_DATA_DIR "/diabetes.csv", "Y"); }

bool contains(const std::vector<std::string>& v, const std::string& s) {
    return std::find(v.begin(), v.end(), s) != v.end();
}

}  // namespace

TEST_CASE("round_augment on diabetes") {
    const Dataset d = diabetes();
    const Dataset aug = round_augment(d, 2.2, {"SEX"});
    CHECK(aug.cols() == 19);
    CHECK(!aug.has_column("rSEX"));
    CHECK(aug.predictor_names[10] == "rAGE");
    CHECK(std::memcmp(aug.X.leftCols(10).eval().data(), d.X.data(), sizeof(double) * 4420) == 0);
    const Index bp = d.column_index("BP");
    const Index rbp = aug.column_index("rBP");
    for (Index i = 0; i < d.rows(); ++i) CHECK(aug.X(i, rbp) == std::round(2.2 * d.X(i, bp)));
}

TEST_CASE("rounding is half away from zero") {
    const Matrix x{{7.0}, {-7.0}, {2.5}, {-2.5}, {0.0}};
    const Dataset d = make_dataset({"v"}, x, Vector{{1.0, 2.0, 3.0, 4.0, 5.0}});
    const Dataset aug = round_augment(d, 2.2, {});
    CHECK(aug.X(0, 1) == 15.0);
    CHECK(aug.X(1, 1) == -15.0);
    const Dataset unit = round_augment(d, 1.0, {});
    CHECK(unit.X(2, 1) == 3.0);
    CHECK(unit.X(3, 1) == -3.0);
}

TEST_CASE("round_augment errors") {
    const Dataset d = make_dataset({"a", "ra"}, oracle::seeded_normal(10, 2, 1), oracle::seeded_noise(10, 2));
    try {
        (void)round_augment(d, 2.2, {"ra"});
        FAIL("expected a collision");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::invalid_argument);
        CHECK(std::string(e.what()).find("ra") != std::string::npos);
    }
    CHECK_THROWS_AS(round_augment(d, 2.2, {"nope"}), Error);
    CHECK_THROWS_AS(round_augment(d, 0.0, {}), Error);
    CHECK_THROWS_AS(round_augment(d, std::nan(""), {}), Error);
}

TEST_CASE("identity rounding of an integer column is skipped as collinear") {
    Matrix x(30, 2);
    const Matrix z = oracle::seeded_normal(30, 2, 5);
    for (Index i = 0; i < 30; ++i) {
        x(i, 0) = std::round(10.0 * z(i, 0));
        x(i, 1) = z(i, 1);
    }
    const Vector y = 0.5 * x.col(0) + x.col(1) + oracle::seeded_noise(30, 6);
    const Dataset d = make_dataset({"k", "c"}, x, y);
    const Dataset aug = round_augment(d, 1.0, {"c"});
    CHECK(aug.X.col(2) == d.X.col(0));
    const StressReport r = run_round_stress(d, 1.0, {"c"});
    CHECK(std::any_of(r.flags.begin(), r.flags.end(),
                      [](const std::string& f) { return f.rfind("collinearity", 0) == 0; }));
    CHECK(!contains(r.perturbed[0].selection.selected, "rk"));
}

TEST_CASE("all predictors excluded leaves the selection unchanged") {
    const Dataset d = make_dataset(oracle::names(3), oracle::seeded_normal(25, 3, 7),
                                   oracle::seeded_noise(25, 8));
    const StressReport r = run_round_stress(d, 2.2, {"x1", "x2", "x3"});
    REQUIRE(r.overlap.size() == 1);
    CHECK(r.overlap[0].jaccard == 1.0);
    CHECK(r.baseline.selection.selected == r.perturbed[0].selection.selected);
}

TEST_CASE("huge factor makes a near-duplicate that is handled without a crash") {
    const Matrix x = oracle::seeded_normal(40, 3, 9);
    const Vector y = 5.0 * x.col(0) + 0.5 * oracle::seeded_noise(40, 10);
    const Dataset d = make_dataset(oracle::names(3), x, y);
    const StressReport r = run_round_stress(d, 1e9, {"x2", "x3"});
    const bool skip = std::any_of(r.flags.begin(), r.flags.end(),
                                  [](const std::string& f) { return f.rfind("collinearity", 0) == 0; });
    const bool cosel = std::any_of(r.flags.begin(), r.flags.end(), [](const std::string& f) {
        return f.rfind("original and rounded version co-selected", 0) == 0;
    });
    const bool rounded = std::any_of(r.flags.begin(), r.flags.end(), [](const std::string& f) {
        return f.rfind("rounded variable selected", 0) == 0;
    });
    CHECK((skip || cosel || rounded));
}

TEST_CASE("round stress on diabetes") {
    const StressReport r = run_round_stress(diabetes(), 2.2, {"SEX"});
    const auto& sel = r.perturbed[0].selection.selected;
    CHECK(sel == std::vector<std::string>{"BMI", "S5", "rBP", "rS3", "BP", "SEX", "S6", "S1"});
    CHECK(contains(r.flags, "original and rounded version co-selected: BP,rBP"));
    CHECK(r.overlap[0].jaccard >= 0.0);
    CHECK(r.overlap[0].jaccard <= 1.0);
}

TEST_CASE("compare_selections") {
    LabeledSelection a;
    LabeledSelection b;
    CHECK(compare_selections(a, b).jaccard == 1.0);
    a.selection.selected = {"x", "y", "z"};
    b.selection.selected = {"y", "z", "w"};
    const SelectionOverlap o = compare_selections(a, b);
    CHECK(o.intersection == 2);
    CHECK(o.jaccard == doctest::Approx(0.5));
}

TEST_CASE("scale-order audit") {
    SUBCASE("diabetes") {
        const StressReport r = scale_order_audit(diabetes(), {"SEX"});
        const auto& a = r.baseline;
        const auto& b = r.perturbed[0];
        const auto& c = r.perturbed[1];
        CHECK(a.selection.selected.size() == 15);
        CHECK(a.composition->main == 6);
        CHECK(a.composition->interaction == 6);
        CHECK(a.composition->quadratic == 3);
        CHECK(b.selection.selected.size() == 8);
        CHECK(b.composition->main == 2);
        CHECK(b.composition->interaction == 6);
        CHECK(r.overlap[0].intersection == 3);
        for (const auto& o : r.overlap) CHECK(o.jaccard < 1.0);
        CHECK(r.flags.size() >= 3);
        (void)c;
    }
    SUBCASE("one predictor with quadratics only agrees across A and B") {
        const Matrix x = oracle::seeded_normal(30, 1, 11).array() + 3.0;
        const Vector y = (x.col(0).array().square() + oracle::seeded_noise(30, 12).array()).matrix();
        const StressReport r = scale_order_audit(make_dataset({"u"}, x, y), {});
        CHECK(r.baseline.selection.selected.size() == r.perturbed[0].selection.selected.size());
        CHECK(r.overlap[0].jaccard == 1.0);
    }
    SUBCASE("too many expanded terms") {
        const Dataset d = make_dataset(oracle::names(4), oracle::seeded_normal(12, 4, 13),
                                       oracle::seeded_noise(12, 14));
        CHECK_THROWS_AS(scale_order_audit(d, {}), Error);
    }
}

TEST_CASE("tilting") {
    const Matrix x = oracle::seeded_normal(300, 2, 20);
    Matrix xc(300, 2);
    xc.col(0) = x.col(0);
    xc.col(1) = 0.6 * x.col(0) + 0.8 * x.col(1);
    const Dataset d = make_dataset({"a", "b"}, xc, oracle::seeded_noise(300, 21));

    const Vector w0 = tilt_weights(d, 0, 1, 0.0);
    CHECK((w0.array() == 1.0).all());
    for (double target : {-0.3, 0.0, 0.3, 0.8}) {
        const double theta = solve_tilt(d, 0, 1, target);
        const double got = weighted_correlation(d.X.col(0), d.X.col(1), tilt_weights(d, 0, 1, theta));
        CHECK(std::abs(got - target) <= 1e-9);
    }
    const double observed = weighted_correlation(d.X.col(0), d.X.col(1), w0);
    CHECK(solve_tilt(d, 0, 1, observed) == 0.0);
    try {
        (void)solve_tilt(d, 0, 1, -0.999999);
        FAIL("expected no_solution");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::no_solution);
        CHECK(std::string(e.what()).find("reachable range") != std::string::npos);
    }
}

TEST_CASE("weighted bootstrap") {
    Vector w = Vector::Zero(10);
    w(3) = 1.0;
    for (Index r : weighted_bootstrap(w, 5)) CHECK(r == 3);
    const auto a = weighted_bootstrap(Vector::Ones(50), 9);
    CHECK(a == weighted_bootstrap(Vector::Ones(50), 9));
    CHECK(a != weighted_bootstrap(Vector::Ones(50), 10));
    for (Index r : a) CHECK((r >= 0 && r < 50));
}

TEST_CASE("marginal shift null run is a plain bootstrap") {
    const Dataset d = diabetes();
    const Index j = d.column_index("S3");
    const Index k = d.column_index("S4");
    const double observed = weighted_correlation(d.X.col(j), d.X.col(k), Vector::Ones(d.rows()));
    const StabilityReport r = marginal_shift_stress(d, "S3", "S4", observed, 1, 1234);
    CHECK(std::abs(r.theta) <= 1e-6);

    const auto rows = weighted_bootstrap(Vector::Ones(d.rows()), 1234);
    Dataset resample = d;
    for (Index i = 0; i < d.rows(); ++i) {
        resample.X.row(i) = d.X.row(rows[static_cast<std::size_t>(i)]);
        resample.y(i) = d.y(rows[static_cast<std::size_t>(i)]);
    }
    CHECK(r.replicate_selections.at(0) == select_by_cp(lars_path(resample)).selected);
}

TEST_CASE("marginal shift null run ranks the baseline predictors first") {
    const Matrix x = oracle::seeded_normal(150, 5, 30);
    const Vector y = 2.0 * x.col(0) - 1.5 * x.col(1) + oracle::seeded_noise(150, 31);
    const Dataset d = make_dataset(oracle::names(5), x, y);
    const double observed = weighted_correlation(x.col(2), x.col(3), Vector::Ones(150));
    const StabilityReport r = marginal_shift_stress(d, "x3", "x4", observed, 100, 77);
    double lowest_in = 1.0;
    double highest_out = 0.0;
    for (const auto& [name, f] : r.selection_frequency) {
        CHECK((f >= 0.0 && f <= 1.0));
        if (contains(r.baseline_selection.selected, name)) lowest_in = std::min(lowest_in, f);
        else highest_out = std::max(highest_out, f);
    }
    CHECK(lowest_in > highest_out);
    CHECK(r.replicate_selections.size() == 100);
    CHECK(r.achieved_correlations.size() == 100);
}

TEST_CASE("marginal shift moves selection mass between near-duplicates" * doctest::test_suite("monte-carlo-examples")) {
    const Index n = 200;
    const Vector z = oracle::seeded_noise(n, 40);
    const Matrix e = oracle::seeded_normal(n, 3, 41);
    Matrix x(n, 3);
    x.col(0) = z + 0.23 * e.col(0);
    x.col(1) = z + 0.23 * e.col(1);
    x.col(2) = e.col(2);
    const Vector y = z + 1.5 * oracle::seeded_noise(n, 42);
    const Dataset d = make_dataset({"d1", "d2", "other"}, x, y);

    const StabilityReport r = marginal_shift_stress(d, "d1", "d2", 0.0, 200, 43);
    const double f1 = r.selection_frequency.at("d1");
    const double f2 = r.selection_frequency.at("d2");
    Index either = 0;
    for (const auto& sel : r.replicate_selections) either += contains(sel, "d1") || contains(sel, "d2");
    INFO("d1 " << f1 << ", d2 " << f2 << ", either " << static_cast<double>(either) / 200.0
               << ", theta " << r.theta << ", effective sample " << r.effective_sample_size);
    CHECK(f1 < 0.9);
    CHECK(f2 < 0.9);
    CHECK(static_cast<double>(either) / 200.0 >= 0.9);
}

TEST_CASE("marginal shift on diabetes S3 and S4" * doctest::test_suite("monte-carlo-examples")) {
    const Dataset d = diabetes();
    const Index j = d.column_index("S3");
    const Index k = d.column_index("S4");
    const double observed = weighted_correlation(d.X.col(j), d.X.col(k), Vector::Ones(d.rows()));
    const StabilityReport null_run = marginal_shift_stress(d, "S3", "S4", observed, 200, 20040201);
    const StabilityReport shifted = marginal_shift_stress(d, "S3", "S4", 0.0, 200, 20040201);
    CHECK(std::abs(shifted.tilted_corr) <= 0.02);
    const double diff = shifted.selection_frequency.at("S3") - null_run.selection_frequency.at("S3");
    const double se = std::hypot(shifted.frequency_standard_error.at("S3"),
                                 null_run.frequency_standard_error.at("S3"));
    INFO("S3 null " << null_run.selection_frequency.at("S3") << ", shifted "
                    << shifted.selection_frequency.at("S3") << ", S4 null "
                    << null_run.selection_frequency.at("S4") << ", shifted "
                    << shifted.selection_frequency.at("S4"));
    CHECK(std::abs(diff) > 3.0 * se);
}

TEST_CASE("marginal shift argument checks") {
    const Dataset d = diabetes();
    CHECK_THROWS_AS(marginal_shift_stress(d, "S3", "S3", 0.0, 10, 1), Error);
    CHECK_THROWS_AS(marginal_shift_stress(d, "S3", "S4", 1.0, 10, 1), Error);
    CHECK_THROWS_AS(marginal_shift_stress(d, "S3", "S4", 0.0, 0, 1), Error);
    CHECK_THROWS_AS(marginal_shift_stress(d, "S3", "nope", 0.0, 10, 1), Error);
}
