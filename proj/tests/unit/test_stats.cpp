#include <doctest.h>

#include <boost/math/distributions/beta.hpp>
#include <boost/math/distributions/fisher_f.hpp>
#include <boost/math/distributions/non_central_f.hpp>
#include <boost/math/distributions/students_t.hpp>
#include <cmath>
#include <random>

#include "botsim/errors.hpp"
#include "botsim/stats/distributions.hpp"
#include "botsim/stats/power.hpp"
#include "botsim/stats/regression.hpp"
#include "botsim/stats/surface.hpp"

using namespace botsim;
using namespace botsim::stats;

TEST_CASE("incomplete beta against boost") {
    for (double a : {0.5, 1.0, 2.5, 10.0, 60.0})
        for (double b : {0.5, 3.0, 15.0, 200.0})
            for (double x : {0.0, 0.01, 0.2, 0.5, 0.77, 0.99, 1.0}) {
                const double expected = boost::math::ibeta(a, b, x);
                CHECK(regularized_beta(a, b, x) == doctest::Approx(expected).epsilon(1e-11));
            }
    CHECK(inverse_regularized_beta(2.5, 3.0, regularized_beta(2.5, 3.0, 0.3)) == doctest::Approx(0.3).epsilon(1e-9));
}

TEST_CASE("t and F against boost") {
    for (double df : {1.0, 4.0, 30.0})
        for (double t : {-3.0, -0.5, 0.0, 1.2, 5.0}) {
            const boost::math::students_t dist(df);
            CHECK(student_t_cdf(t, df) == doctest::Approx(boost::math::cdf(dist, t)).epsilon(1e-11));
            CHECK(student_t_two_sided_p(t, df) ==
                  doctest::Approx(2 * boost::math::cdf(boost::math::complement(dist, std::abs(t)))).epsilon(1e-10));
        }
    for (double d1 : {1.0, 3.0, 9.0})
        for (double d2 : {2.0, 10.0, 57.0})
            for (double x : {0.1, 1.0, 2.7, 8.0}) {
                const boost::math::fisher_f dist(d1, d2);
                CHECK(f_cdf(x, d1, d2) == doctest::Approx(boost::math::cdf(dist, x)).epsilon(1e-11));
                CHECK(f_sf(x, d1, d2) ==
                      doctest::Approx(boost::math::cdf(boost::math::complement(dist, x))).epsilon(1e-10));
            }
    CHECK(f_quantile(0.95, 2, 27) == doctest::Approx(3.3541308).epsilon(1e-7));
}

TEST_CASE("noncentral F") {
    SUBCASE("lambda 0 reduces to the central F") {
        for (double x : {0.2, 1.0, 3.3, 12.0}) CHECK(std::abs(noncentral_f_cdf(x, 3, 12, 0) - f_cdf(x, 3, 12)) < 1e-10);
    }
    SUBCASE("agrees with boost") {
        for (double lambda : {0.5, 5.0, 40.0, 300.0})
            for (double x : {0.5, 2.0, 6.0}) {
                const boost::math::non_central_f dist(4, 20, lambda);
                CHECK(noncentral_f_cdf(x, 4, 20, lambda) == doctest::Approx(boost::math::cdf(dist, x)).epsilon(1e-9));
            }
    }
    SUBCASE("monotone in x, tends to 1") {
        double prev = 0;
        for (double x = 0; x < 200; x += 0.5) {
            const double c = noncentral_f_cdf(x, 9, 10, 5);
            CHECK(c >= prev - 1e-15);
            prev = c;
        }
        CHECK(prev > 0.999);
    }
    SUBCASE("Monte Carlo oracle at (2, 9, 10, 5)") {
        std::mt19937_64 gen(12345);
        std::normal_distribution<double> z;
        const int samples = 1'000'000;
        const double shift = std::sqrt(5.0);
        int hits = 0;
        for (int s = 0; s < samples; ++s) {
            double num = std::pow(z(gen) + shift, 2);
            for (int i = 1; i < 9; ++i) num += std::pow(z(gen), 2);
            double den = 0;
            for (int i = 0; i < 10; ++i) den += std::pow(z(gen), 2);
            hits += (num / 9) / (den / 10) <= 2.0;
        }
        const double p_hat = static_cast<double>(hits) / samples;
        const double exact = noncentral_f_cdf(2, 9, 10, 5);
        CHECK(std::abs(p_hat - exact) < 3 * std::sqrt(exact * (1 - exact) / samples));
    }
}

TEST_CASE("ols exact line") {
    std::vector<std::vector<double>> x{{0}, {1}, {2}, {3}};
    std::vector<double> y{1, 3, 5, 7};
    const auto fit = ols_fit(x, y);
    CHECK(fit.names == std::vector<std::string>{"Intercept", "x1"});
    CHECK(fit.coefficients[0] == doctest::Approx(1).epsilon(1e-12));
    CHECK(fit.coefficients[1] == doctest::Approx(2).epsilon(1e-12));
    CHECK(std::abs(fit.r_squared - 1) < 1e-10);
}

TEST_CASE("ols constant response") {
    std::vector<std::vector<double>> x{{0}, {1}, {2}, {3}};
    std::vector<double> y{4, 4, 4, 4};
    const auto fit = ols_fit(x, y);
    CHECK(std::abs(fit.coefficients[1]) < 1e-12);
    CHECK(fit.r_squared == 0.0);
}

TEST_CASE("ols recovers noiseless multivariate coefficients") {
    std::mt19937_64 gen(3);
    std::uniform_real_distribution<double> u(-2, 2);
    const std::vector<double> beta{0.7, -1.3, 4.0, 2.25};
    std::vector<std::vector<double>> x;
    std::vector<double> y;
    for (int i = 0; i < 40; ++i) {
        std::vector<double> row{u(gen), u(gen), u(gen)};
        y.push_back(beta[0] + beta[1] * row[0] + beta[2] * row[1] + beta[3] * row[2]);
        x.push_back(row);
    }
    const auto fit = ols_fit(x, y, true, {"a", "b", "c"});
    for (std::size_t j = 0; j < 4; ++j) CHECK(std::abs(fit.coefficients[j] - beta[j]) <= 1e-9 * std::abs(beta[j]));
}

TEST_CASE("ols against a textbook fit with noise") {
    // Reference values from the normal equations solved by hand for this data.
    std::vector<std::vector<double>> x{{1}, {2}, {3}, {4}, {5}};
    std::vector<double> y{2, 4, 5, 4, 5};
    const auto fit = ols_fit(x, y);
    CHECK(fit.coefficients[0] == doctest::Approx(2.2));
    CHECK(fit.coefficients[1] == doctest::Approx(0.6));
    CHECK(fit.rss == doctest::Approx(2.4));
    CHECK(fit.r_squared == doctest::Approx(0.6));
    CHECK(fit.std_errors[1] == doctest::Approx(std::sqrt(0.8 / 10)));
    CHECK(fit.f_statistic == doctest::Approx(4.5));
}

TEST_CASE("ols singular design names the column") {
    std::vector<std::vector<double>> x{{1, 2}, {2, 4}, {3, 6}, {4, 8}};
    std::vector<double> y{1, 2, 3, 5};
    try {
        ols_fit(x, y, true, {"alpha", "twice_alpha"});
        FAIL("expected SingularityError");
    } catch (const SingularityError& e) {
        CHECK(e.column() == 2);
        CHECK(std::string(e.what()).find("twice_alpha") != std::string::npos);
    }
    CHECK_THROWS_AS(ols_fit(std::vector<std::vector<double>>{{1}, {2}}, std::vector<double>{1, 2}), ParameterError);
}

TEST_CASE("two-way anova hand oracle") {
    // Two bot types at two proportions, values mean +- 0.5 in every cell.
    // Type means 1 and 3: SS(bot_type) = 8 * 1^2 = 8; proportion and the
    // interaction explain nothing; residual SS = 8 * 0.25 = 2.
    std::vector<AnovaObservation> obs{{"a", 0, 1.5}, {"a", 0, 0.5}, {"b", 0, 3.5}, {"b", 0, 2.5},
                                      {"a", 1, 1.5}, {"a", 1, 0.5}, {"b", 1, 3.5}, {"b", 1, 2.5}};
    const auto t = anova_two_way(obs);
    CHECK(t.term("C(bot_type)").sum_sq == doctest::Approx(8));
    CHECK(std::abs(t.term("proportion").sum_sq) < 1e-12);
    CHECK(std::abs(t.term("C(bot_type):proportion").sum_sq) < 1e-12);
    CHECK(t.residual_sum_sq == doctest::Approx(2));
    CHECK(t.residual_df == 4);
    CHECK(t.term("C(bot_type)").f == doctest::Approx(16));
    CHECK(eta_squared(t, "C(bot_type)") == doctest::Approx(0.8));
}

TEST_CASE("anova with identical outcomes across types") {
    std::vector<AnovaObservation> obs;
    for (const char* type : {"good", "info"})
        for (double prop : {0.1, 0.2, 0.3}) obs.push_back({type, prop, 10 * prop + (prop == 0.2 ? 1 : 0)});
    const auto t = anova_two_way(obs);
    CHECK(std::abs(t.term("C(bot_type)").sum_sq) < 1e-12);
    CHECK(std::abs(t.term("C(bot_type)").f) < 1e-9);
}

TEST_CASE("anova sums of squares reconcile to the total") {
    std::mt19937_64 gen(9);
    std::normal_distribution<double> noise;
    std::vector<AnovaObservation> obs;
    double mean = 0;
    for (const char* type : {"bad", "good", "info_correction"})
        for (int i = 1; i <= 10; ++i)
            for (int r = 0; r < 3; ++r) {
                obs.push_back({type, 0.1 * i, 15 + 3 * i * (type[0] == 'g') + noise(gen)});
                mean += obs.back().outcome;
            }
    mean /= static_cast<double>(obs.size());
    double total = 0;
    for (const auto& o : obs) total += (o.outcome - mean) * (o.outcome - mean);
    const auto t = anova_two_way(obs);
    CHECK(std::abs(t.total_sum_sq() - total) < 1e-8 * total);
    CHECK(t.term("C(bot_type)").df == 2);
    CHECK(t.term("C(bot_type):proportion").df == 2);
    CHECK(t.residual_df == 90 - 6);
}

TEST_CASE("anova rejects a single level") {
    std::vector<AnovaObservation> obs{{"good", 0.1, 1}, {"good", 0.2, 2}, {"good", 0.3, 2}};
    CHECK_THROWS_WITH_AS(anova_two_way(obs), doctest::Contains("bot_type"), ParameterError);
}

TEST_CASE("effect sizes") {
    CHECK(cohens_f(0.85) == doctest::Approx(2.3805).epsilon(1e-4));
    CHECK(cohens_f(0.0) == 0.0);
    CHECK(cohens_f(0.5) == doctest::Approx(1.0));
    CHECK_THROWS_AS(cohens_f(1.0), ParameterError);
    CHECK(eta_squared_from_f(cohens_f(0.37)) == doctest::Approx(0.37));
}

TEST_CASE("power") {
    SUBCASE("power increases with n") {
        double prev = 0;
        for (double n = 1.1; n < 6; n += 0.1) {
            const double p = anova_power(n, 1.0, 4, 0.05);
            CHECK(p >= prev - 1e-12);
            prev = p;
        }
    }
    SUBCASE("three-group readings") {
        const auto r = anova_power_required_n({cohens_f(0.85), 3, 0.05, 0.8});
        CHECK(r.continuous == doctest::Approx(1.952).epsilon(2e-3));
        CHECK(r.per_group == 2);
        CHECK(anova_power(r.continuous, cohens_f(0.85), 3, 0.05) == doctest::Approx(0.8).epsilon(1e-5));
    }
    SUBCASE("doubling f never increases n") {
        for (double f : {0.1, 0.25, 0.6, 1.5}) {
            const auto a = anova_power_required_n({f, 5, 0.05, 0.8});
            const auto b = anova_power_required_n({2 * f, 5, 0.05, 0.8});
            CHECK(b.continuous <= a.continuous);
        }
    }
    SUBCASE("small effects need many runs") {
        const auto r = anova_power_required_n({0.1, 4, 0.05, 0.8});
        CHECK(r.continuous > 200);
        CHECK(r.continuous < 300);
    }
    SUBCASE("invalid specs") {
        CHECK_THROWS_AS(anova_power_required_n({0.5, 1, 0.05, 0.8}), ParameterError);
        CHECK_THROWS_AS(anova_power_required_n({0.0, 3, 0.05, 0.8}), ParameterError);
        CHECK_THROWS_AS(anova_power_required_n({0.5, 3, 1.0, 0.8}), ParameterError);
    }
}

TEST_CASE("surface stationary points") {
    QuadraticSurface bowl{{0, 0, 0, 0, 1, 1}};
    auto sp = surface_stationary_point(bowl);
    CHECK(sp.kind == StationaryKind::Minimum);
    CHECK(std::abs(sp.b) < 1e-12);
    QuadraticSurface saddle{{0, 0, 0, 1, 0, 0}};
    CHECK(surface_stationary_point(saddle).kind == StationaryKind::Saddle);
    QuadraticSurface plane{{0, 1, 1, 0, 0, 0}};
    CHECK(surface_stationary_point(plane).kind == StationaryKind::Degenerate);

    const QuadraticSurface ic{{14.459, 7.511, 9.060, 1.671, -8.098, -9.313}};
    sp = surface_stationary_point(ic);
    CHECK(sp.kind == StationaryKind::Maximum);
    const auto g = ic.gradient(sp.b, sp.d);
    CHECK(std::hypot(g[0], g[1]) < 1e-8);
    CHECK(ic(1.0, 0.1) == doctest::Approx(14.852).epsilon(1e-4));
}

TEST_CASE("box extrema dominate a dense grid") {
    std::mt19937_64 gen(17);
    std::uniform_real_distribution<double> u(-5, 5);
    for (int trial = 0; trial < 25; ++trial) {
        QuadraticSurface s;
        for (double& b : s.beta) b = u(gen);
        const Box box{-0.5, 1.0, 0.1, 2.0};
        const auto ext = surface_extrema_on_box(s, box);
        for (int i = 0; i <= 200; ++i)
            for (int j = 0; j <= 200; ++j) {
                const double b = box.b_lo + (box.b_hi - box.b_lo) * i / 200.0;
                const double d = box.d_lo + (box.d_hi - box.d_lo) * j / 200.0;
                REQUIRE(s(b, d) >= ext.min.t - 1e-12);
                REQUIRE(s(b, d) <= ext.max.t + 1e-12);
            }
    }
    const QuadraticSurface linear{{0, 1, 1, 0, 0, 0}};
    const auto e = surface_extrema_on_box(linear, {0, 1, 0, 1});
    CHECK(e.max.t == 2.0);
    CHECK(e.min.t == 0.0);
    CHECK(e.max.b == 1.0);
    CHECK(e.min.d == 0.0);
}

TEST_CASE("quadratic fit round trip") {
    const QuadraticSurface truth{{3.0, -1.5, 2.0, 0.75, -4.0, 1.25}};
    std::vector<SurfacePoint> pts;
    for (int i = 1; i <= 10; ++i)
        for (int j = 1; j <= 10; ++j) pts.push_back({i / 10.0, j / 10.0, truth(i / 10.0, j / 10.0)});
    const auto fit = fit_quadratic_surface(pts);
    for (std::size_t k = 0; k < 6; ++k) CHECK(std::abs(fit.beta[k] - truth.beta[k]) <= 1e-9 * std::abs(truth.beta[k]));
    CHECK_THROWS_AS(fit_quadratic_surface(std::span(pts.data(), 5)), ParameterError);
}
