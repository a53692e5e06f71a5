#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>

#include "sentopics/errors.hpp"
#include "sentopics/rng.hpp"
#include "sentopics/stats.hpp"

using namespace sentopics;
using namespace sentopics::stats;
using sentiment::SentimentLabel;

namespace {

// Independent oracle for the two-sided t-test p-value: adaptive Simpson
// integration of the t density over theta after the substitution
// x = sqrt(df) * tan(theta), which maps the infinite tail onto a finite
// interval. Shares no code with the incomplete-beta implementation.
double t_density(double x, double df) {
    const double c = std::exp(std::lgamma((df + 1) / 2) - std::lgamma(df / 2)) /
                     std::sqrt(df * M_PI);
    return c * std::pow(1.0 + x * x / df, -(df + 1) / 2);
}

double simpson(const std::function<double(double)>& f, double a, double b, double fa, double fb,
               double fm, double eps, int depth) {
    const double m = (a + b) / 2;
    const double lm = (a + m) / 2, rm = (m + b) / 2;
    const double flm = f(lm), frm = f(rm);
    const double whole = (b - a) / 6 * (fa + 4 * fm + fb);
    const double left = (m - a) / 6 * (fa + 4 * flm + fm);
    const double right = (b - m) / 6 * (fm + 4 * frm + fb);
    if (depth <= 0 || std::fabs(left + right - whole) < 15 * eps) {
        return left + right + (left + right - whole) / 15;
    }
    return simpson(f, a, m, fa, fm, flm, eps / 2, depth - 1) +
           simpson(f, m, b, fm, fb, frm, eps / 2, depth - 1);
}

double two_sided_p_by_integration(double t, double df) {
    const double a = std::atan(std::fabs(t) / std::sqrt(df));
    const double b = M_PI / 2;
    auto g = [df](double theta) {
        const double x = std::sqrt(df) * std::tan(theta);
        const double cos_t = std::cos(theta);
        return t_density(x, df) * std::sqrt(df) / (cos_t * cos_t);
    };
    const double tail = simpson(g, a, b - 1e-13, g(a), g(b - 1e-13), g((a + b - 1e-13) / 2),
                                1e-12, 40);
    return 2.0 * tail;
}

}  // namespace

#include "welch_fixtures.hpp"

TEST_CASE("welch_t_test matches the frozen reference implementation") {
    for (const auto& fx : testsupport::welch_fixtures()) {
        const auto r = welch_t_test(fx.x, fx.y);
        CHECK(r.t == doctest::Approx(fx.t).epsilon(1e-9));
        CHECK(r.df == doctest::Approx(fx.df).epsilon(1e-9));
        CHECK(std::fabs(r.p - fx.p) < 1e-6);
    }
}

TEST_CASE("welch_t_test worked example and symmetries") {
    const auto r = welch_t_test({1, 2, 3}, {2, 3, 4});
    CHECK(r.t == doctest::Approx(-1.224744871391589).epsilon(1e-12));
    CHECK(r.df == doctest::Approx(4.0).epsilon(1e-12));
    CHECK(std::fabs(r.p - 0.2878641347266908) < 1e-9);

    SUBCASE("identical samples give t=0, p=1") {
        const auto same = welch_t_test({1, 2, 3}, {1, 2, 3});
        CHECK(same.t == 0.0);
        CHECK(same.p == 1.0);
    }
    SUBCASE("swapping groups negates t and keeps p") {
        const auto fwd = welch_t_test({1.2, 3.4, 0.1, 2.2}, {0.4, 1.1, 5.0});
        const auto rev = welch_t_test({0.4, 1.1, 5.0}, {1.2, 3.4, 0.1, 2.2});
        CHECK(fwd.t == doctest::Approx(-rev.t).epsilon(1e-14));
        CHECK(fwd.p == doctest::Approx(rev.p).epsilon(1e-14));
    }
    SUBCASE("degenerate inputs are defined, not rejected") {
        const auto flat = welch_t_test({2, 2, 2}, {2, 2});
        CHECK(flat.degenerate);
        CHECK(flat.t == 0.0);
        CHECK(flat.p == 1.0);
        const auto split = welch_t_test({2, 2, 2}, {3, 3});
        CHECK(split.degenerate);
        CHECK(std::isinf(split.t));
        CHECK(split.t < 0);
        CHECK(split.p == 0.0);
    }
    SUBCASE("undersized groups are an error") {
        CHECK_THROWS_AS(welch_t_test({1.0}, {1.0, 2.0}), DataError);
    }
}

TEST_CASE("p-values agree with brute-force density integration") {
    for (double t : {0.0, 0.5, 1.0, 2.0, 3.0, 5.0}) {
        for (double df : {1.0, 2.0, 3.0, 5.0, 10.0, 30.0, 100.0, 185953.0}) {
            const double direct = student_t_two_sided_p(t, df);
            const double integrated = two_sided_p_by_integration(t, df);
            CHECK(std::fabs(direct - integrated) < 1e-6);
        }
    }
}

TEST_CASE("alpha_threshold formula") {
    CHECK(alpha_threshold(100) == doctest::Approx(0.05).epsilon(1e-15));
    CHECK(alpha_threshold(10000) == doctest::Approx(0.005).epsilon(1e-15));
    const double paper_n = alpha_threshold(185953);
    CHECK(paper_n >= 0.001159);
    CHECK(paper_n <= 0.001160);
    CHECK(std::round(paper_n * 1000.0) / 1000.0 == 0.001);
    CHECK(std::fabs(paper_n - 0.05 / std::sqrt(185953.0 / 100.0)) < 1e-9);
    CHECK_THROWS_AS(alpha_threshold(0), DataError);
}

TEST_CASE("fdr_adjust step-up fixtures") {
    using vec = std::vector<double>;
    CHECK(fdr_adjust({0.01, 0.04, 0.03}) == vec{0.03, 0.04, 0.04});
    CHECK(fdr_adjust({0.5}) == vec{0.5});
    CHECK(fdr_adjust({0.2, 0.2, 0.2, 0.2}) == vec{0.2, 0.2, 0.2, 0.2});
    CHECK(fdr_adjust({1.0, 0.5, 0.25}) == vec{1.0, 0.75, 0.75});
    CHECK(fdr_adjust({0.02, 0.8}) == vec{0.04, 0.8});
    const vec eight = fdr_adjust({0.001, 0.008, 0.039, 0.041, 0.042, 0.06, 0.074, 0.205});
    const vec expected{0.008, 0.032, 0.06720000000000001, 0.06720000000000001,
                       0.06720000000000001, 0.07999999999999999, 0.08457142857142856, 0.205};
    REQUIRE(eight.size() == expected.size());
    for (std::size_t i = 0; i < eight.size(); ++i) {
        CHECK(eight[i] == doctest::Approx(expected[i]).epsilon(1e-14));
    }
    CHECK_THROWS_AS(fdr_adjust({0.5, 1.5}), DataError);
    CHECK_THROWS_AS(fdr_adjust({-0.1}), DataError);
}

TEST_CASE("fdr_adjust properties on random vectors") {
    Rng rng(23);
    for (int trial = 0; trial < 100; ++trial) {
        std::vector<double> p;
        const std::size_t n = 1 + rng.below(25);
        for (std::size_t i = 0; i < n; ++i) p.push_back(rng.uniform01());
        const auto q = fdr_adjust(p);
        // adjusted >= raw, clamped to 1
        for (std::size_t i = 0; i < n; ++i) {
            CHECK(q[i] >= p[i]);
            CHECK(q[i] <= 1.0);
        }
        // monotone in the input's rank order
        std::vector<std::size_t> order(n);
        std::iota(order.begin(), order.end(), 0);
        std::sort(order.begin(), order.end(), [&](auto a, auto b) { return p[a] < p[b]; });
        for (std::size_t i = 1; i < n; ++i) CHECK(q[order[i - 1]] <= q[order[i]] + 1e-15);
    }
}

TEST_CASE("cohens_d pooled formula") {
    CHECK(cohens_d({2, 4}, {1, 3}) == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-12));
    CHECK(cohens_d({1, 2}, {2, 1}) == 0.0);
    SUBCASE("scale and translation invariance") {
        const std::vector<double> x{1.0, 2.5, 3.5, 0.2};
        const std::vector<double> y{2.0, 4.1, 0.3};
        const double base = cohens_d(x, y);
        auto scale = [](std::vector<double> v, double c) {
            for (auto& e : v) e *= c;
            return v;
        };
        auto shift = [](std::vector<double> v, double c) {
            for (auto& e : v) e += c;
            return v;
        };
        CHECK(cohens_d(scale(x, 3.7), scale(y, 3.7)) == doctest::Approx(base).epsilon(1e-12));
        CHECK(cohens_d(shift(x, 11.0), shift(y, 11.0)) == doctest::Approx(base).epsilon(1e-12));
    }
    SUBCASE("zero pooled variance is an error") {
        CHECK_THROWS_AS(cohens_d({1, 1}, {2, 2}), NumericalError);
    }
}

TEST_CASE("classify_effect lower-bound intervals") {
    CHECK(classify_effect(0.01) == EffectClass::VerySmall);
    CHECK(classify_effect(0.2) == EffectClass::Small);
    CHECK(classify_effect(0.5) == EffectClass::Medium);
    CHECK(classify_effect(0.8) == EffectClass::Large);
    CHECK(classify_effect(1.2) == EffectClass::VeryLarge);
    CHECK(classify_effect(2.0) == EffectClass::Huge);
    CHECK(classify_effect(0.0) == EffectClass::VerySmall);
    CHECK(classify_effect(0.199) == EffectClass::VerySmall);
    CHECK(classify_effect(0.6) == EffectClass::Medium);
    CHECK(classify_effect(1.0) == EffectClass::Large);
    CHECK(classify_effect(100.0) == EffectClass::Huge);
    CHECK(std::string(effect_class_name(EffectClass::VerySmall)) == "Very Small");
    CHECK(effect_class_key(EffectClass::VeryLarge) == "very_large");
}

TEST_CASE("stratified_effect_size") {
    Rng rng(31);
    std::vector<double> base;
    for (int i = 0; i < 400; ++i) base.push_back(rng.uniform01() * 2.0);
    std::vector<double> shifted = base;
    for (auto& v : shifted) v += 0.5;

    SUBCASE("exhaustive stratum equals the full-sample d") {
        const auto es = stratified_effect_size(base, shifted, {base.size()}, 7);
        CHECK(es.d_mean == doctest::Approx(es.d_full).epsilon(1e-12));
    }
    SUBCASE("fixed seed reproduces every stratum") {
        const auto a = stratified_effect_size(base, shifted, {8, 40, 60}, 1234);
        const auto b = stratified_effect_size(base, shifted, {8, 40, 60}, 1234);
        CHECK(a.d_by_size == b.d_by_size);
        const auto c = stratified_effect_size(base, shifted, {8, 40, 60}, 999);
        CHECK(a.d_by_size != c.d_by_size);
    }
    SUBCASE("oversized strata are skipped with a warning") {
        const auto es = stratified_effect_size(base, shifted, {8, 1000}, 7);
        CHECK(es.d_by_size.count(8) == 1);
        CHECK(es.d_by_size.count(1000) == 0);
        REQUIRE(es.warnings.size() == 1);
        CHECK(es.warnings[0].find("1000") != std::string::npos);
    }
    SUBCASE("constant-shifted copies concentrate near the full-sample d") {
        // 25 repeated draws per stratum tame the small-stratum variance
        for (std::uint64_t seed = 0; seed < 10; ++seed) {
            const auto es =
                stratified_effect_size(base, shifted, {8, 40, 60, 100, 200}, seed, 25);
            CHECK(es.d_mean > 0.75 * es.d_full);
            CHECK(es.d_mean < 1.25 * es.d_full);
            for (const auto& [size, d] : es.d_by_size) {
                if (size >= 40) {
                    CHECK(d > 0.75 * es.d_full);
                    CHECK(d < 1.25 * es.d_full);
                }
            }
        }
    }
}

namespace {

// theta fixture: topic 0 of negative docs is shifted by +0.2, the remaining
// topics are drawn from the same distribution for both groups.
struct Fixture {
    std::vector<std::vector<double>> theta;
    std::vector<SentimentLabel> labels;
};

Fixture planted_theta(std::size_t docs_per_group, std::size_t topics, double shift,
                      std::uint64_t seed) {
    Rng rng(seed);
    Fixture f;
    for (std::size_t d = 0; d < 2 * docs_per_group; ++d) {
        const bool negative = d % 2 == 0;
        std::vector<double> row(topics);
        for (std::size_t k = 0; k < topics; ++k) row[k] = 0.2 + 0.1 * rng.uniform01();
        if (negative) row[0] += shift;
        f.theta.push_back(std::move(row));
        f.labels.push_back(negative ? SentimentLabel::Negative : SentimentLabel::NonNegative);
    }
    return f;
}

}  // namespace

TEST_CASE("compare_all_topics flags the planted shift only") {
    const auto f = planted_theta(150, 4, 0.2, 77);
    CompareOptions opts;
    opts.strata = {8, 40, 60, 100};
    opts.seed = 5;
    std::vector<std::size_t> retained{0, 1, 2, 3};
    const auto rows = compare_all_topics(f.theta, f.labels, retained, opts);
    REQUIRE(rows.size() == 4);
    CHECK(rows[0].test.direction == Direction::NegGreater);
    CHECK(rows[0].has_effect);
    CHECK(rows[0].effect.d_mean > 0.0);
    for (std::size_t i = 1; i < 4; ++i) {
        CHECK(rows[i].test.direction == Direction::NS);
        CHECK_FALSE(rows[i].has_effect);  // NS rows carry no effect size
    }
    for (const auto& row : rows) {
        CHECK(row.test.p_adj >= row.test.p);
        CHECK((row.test.direction == Direction::NS) == (row.test.p_adj > row.test.alpha_used));
    }
}

TEST_CASE("compare_all_topics is invariant to document order") {
    const auto f = planted_theta(60, 3, 0.2, 13);
    CompareOptions opts;
    opts.strata = {8, 40};
    std::vector<std::size_t> retained{0, 1, 2};
    const auto base = compare_all_topics(f.theta, f.labels, retained, opts);

    Rng rng(40);
    auto perm = rng.sample_without_replacement(f.theta.size(), f.theta.size());
    Fixture shuffled;
    for (std::size_t i : perm) {
        shuffled.theta.push_back(f.theta[i]);
        shuffled.labels.push_back(f.labels[i]);
    }
    const auto permuted = compare_all_topics(shuffled.theta, shuffled.labels, retained, opts);
    for (std::size_t k = 0; k < 3; ++k) {
        CHECK(permuted[k].test.t == doctest::Approx(base[k].test.t).epsilon(1e-12));
        CHECK(permuted[k].test.p_adj == doctest::Approx(base[k].test.p_adj).epsilon(1e-12));
        CHECK(permuted[k].test.direction == base[k].test.direction);
    }
}

TEST_CASE("compare_all_topics degenerate and edge inputs") {
    SUBCASE("single-class labels leave every topic untestable NS") {
        const auto f = planted_theta(20, 3, 0.2, 3);
        std::vector<SentimentLabel> all_neg(f.labels.size(), SentimentLabel::Negative);
        const auto rows = compare_all_topics(f.theta, all_neg, {0, 1, 2}, {});
        for (const auto& row : rows) {
            CHECK(row.test.direction == Direction::NS);
            CHECK(row.test.warning.find("fewer than 2") != std::string::npos);
        }
    }
    SUBCASE("empty retained set refuses to run") {
        const auto f = planted_theta(10, 2, 0.1, 3);
        CHECK_THROWS_AS(compare_all_topics(f.theta, f.labels, {}, {}), DataError);
    }
    SUBCASE("smaller alpha never adds significant topics") {
        const auto f = planted_theta(1500, 6, 0.012, 19);
        std::vector<std::size_t> retained{0, 1, 2, 3, 4, 5};
        CompareOptions loose;   // alpha = 0.05/sqrt(3000/100) = 0.00913
        loose.strata = {8};
        CompareOptions tight = loose;
        tight.round_alpha = true;  // rounds down to 0.009
        const auto base = compare_all_topics(f.theta, f.labels, retained, loose);
        const auto strict = compare_all_topics(f.theta, f.labels, retained, tight);
        REQUIRE(base.size() == strict.size());
        CHECK(strict[0].test.alpha_used < base[0].test.alpha_used);
        for (std::size_t i = 0; i < base.size(); ++i) {
            if (strict[i].test.direction != Direction::NS) {
                CHECK(base[i].test.direction != Direction::NS);
            }
        }
    }
}
