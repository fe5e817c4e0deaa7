#include <doctest.h>

#include <cmath>

#include "mqg/generators.hpp"

using namespace mqg;

TEST_SUITE_BEGIN("generators");

namespace {

double mean_of(const std::vector<double>& x) {
    double sum = 0.0;
    for (const double v : x) sum += v;
    return sum / static_cast<double>(x.size());
}

double covariance_of(const std::vector<double>& a, const std::vector<double>& b) {
    const double ma = mean_of(a);
    const double mb = mean_of(b);
    double sum = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) sum += (a[i] - ma) * (b[i] - mb);
    return sum / static_cast<double>(a.size() - 1);
}

double correlation_of(const std::vector<double>& a, const std::vector<double>& b) {
    return covariance_of(a, b) / std::sqrt(covariance_of(a, a) * covariance_of(b, b));
}

double lag1_autocorrelation(const std::vector<double>& x) {
    std::vector<double> head(x.begin(), x.end() - 1);
    std::vector<double> tail(x.begin() + 1, x.end());
    return correlation_of(head, tail);
}

std::vector<double> squared(const std::vector<double>& x) {
    std::vector<double> out(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) out[i] = x[i] * x[i];
    return out;
}

MultivariateSeries draw(MdgpKind kind, std::size_t length, std::uint64_t seed) {
    MdgpSpec spec;
    spec.kind = kind;
    spec.length = length;
    spec.seed = seed;
    return generate(spec);
}

} // namespace

TEST_CASE("identical specs generate identical series") {
    const MultivariateSeries a = draw(MdgpKind::sVGARCH, 500, 99);
    const MultivariateSeries b = draw(MdgpKind::sVGARCH, 500, 99);
    CHECK(a == b);
    const MultivariateSeries c = draw(MdgpKind::sVGARCH, 500, 100);
    CHECK_FALSE(a == c);
}

TEST_CASE("all kinds produce finite bivariate output") {
    for (const MdgpKind kind : all_mdgp_kinds) {
        const MultivariateSeries mts = draw(kind, 2000, 7);
        REQUIRE(mts.component_count() == 2);
        REQUIRE(mts.length() == 2000);
        for (const auto& component : mts.components()) {
            for (const double v : component.values()) CHECK(std::isfinite(v));
        }
    }
}

TEST_CASE("independent white noise is uncorrelated") {
    const MultivariateSeries mts = draw(MdgpKind::iBWN, 10000, 11);
    const auto& y1 = mts.component(0).values();
    const auto& y2 = mts.component(1).values();
    CHECK(std::abs(correlation_of(y1, y2)) < 0.03);
    CHECK(std::abs(lag1_autocorrelation(y1)) < 0.03);
    CHECK(std::abs(lag1_autocorrelation(y2)) < 0.03);
}

TEST_CASE("correlated white noise hits the implied cross-correlation") {
    // 0.86 / sqrt(1.00 * 1.50) = 0.702 from the model's covariance matrix.
    const MultivariateSeries mts = draw(MdgpKind::cBWN, 10000, 12);
    const double r = correlation_of(mts.component(0).values(), mts.component(1).values());
    CHECK(r == doctest::Approx(0.702).epsilon(0.05));
    CHECK(std::abs(lag1_autocorrelation(mts.component(0).values())) < 0.03);
}

TEST_CASE("weak VAR matches its stationary mean") {
    // (I - ar)^-1 * intercept = (3.203, 0.627) for the fixed parameters.
    const MultivariateSeries mts = draw(MdgpKind::wVAR, 10000, 13);
    CHECK(mean_of(mts.component(0).values()) == doctest::Approx(3.203).epsilon(0.03));
    CHECK(mean_of(mts.component(1).values()) == doctest::Approx(0.627).epsilon(0.1));
}

TEST_CASE("strong VAR is centered and strongly serially correlated") {
    const MultivariateSeries mts = draw(MdgpKind::sVAR, 10000, 14);
    CHECK(std::abs(mean_of(mts.component(0).values())) < 0.15);
    CHECK(std::abs(mean_of(mts.component(1).values())) < 0.25);
    CHECK(lag1_autocorrelation(mts.component(0).values()) > 0.5);
}

TEST_CASE("VGARCH kinds show volatility clustering without serial correlation") {
    for (const MdgpKind kind : {MdgpKind::wVGARCH, MdgpKind::sVGARCH}) {
        const MultivariateSeries mts = draw(kind, 10000, 15);
        for (const auto& component : mts.components()) {
            CHECK(std::abs(lag1_autocorrelation(component.values())) < 0.03);
            CHECK(lag1_autocorrelation(squared(component.values())) > 0.02);
        }
    }
}

TEST_CASE("VGARCH sample variance matches the unconditional value") {
    // omega / (1 - arch - garch) per component: (1.0, 0.2857) for the fixed
    // parameters.
    const MultivariateSeries mts = draw(MdgpKind::sVGARCH, 100000, 271);
    const ModelParams p = default_params(MdgpKind::sVGARCH);
    for (int c = 0; c < 2; ++c) {
        const double expected = p.omega[c] / (1.0 - p.arch[c] - p.garch[c]);
        const auto& values = mts.component(c).values();
        CHECK(covariance_of(values, values) == doctest::Approx(expected).epsilon(0.1));
    }
}

TEST_CASE("long-run VAR mean agrees with the closed form") {
    // Independent check of the recursion: simulate far past the tolerance of
    // the closed-form stationary mean.
    const MultivariateSeries mts = draw(MdgpKind::wVAR, 200000, 4242);
    const ModelParams p = default_params(MdgpKind::wVAR);
    const double a = 1.0 - p.ar[0][0], b = -p.ar[0][1];
    const double c = -p.ar[1][0], d = 1.0 - p.ar[1][1];
    const double det = a * d - b * c;
    const double mu1 = (d * p.intercept[0] - b * p.intercept[1]) / det;
    const double mu2 = (-c * p.intercept[0] + a * p.intercept[1]) / det;
    CHECK(mean_of(mts.component(0).values()) == doctest::Approx(mu1).epsilon(0.01));
    CHECK(mean_of(mts.component(1).values()) == doctest::Approx(mu2).epsilon(0.05));
}

TEST_CASE("generate rejects bad input") {
    MdgpSpec spec;
    spec.kind = MdgpKind::iBWN;
    spec.length = 1;
    CHECK_THROWS_AS(generate(spec), DomainError);

    spec.length = 100;
    ModelParams params = default_params(MdgpKind::cBWN);
    params.noise_cov = {{{1.0, 2.0}, {2.0, 1.0}}}; // not positive definite
    spec.override_params = params;
    CHECK_THROWS_AS(generate(spec), DomainError);
}

TEST_CASE("generate_dataset labels and sizes") {
    const auto dataset = generate_dataset(2, 100, 5);
    REQUIRE(dataset.size() == 12);
    CHECK(dataset.front().id == "0000");
    CHECK(dataset.back().id == "0011");
    std::size_t per_kind = 0;
    for (const auto& instance : dataset) {
        if (instance.kind == MdgpKind::wVGARCH) ++per_kind;
    }
    CHECK(per_kind == 2);

    SUBCASE("equal base seeds give identical datasets") {
        const auto again = generate_dataset(2, 100, 5);
        REQUIRE(again.size() == dataset.size());
        for (std::size_t i = 0; i < dataset.size(); ++i) {
            CHECK(again[i].series == dataset[i].series);
            CHECK(again[i].seed == dataset[i].seed);
        }
    }
    SUBCASE("model subsets reuse the full-run seeds") {
        const auto subset = generate_dataset({MdgpKind::sVAR}, 2, 100, 5);
        REQUIRE(subset.size() == 2);
        CHECK(subset[0].series == dataset[6].series); // sVAR is the fourth kind
        CHECK(subset[1].series == dataset[7].series);
    }
    SUBCASE("smallest dataset") {
        CHECK(generate_dataset(1, 100, 5).size() == 6);
        CHECK_THROWS_AS(generate_dataset(0, 100, 5), DomainError);
    }
}

TEST_SUITE_END();
