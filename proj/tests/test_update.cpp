#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "mtd/errors.hpp"
#include "mtd/update.hpp"
#include "test_util.hpp"

using namespace mtd;
using testutil::random_model;
using testutil::random_vector;

namespace {

UpdateConfig plain_cfg(double eps) { return {eps, UpdateVariant::Plain}; }
UpdateConfig projected_cfg(double eps) { return {eps, UpdateVariant::Projected}; }

double angle_between(std::span<const double> u, std::span<const double> v) {
    return std::acos(std::clamp(cosine(u, v), -1.0, 1.0));
}

std::vector<double> row_copy(const LastLayer& model, int j) {
    const auto r = model.row(j);
    return {r.begin(), r.end()};
}

}  // namespace

TEST_CASE("plain update: weight already at the data is a fixed point") {
    LastLayer model = LastLayer::from_rows({{0.3, -0.7, 2.0}, {1, 2, 3}});
    const LastLayer before = model;
    CHECK(move_to_data_plain(model, {{1, 2, 3}, 1}, plain_cfg(0.25)));
    CHECK(model == before);  // (v - w) is exactly zero, so the row is bit-identical
}

TEST_CASE("plain update: midpoint step from the origin") {
    LastLayer model(2, 2);
    CHECK(move_to_data_plain(model, {{1, 1}, 0}, plain_cfg(0.5)));
    CHECK(row_copy(model, 0) == std::vector<double>{0.5, 0.5});
    CHECK(row_copy(model, 1) == std::vector<double>{0, 0});
}

TEST_CASE("plain update: small-epsilon step matches the one-step closed form") {
    LastLayer model = LastLayer::from_rows({{1, 0}});
    CHECK(move_to_data_plain(model, {{0, 1}, 0}, plain_cfg(1e-4)));
    CHECK(model.row(0)[0] == doctest::Approx(0.9999).epsilon(1e-14));
    CHECK(model.row(0)[1] == doctest::Approx(0.0001).epsilon(1e-14));

    const std::vector<FeatureVector> vs{{0, 1}};
    const std::vector<double> oracle = closed_form_oracle(std::vector<double>{1, 0}, vs, 1e-4);
    CHECK(testutil::rel_err(row_copy(model, 0), oracle) < 1e-15);
}

TEST_CASE("projected update: row parallel to the data is a fixed point") {
    // w = 1.5 * v, so the projection target |w| v/|v| equals w itself.
    LastLayer model = LastLayer::from_rows({{3, 6, 6}});
    CHECK(move_to_data_projected(model, {{2, 4, 4}, 0}, projected_cfg(0.3)));
    CHECK(testutil::max_abs_diff(model.row(0), std::vector<double>{3, 6, 6}) < 1e-12);
}

TEST_CASE("projected update: orthogonal example lands on the segment midpoint") {
    LastLayer model = LastLayer::from_rows({{2, 0}});
    CHECK(move_to_data_projected(model, {{0, 5}, 0}, projected_cfg(0.5)));
    CHECK(testutil::max_abs_diff(model.row(0), std::vector<double>{1, 1}) < 1e-15);
}

TEST_CASE("projected update: direct evaluation and logit monotonicity") {
    LastLayer model = LastLayer::from_rows({{1, 0}});
    const FeatureVector v{3, 4};
    const double logit_before = dot(model.row(0), v);
    CHECK(move_to_data_projected(model, {v, 0}, projected_cfg(0.1)));
    CHECK(testutil::max_abs_diff(model.row(0), std::vector<double>{0.96, 0.08}) < 1e-15);
    CHECK(dot(model.row(0), v) >= logit_before);
}

TEST_CASE("projected update skips zero-norm feature or weight row") {
    LastLayer model = LastLayer::from_rows({{1, 2}, {0, 0}});
    const LastLayer before = model;
    CHECK_FALSE(move_to_data_projected(model, {{0, 0}, 0}, projected_cfg(0.1)));
    CHECK_FALSE(move_to_data_projected(model, {{1, 1}, 1}, projected_cfg(0.1)));
    CHECK(model == before);
}

TEST_CASE("epsilon outside (0,1) is a configuration error") {
    LastLayer model(2, 2);
    const LabeledSample s{{1, 1}, 0};
    for (double bad : {0.0, 1.0, -0.1, 1.5}) {
        CHECK_THROWS_AS(move_to_data_plain(model, s, plain_cfg(bad)), ConfigError);
        CHECK_THROWS_AS(move_to_data_projected(model, s, projected_cfg(bad)), ConfigError);
        CHECK_THROWS_AS(closed_form_oracle(std::vector<double>{1}, {}, bad), ConfigError);
    }
}

TEST_CASE("dimension mismatches are rejected with the stream position") {
    LastLayer model(2, 2);
    CHECK_THROWS_AS(move_to_data_plain(model, {{1, 2, 3}, 0}, plain_cfg(0.1)), DimensionError);

    const std::vector<LabeledSample> stream{{{1, 1}, 0}, {{1, 1}, 1}, {{1, 2, 3}, 0}};
    CHECK_THROWS_WITH_AS(apply_stream(model, stream, plain_cfg(0.1)),
                         doctest::Contains("stream position 2"), DimensionError);
}

TEST_CASE("apply_stream: empty list leaves the model untouched") {
    std::mt19937_64 rng(42);
    LastLayer model = random_model(rng, 3, 4);
    const LastLayer before = model;
    const UpdateStats stats = apply_stream(model, {}, projected_cfg(0.2));
    CHECK(model == before);
    CHECK(stats.applied == 0);
    CHECK(stats.skipped_degenerate == 0);
}

TEST_CASE("apply_stream: single sample equals the single-sample op") {
    std::mt19937_64 rng(43);
    for (const UpdateVariant variant : {UpdateVariant::Plain, UpdateVariant::Projected}) {
        LastLayer streamed = random_model(rng, 3, 4);
        LastLayer direct = streamed;
        const std::vector<LabeledSample> stream{{random_vector(rng, 4), 1}};
        const UpdateConfig cfg{0.05, variant};
        apply_stream(streamed, stream, cfg);
        move_to_data(direct, stream[0], cfg);
        CHECK(streamed == direct);
    }
}

TEST_CASE("apply_stream: three same-class plain updates match the closed form") {
    std::mt19937_64 rng(44);
    LastLayer model = random_model(rng, 2, 3);
    const std::vector<double> w0 = row_copy(model, 1);
    std::vector<LabeledSample> stream;
    std::vector<FeatureVector> vs;
    for (int i = 0; i < 3; ++i) {
        vs.push_back(random_vector(rng, 3));
        stream.push_back({vs.back(), 1});
    }
    apply_stream(model, stream, plain_cfg(0.3));
    CHECK(testutil::rel_err(row_copy(model, 1), closed_form_oracle(w0, vs, 0.3)) < 1e-9);
}

TEST_CASE("apply_stream counts degenerate skips") {
    LastLayer model = LastLayer::from_rows({{1, 0}, {0, 1}});
    const std::vector<LabeledSample> stream{
        {{0, 0}, 0}, {{1, 1}, 0}, {{0, 0}, 1}, {{0, 0}, 1}};
    const UpdateStats stats = apply_stream(model, stream, projected_cfg(0.1));
    CHECK(stats.applied == 1);
    CHECK(stats.skipped_degenerate == 3);
}

TEST_CASE("closed-form oracle: empty stream returns the initial row") {
    const std::vector<double> w0{0.5, -1.5};
    CHECK(closed_form_oracle(w0, {}, 0.25) == w0);
}

TEST_CASE("closed-form oracle: one-step expansion") {
    const std::vector<double> got =
        closed_form_oracle(std::vector<double>{1, 0}, std::vector<FeatureVector>{{0, 1}}, 0.25);
    CHECK(testutil::max_abs_diff(got, std::vector<double>{0.75, 0.25}) < 1e-15);
}

TEST_CASE("closed-form oracle: two equal vectors from a zero start") {
    const double eps = 0.125;
    const FeatureVector v{2, -3, 0.5};
    const std::vector<double> got =
        closed_form_oracle(std::vector<double>{0, 0, 0}, std::vector<FeatureVector>{v, v}, eps);
    std::vector<double> want(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) want[i] = eps * (2.0 - eps) * v[i];
    CHECK(testutil::rel_err(got, want) < 1e-15);
}

TEST_CASE("closed-form oracle rejects ragged vectors") {
    CHECK_THROWS_AS(closed_form_oracle(std::vector<double>{1, 2},
                                       std::vector<FeatureVector>{{1, 2, 3}}, 0.5),
                    DimensionError);
}

TEST_CASE("row isolation: only the labeled row moves") {
    std::mt19937_64 rng(45);
    for (int trial = 0; trial < 1000; ++trial) {
        const int c = 2 + static_cast<int>(rng() % 5);
        const int l = 1 + static_cast<int>(rng() % 8);
        const int label = static_cast<int>(rng() % static_cast<std::uint64_t>(c));
        const UpdateVariant variant =
            trial % 2 == 0 ? UpdateVariant::Plain : UpdateVariant::Projected;
        LastLayer model = random_model(rng, c, l);
        const LastLayer before = model;
        move_to_data(model, {random_vector(rng, l), label}, {0.37, variant});
        for (int j = 0; j < c; ++j) {
            if (j == label) continue;
            CHECK(row_copy(model, j) == row_copy(before, j));  // bit-identical
        }
    }
}

TEST_CASE("fixed points hold for random scalings") {
    std::mt19937_64 rng(46);
    std::uniform_real_distribution<double> positive(0.1, 5.0);
    for (int trial = 0; trial < 1000; ++trial) {
        const int l = 2 + static_cast<int>(rng() % 8);
        std::vector<double> v = random_vector(rng, l);
        if (norm(v) < 1e-6) continue;

        // Plain: v itself; Projected: any positive multiple of v.
        LastLayer plain_model = LastLayer::from_rows({v});
        move_to_data_plain(plain_model, {v, 0}, plain_cfg(0.7));
        CHECK(testutil::max_abs_diff(plain_model.row(0), v) == 0.0);

        std::vector<double> w = v;
        const double scale = positive(rng);
        for (double& x : w) x *= scale;
        LastLayer proj_model = LastLayer::from_rows({w});
        move_to_data_projected(proj_model, {v, 0}, projected_cfg(0.7));
        CHECK(testutil::max_abs_diff(proj_model.row(0), w) < 1e-12);
    }
}

TEST_CASE("angle contraction: the updated row never turns away from the data") {
    std::mt19937_64 rng(47);
    std::uniform_real_distribution<double> eps_dist(1e-4, 0.999);
    for (int trial = 0; trial < 1000; ++trial) {
        const int l = 2 + static_cast<int>(rng() % 8);
        const std::vector<double> w = random_vector(rng, l);
        const std::vector<double> v = random_vector(rng, l);
        if (norm(w) < 1e-3 || norm(v) < 1e-3) continue;
        const double eps = eps_dist(rng);
        const UpdateVariant variant =
            trial % 2 == 0 ? UpdateVariant::Plain : UpdateVariant::Projected;

        LastLayer model = LastLayer::from_rows({w});
        const double before = angle_between(w, v);
        if (!move_to_data(model, {v, 0}, {eps, variant})) continue;
        if (norm(model.row(0)) < 1e-12) continue;  // plain step can pass through the origin
        const double after = angle_between(model.row(0), v);
        CHECK(after <= before + 1e-9);
    }
}

TEST_CASE("projected update: logits never decrease, norms never grow") {
    std::mt19937_64 rng(48);
    std::uniform_real_distribution<double> eps_dist(1e-4, 0.999);
    for (int trial = 0; trial < 1000; ++trial) {
        const int l = 2 + static_cast<int>(rng() % 8);
        const std::vector<double> w = random_vector(rng, l);
        const std::vector<double> v = random_vector(rng, l);
        if (norm(w) < 1e-3 || norm(v) < 1e-3) continue;

        LastLayer model = LastLayer::from_rows({w});
        const double logit_before = dot(w, v);
        const double norm_before = norm(w);
        REQUIRE(move_to_data_projected(model, {v, 0}, projected_cfg(eps_dist(rng))));
        // Cauchy-Schwarz: <w,v> <= |w||v|, so the target logit bounds the old one.
        CHECK(dot(model.row(0), v) >= logit_before - 1e-12 * std::abs(logit_before));
        CHECK(norm(model.row(0)) <= norm_before * (1.0 + 1e-12));
    }
}

TEST_CASE("geometric forgetting: zero-data streams scale the row by (1-eps)^n") {
    std::mt19937_64 rng(49);
    std::uniform_real_distribution<double> eps_dist(1e-4, 0.9);
    for (int trial = 0; trial < 200; ++trial) {
        const int l = 1 + static_cast<int>(rng() % 8);
        const int n = 1 + static_cast<int>(rng() % 100);
        const double eps = eps_dist(rng);
        const std::vector<double> w0 = random_vector(rng, l);

        LastLayer model = LastLayer::from_rows({w0});
        const std::vector<LabeledSample> zeros(static_cast<std::size_t>(n),
                                               {FeatureVector(static_cast<std::size_t>(l), 0.0), 0});
        apply_stream(model, zeros, plain_cfg(eps));

        const double keep = std::pow(1.0 - eps, n);
        std::vector<double> want(w0.size());
        for (std::size_t i = 0; i < w0.size(); ++i) want[i] = keep * w0[i];
        CHECK(testutil::rel_err(row_copy(model, 0), want) < 1e-12);
    }
}

TEST_CASE("oracle equivalence on random multi-class streams via the trace") {
    std::mt19937_64 rng(50);
    std::uniform_real_distribution<double> eps_dist(1e-4, 0.9);
    for (int trial = 0; trial < 100; ++trial) {
        const int c = 1 + static_cast<int>(rng() % 4);
        const int l = 1 + static_cast<int>(rng() % 10);
        const int n = static_cast<int>(rng() % 100);
        const double eps = eps_dist(rng);

        LastLayer model = random_model(rng, c, l);
        std::vector<LabeledSample> stream;
        for (int i = 0; i < n; ++i) {
            stream.push_back(
                {random_vector(rng, l), static_cast<int>(rng() % static_cast<std::uint64_t>(c))});
        }

        UpdateTrace trace;
        apply_stream(model, stream, plain_cfg(eps), &trace);
        REQUIRE(trace.checkpoint_rows.size() == static_cast<std::size_t>(c));
        REQUIRE(trace.steps.size() == static_cast<std::size_t>(n));

        for (int j = 0; j < c; ++j) {
            std::vector<FeatureVector> vs;
            for (const auto& [label, v] : trace.steps) {
                if (label == j) vs.push_back(v);
            }
            const std::vector<double> want =
                closed_form_oracle(trace.checkpoint_rows[static_cast<std::size_t>(j)], vs, eps);
            CHECK(testutil::rel_err(row_copy(model, j), want) < 1e-9);
        }
    }
}
