#include <doctest.h>

#include <cmath>
#include <numeric>
#include <random>

#include "helpers.hpp"
#include "oracles.hpp"
#include "ksil/silhouette.hpp"

using namespace ksil;

namespace {

struct Instance {
    Dataset data;
    Partition part;
};

// Random labelled instance where every cluster has at least one member.
Instance random_instance(std::mt19937_64& gen, std::size_t n, std::size_t d, std::size_t k) {
    std::normal_distribution<double> normal(0.0, 1.0);
    std::vector<std::vector<double>> rows(n, std::vector<double>(d));
    std::vector<Label> labels(n);
    for (std::size_t i = 0; i < n; ++i) {
        labels[i] = static_cast<Label>(i < k ? i : gen() % k);
        for (auto& v : rows[i]) {
            v = normal(gen) + 3.0 * labels[i];
        }
    }
    auto data = validate_dataset(rows);
    auto part = testing::partition_of(data, labels, k);
    return {std::move(data), std::move(part)};
}

std::vector<double> all_scores(const Dataset& data, const Partition& part, SilhouetteMode mode) {
    return silhouette(data, part, all_indices(data.size()), mode).per_point;
}

} // namespace

TEST_CASE("exact silhouette on two 1-d pairs") {
    const auto data = testing::line({0, 1, 10, 11});
    const auto part = testing::partition_of(data, {0, 0, 1, 1}, 2);
    const auto report = exact_silhouette(data, part, all_indices(4));
    CHECK(report.per_point[0] == doctest::Approx(9.5 / 10.5).epsilon(1e-12));
    CHECK(report.mode == SilhouetteMode::exact);
}

TEST_CASE("singleton clusters and balanced points score zero") {
    // Point 2 sits at distance 2 from both its partner and the singleton at 4.
    const auto data = testing::line({0, 2, 4});
    const auto part = testing::partition_of(data, {0, 0, 1}, 2);
    const auto report = exact_silhouette(data, part, all_indices(3));
    CHECK(report.per_point[2] == 0.0);
    CHECK(report.per_point[1] == 0.0);
    CHECK(report.per_point[0] > 0.0);
}

TEST_CASE("silhouette preconditions") {
    const auto data = testing::line({0, 1, 2});
    const auto one = testing::partition_of(data, {0, 0, 0}, 1);
    CHECK_THROWS_AS(exact_silhouette(data, one, all_indices(3)), Error);
    const auto two = testing::partition_of(data, {0, 0, 1}, 2);
    CHECK_THROWS_AS(exact_silhouette(data, two, std::vector<std::size_t>{}), Error);
    CHECK_THROWS_AS(approx_silhouette_aps(data, one, all_indices(3)), Error);
}

TEST_CASE("refined approximation on two 1-d pairs") {
    const auto data = testing::line({0, 2, 10, 12});
    const auto part = testing::partition_of(data, {0, 0, 1, 1}, 2);
    const auto stats = compute_cluster_stats(data, part.assignments, 2);
    CHECK(stats.sum_squares[0] == doctest::Approx(2.0));

    const auto apr = approx_silhouette_apr(data, stats, part, all_indices(4));
    // a~ = sqrt((2*1 + 2)/1) = 2, b~ = sqrt(121 + 1).
    const double expected = (std::sqrt(122.0) - 2.0) / std::sqrt(122.0);
    CHECK(apr.per_point[0] == doctest::Approx(expected).epsilon(1e-12));
    CHECK(apr.per_point[0] == doctest::Approx(0.81893).epsilon(1e-5));
    CHECK(apr.mode == SilhouetteMode::apr);

    const auto aps = approx_silhouette_aps(data, part, all_indices(4));
    CHECK(aps.per_point[0] == doctest::Approx(10.0 / 11.0).epsilon(1e-12));

    const auto exact = exact_silhouette(data, part, all_indices(4));
    CHECK(exact.per_point[0] == doctest::Approx(9.0 / 11.0).epsilon(1e-12));
    CHECK(aps.per_point[0] > exact.per_point[0]);
}

TEST_CASE("refined intra term is exact for two-member clusters") {
    std::mt19937_64 gen(11);
    std::normal_distribution<double> normal(0.0, 2.0);
    for (int rep = 0; rep < 200; ++rep) {
        const std::size_t d = 1 + rep % 4;
        std::vector<std::vector<double>> rows(5, std::vector<double>(d));
        for (auto& r : rows) {
            for (auto& v : r) v = normal(gen);
        }
        const auto data = validate_dataset(rows);
        const auto part = testing::partition_of(data, {0, 0, 1, 1, 1}, 2);
        const auto stats = compute_cluster_stats(data, part.assignments, 2);
        const double pair = distance(data.points.row(0), data.points.row(1));
        for (std::size_t i : {0, 1}) {
            const double a_tilde = std::sqrt((2.0 * squared_distance(data.points.row(i), stats.centroids.row(0)) + stats.sum_squares[0]) / 1.0);
            CHECK(a_tilde == doctest::Approx(pair).epsilon(1e-10));
        }
    }
}

TEST_CASE("simplified approximation edge cases") {
    SUBCASE("point on its centroid") {
        Partition part;
        part.assignments = {0, 1};
        part.centroids = Matrix(2, 1, std::vector<double>{0.0, 5.0});
        const auto data = testing::line({0, 5});
        const auto aps = approx_silhouette_aps(data, part, std::vector<std::size_t>{0});
        CHECK(aps.per_point[0] == 1.0);
    }
    SUBCASE("equidistant point") {
        Partition part;
        part.assignments = {0, 1, 0};
        part.centroids = Matrix(2, 1, std::vector<double>{0.0, 4.0});
        const auto data = testing::line({-1, 5, 2});
        const auto aps = approx_silhouette_aps(data, part, std::vector<std::size_t>{2});
        CHECK(aps.per_point[0] == 0.0);
    }
}

TEST_CASE("aggregation") {
    const std::vector<Label> labels{0, 0, 0, 1};
    const auto idx = all_indices(4);

    const std::vector<double> constant(4, 0.5);
    for (double alpha : {0.0, 0.3, 1.0}) {
        const auto agg = aggregate(constant, labels, 2, idx, alpha);
        CHECK(agg.micro == doctest::Approx(0.5));
        CHECK(agg.macro == doctest::Approx(0.5));
        CHECK(agg.combined == doctest::Approx(0.5));
    }

    const std::vector<double> uneven{0.9, 0.9, 0.9, 0.1};
    const auto agg = aggregate(uneven, labels, 2, idx, 0.5);
    CHECK(agg.micro == doctest::Approx(0.7).epsilon(1e-12));
    CHECK(agg.macro == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(agg.combined == doctest::Approx(0.6).epsilon(1e-12));

    const std::vector<Label> balanced{0, 0, 1, 1};
    const std::vector<double> scores{0.1, 0.7, 0.3, 0.2};
    const auto equal = aggregate(scores, balanced, 2, idx, 0.5);
    CHECK(equal.micro == doctest::Approx(equal.macro).epsilon(1e-15));

    CHECK_THROWS_AS(aggregate(std::vector<double>{}, labels, 2, std::vector<std::size_t>{}, 0.5), Error);
}

TEST_CASE("macro aggregation skips clusters without evaluated points") {
    const std::vector<Label> labels{0, 0, 1, 2};
    const std::vector<std::size_t> evaluated{0, 1, 2};
    const auto agg = aggregate(std::vector<double>{0.2, 0.4, 0.9}, labels, 3, evaluated, 0.5);
    CHECK(agg.macro == doctest::Approx((0.3 + 0.9) / 2.0));
}

TEST_CASE("report aggregates agree with their definitions") {
    std::mt19937_64 gen(5);
    const auto inst = random_instance(gen, 40, 3, 3);
    for (auto mode : {SilhouetteMode::exact, SilhouetteMode::apr, SilhouetteMode::aps}) {
        const auto r = silhouette(inst.data, inst.part, all_indices(40), mode);
        const double mean = std::accumulate(r.per_point.begin(), r.per_point.end(), 0.0) / 40.0;
        CHECK(std::abs(r.micro - mean) < 1e-12);
        std::vector<double> sums(3, 0.0), counts(3, 0.0);
        for (std::size_t i = 0; i < 40; ++i) {
            sums[inst.part.assignments[i]] += r.per_point[i];
            counts[inst.part.assignments[i]] += 1;
        }
        const double macro = (sums[0] / counts[0] + sums[1] / counts[1] + sums[2] / counts[2]) / 3.0;
        CHECK(std::abs(r.macro - macro) < 1e-12);
    }
}

TEST_CASE("exact silhouette matches the double-loop oracle") {
    std::mt19937_64 gen(2024);
    for (int rep = 0; rep < 100; ++rep) {
        const std::size_t n = 6 + gen() % 55;
        const std::size_t d = 1 + gen() % 5;
        const std::size_t k = 2 + gen() % 3;
        const auto inst = random_instance(gen, n, d, k);
        const auto got = all_scores(inst.data, inst.part, SilhouetteMode::exact);
        const auto want = oracle::silhouette(testing::rows_of(inst.data),
                                             std::vector<int>(inst.part.assignments.begin(), inst.part.assignments.end()), static_cast<int>(k));
        for (std::size_t i = 0; i < n; ++i) {
            REQUIRE(std::abs(got[i] - want[i]) < 1e-9);
        }
    }
}

TEST_CASE("all silhouette variants stay in [-1, 1]") {
    std::mt19937_64 gen(77);
    for (int rep = 0; rep < 30; ++rep) {
        const auto inst = random_instance(gen, 30, 2, 3);
        // Scramble labels so some points sit in the wrong cluster.
        auto part = inst.part;
        for (std::size_t i = 3; i < part.assignments.size(); i += 4) {
            part.assignments[i] = static_cast<Label>(gen() % 3);
        }
        part.centroids = cluster_means(inst.data, part.assignments, 3);
        for (auto mode : {SilhouetteMode::exact, SilhouetteMode::apr, SilhouetteMode::aps}) {
            for (double s : all_scores(inst.data, part, mode)) {
                CHECK(s >= -1.0);
                CHECK(s <= 1.0);
            }
        }
    }
}

TEST_CASE("silhouettes are invariant to translation, rotation and scaling") {
    std::mt19937_64 gen(9);
    const auto inst = random_instance(gen, 50, 2, 3);
    const double angle = 0.7;
    const double c = std::cos(angle), s = std::sin(angle);

    auto transform = [&](auto&& fn) {
        auto rows = testing::rows_of(inst.data);
        for (auto& r : rows) r = fn(r);
        return validate_dataset(rows);
    };
    const auto shifted = transform([](std::vector<double> r) { r[0] += 13.0; r[1] -= 4.0; return r; });
    const auto rotated = transform([&](std::vector<double> r) { return std::vector<double>{c * r[0] - s * r[1], s * r[0] + c * r[1]}; });
    const auto scaled = transform([](std::vector<double> r) { r[0] *= 3.5; r[1] *= 3.5; return r; });

    for (auto mode : {SilhouetteMode::exact, SilhouetteMode::apr, SilhouetteMode::aps}) {
        const auto base = all_scores(inst.data, inst.part, mode);
        for (const auto* data : {&shifted, &rotated, &scaled}) {
            const auto part = testing::partition_of(*data, inst.part.assignments, 3);
            const auto got = all_scores(*data, part, mode);
            for (std::size_t i = 0; i < base.size(); ++i) {
                CHECK(std::abs(got[i] - base[i]) < 1e-9);
            }
        }
    }
}

TEST_CASE("sampling: full sample returns every index") {
    const auto data = testing::line({0, 1, 2, 3, 4, 5});
    const auto part = testing::partition_of(data, {0, 0, 0, 1, 1, 1}, 2);
    Rng rng(1);
    CHECK(sample_indices(part, 6, Objective::micro_avg(), rng) == all_indices(6));
    CHECK(sample_indices(part, 6, Objective::macro_avg(), rng) == all_indices(6));
    CHECK_THROWS_AS(sample_indices(part, 1, Objective::macro_avg(), rng), Error);
}

TEST_CASE("sampling: per-cluster quota with round-robin remainder") {
    std::vector<Label> labels(104, 0);
    for (std::size_t i = 100; i < 104; ++i) labels[i] = 1;
    Partition part;
    part.assignments = labels;
    part.centroids = Matrix(2, 1);

    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        Rng rng(seed);
        const auto sample = sample_indices(part, 10, Objective::macro_avg(), rng);
        REQUIRE(sample.size() == 10);
        std::size_t first = 0, second = 0;
        for (auto i : sample) (labels[i] == 0 ? first : second)++;
        CHECK(first == 6);
        CHECK(second == 4);
        CHECK(std::adjacent_find(sample.begin(), sample.end()) == sample.end());
    }

    Rng rng(3);
    const auto combined = sample_indices(part, 10, Objective::combined_avg(0.5), rng);
    std::size_t second = 0;
    for (auto i : combined) second += labels[i] == 1;
    CHECK(second == 4);
}

TEST_CASE("sampling: micro draws cover every cluster") {
    std::vector<Label> labels(100);
    for (std::size_t i = 0; i < 100; ++i) labels[i] = i < 50 ? 0 : (i < 80 ? 1 : 2);
    Partition part;
    part.assignments = labels;
    part.centroids = Matrix(3, 1);

    for (std::uint64_t seed = 0; seed < 1000; ++seed) {
        Rng rng(seed);
        const auto sample = sample_indices(part, 10, Objective::micro_avg(), rng);
        REQUIRE(sample.size() == 10);
        REQUIRE(std::adjacent_find(sample.begin(), sample.end()) == sample.end());
        std::vector<int> local(3, 0);
        for (auto i : sample) ++local[labels[i]];
        for (int c = 0; c < 3; ++c) CHECK(local[c] >= 1);
    }
}

TEST_CASE("sampling: micro inclusion is uniform over points") {
    // Two halves of 50 with m = 40: a sample missing a cluster is practically impossible,
    // so every point should be included with probability 0.4.
    std::vector<Label> labels(100);
    for (std::size_t i = 0; i < 100; ++i) labels[i] = i < 50 ? 0 : 1;
    Partition part;
    part.assignments = labels;
    part.centroids = Matrix(2, 1);

    const int draws = 2000;
    std::vector<int> hits(100, 0);
    for (int seed = 0; seed < draws; ++seed) {
        Rng rng(static_cast<std::uint64_t>(seed));
        for (auto i : sample_indices(part, 40, Objective::micro_avg(), rng)) ++hits[i];
    }
    // Binomial(2000, 0.4) has sd ~21.9; allow five of them.
    for (int h : hits) CHECK(std::abs(h - 800) < 110);
}

TEST_CASE("sampling: micro per-cluster counts are proportional to cluster sizes") {
    // m = 30 over sizes 50/30/20: coverage repair almost never fires, so counts follow the sizes.
    std::vector<Label> labels(100);
    for (std::size_t i = 0; i < 100; ++i) labels[i] = i < 50 ? 0 : (i < 80 ? 1 : 2);
    Partition part;
    part.assignments = labels;
    part.centroids = Matrix(3, 1);

    std::vector<double> counts(3, 0.0);
    for (std::uint64_t seed = 0; seed < 1000; ++seed) {
        Rng rng(seed);
        for (auto i : sample_indices(part, 30, Objective::micro_avg(), rng)) counts[labels[i]] += 1;
    }
    const std::vector<double> expected{15000.0, 9000.0, 6000.0};
    double chi2 = 0;
    for (int c = 0; c < 3; ++c) chi2 += (counts[c] - expected[c]) * (counts[c] - expected[c]) / expected[c];
    // 99.9% quantile of chi-square with 2 degrees of freedom.
    CHECK(chi2 < 13.82);
}
