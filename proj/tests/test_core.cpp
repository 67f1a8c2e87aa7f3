#include <doctest.h>

#include <cmath>
#include <limits>

#include "helpers.hpp"
#include "ksil/core.hpp"
#include "ksil/rng.hpp"

using namespace ksil;

namespace {

ErrorCode code_of(auto&& fn) {
    try {
        fn();
    } catch (const Error& e) {
        return e.code();
    }
    FAIL("expected ksil::Error");
    return ErrorCode::IoError;
}

} // namespace

TEST_CASE("validate_dataset accepts well-formed points") {
    const auto data = validate_dataset({{0, 0}, {1, 2}, {3, 4}});
    CHECK(data.size() == 3);
    CHECK(data.dim() == 2);
    CHECK(!data.labels);
    CHECK(data.points(1, 1) == 2.0);
}

TEST_CASE("validate_dataset rejects invariant violations") {
    CHECK(code_of([] { validate_dataset(std::vector<std::vector<double>>{}); }) == ErrorCode::EmptyDataset);
    CHECK(code_of([] { validate_dataset({{0, 1}, {2}}); }) == ErrorCode::RaggedDimensions);
    CHECK(code_of([] { validate_dataset({{}, {}}); }) == ErrorCode::RaggedDimensions);
    CHECK(code_of([] { validate_dataset({{0, std::nan("")}, {1, 1}}); }) == ErrorCode::NonFiniteValue);
    CHECK(code_of([] { validate_dataset({{std::numeric_limits<double>::infinity()}}); }) == ErrorCode::NonFiniteValue);
    CHECK(code_of([] { validate_dataset({{0}, {1}, {2}, {3}}, std::vector<Label>{0, 1, 1}); }) == ErrorCode::LabelLengthMismatch);
}

TEST_CASE("check_partition spots out-of-range labels and empty clusters") {
    const auto data = testing::line({0, 1, 2});
    auto part = testing::partition_of(data, {0, 1, 1}, 2);
    CHECK(check_partition(part, 3).empty());

    part.assignments = {0, 0, 0};
    CHECK(check_partition(part, 3).find("empty") != std::string::npos);

    part.assignments = {0, 2, 1};
    CHECK(check_partition(part, 3).find("out-of-range") != std::string::npos);
}

TEST_CASE("cluster_means averages members") {
    const auto data = testing::line({0, 2, 10, 14});
    const auto means = cluster_means(data, std::vector<Label>{0, 0, 1, 1}, 2);
    CHECK(means(0, 0) == 1.0);
    CHECK(means(1, 0) == 12.0);
}

TEST_CASE("objective picks the requested aggregate") {
    CHECK(Objective::macro_avg().value(0.2, 0.6) == 0.6);
    CHECK(Objective::micro_avg().value(0.2, 0.6) == 0.2);
    CHECK(Objective::combined_avg(0.25).value(0.2, 0.6) == doctest::Approx(0.5));
}

TEST_CASE("config validation") {
    KsilConfig cfg;
    cfg.k = 3;
    CHECK_NOTHROW(validate_config(cfg, 10));
    CHECK(code_of([&] { validate_config(cfg, 3); }) == ErrorCode::KTooLarge);
    cfg.k = 1;
    CHECK(code_of([&] { validate_config(cfg, 10); }) == ErrorCode::KTooSmall);
    cfg.k = 3;
    cfg.tau = 0;
    CHECK(code_of([&] { validate_config(cfg, 10); }) == ErrorCode::InvalidConfig);
    cfg.tau = 1e-4;
    cfg.sample_size = 2;
    CHECK(code_of([&] { validate_config(cfg, 10); }) == ErrorCode::SampleTooSmall);
    cfg.sample_size.reset();
    cfg.objective = Objective::combined_avg(1.5);
    CHECK(code_of([&] { validate_config(cfg, 10); }) == ErrorCode::InvalidConfig);
}

TEST_CASE("rng streams are reproducible and independent of parent consumption") {
    Rng a(42), b(42);
    a.uniform();
    a.uniform();
    CHECK(a.split(7).uniform() == b.split(7).uniform());
    CHECK(Rng(42).split(1).uniform() != Rng(42).split(2).uniform());
    CHECK(Rng(1).uniform() != Rng(2).uniform());
}
