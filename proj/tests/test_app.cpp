#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

#include "helpers.hpp"
#include "ksil/cli.hpp"
#include "ksil/csv.hpp"
#include "ksil/synthetic.hpp"

using namespace ksil;
namespace fs = std::filesystem;

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

std::string message_of(auto&& fn) {
    try {
        fn();
    } catch (const Error& e) {
        return e.what();
    }
    return {};
}

struct CliRun {
    int code;
    std::string out;
    std::string err;
};

CliRun run_cli(std::vector<std::string> args) {
    args.insert(args.begin(), "ksil");
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    std::ostringstream out, err;
    const int code = cli_main(static_cast<int>(argv.size()), argv.data(), out, err);
    return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& path) {
    std::ifstream file(path);
    std::stringstream buffer;
    buffer << file.rdbuf();
    return buffer.str();
}

fs::path scratch(const std::string& name) {
    const auto dir = fs::temp_directory_path() / "ksil_test_app";
    fs::create_directories(dir);
    return dir / name;
}

std::size_t count_label(const Dataset& data, Label label) {
    return static_cast<std::size_t>(std::count(data.labels->begin(), data.labels->end(), label));
}

} // namespace

TEST_CASE("synthetic families have the declared shapes") {
    const auto s2 = generate_synthetic(make_spec(Family::s2, 7));
    CHECK(s2.size() == 500);
    CHECK(s2.dim() == 12);
    REQUIRE(s2.labels);
    CHECK(std::set<Label>(s2.labels->begin(), s2.labels->end()).size() == 5);
    for (Label c = 0; c < 5; ++c) CHECK(count_label(s2, c) == 100);

    const auto s1 = generate_synthetic(make_spec(Family::s1, 7));
    CHECK(s1.size() == 500);
    CHECK(s1.dim() == 2);

    const auto s3 = generate_synthetic(make_spec(Family::s3, 7));
    CHECK(s3.size() == 500);
    CHECK(s3.dim() == 12);

    const auto spec4 = make_spec(Family::s4, 7);
    const auto s4 = generate_synthetic(spec4);
    CHECK(s4.size() == 1500);
    CHECK(count_label(s4, static_cast<Label>(spec4.k)) == 750);
    CHECK(label_count(spec4) == 3);
}

TEST_CASE("synthetic generation is deterministic per seed") {
    for (auto family : {Family::s1, Family::s2, Family::s3, Family::s4, Family::blobs}) {
        const auto a = generate_synthetic(make_spec(family, 3));
        const auto b = generate_synthetic(make_spec(family, 3));
        const auto c = generate_synthetic(make_spec(family, 4));
        CHECK(a.points == b.points);
        CHECK(a.labels == b.labels);
        CHECK(!(a.points == c.points));
    }
}

TEST_CASE("synthetic spec validation") {
    auto spec = make_spec(Family::blobs, 1);
    spec.k = 0;
    CHECK(code_of([&] { generate_synthetic(spec); }) == ErrorCode::InvalidSpec);
    spec = make_spec(Family::blobs, 1);
    spec.sigmas = {1, 2};
    CHECK(code_of([&] { generate_synthetic(spec); }) == ErrorCode::InvalidSpec);
    CHECK(code_of([] { parse_family("s9"); }) == ErrorCode::InvalidSpec);
}

TEST_CASE("csv: plain numeric table") {
    const auto data = parse_csv("1,2\n3,4\n5,6\n", false);
    CHECK(data.size() == 3);
    CHECK(data.dim() == 2);
    CHECK(data.points(2, 1) == 6.0);
}

TEST_CASE("csv: label column by name or index") {
    const auto named = parse_csv("a,class,b\n1,x,2\n3,y,4\n5,x,6\n", true, "class");
    CHECK(named.dim() == 2);
    CHECK(named.points(1, 1) == 4.0);
    CHECK(*named.labels == std::vector<Label>{0, 1, 0});

    const auto indexed = parse_csv("1,7\n2,3\n", false, "1");
    CHECK(indexed.dim() == 1);
    CHECK(*indexed.labels == std::vector<Label>{7, 3});
}

TEST_CASE("csv: errors name the offending row") {
    std::string text = "x,y\n";
    for (int i = 0; i < 4; ++i) text += "1,2\n";
    text += "1,two\n";
    // Header is line 1, so the bad row is line 6.
    const auto msg = message_of([&] { parse_csv(text, true, std::nullopt, "t.csv"); });
    CHECK(msg.find("ParseError") != std::string::npos);
    CHECK(msg.find("row 6") != std::string::npos);

    std::string seven;
    for (int i = 0; i < 6; ++i) seven += "1,2\n";
    seven += "1,abc\n";
    CHECK(message_of([&] { parse_csv(seven, false); }).find("row 7") != std::string::npos);

    CHECK(code_of([] { parse_csv("1,2\n3\n", false); }) == ErrorCode::MixedArity);
    CHECK(code_of([] { parse_csv("", false); }) == ErrorCode::EmptyDataset);
    CHECK(code_of([] { load_csv("/nonexistent/ksil.csv", false); }) == ErrorCode::IoError);
}

TEST_CASE("csv: generated data round-trips exactly") {
    for (auto family : {Family::s1, Family::s4, Family::blobs}) {
        const auto data = generate_synthetic(make_spec(family, 5));
        const auto path = scratch(std::string(to_string(family)) + ".csv");
        save_csv(path.string(), data);
        const auto back = load_csv(path.string(), true, "label");
        CHECK(back.points == data.points);
        CHECK(back.labels == data.labels);
    }
    for (double v : {0.1, 1.0 / 3.0, -2.5e-300, 6.02214076e23, 5e-324}) {
        CHECK(std::strtod(format_double(v).c_str(), nullptr) == v);
    }
}

TEST_CASE("standardize") {
    const auto data = standardize(testing::from_rows({{0, 4}, {10, 4}}));
    CHECK(data.points(0, 0) == -1.0);
    CHECK(data.points(1, 0) == 1.0);
    CHECK(data.points(0, 1) == 0.0);
    CHECK(data.points(1, 1) == 0.0);
}

TEST_CASE("cli: gen-data then cluster") {
    const auto csv = scratch("s2.csv");
    const auto out = scratch("s2_run");
    REQUIRE(run_cli({"gen-data", "--family", "s2", "--seed", "7", "-o", csv.string()}).code == 0);
    const auto res = run_cli({"cluster", "-i", csv.string(), "-k", "5", "--objective", "macro", "--p", "2", "-o", out.string()});
    REQUIRE(res.code == 0);
    const auto doc = nlohmann::json::parse(res.out);
    CHECK(doc["silhouette"].contains("S_M"));
    CHECK(doc["n"] == 500);
    CHECK(doc["d"] == 12);
    CHECK(doc.contains("nmi"));
    CHECK(fs::exists(out.string() + ".labels.csv"));
    CHECK(fs::exists(out.string() + ".centroids.csv"));
    CHECK(nlohmann::json::parse(slurp(out.string() + ".json")) == doc);

    const auto labels = load_csv(out.string() + ".labels.csv", true);
    CHECK(labels.size() == 500);
}

TEST_CASE("cli: baselines and sweep") {
    const auto csv = scratch("blobs.csv");
    REQUIRE(run_cli({"gen-data", "--family", "blobs", "--seed", "2", "-o", csv.string()}).code == 0);
    for (const char* algo : {"kmeans", "density", "lof"}) {
        const auto res = run_cli({"cluster", "-i", csv.string(), "-k", "3", "--algo", algo});
        CHECK(res.code == 0);
    }
    const auto sweep = run_cli({"sweep-p", "--family", "s1", "-k", "5"});
    REQUIRE(sweep.code == 0);
    CHECK(sweep.out.rfind("p,scheme,objective_value\n", 0) == 0);
    CHECK(std::count(sweep.out.begin(), sweep.out.end(), '\n') == 1 + 2 * 10);
}

TEST_CASE("cli: usage errors") {
    const auto unknown = run_cli({"cluster", "--bogus"});
    CHECK(unknown.code == 1);
    CHECK(unknown.err.find("Usage") != std::string::npos);
    CHECK(run_cli({}).code == 1);
    CHECK(run_cli({"cluster", "--family", "s1"}).code == 1);
    CHECK(run_cli({"cluster", "--family", "s1", "-k", "1"}).code == 1);
    CHECK(run_cli({"cluster", "-i", "/nonexistent/x.csv", "-k", "2"}).code == 2);
}

TEST_CASE("cli: bench is reproducible") {
    const auto a = scratch("bench_a.json");
    const auto b = scratch("bench_b.json");
    const std::vector<std::string> args{"bench", "--family", "blobs", "--k-range", "2..3", "--trials", "5", "--seed", "1",
                                        "--algo", "kmeans", "--algo", "lof"};
    auto with_a = args, with_b = args;
    with_a.insert(with_a.end(), {"-o", a.string()});
    with_b.insert(with_b.end(), {"-o", b.string()});
    const auto ra = run_cli(with_a);
    const auto rb = run_cli(with_b);
    REQUIRE(ra.code == 0);
    REQUIRE(rb.code == 0);
    CHECK(slurp(a) == slurp(b));
    CHECK(ra.out == rb.out);
    const auto doc = nlohmann::json::parse(slurp(a));
    CHECK(doc["comparisons"].size() >= 2);
}
