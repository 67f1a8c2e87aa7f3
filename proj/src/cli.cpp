#include "ksil/cli.hpp"

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "ksil/baselines.hpp"
#include "ksil/csv.hpp"
#include "ksil/engine.hpp"
#include "ksil/protocol.hpp"
#include "ksil/report.hpp"
#include "ksil/synthetic.hpp"

namespace ksil {

namespace {

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Options {
    std::string input;
    std::string output;
    std::optional<std::size_t> k;
    std::string k_range = "2..10";
    std::string objective = "macro";
    double alpha = 0.5;
    std::string scheme = "power";
    std::optional<double> p;
    bool auto_p = false;
    bool approx = false;
    std::optional<std::size_t> sample_size;
    double tau = 1e-4;
    std::size_t max_iter = 100;
    std::size_t trials = 30;
    std::uint64_t seed = 0;
    std::vector<std::string> algos;
    std::vector<std::string> families;
    std::optional<std::string> label_column;
    bool has_header = false;
    bool standardize = false;
    std::string init = "kmeanspp";
    std::size_t exact_cap = 20000;
};

Objective parse_objective(const Options& opt) {
    if (opt.objective == "macro") return Objective::macro_avg();
    if (opt.objective == "micro") return Objective::micro_avg();
    if (opt.objective == "combined") return Objective::combined_avg(opt.alpha);
    throw UsageError("--objective must be macro, micro or combined");
}

std::vector<std::size_t> parse_k_range(const std::string& text) {
    const auto dots = text.find("..");
    try {
        if (dots == std::string::npos) {
            return {static_cast<std::size_t>(std::stoul(text))};
        }
        const auto lo = static_cast<std::size_t>(std::stoul(text.substr(0, dots)));
        const auto hi = static_cast<std::size_t>(std::stoul(text.substr(dots + 2)));
        if (lo > hi) {
            throw UsageError("--k-range must be A..B with A <= B");
        }
        std::vector<std::size_t> out;
        for (auto k = lo; k <= hi; ++k) {
            out.push_back(k);
        }
        return out;
    } catch (const std::logic_error&) {
        throw UsageError("--k-range must look like 2..10");
    }
}

KsilConfig ksil_config(const Options& opt, std::size_t k) {
    KsilConfig cfg;
    cfg.k = k;
    cfg.objective = parse_objective(opt);
    cfg.init = opt.init == "random" ? InitMethod::random : InitMethod::kmeanspp;
    if (opt.scheme == "power") {
        cfg.scheme = WeightScheme::power;
    } else if (opt.scheme == "exp" || opt.scheme == "exponential") {
        cfg.scheme = WeightScheme::exponential;
    } else {
        throw UsageError("--scheme must be power or exp");
    }
    cfg.sensitivity = (opt.p && !opt.auto_p) ? Sensitivity::fixed(*opt.p) : Sensitivity::tuned();
    cfg.sample_size = opt.sample_size;
    cfg.approximate = opt.approx;
    cfg.tau = opt.tau;
    cfg.max_iter = opt.max_iter;
    cfg.seed = opt.seed;
    return cfg;
}

std::vector<std::string> split_cells(const std::string& line) {
    std::vector<std::string> cells;
    std::stringstream stream(line);
    std::string cell;
    while (std::getline(stream, cell, ',')) {
        const auto first = cell.find_first_not_of(" \t\r\"");
        const auto last = cell.find_last_not_of(" \t\r\"");
        cells.push_back(first == std::string::npos ? std::string{} : cell.substr(first, last - first + 1));
    }
    return cells;
}

bool is_number(const std::string& cell) {
    if (cell.empty()) {
        return false;
    }
    char* end = nullptr;
    std::strtod(cell.c_str(), &end);
    return end == cell.c_str() + cell.size();
}

/// Header cells when the first line of `path` is not all numbers, as in files written by gen-data.
std::optional<std::vector<std::string>> sniff_header(const std::string& path) {
    std::ifstream file(path);
    std::string line;
    if (!file || !std::getline(file, line)) {
        return std::nullopt;
    }
    auto cells = split_cells(line);
    for (const auto& cell : cells) {
        if (!is_number(cell)) {
            return cells;
        }
    }
    return std::nullopt;
}

Dataset load_input(const Options& opt) {
    Dataset data;
    if (!opt.input.empty()) {
        bool has_header = opt.has_header;
        auto label_column = opt.label_column;
        if (const auto header = sniff_header(opt.input)) {
            has_header = true;
            if (!label_column && std::find(header->begin(), header->end(), "label") != header->end()) {
                label_column = "label";
            }
        }
        data = load_csv(opt.input, has_header, label_column);
    } else if (!opt.families.empty()) {
        data = generate_synthetic(make_spec(parse_family(opt.families.front()), opt.seed));
    } else {
        throw UsageError("provide --input or --family");
    }
    return opt.standardize ? standardize(data) : data;
}

std::size_t distinct_labels(const Dataset& data) {
    if (!data.labels) {
        return 0;
    }
    return std::set<Label>(data.labels->begin(), data.labels->end()).size();
}

void write_text(const std::string& path, const std::string& text) {
    std::ofstream file(path);
    if (!file) {
        throw Error(ErrorCode::IoError, "cannot write '" + path + "'");
    }
    file << text;
}

int cmd_cluster(const Options& opt, std::ostream& out) {
    if (!opt.k) {
        throw UsageError("cluster needs --k");
    }
    const auto data = load_input(opt);
    const auto cfg = ksil_config(opt, *opt.k);
    const std::string algo = opt.algos.empty() ? "ksil" : opt.algos.front();

    RunResult run;
    nlohmann::json doc;
    doc["algo"] = algo;
    doc["dataset"] = data.name;
    doc["n"] = data.size();
    doc["d"] = data.dim();
    doc["k"] = cfg.k;
    doc["seed"] = cfg.seed;

    const auto kind = parse_algo(algo);
    if (kind == AlgoKind::ksil) {
        validate_config(cfg, data.size());
        const auto tuned = auto_tune_p(data, cfg);
        run = tuned.run;
        doc["scheme"] = to_string(cfg.scheme);
        doc["p"] = tuned.best_p;
        doc["approximate"] = cfg.approximate;
        if (cfg.sample_size) {
            doc["sample_size"] = *cfg.sample_size;
        }
    } else {
        LloydConfig lloyd;
        lloyd.k = cfg.k;
        lloyd.init = cfg.init;
        lloyd.tau = cfg.tau;
        lloyd.max_iter = cfg.max_iter;
        lloyd.seed = cfg.seed;
        lloyd.objective = cfg.objective;
        if (kind == AlgoKind::kmeans) {
            run = run_kmeans(data, lloyd);
        } else {
            const auto algo_kind = kind == AlgoKind::density ? NeighborhoodAlgo::density : NeighborhoodAlgo::lof;
            const auto grid = default_neighbor_grid();
            auto tuned = tune_neighborhood(data, lloyd, algo_kind, grid);
            doc["h"] = tuned.best_h;
            run = std::move(tuned.run);
        }
    }

    doc["run"] = to_json(run, cfg.objective);
    const auto& part = run.best_partition;
    if (data.size() <= opt.exact_cap) {
        doc["silhouette"] = to_json(exact_silhouette(data, part, all_indices(data.size()), cfg.objective.alpha));
    } else {
        const auto stats = compute_cluster_stats(data, part.assignments, part.k());
        doc["silhouette"] = to_json(approx_silhouette_apr(data, stats, part, all_indices(data.size()), cfg.objective.alpha));
    }
    doc["cluster_sizes"] = cluster_sizes(part);
    if (data.labels) {
        doc["nmi"] = nmi(*data.labels, part.assignments);
    }

    std::ostringstream labels_csv;
    labels_csv << "index,cluster\n";
    for (std::size_t i = 0; i < part.assignments.size(); ++i) {
        labels_csv << i << ',' << part.assignments[i] << '\n';
    }
    std::ostringstream centroids_csv;
    for (std::size_t j = 0; j < part.centroids.cols(); ++j) {
        centroids_csv << (j ? "," : "") << 'x' << j;
    }
    centroids_csv << '\n';
    for (std::size_t c = 0; c < part.k(); ++c) {
        for (std::size_t j = 0; j < part.centroids.cols(); ++j) {
            centroids_csv << (j ? "," : "") << format_double(part.centroids(c, j));
        }
        centroids_csv << '\n';
    }

    if (!opt.output.empty()) {
        write_text(opt.output + ".labels.csv", labels_csv.str());
        write_text(opt.output + ".centroids.csv", centroids_csv.str());
        write_text(opt.output + ".json", doc.dump(2) + "\n");
    }
    out << doc.dump(2) << '\n';
    return 0;
}

int cmd_bench(const Options& opt, std::ostream& out) {
    const auto data = load_input(opt);
    ProtocolConfig cfg;
    cfg.k_values = parse_k_range(opt.k_range);
    cfg.trials = opt.trials;
    cfg.seed = opt.seed;
    cfg.ksil = ksil_config(opt, cfg.k_values.front());
    cfg.algos = {AlgoKind::ksil};
    if (opt.algos.empty()) {
        cfg.algos.insert(cfg.algos.end(), {AlgoKind::kmeans, AlgoKind::density, AlgoKind::lof});
    } else {
        for (const auto& name : opt.algos) {
            const auto kind = parse_algo(name);
            if (kind != AlgoKind::ksil) {
                cfg.algos.push_back(kind);
            }
        }
    }
    if (cfg.algos.size() < 2) {
        throw UsageError("bench needs at least one baseline in --algo");
    }
    if (opt.k) {
        cfg.ground_truth_k = *opt.k;
    } else if (const auto labels = distinct_labels(data); labels >= 2) {
        cfg.ground_truth_k = labels;
    }

    const auto report = run_comparison_protocol(data, cfg);
    const auto doc = to_json(report).dump(2) + "\n";
    if (!opt.output.empty()) {
        write_text(opt.output, doc);
    } else {
        out << doc;
    }
    out << render_table(report);
    return 0;
}

int cmd_approx_eval(const Options& opt, std::ostream& out) {
    std::vector<Dataset> sets;
    if (!opt.input.empty()) {
        sets.push_back(load_input(opt));
    } else {
        const std::vector<std::string> names = opt.families.empty() ? std::vector<std::string>{"s1", "s2", "s3", "s4"} : opt.families;
        for (const auto& name : names) {
            auto data = generate_synthetic(make_spec(parse_family(name), opt.seed));
            sets.push_back(opt.standardize ? standardize(data) : std::move(data));
        }
    }

    std::vector<ApproxComparison> rows;
    nlohmann::json doc = nlohmann::json::array();
    for (const auto& data : sets) {
        std::size_t k = opt.k ? *opt.k : distinct_labels(data);
        if (k < 2) {
            throw UsageError("approx-eval needs --k when the data has no labels");
        }
        const auto part = reference_kmeans_partition(data, k, opt.seed);
        rows.push_back(compare_approximations(data, part, opt.alpha));
        doc.push_back(to_json(rows.back()));
    }
    if (!opt.output.empty()) {
        write_text(opt.output, doc.dump(2) + "\n");
    } else {
        out << doc.dump(2) << '\n';
    }
    out << render_table(rows);
    return 0;
}

int cmd_gen_data(const Options& opt, std::ostream& out) {
    if (opt.families.empty()) {
        throw UsageError("gen-data needs --family");
    }
    const auto data = generate_synthetic(make_spec(parse_family(opt.families.front()), opt.seed));
    if (opt.output.empty()) {
        write_csv(out, data);
    } else {
        save_csv(opt.output, data);
    }
    return 0;
}

int cmd_sweep_p(const Options& opt, std::ostream& out) {
    const auto base = load_input(opt);
    std::size_t k = opt.k ? *opt.k : distinct_labels(base);
    if (k < 2) {
        throw UsageError("sweep-p needs --k when the data has no labels");
    }
    std::ostringstream csv;
    csv << "p,scheme,objective_value\n";
    for (auto scheme : {WeightScheme::power, WeightScheme::exponential}) {
        auto cfg = ksil_config(opt, k);
        cfg.scheme = scheme;
        validate_config(cfg, base.size());
        const auto initial = initial_partition(base, k, cfg.init, cfg.seed);
        for (double p : Sensitivity::default_grid()) {
            cfg.sensitivity = Sensitivity::fixed(p);
            const auto run = run_ksil(base, cfg, initial);
            const double exact = exact_silhouette(base, run.best_partition, all_indices(base.size()), cfg.objective.alpha)
                                     .objective_value(cfg.objective);
            csv << format_double(p) << ',' << (scheme == WeightScheme::power ? "power" : "exp") << ',' << format_double(exact) << '\n';
        }
    }
    if (opt.output.empty()) {
        out << csv.str();
    } else {
        write_text(opt.output, csv.str());
    }
    return 0;
}

void add_data_options(CLI::App* cmd, Options& opt) {
    cmd->add_option("-i,--input", opt.input, "CSV file with one point per row");
    cmd->add_option("--family", opt.families, "Synthetic family: s1, s2, s3, s4 or blobs")->check(CLI::IsMember({"s1", "s2", "s3", "s4", "blobs"}));
    cmd->add_flag("--has-header", opt.has_header, "The CSV starts with a header row");
    cmd->add_option("--label-column", opt.label_column, "Header name or zero-based index of a ground-truth label column");
    cmd->add_flag("--standardize", opt.standardize, "z-score every feature before clustering");
    cmd->add_option("--seed", opt.seed, "Master random seed");
    cmd->add_option("-o,--output", opt.output, "Output path");
}

void add_run_options(CLI::App* cmd, Options& opt) {
    cmd->add_option("-k,--k", opt.k, "Number of clusters");
    cmd->add_option("--objective", opt.objective, "macro, micro or combined")->check(CLI::IsMember({"macro", "micro", "combined"}));
    cmd->add_option("--alpha", opt.alpha, "Micro share of the combined objective")->check(CLI::Range(0.0, 1.0));
    cmd->add_option("--scheme", opt.scheme, "Weighting scheme: power or exp")->check(CLI::IsMember({"power", "exp", "exponential"}));
    cmd->add_option("--p", opt.p, "Fixed weight sensitivity")->check(CLI::NonNegativeNumber);
    cmd->add_flag("--auto-p", opt.auto_p, "Tune the sensitivity over the default grid");
    cmd->add_flag("--approx", opt.approx, "Use the refined silhouette approximation inside the loop");
    cmd->add_option("--sample-size", opt.sample_size, "Score only this many sampled points per iteration");
    cmd->add_option("--tau", opt.tau, "Centroid movement threshold")->check(CLI::PositiveNumber);
    cmd->add_option("--max-iter", opt.max_iter, "Iteration cap")->check(CLI::PositiveNumber);
    cmd->add_option("--init", opt.init, "Centroid seeding: kmeanspp or random")->check(CLI::IsMember({"kmeanspp", "random"}));
}

} // namespace

int cli_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Silhouette-guided instance-weighted k-means", "ksil"};
    app.require_subcommand(1);
    Options opt;

    auto* cluster = app.add_subcommand("cluster", "Cluster a CSV with K-Sil or a baseline");
    add_data_options(cluster, opt);
    add_run_options(cluster, opt);
    cluster->add_option("--exact-cap", opt.exact_cap, "Largest n for which the final report uses the exact silhouette (ApR above it)");
    cluster->add_option("--algo", opt.algos, "ksil, kmeans, density or lof")->check(CLI::IsMember({"ksil", "kmeans", "density", "lof"}))->expected(1);

    auto* bench = app.add_subcommand("bench", "Paired comparison of K-Sil against the baselines");
    add_data_options(bench, opt);
    add_run_options(bench, opt);
    bench->add_option("--k-range", opt.k_range, "Cluster counts, e.g. 2..10");
    bench->add_option("--trials", opt.trials, "Trials per cluster count")->check(CLI::Range(5, 100000));
    bench->add_option("--algo", opt.algos, "Baselines to include (repeatable)")->check(CLI::IsMember({"ksil", "kmeans", "density", "lof"}));

    auto* approx = app.add_subcommand("approx-eval", "Compare exact, ApR and ApS silhouettes on reference k-means partitions");
    add_data_options(approx, opt);
    approx->add_option("-k,--k", opt.k, "Number of clusters (defaults to the label count)");
    approx->add_option("--alpha", opt.alpha, "Micro share of the combined objective")->check(CLI::Range(0.0, 1.0));

    auto* gen = app.add_subcommand("gen-data", "Write a synthetic data set as CSV");
    gen->add_option("--family", opt.families, "s1, s2, s3, s4 or blobs")->check(CLI::IsMember({"s1", "s2", "s3", "s4", "blobs"}))->expected(1);
    gen->add_option("--seed", opt.seed, "Random seed");
    gen->add_option("-o,--output", opt.output, "Output CSV (stdout if omitted)");

    auto* sweep = app.add_subcommand("sweep-p", "Objective against weight sensitivity for both schemes");
    add_data_options(sweep, opt);
    add_run_options(sweep, opt);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return 0;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return 0;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n\n" << app.help("", CLI::AppFormatMode::All);
        return 1;
    }

    try {
        if (cluster->parsed()) return cmd_cluster(opt, out);
        if (bench->parsed()) return cmd_bench(opt, out);
        if (approx->parsed()) return cmd_approx_eval(opt, out);
        if (gen->parsed()) return cmd_gen_data(opt, out);
        if (sweep->parsed()) return cmd_sweep_p(opt, out);
    } catch (const UsageError& e) {
        err << "error: " << e.what() << "\n\n" << app.help("", CLI::AppFormatMode::All);
        return 1;
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        switch (e.code()) {
            case ErrorCode::InvalidConfig:
            case ErrorCode::KTooSmall:
            case ErrorCode::SampleTooSmall:
                return 1;
            default:
                return 2;
        }
    }
    return 1;
}

} // namespace ksil
