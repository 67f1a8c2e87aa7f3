#include "ksil/report.hpp"

#include <algorithm>
#include <cstdio>

#include <sstream>

namespace ksil {

using nlohmann::json;

std::string json_number(double value) {
    return json(value).dump();
}

namespace {

json wilcoxon_json(const std::optional<WilcoxonResult>& w) {
    if (!w) {
        return nullptr;
    }
    return {{"statistic", w->statistic}, {"p_value", w->p_value}, {"n_used", w->n_used}, {"n_zero", w->n_zero}, {"exact", w->exact}};
}

json optional_number(const std::optional<double>& v) {
    return v ? json(*v) : json(nullptr);
}

std::string fixed(double value, const char* format) {
    char buf[64];
    std::snprintf(buf, sizeof buf, format, value);
    return buf;
}

/// Left-aligned columns separated by two spaces.
std::string aligned(const std::vector<std::vector<std::string>>& rows) {
    std::vector<std::size_t> widths;
    for (const auto& row : rows) {
        widths.resize(std::max(widths.size(), row.size()), 0);
        for (std::size_t c = 0; c < row.size(); ++c) widths[c] = std::max(widths[c], row[c].size());
    }
    std::string out;
    for (const auto& row : rows) {
        for (std::size_t c = 0; c < row.size(); ++c) {
            out += row[c];
            if (c + 1 < row.size()) out += std::string(widths[c] - row[c].size() + 2, ' ');
        }
        out += '\n';
    }
    return out;
}

json per_algo(const std::vector<std::string>& algos, const std::vector<double>& values) {
    json out = json::object();
    for (std::size_t a = 0; a < values.size() && a < algos.size(); ++a) {
        out[algos[a]] = values[a];
    }
    return out;
}

} // namespace

json to_json(const ComparisonReport& report) {
    json doc;
    doc["dataset"] = report.dataset;
    doc["n"] = report.n;
    doc["d"] = report.d;
    doc["objective"] = report.objective;
    doc["algos"] = report.algos;
    doc["k_values"] = report.k_values;
    doc["trials"] = report.trials;
    doc["seed"] = report.seed;
    doc["ground_truth_k"] = report.ground_truth_k ? json(*report.ground_truth_k) : json(nullptr);

    json comparisons = json::array();
    for (const auto& c : report.comparisons) {
        comparisons.push_back({{"subject", c.subject},
                               {"baseline", c.baseline},
                               {"scope", c.scope},
                               {"pairs", c.pairs},
                               {"wilcoxon", wilcoxon_json(c.wilcoxon)},
                               {"mean_relative_improvement_percent", optional_number(c.mean_relative_improvement)},
                               {"significant", c.significant},
                               {"verdict", c.significant ? "significant" : "insignificant"}});
    }
    doc["comparisons"] = comparisons;

    json nmi = json::array();
    for (const auto& s : report.nmi) {
        nmi.push_back({{"algo", s.algo}, {"k", s.k}, {"mean", s.interval.mean}, {"ci95_lo", s.interval.lo}, {"ci95_hi", s.interval.hi}, {"samples", s.samples}});
    }
    doc["nmi"] = nmi;

    json records = json::array();
    for (const auto& r : report.records) {
        json rec = {{"k", r.k},
                    {"trial", r.trial},
                    {"seed", r.seed},
                    {"objective", per_algo(report.algos, r.objective)},
                    {"S_M", per_algo(report.algos, r.macro)},
                    {"S_m", per_algo(report.algos, r.micro)},
                    {"parameter", per_algo(report.algos, r.parameter)}};
        if (!r.nmi.empty()) {
            rec["nmi"] = per_algo(report.algos, r.nmi);
        }
        records.push_back(std::move(rec));
    }
    doc["records"] = records;
    return doc;
}

std::string render_table(const ComparisonReport& report) {
    std::ostringstream out;
    out << "dataset " << report.dataset << " (n=" << report.n << ", d=" << report.d << "), objective " << report.objective
        << ", " << report.trials << " trials per k\n";
    std::vector<std::vector<std::string>> rows{{"subject", "baseline", "scope", "pairs", "W+", "p_value", "rel_impr_%", "verdict"}};
    for (const auto& c : report.comparisons) {
        rows.push_back({c.subject, c.baseline, c.scope, std::to_string(c.pairs),
                        c.wilcoxon ? fixed(c.wilcoxon->statistic, "%.1f") : "-",
                        c.wilcoxon ? fixed(c.wilcoxon->p_value, "%.3g") : "-",
                        c.mean_relative_improvement ? fixed(*c.mean_relative_improvement, "%+.2f") : "-",
                        c.significant ? "significant" : "insignificant"});
    }
    out << aligned(rows);
    if (!report.nmi.empty()) {
        out << "NMI at k=" << report.nmi.front().k << " (mean [95% CI])\n";
        std::vector<std::vector<std::string>> nmi_rows;
        for (const auto& s : report.nmi) {
            nmi_rows.push_back({"  " + s.algo, fixed(s.interval.mean, "%.4f"),
                                "[" + fixed(s.interval.lo, "%.4f") + ", " + fixed(s.interval.hi, "%.4f") + "]"});
        }
        out << aligned(nmi_rows);
    }
    return out.str();
}

json to_json(const ApproxComparison& cmp) {
    auto agg = [](const Aggregates& a) { return json{{"S_m", a.micro}, {"S_M", a.macro}}; };
    return {{"dataset", cmp.dataset},
            {"k", cmp.k},
            {"exact", agg(cmp.exact)},
            {"apr", agg(cmp.apr)},
            {"aps", agg(cmp.aps)},
            {"spearman_apr", cmp.rho_apr},
            {"spearman_aps", cmp.rho_aps}};
}

std::string render_table(const std::vector<ApproxComparison>& rows) {
    std::vector<std::vector<std::string>> cells{
        {"dataset", "k", "rho_ApR", "rho_ApS", "exact_S_m", "exact_S_M", "ApR_S_m", "ApR_S_M", "ApS_S_m", "ApS_S_M"}};
    for (const auto& r : rows) {
        cells.push_back({r.dataset, std::to_string(r.k), fixed(r.rho_apr, "%.4f"), fixed(r.rho_aps, "%.4f"),
                         fixed(r.exact.micro, "%.4f"), fixed(r.exact.macro, "%.4f"), fixed(r.apr.micro, "%.4f"),
                         fixed(r.apr.macro, "%.4f"), fixed(r.aps.micro, "%.4f"), fixed(r.aps.macro, "%.4f")});
    }
    return aligned(cells);
}

json to_json(const SilhouetteReport& report) {
    return {{"mode", to_string(report.mode)},
            {"evaluated", report.evaluated_indices.size()},
            {"S_m", report.micro},
            {"S_M", report.macro},
            {"combined", report.combined}};
}

json to_json(const RunResult& run, const Objective& objective) {
    json trace = json::array();
    for (const auto& rec : run.trace) {
        trace.push_back({{"objective", rec.objective}, {"weighted_objective", rec.weighted_objective}, {"centroid_movement", rec.centroid_movement}});
    }
    return {{"objective", to_string(objective)},
            {"initial_objective", run.initial_objective},
            {"best_objective", run.best_objective},
            {"best_iteration", run.best_iteration},
            {"iterations_run", run.iterations_run},
            {"terminated_by", to_string(run.terminated_by)},
            {"trace", trace}};
}

} // namespace ksil
