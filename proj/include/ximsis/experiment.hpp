#pragma once

#include <chrono>
#include <cmath>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "ximsis/metrics.hpp"
#include "ximsis/parallel.hpp"
#include "ximsis/screening.hpp"
#include "ximsis/simulate.hpp"

namespace ximsis {

// A named rule for the neighbor count. The canonical family is
// floor(sqrt(n)) + offset for offset in {-1, 0, +1} (XIM-SIS1/2/3).
struct MVariant {
    std::string name;
    enum class Kind { SqrtOffset, Fixed } kind = Kind::SqrtOffset;
    std::int32_t value = 0; // offset or fixed M

    std::int32_t resolve(std::int32_t n) const {
        std::int32_t m = kind == Kind::Fixed
                             ? value
                             : static_cast<std::int32_t>(
                                   std::floor(std::sqrt(static_cast<double>(n)))) + value;
        m = std::max<std::int32_t>(1, m);
        return std::min(m, n);
    }
};

inline std::vector<MVariant> default_variants() {
    return {{"XIM-SIS1", MVariant::Kind::SqrtOffset, -1},
            {"XIM-SIS2", MVariant::Kind::SqrtOffset, 0},
            {"XIM-SIS3", MVariant::Kind::SqrtOffset, +1}};
}

struct ExperimentSpec {
    SimScenario scenario;
    std::int32_t n_reps = 500;
    std::vector<MVariant> m_variants = default_variants();
    std::vector<std::int32_t> model_sizes; // empty = {d1, d2}
    std::uint64_t base_seed = 0;
    int workers = 0;

    std::vector<std::int32_t> resolved_model_sizes() const {
        if (!model_sizes.empty()) return model_sizes;
        const ModelSizes d = default_model_sizes(scenario.n);
        return {d.d1, d.d2};
    }

    void validate() const {
        scenario.validate();
        if (n_reps < 1) throw std::invalid_argument("replication count must be positive");
        if (m_variants.empty()) throw std::invalid_argument("no M variants");
    }
};

namespace detail {

constexpr std::uint64_t kReplicationStream = 0x7265706c; // per-rep scenario seeds
constexpr std::uint64_t kTieStream = 0x74696573;         // per-rep screening tie seeds

inline std::uint64_t replication_seed(const ExperimentSpec& spec, std::int32_t rep) {
    return derive_seed(derive_seed(spec.base_seed, kReplicationStream),
                       static_cast<std::uint64_t>(rep));
}

} // namespace detail

struct ReplicationOutput {
    std::vector<ReplicationRecord> per_variant;
    double realized_cr = 0.0;
};

// One replication: generate once with the rep-derived seed, screen once per
// M variant on the shared sample. No state crosses replications.
inline ReplicationOutput run_replication(const ExperimentSpec& spec, std::int32_t rep,
                                         double c_upper) {
    spec.validate();
    if (rep < 0 || rep >= spec.n_reps) throw std::invalid_argument("replication index out of range");

    SimScenario sc = spec.scenario;
    sc.seed = detail::replication_seed(spec, rep);
    const GeneratedSample sample = generate_sample(sc, c_upper);

    ReplicationOutput out;
    out.realized_cr = censoring_rate(sample.resp);
    out.per_variant.reserve(spec.m_variants.size());
    const std::vector<std::int32_t> active = sc.active_set();
    for (const MVariant& variant : spec.m_variants) {
        ScreeningConfig cfg;
        cfg.m_rule = MRule::fixed(variant.resolve(sc.n));
        cfg.selection = ScreeningConfig::Selection::TopD;
        cfg.top_d = sc.p;
        cfg.tie_seed = derive_seed(sc.seed, detail::kTieStream);
        cfg.workers = 1; // replication-level parallelism happens above
        const ScreeningResult screened = screen(sample.x, sample.resp, cfg);
        out.per_variant.push_back({screened.order, active});
    }
    return out;
}

inline ReplicationOutput run_replication(const ExperimentSpec& spec, std::int32_t rep) {
    return run_replication(spec, rep, calibrate_censoring(spec.scenario));
}

struct ReportRow {
    std::string variant;
    std::int32_t m_used = 0;
    std::int32_t d = 0;
    double s_q05 = 0, s_q25 = 0, s_q50 = 0, s_q75 = 0, s_q95 = 0;
    double iqr = 0;
    std::vector<double> p_j;
    double p_a = 0;
    double realized_cr = 0;
    double seconds_per_rep = 0;

    friend bool operator==(const ReportRow&, const ReportRow&) = default;
};

struct ExperimentReport {
    std::string model;
    std::int32_t n = 0, p = 0, n_reps = 0;
    double target_cr = 0, c_upper = 0;
    std::vector<std::int32_t> active; // 0-based
    std::vector<ReportRow> rows;      // one per (variant, model size)

    friend bool operator==(const ExperimentReport&, const ExperimentReport&) = default;
};

struct ExperimentResult {
    ExperimentReport report;
    // records[variant][rep]; aggregation is a pure function of these
    std::vector<std::vector<ReplicationRecord>> records;
    std::vector<double> realized_cr; // per rep
};

// Pure aggregation from saved records, reused by tests to confirm the
// round-trip identity.
inline std::vector<ReportRow> aggregate_rows(const ExperimentSpec& spec,
                                             std::span<const std::vector<ReplicationRecord>> records,
                                             double mean_cr, double seconds_per_rep) {
    std::vector<ReportRow> rows;
    const std::vector<std::int32_t> sizes = spec.resolved_model_sizes();
    for (std::size_t v = 0; v < spec.m_variants.size(); ++v) {
        std::vector<double> s(records[v].size());
        for (std::size_t r = 0; r < records[v].size(); ++r)
            s[r] = static_cast<double>(min_model_size(records[v][r]));
        for (std::int32_t d : sizes) {
            ReportRow row;
            row.variant = spec.m_variants[v].name;
            row.m_used = spec.m_variants[v].resolve(spec.scenario.n);
            row.d = d;
            row.s_q05 = quantile(s, 0.05);
            row.s_q25 = quantile(s, 0.25);
            row.s_q50 = quantile(s, 0.50);
            row.s_q75 = quantile(s, 0.75);
            row.s_q95 = quantile(s, 0.95);
            row.iqr = row.s_q75 - row.s_q25;
            const SelectionProportions props = selection_proportions(records[v], d);
            row.p_j = props.p_j;
            row.p_a = props.p_a;
            row.realized_cr = mean_cr;
            row.seconds_per_rep = seconds_per_rep;
            rows.push_back(std::move(row));
        }
    }
    return rows;
}

// Runs all replications in parallel (disjoint slots, deterministic merge)
// and aggregates one report row per (variant, model size). A replication
// failure aborts the experiment naming the derived seed that failed.
inline ExperimentResult run_experiment(const ExperimentSpec& spec) {
    spec.validate();
    const double c_upper = calibrate_censoring(spec.scenario);

    ExperimentResult result;
    result.records.assign(spec.m_variants.size(), std::vector<ReplicationRecord>(spec.n_reps));
    result.realized_cr.assign(spec.n_reps, 0.0);

    const auto start = std::chrono::steady_clock::now();
    parallel_for(static_cast<std::size_t>(spec.n_reps), spec.workers, [&](std::size_t rep) {
        try {
            ReplicationOutput out =
                run_replication(spec, static_cast<std::int32_t>(rep), c_upper);
            for (std::size_t v = 0; v < spec.m_variants.size(); ++v)
                result.records[v][rep] = std::move(out.per_variant[v]);
            result.realized_cr[rep] = out.realized_cr;
        } catch (const std::exception& e) {
            throw std::runtime_error(
                "replication " + std::to_string(rep) + " (seed " +
                std::to_string(detail::replication_seed(spec, static_cast<std::int32_t>(rep))) +
                ") failed: " + e.what());
        }
    });
    const double elapsed =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

    double mean_cr = 0.0;
    for (double cr : result.realized_cr) mean_cr += cr;
    mean_cr /= static_cast<double>(spec.n_reps);

    ExperimentReport& report = result.report;
    report.model = model_name(spec.scenario.model);
    report.n = spec.scenario.n;
    report.p = spec.scenario.p;
    report.n_reps = spec.n_reps;
    report.target_cr = spec.scenario.target_cr;
    report.c_upper = c_upper;
    report.active = spec.scenario.active_set();
    report.rows = aggregate_rows(spec, result.records, mean_cr,
                                 elapsed / static_cast<double>(spec.n_reps));
    return result;
}

} // namespace ximsis
