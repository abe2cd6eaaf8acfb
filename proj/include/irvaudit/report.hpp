// Experiment grid: build plans on (optionally error-injected) reported
// ballots, simulate them under the repetition protocol, and emit report
// rows as CSV, JSON, or the landscape table layout used for published
// results. Zero-error cells run one simulation per sample seed; error cells
// run every error seed crossed with every sample seed.
#pragma once

#include <atomic>
#include <cstdio>
#include <ostream>
#include <thread>

#include "error_model.hpp"
#include "raire.hpp"
#include "simulate.hpp"

namespace irvaudit {

struct LabeledElection {
    std::string name;
    Election election;
};

struct GridSpec {
    std::vector<PlanMethod> methods{PlanMethod::eo, PlanMethod::se,
                                    PlanMethod::wo, PlanMethod::raire};
    std::vector<AuditKind> kinds{AuditKind::ballot_polling,
                                 AuditKind::comparison};
    std::vector<double> alphas{0.05};
    std::vector<double> gammas{1.1};
    std::vector<double> error_rates{0.0};
    int zero_error_reps = 10;
    int error_seed_count = 10;
    int sample_seeds_per_error = 5;
    std::uint64_t base_error_seed = 1;
    std::uint64_t base_sample_seed = 1;
    Count max_draws = 0;  // 0: |B| per election
    GroupingPolicy se_policy = GroupingPolicy::asn_greedy;
    int jobs = 0;  // 0: hardware concurrency
};

struct ReportRow {
    std::string election;
    int candidate_count = 0;
    Count total_ballots = 0;
    std::optional<Count> mov;
    PlanMethod method = PlanMethod::eo;
    AuditKind kind = AuditKind::ballot_polling;
    double alpha = 0.05;
    double gamma = 1.1;
    double error_rate = 0.0;
    double polls_pct = 0.0;  // mean sampled ballots, % of |B|
    double asn_pct = 0.0;    // mean plan ASN, % of |B| (inf when unbounded)
    int confirmed = 0;
    int full_recounts = 0;
    std::string note;
};

// Build the requested plan; empty when RAIRE reaches its full-recount
// verdict.
inline std::optional<AuditPlan> build_plan(const Election& e, PlanMethod method,
                                           AuditKind kind, double alpha,
                                           double gamma,
                                           GroupingPolicy se_policy) {
    switch (method) {
        case PlanMethod::eo: return plan_eo(e, kind, alpha, gamma);
        case PlanMethod::se: return plan_se(e, kind, alpha, gamma, se_policy);
        case PlanMethod::wo: return plan_wo(e, kind, alpha, gamma);
        case PlanMethod::raire: {
            CandidateId w;
            if (auto reported = e.reported_winner_id()) w = *reported;
            else w = tabulate_irv(e).winner();
            RaireResult r = raire(e, w, kind, alpha, gamma);
            if (r.full_recount) return std::nullopt;
            return r.plan;
        }
    }
    throw std::logic_error("unknown plan method");
}

namespace detail {

inline ReportRow run_cell(const LabeledElection& le, PlanMethod method,
                          AuditKind kind, double alpha, double gamma,
                          double rate, const GridSpec& grid) {
    const Election& e = le.election;
    ReportRow row;
    row.election = le.name;
    row.candidate_count = e.candidate_count();
    row.total_ballots = e.total_ballots();
    row.mov = e.metadata().margin_of_victory;
    row.method = method;
    row.kind = kind;
    row.alpha = alpha;
    row.gamma = gamma;
    row.error_rate = rate;

    const Count max_draws =
        grid.max_draws > 0 ? grid.max_draws : e.total_ballots();
    const int error_configs = rate == 0.0 ? 1 : grid.error_seed_count;
    const int reps_per_config =
        rate == 0.0 ? grid.zero_error_reps : grid.sample_seeds_per_error;

    double polls_sum = 0.0;
    long double asn_pct_sum = 0.0L;
    int sims = 0;
    for (int ec = 0; ec < error_configs; ++ec) {
        const std::uint64_t error_seed =
            rate == 0.0 ? grid.base_error_seed
                        : derive_seed(grid.base_error_seed,
                                      static_cast<std::uint64_t>(ec), 0);
        PairedElections pair =
            rate == 0.0 ? PairedElections{e, e}
                        : inject_errors(e, ErrorModel{rate, error_seed});

        std::optional<AuditPlan> plan;
        std::string failure;
        try {
            plan = build_plan(pair.reported, method, kind, alpha, gamma,
                              grid.se_policy);
            if (!plan) failure = "full recount verdict";
        } catch (const std::exception& ex) {
            failure = ex.what();
        }
        if (!failure.empty()) {
            // Treat the whole error configuration as an escalation.
            asn_pct_sum += kInfiniteAsn;
            polls_sum += 100.0 * static_cast<double>(reps_per_config) *
                         static_cast<double>(max_draws) /
                         static_cast<double>(e.total_ballots());
            row.full_recounts += reps_per_config;
            sims += reps_per_config;
            if (row.note.empty()) row.note = failure;
            continue;
        }

        asn_pct_sum += 100.0L * static_cast<long double>(plan->overall_asn) /
                       static_cast<long double>(e.total_ballots());
        SimConfig cfg;
        cfg.kind = kind;
        cfg.alpha = alpha;
        cfg.gamma = gamma;
        cfg.max_draws = max_draws;
        cfg.reps = reps_per_config;
        cfg.sample_seed = grid.base_sample_seed;
        cfg.error_seed = error_seed;
        const SimResult sim =
            simulate(*plan, pair.reported, pair.actual, cfg);
        polls_sum += sim.mean_polls_pct * static_cast<double>(reps_per_config);
        row.confirmed += sim.confirmed_count;
        row.full_recounts += sim.full_recount_count;
        sims += reps_per_config;
    }
    row.polls_pct = polls_sum / static_cast<double>(sims);
    row.asn_pct = static_cast<double>(asn_pct_sum /
                                      static_cast<long double>(error_configs));
    return row;
}

}  // namespace detail

// Run every (election x method x kind x alpha x gamma x rate) cell. Cells
// are independent and deterministically seeded, so the worker count changes
// wall time only, never results.
inline std::vector<ReportRow> run_experiment(
    const std::vector<LabeledElection>& elections, const GridSpec& grid) {
    struct Cell {
        std::size_t election;
        PlanMethod method;
        AuditKind kind;
        double alpha, gamma, rate;
    };
    std::vector<Cell> cells;
    for (std::size_t i = 0; i < elections.size(); ++i)
        for (PlanMethod m : grid.methods)
            for (AuditKind k : grid.kinds)
                for (double a : grid.alphas)
                    for (double g : grid.gammas)
                        for (double r : grid.error_rates)
                            cells.push_back({i, m, k, a, g, r});

    std::vector<ReportRow> rows(cells.size());
    unsigned jobs = grid.jobs > 0
                        ? static_cast<unsigned>(grid.jobs)
                        : std::max(1u, std::thread::hardware_concurrency());
    jobs = std::min<std::size_t>(jobs, cells.size() ? cells.size() : 1);

    std::atomic<std::size_t> next{0};
    auto worker = [&]() {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= cells.size()) return;
            const Cell& c = cells[i];
            rows[i] = detail::run_cell(elections[c.election], c.method, c.kind,
                                       c.alpha, c.gamma, c.rate, grid);
        }
    };
    if (jobs <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (unsigned t = 0; t < jobs; ++t) pool.emplace_back(worker);
        for (std::thread& t : pool) t.join();
    }
    return rows;
}

// ---- writers --------------------------------------------------------------

// Percentage cell in the published-table style: one decimal, two for values
// that would round to 0.0, "inf" above 100%.
inline std::string format_pct(double v) {
    if (std::isinf(v) || v > 100.0) return "inf";
    char buf[32];
    if (v > 0.0 && v < 0.095) std::snprintf(buf, sizeof buf, "%.2f", v);
    else std::snprintf(buf, sizeof buf, "%.1f", v);
    return buf;
}

inline std::string format_param(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%g", v);
    return buf;
}

inline void write_report_csv(std::ostream& out,
                             const std::vector<ReportRow>& rows) {
    out << "election,candidates,ballots,mov,method,kind,alpha,gamma,"
           "error_rate,polls_pct,asn_pct,confirmed,full_recounts,note\n";
    for (const ReportRow& r : rows) {
        out << r.election << ',' << r.candidate_count << ',' << r.total_ballots
            << ',';
        if (r.mov) out << *r.mov;
        out << ',' << to_string(r.method) << ',' << to_string(r.kind) << ','
            << format_param(r.alpha) << ',' << format_param(r.gamma) << ','
            << format_param(r.error_rate) << ',' << format_pct(r.polls_pct)
            << ',' << format_pct(r.asn_pct) << ',' << r.confirmed << ','
            << r.full_recounts << ',' << r.note << '\n';
    }
}

inline nlohmann::json report_to_json(const std::vector<ReportRow>& rows) {
    nlohmann::json arr = nlohmann::json::array();
    for (const ReportRow& r : rows) {
        nlohmann::json j;
        j["election"] = r.election;
        j["candidates"] = r.candidate_count;
        j["ballots"] = r.total_ballots;
        j["mov"] = r.mov ? nlohmann::json(*r.mov) : nlohmann::json(nullptr);
        j["method"] = to_string(r.method);
        j["kind"] = to_string(r.kind);
        j["alpha"] = r.alpha;
        j["gamma"] = r.gamma;
        j["error_rate"] = r.error_rate;
        j["polls_pct"] = r.polls_pct > 100.0 || std::isinf(r.polls_pct)
                             ? nlohmann::json("inf")
                             : nlohmann::json(r.polls_pct);
        j["asn_pct"] = r.asn_pct > 100.0 || std::isinf(r.asn_pct)
                           ? nlohmann::json("inf")
                           : nlohmann::json(r.asn_pct);
        j["outcome_counts"] = {{"confirmed", r.confirmed},
                               {"full_recount", r.full_recounts}};
        if (!r.note.empty()) j["note"] = r.note;
        arr.push_back(std::move(j));
    }
    return arr;
}

inline void write_report_json(std::ostream& out,
                              const std::vector<ReportRow>& rows) {
    out << report_to_json(rows).dump(2) << '\n';
}

// Landscape pivot, one row per election: identification columns followed by
// a Polls%/ASN% pair per (alpha, kind), mirroring the published comparison
// tables. Rows must all carry the same method and gamma.
inline void write_paper_table(std::ostream& out,
                              const std::vector<ReportRow>& rows,
                              PlanMethod method) {
    std::vector<double> alphas;
    std::vector<std::string> elections;
    for (const ReportRow& r : rows) {
        if (r.method != method) continue;
        if (std::find(alphas.begin(), alphas.end(), r.alpha) == alphas.end())
            alphas.push_back(r.alpha);
        if (std::find(elections.begin(), elections.end(), r.election) ==
            elections.end())
            elections.push_back(r.election);
    }
    std::sort(alphas.begin(), alphas.end());

    out << "election,candidates,ballots,mov";
    for (double a : alphas)
        for (AuditKind k :
             {AuditKind::ballot_polling, AuditKind::comparison})
            out << ',' << to_string(k) << "_polls_pct_a" << format_param(a)
                << ',' << to_string(k) << "_asn_pct_a" << format_param(a);
    out << '\n';

    for (const std::string& name : elections) {
        const ReportRow* any = nullptr;
        for (const ReportRow& r : rows)
            if (r.method == method && r.election == name) { any = &r; break; }
        out << name << ',' << any->candidate_count << ',' << any->total_ballots
            << ',';
        if (any->mov) out << *any->mov;
        for (double a : alphas) {
            for (AuditKind k :
                 {AuditKind::ballot_polling, AuditKind::comparison}) {
                const ReportRow* cell = nullptr;
                for (const ReportRow& r : rows)
                    if (r.method == method && r.election == name &&
                        r.alpha == a && r.kind == k) {
                        cell = &r;
                        break;
                    }
                if (cell)
                    out << ',' << format_pct(cell->polls_pct) << ','
                        << format_pct(cell->asn_pct);
                else
                    out << ",,";
            }
        }
        out << '\n';
    }
}

}  // namespace irvaudit
