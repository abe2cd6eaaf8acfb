// Command-line front end: tabulate IRV election files, build audit plans,
// simulate audits and experiment grids, and verify plan soundness.
//
// Exit codes: 0 success, 1 usage/parse/verification errors, 2 full-recount
// verdict.
#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include <irvaudit/irvaudit.hpp>

namespace {

using namespace irvaudit;

constexpr int kExitOk = 0;
constexpr int kExitError = 1;
constexpr int kExitFullRecount = 2;

Election load_election(const std::string& path, const std::string& format) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open " + path);
    std::string f = format;
    if (f == "auto")
        f = path.size() > 4 && path.compare(path.size() - 4, 4, ".csv") == 0
                ? "csv"
                : "json";
    return f == "csv" ? parse_election_csv(in) : parse_election_json(in);
}

std::ostream& open_output(std::ofstream& file, const std::string& path) {
    if (path.empty() || path == "-") return std::cout;
    file.open(path);
    if (!file) throw std::runtime_error("cannot write " + path);
    return file;
}

PlanMethod parse_method(const std::string& m) {
    if (m == "eo") return PlanMethod::eo;
    if (m == "se") return PlanMethod::se;
    if (m == "wo") return PlanMethod::wo;
    if (m == "raire") return PlanMethod::raire;
    throw CLI::ValidationError("--method", "unknown method " + m);
}

AuditKind parse_kind(const std::string& k) {
    if (k == "bp") return AuditKind::ballot_polling;
    if (k == "cp") return AuditKind::comparison;
    throw CLI::ValidationError("--kind", "unknown kind " + k);
}

GroupingPolicy parse_se_strategy(const std::string& s) {
    if (s == "greedy") return GroupingPolicy::asn_greedy;
    if (s == "maximal") return GroupingPolicy::maximal;
    if (s == "none") return GroupingPolicy::none;
    throw CLI::ValidationError("--se-strategy", "unknown strategy " + s);
}

std::string pct(double value, Count total) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.1f",
                  100.0 * value / static_cast<double>(total));
    return buf;
}

int cmd_tabulate(const std::string& input, const std::string& format) {
    Election e = load_election(input, format);
    EliminationSequence seq = tabulate_irv(e);
    std::cout << "winner: " << e.candidate_name(seq.winner()) << "\n";
    std::cout << "order: ";
    for (std::size_t i = 0; i < seq.order.size(); ++i) {
        if (i) std::cout << ",";
        std::cout << e.candidate_name(seq.order[i]);
    }
    std::cout << "\n";
    for (const TieBreak& tb : seq.tie_breaks) {
        std::cout << "note: round " << tb.round << " tally tie; eliminated "
                  << e.candidate_name(tb.eliminated)
                  << " (lowest roster index) over";
        for (CandidateId c : tb.tied_with)
            std::cout << " " << e.candidate_name(c);
        std::cout << "\n";
    }
    std::cout << "candidate";
    for (std::size_t r = 0; r < seq.round_tallies.size(); ++r)
        std::cout << "\tRnd" << (r + 1);
    std::cout << "\n";
    for (CandidateId c = 0; c < e.candidate_count(); ++c) {
        std::cout << e.candidate_name(c);
        for (const auto& round : seq.round_tallies) {
            std::cout << "\t";
            if (round[static_cast<std::size_t>(c)] == kNotStanding)
                std::cout << "---";
            else
                std::cout << round[static_cast<std::size_t>(c)];
        }
        std::cout << "\n";
    }
    return kExitOk;
}

int cmd_plan(const std::string& input, const std::string& format,
             const std::string& method_name, const std::string& kind_name,
             double alpha, double gamma, const std::string& se_strategy,
             const std::string& out_path, bool trace) {
    Election e = load_election(input, format);
    const PlanMethod method = parse_method(method_name);
    const AuditKind kind = parse_kind(kind_name);

    AuditPlan plan;
    nlohmann::json trace_json;
    if (method == PlanMethod::raire) {
        CandidateId w;
        if (auto reported = e.reported_winner_id()) w = *reported;
        else w = tabulate_irv(e).winner();
        RaireResult r = raire(e, w, kind, alpha, gamma, trace);
        if (trace) {
            trace_json["nodes_expanded"] = r.trace.nodes_expanded;
            trace_json["commits"] = r.trace.commits;
            trace_json["duplicate_commits"] = r.trace.duplicate_commits;
            trace_json["pruned"] = r.trace.pruned;
            trace_json["events"] = r.trace.events;
        }
        if (r.full_recount) {
            std::cerr << "full recount necessary\n";
            return kExitFullRecount;
        }
        plan = std::move(r.plan);
    } else if (method == PlanMethod::eo) {
        plan = plan_eo(e, kind, alpha, gamma);
    } else if (method == PlanMethod::se) {
        plan = plan_se(e, kind, alpha, gamma, parse_se_strategy(se_strategy));
    } else {
        plan = plan_wo(e, kind, alpha, gamma);
    }

    nlohmann::json doc = plan_to_json(plan, e);
    if (trace && method == PlanMethod::raire) doc["trace"] = trace_json;
    std::ofstream file;
    open_output(file, out_path) << doc.dump(2) << "\n";

    std::cerr << "method: " << to_string(plan.method) << " ("
              << to_string(plan.kind) << ")  alpha: " << alpha;
    if (kind == AuditKind::comparison) std::cerr << "  gamma: " << gamma;
    std::cerr << "\nunits: " << plan.units.size()
              << "  hypotheses: " << plan.hypothesis_count() << "\n";
    if (std::isinf(plan.overall_asn)) {
        std::cerr << "overall ASN: inf (some hypothesis cannot be confirmed; "
                     "expect a full recount)\n";
    } else if (plan.overall_asn >
               static_cast<double>(plan.total_ballots)) {
        std::cerr << "overall ASN: inf (estimate " << plan.overall_asn
                  << " ballots exceeds the " << plan.total_ballots
                  << " cast; expect a full recount)\n";
    } else {
        std::cerr << "overall ASN: " << plan.overall_asn << " ballots ("
                  << pct(plan.overall_asn, plan.total_ballots) << "% of "
                  << plan.total_ballots << ")\n";
    }
    return kExitOk;
}

int cmd_simulate(const std::string& input, const std::string& format,
                 const std::string& method_name, const std::string& kind_name,
                 double alpha, double gamma, const std::string& se_strategy,
                 double error_rate, int reps, std::uint64_t sample_seed,
                 std::uint64_t error_seed, Count max_draws,
                 const std::string& out_path, const std::string& out_format) {
    Election e = load_election(input, format);
    const PlanMethod method = parse_method(method_name);
    const AuditKind kind = parse_kind(kind_name);

    PairedElections pair = inject_errors(e, {error_rate, error_seed});
    std::optional<AuditPlan> plan =
        build_plan(pair.reported, method, kind, alpha, gamma,
                   parse_se_strategy(se_strategy));
    if (!plan) {
        std::cerr << "full recount necessary\n";
        return kExitFullRecount;
    }

    SimConfig cfg;
    cfg.kind = kind;
    cfg.alpha = alpha;
    cfg.gamma = gamma;
    cfg.max_draws = max_draws;
    cfg.reps = reps;
    cfg.sample_seed = sample_seed;
    cfg.error_seed = error_seed;
    SimResult res = simulate(*plan, pair.reported, pair.actual, cfg);

    std::ofstream file;
    std::ostream& out = open_output(file, out_path);
    if (out_format == "json") {
        nlohmann::json doc;
        doc["plan_overall_asn"] = std::isinf(plan->overall_asn)
                                      ? nlohmann::json("inf")
                                      : nlohmann::json(plan->overall_asn);
        doc["mean_draws"] = res.mean_draws;
        doc["mean_polls_pct"] = res.mean_polls_pct;
        doc["confirmed"] = res.confirmed_count;
        doc["full_recounts"] = res.full_recount_count;
        doc["reps"] = nlohmann::json::array();
        for (const RepResult& rr : res.reps)
            doc["reps"].push_back(
                {{"draws", rr.draws},
                 {"outcome", rr.outcome == SimOutcome::confirmed
                                 ? "confirmed"
                                 : "full_recount"}});
        out << doc.dump(2) << "\n";
    } else {
        out << "rep,draws,outcome\n";
        for (std::size_t i = 0; i < res.reps.size(); ++i)
            out << i << ',' << res.reps[i].draws << ','
                << (res.reps[i].outcome == SimOutcome::confirmed
                        ? "confirmed"
                        : "full_recount")
                << "\n";
        out << "# mean_draws=" << res.mean_draws
            << " mean_polls_pct=" << res.mean_polls_pct << "\n";
    }
    return kExitOk;
}

int cmd_grid(const std::vector<std::string>& inputs, const std::string& format,
             const std::vector<std::string>& methods,
             const std::vector<std::string>& kinds,
             const std::vector<double>& alphas, const std::vector<double>& gammas,
             const std::vector<double>& rates, int reps, int error_seeds,
             int sample_seeds, std::uint64_t base_sample_seed,
             std::uint64_t base_error_seed, Count max_draws, int jobs,
             const std::string& se_strategy, const std::string& out_path,
             const std::string& out_format, const std::string& table_method) {
    std::vector<LabeledElection> elections;
    for (const std::string& path : inputs) {
        std::string name = path;
        const auto slash = name.find_last_of('/');
        if (slash != std::string::npos) name = name.substr(slash + 1);
        const auto dot = name.find_last_of('.');
        if (dot != std::string::npos) name = name.substr(0, dot);
        elections.push_back({name, load_election(path, format)});
    }

    GridSpec grid;
    grid.methods.clear();
    for (const std::string& m : methods) grid.methods.push_back(parse_method(m));
    grid.kinds.clear();
    for (const std::string& k : kinds) grid.kinds.push_back(parse_kind(k));
    grid.alphas = alphas;
    grid.gammas = gammas;
    grid.error_rates = rates;
    grid.zero_error_reps = reps;
    grid.error_seed_count = error_seeds;
    grid.sample_seeds_per_error = sample_seeds;
    grid.base_sample_seed = base_sample_seed;
    grid.base_error_seed = base_error_seed;
    grid.max_draws = max_draws;
    grid.jobs = jobs;
    grid.se_policy = parse_se_strategy(se_strategy);

    const std::vector<ReportRow> rows = run_experiment(elections, grid);

    std::ofstream file;
    std::ostream& out = open_output(file, out_path);
    if (out_format == "json") write_report_json(out, rows);
    else if (out_format == "table")
        write_paper_table(out, rows, parse_method(table_method));
    else write_report_csv(out, rows);
    return kExitOk;
}

int cmd_verify(const std::string& plan_path, const std::string& input,
               const std::string& format, int max_candidates) {
    Election e = load_election(input, format);
    std::ifstream pin(plan_path);
    if (!pin) throw std::runtime_error("cannot open " + plan_path);
    nlohmann::json doc = nlohmann::json::parse(pin);
    AuditPlan plan = plan_from_json(doc, e);

    for (const AuditUnit& unit : plan.units) {
        for (const PairwiseHypothesis& h : unit.hypotheses) {
            const HypothesisTallies t =
                recompute_tallies(e, h.interp, h.winner, h.loser);
            if (t.winner_tally != h.winner_tally ||
                t.loser_tally != h.loser_tally) {
                std::cerr << "stored tallies do not match this election\n";
                return kExitError;
            }
        }
    }

    CandidateId w;
    if (auto reported = e.reported_winner_id()) w = *reported;
    else w = tabulate_irv(e).winner();
    SoundnessVerdict verdict = verify_plan_soundness(plan, e, w, max_candidates);
    if (verdict.sound) {
        std::cout << "sound: every alternate elimination order is contradicted\n";
        return kExitOk;
    }
    std::cout << "unsound: uncovered elimination order";
    for (CandidateId c : *verdict.uncovered_order)
        std::cout << " " << e.candidate_name(c);
    std::cout << "\n";
    return kExitError;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"IRV election tabulation, risk-limiting audit planning and "
                 "audit simulation"};
    app.require_subcommand(1);

    std::string input, format = "auto", out_path, out_format = "csv";
    std::string method = "raire", kind = "bp", se_strategy = "greedy";
    std::string plan_path, table_method = "eo";
    std::vector<std::string> inputs, methods{"eo", "se", "wo", "raire"},
        kinds{"bp", "cp"};
    std::vector<double> alphas{0.05}, gammas{1.1}, rates{0.0};
    double alpha = 0.05, gamma = 1.1, error_rate = 0.0;
    int reps = 10, error_seeds = 10, sample_seeds = 5, jobs = 0,
        max_candidates = 7;
    std::uint64_t sample_seed = 1, error_seed = 1;
    Count max_draws = 0;
    bool trace = false;

    if (const char* env_jobs = std::getenv("IRVAUDIT_JOBS"))
        jobs = std::atoi(env_jobs);

    auto add_format = [&](CLI::App* cmd) {
        cmd->add_option("--format", format,
                        "input format: auto, json or csv")
            ->default_val("auto");
    };

    CLI::App* tab = app.add_subcommand(
        "tabulate", "run the IRV count and print per-round tallies");
    tab->add_option("file", input)->required();
    add_format(tab);

    CLI::App* plan = app.add_subcommand(
        "plan", "build an audit plan and emit it as JSON");
    plan->add_option("file", input)->required();
    add_format(plan);
    plan->add_option("--method", method, "eo, se, wo or raire")
        ->default_val("raire");
    plan->add_option("--kind", kind, "bp or cp")->default_val("bp");
    plan->add_option("--alpha", alpha)->default_val(0.05);
    plan->add_option("--gamma", gamma)->default_val(1.1);
    plan->add_option("--se-strategy", se_strategy, "greedy, maximal or none")
        ->default_val("greedy");
    plan->add_option("-o,--out", out_path, "plan JSON path (default stdout)");
    plan->add_flag("--trace", trace, "embed the search trace (raire only)");

    CLI::App* sim = app.add_subcommand(
        "simulate", "simulate one audit configuration");
    sim->add_option("file", input)->required();
    add_format(sim);
    sim->add_option("--method", method)->default_val("raire");
    sim->add_option("--kind", kind)->default_val("bp");
    sim->add_option("--alpha", alpha)->default_val(0.05);
    sim->add_option("--gamma", gamma)->default_val(1.1);
    sim->add_option("--se-strategy", se_strategy)->default_val("greedy");
    sim->add_option("--error-rate", error_rate)->default_val(0.0);
    sim->add_option("--reps", reps)->default_val(10);
    sim->add_option("--sample-seed", sample_seed)->default_val(1);
    sim->add_option("--error-seed", error_seed)->default_val(1);
    sim->add_option("--max-draws", max_draws,
                    "sampling cap M (default: all ballots)");
    sim->add_option("-o,--out", out_path);
    sim->add_option("--out-format", out_format, "csv or json")
        ->default_val("csv");

    CLI::App* grid = app.add_subcommand(
        "grid", "run a methods x kinds x parameters experiment grid");
    grid->add_option("files", inputs)->required();
    add_format(grid);
    grid->add_option("--methods", methods)->delimiter(',');
    grid->add_option("--kinds", kinds)->delimiter(',');
    grid->add_option("--alphas", alphas)->delimiter(',');
    grid->add_option("--gammas", gammas)->delimiter(',');
    grid->add_option("--error-rates", rates)->delimiter(',');
    grid->add_option("--reps", reps, "simulations per zero-error cell")
        ->default_val(10);
    grid->add_option("--error-seeds", error_seeds)->default_val(10);
    grid->add_option("--sample-seeds", sample_seeds)->default_val(5);
    grid->add_option("--sample-seed", sample_seed)->default_val(1);
    grid->add_option("--error-seed", error_seed)->default_val(1);
    grid->add_option("--max-draws", max_draws);
    grid->add_option("--jobs", jobs,
                     "worker threads (default: processors; env IRVAUDIT_JOBS)");
    grid->add_option("--se-strategy", se_strategy)->default_val("greedy");
    grid->add_option("-o,--out", out_path);
    grid->add_option("--out-format", out_format, "csv, json or table")
        ->default_val("csv");
    grid->add_option("--table-method", table_method,
                     "method pivoted by --out-format table");

    CLI::App* verify = app.add_subcommand(
        "verify", "check a plan's tallies and soundness against an election");
    verify->add_option("plan", plan_path)->required();
    verify->add_option("file", input)->required();
    add_format(verify);
    verify->add_option("--max-candidates", max_candidates)->default_val(7);

    CLI11_PARSE(app, argc, argv);

    try {
        if (tab->parsed()) return cmd_tabulate(input, format);
        if (plan->parsed())
            return cmd_plan(input, format, method, kind, alpha, gamma,
                            se_strategy, out_path, trace);
        if (sim->parsed())
            return cmd_simulate(input, format, method, kind, alpha, gamma,
                                se_strategy, error_rate, reps, sample_seed,
                                error_seed, max_draws, out_path, out_format);
        if (grid->parsed())
            return cmd_grid(inputs, format, methods, kinds, alphas, gammas,
                            rates, reps, error_seeds, sample_seeds,
                            sample_seed, error_seed, max_draws, jobs,
                            se_strategy, out_path, out_format, table_method);
        if (verify->parsed())
            return cmd_verify(plan_path, input, format, max_candidates);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitError;
    }
    return kExitError;
}
