// Audit simulation: replay a plan against index-paired reported/actual
// ballots with uniform with-replacement draws. Every repetition owns an RNG
// stream derived from (error seed, sample seed, repetition index), so
// results are bit-identical across runs and platforms.
#pragma once

#include "assertions.hpp"
#include "plans.hpp"
#include "rng.hpp"

namespace irvaudit {

struct SimConfig {
    AuditKind kind = AuditKind::ballot_polling;
    double alpha = 0.05;
    double gamma = 1.1;
    Count max_draws = 0;  // 0: defaults to |B|
    int reps = 10;
    std::uint64_t sample_seed = 1;
    std::uint64_t error_seed = 1;
};

enum class SimOutcome { confirmed, full_recount };

struct RepResult {
    Count draws = 0;
    SimOutcome outcome = SimOutcome::full_recount;
};

struct SimResult {
    std::vector<RepResult> reps;
    double mean_draws = 0.0;
    double mean_polls_pct = 0.0;
    int confirmed_count = 0;
    int full_recount_count = 0;
};

namespace detail {

// Flat index over the ballot multiset: position -> ballot class.
inline std::vector<std::uint32_t> expansion_index(const Election& e) {
    std::vector<std::uint32_t> idx;
    idx.reserve(static_cast<std::size_t>(e.total_ballots()));
    for (std::size_t k = 0; k < e.ballots().size(); ++k)
        for (Count i = 0; i < e.ballots()[k].count; ++i)
            idx.push_back(static_cast<std::uint32_t>(k));
    return idx;
}

inline void check_plan_matches(const AuditPlan& plan, const Election& reported) {
    if (plan.total_ballots != reported.total_ballots())
        throw std::invalid_argument(
            "plan total_ballots does not match the reported election");
    for (const AuditUnit& unit : plan.units) {
        for (const PairwiseHypothesis& h : unit.hypotheses) {
            const HypothesisTallies t =
                recompute_tallies(reported, h.interp, h.winner, h.loser);
            if (t.winner_tally != h.winner_tally ||
                t.loser_tally != h.loser_tally ||
                t.context_total != h.context_total)
                throw std::invalid_argument(
                    "plan hypotheses do not match the reported election");
        }
    }
}

}  // namespace detail

inline SimResult simulate(const AuditPlan& plan, const Election& reported,
                          const Election& actual, const SimConfig& cfg) {
    if (cfg.reps < 1) throw std::invalid_argument("reps must be >= 1");
    if (!(cfg.alpha > 0.0 && cfg.alpha < 1.0))
        throw std::invalid_argument("alpha must be in (0,1)");
    if (cfg.gamma < 1.0) throw std::invalid_argument("gamma must be >= 1");
    if (reported.total_ballots() != actual.total_ballots())
        throw std::invalid_argument(
            "reported and actual ballot counts differ");
    detail::check_plan_matches(plan, reported);

    const Count n_ballots = reported.total_ballots();
    const Count max_draws = cfg.max_draws > 0 ? cfg.max_draws : n_ballots;
    if (max_draws < 1) throw std::invalid_argument("max_draws must be >= 1");

    const std::vector<std::uint32_t> rep_class = detail::expansion_index(reported);
    const std::vector<std::uint32_t> act_class = detail::expansion_index(actual);
    const std::size_t n = rep_class.size();

    const bool polling = cfg.kind == AuditKind::ballot_polling;

    // Hypothesis poll signals per actual ballot class (ballot polling), or
    // per-ballot discrepancies per unit (comparison), precomputed once.
    struct HypSlot {
        const PairwiseHypothesis* h;
        std::size_t unit;
        bool resolvable;  // s_wl defined, i.e. some ballot counts for the pair
    };
    std::vector<HypSlot> hyps;
    std::vector<std::vector<std::int8_t>> poll_signal_table;  // hyp x class
    std::vector<std::vector<double>> unit_discrepancy;        // unit x ballot
    std::vector<bool> unit_resolvable(plan.units.size(), true);

    if (polling) {
        for (std::size_t u = 0; u < plan.units.size(); ++u)
            for (const PairwiseHypothesis& h : plan.units[u].hypotheses)
                hyps.push_back({&h, u, h.winner_tally + h.loser_tally > 0});
        poll_signal_table.resize(hyps.size());
        for (std::size_t i = 0; i < hyps.size(); ++i) {
            auto& row = poll_signal_table[i];
            row.reserve(actual.ballots().size());
            for (const BallotClass& bc : actual.ballots())
                row.push_back(
                    static_cast<std::int8_t>(hyps[i].h->poll_signal(bc.ranking)));
            if (!hyps[i].resolvable) unit_resolvable[hyps[i].unit] = false;
        }
    } else {
        unit_discrepancy.resize(plan.units.size());
        for (std::size_t u = 0; u < plan.units.size(); ++u) {
            if (plan.units[u].v_min <= 0) {
                unit_resolvable[u] = false;
                continue;
            }
            auto& row = unit_discrepancy[u];
            row.resize(n);
            for (std::size_t i = 0; i < n; ++i)
                row[i] = macro_discrepancy(
                    plan.units[u],
                    reported.ballots()[rep_class[i]].ranking,
                    actual.ballots()[act_class[i]].ranking);
        }
    }

    SimResult result;
    result.reps.reserve(static_cast<std::size_t>(cfg.reps));
    for (int rep = 0; rep < cfg.reps; ++rep) {
        Rng rng(derive_seed(cfg.error_seed, cfg.sample_seed,
                            static_cast<std::uint64_t>(rep)));

        RepResult rr{max_draws, SimOutcome::full_recount};
        if (plan.units.empty()) {
            rr = {0, SimOutcome::confirmed};
        } else if (polling) {
            std::vector<BravoState> states;
            states.reserve(hyps.size());
            std::vector<bool> done(hyps.size(), false);
            std::vector<std::size_t> unit_open(plan.units.size(), 0);
            for (std::size_t i = 0; i < hyps.size(); ++i) {
                const PairwiseHypothesis& h = *hyps[i].h;
                states.push_back(
                    hyps[i].resolvable
                        ? BravoState::from_tallies(h.winner_tally,
                                                   h.loser_tally, cfg.alpha)
                        : BravoState(0.5, cfg.alpha));
                ++unit_open[hyps[i].unit];
            }
            std::size_t remaining = 0;
            for (std::size_t c : unit_open) remaining += (c > 0) ? 1 : 0;
            for (Count m = 1; m <= max_draws; ++m) {
                const std::size_t idx =
                    static_cast<std::size_t>(rng.uniform_below(n));
                const std::uint32_t k = act_class[idx];
                for (std::size_t i = 0; i < hyps.size(); ++i) {
                    if (done[i] || !hyps[i].resolvable) continue;
                    const auto sig =
                        static_cast<PollSignal>(poll_signal_table[i][k]);
                    if (sig == PollSignal::neutral) continue;
                    states[i].record(sig);
                    if (states[i].rejected_null()) {
                        done[i] = true;
                        if (--unit_open[hyps[i].unit] == 0) --remaining;
                    }
                }
                if (remaining == 0) {
                    rr = {m, SimOutcome::confirmed};
                    break;
                }
            }
        } else {
            std::vector<std::optional<MacroState>> states(plan.units.size());
            std::size_t remaining = plan.units.size();
            for (std::size_t u = 0; u < plan.units.size(); ++u)
                if (unit_resolvable[u])
                    states[u].emplace(plan.total_ballots, plan.units[u].v_min,
                                      plan.gamma);
            for (Count m = 1; m <= max_draws; ++m) {
                const std::size_t idx =
                    static_cast<std::size_t>(rng.uniform_below(n));
                for (std::size_t u = 0; u < plan.units.size(); ++u) {
                    if (!states[u] || !states[u]->open()) continue;
                    states[u]->record(unit_discrepancy[u][idx], cfg.alpha);
                    if (states[u]->confirmed()) --remaining;
                }
                if (remaining == 0) {
                    rr = {m, SimOutcome::confirmed};
                    break;
                }
            }
        }
        result.reps.push_back(rr);
    }

    double total_draws = 0.0;
    for (const RepResult& rr : result.reps) {
        total_draws += static_cast<double>(rr.draws);
        if (rr.outcome == SimOutcome::confirmed) ++result.confirmed_count;
        else ++result.full_recount_count;
    }
    result.mean_draws = total_draws / static_cast<double>(cfg.reps);
    result.mean_polls_pct =
        100.0 * result.mean_draws / static_cast<double>(n_ballots);
    return result;
}

}  // namespace irvaudit
