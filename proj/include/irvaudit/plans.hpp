// Plan builders for the three fixed audit strategies: EO (audit the entire
// elimination order), SE (elimination order with simultaneous-elimination
// grouping) and WO (winner-only). The assertion-search strategy lives in
// raire.hpp.
#pragma once

#include <span>

#include "assertions.hpp"

namespace irvaudit {

// Kind-aware ASN of a single hypothesis.
inline double hypothesis_asn(const PairwiseHypothesis& h, AuditKind kind) {
    return kind == AuditKind::ballot_polling ? h.asn_bp : h.asn_cp;
}

// ---- simultaneous-elimination grouping -----------------------------------

enum class GroupingPolicy { none, maximal, asn_greedy };

struct GroupingStrategy {
    GroupingPolicy policy = GroupingPolicy::asn_greedy;
    AuditKind kind = AuditKind::ballot_polling;
    double alpha = 0.05;
    double gamma = 1.1;

    static GroupingStrategy none() { return {GroupingPolicy::none}; }
    static GroupingStrategy maximal() { return {GroupingPolicy::maximal}; }
    static GroupingStrategy asn_greedy(AuditKind kind, double alpha,
                                       double gamma) {
        return {GroupingPolicy::asn_greedy, kind, alpha, gamma};
    }
};

namespace detail {

// Unit for a single group within `standing`: one grouped-loser hypothesis
// per non-group candidate, or plain round hypotheses for singleton groups.
inline AuditUnit make_round_unit(const Election& e, CandidateSet standing,
                                 std::span<const CandidateId> group,
                                 double alpha, double gamma) {
    AuditUnit unit;
    if (group.size() == 1) {
        const CandidateId loser = group.front();
        unit.label = "eliminate " + e.candidate_name(loser);
        for (CandidateId w : standing) {
            if (w == loser) continue;
            unit.hypotheses.push_back(make_hypothesis(
                e, StandingInterp{standing}, w, loser, alpha, gamma));
        }
    } else {
        CandidateSet gset =
            CandidateSet::from_range(group.begin(), group.end());
        std::string names;
        for (CandidateId c : group) {
            if (!names.empty()) names += ",";
            names += e.candidate_name(c);
        }
        unit.label = "eliminate {" + names + "}";
        for (CandidateId w : standing) {
            if (gset.contains(w)) continue;
            unit.hypotheses.push_back(make_hypothesis(
                e, GroupedLoserInterp{standing, gset}, w, std::nullopt, alpha,
                gamma));
        }
    }
    return unit;
}

inline double unit_asn(const Election& e, const AuditUnit& unit,
                       AuditKind kind, double alpha, double gamma) {
    AuditUnit probe = unit;
    probe.finalize(kind, e.total_ballots(), alpha, gamma);
    return probe.asn;
}

}  // namespace detail

// Partition the elimination order (winner excluded) into consecutive groups.
// Multi-candidate groups must satisfy the simultaneous-elimination condition;
// singletons are plain rounds. `maximal` takes the largest valid group at
// each position, `asn_greedy` the group size whose unit needs the least
// auditing, `none` all singletons. Throws if `order` is not a permutation of
// the roster.
inline std::vector<std::vector<CandidateId>> group_eliminations(
    const Election& e, const Ranking& order, const GroupingStrategy& strategy) {
    const int n = e.candidate_count();
    if (CandidateSet::from_range(order.begin(), order.end()) !=
            e.full_roster() ||
        static_cast<int>(order.size()) != n)
        throw std::invalid_argument(
            "elimination order is not a permutation of the roster");

    std::vector<std::vector<CandidateId>> groups;
    CandidateSet standing = e.full_roster();
    std::size_t i = 0;
    const std::size_t last = order.size() - 1;  // order[last] is the winner
    while (i < last) {
        const std::size_t remaining = last - i;
        std::size_t take = 1;
        if (strategy.policy == GroupingPolicy::maximal) {
            for (std::size_t k = 2; k <= remaining; ++k) {
                CandidateSet gset;
                for (std::size_t j = 0; j < k; ++j) gset.insert(order[i + j]);
                if (simultaneous_group_valid(e, standing, gset)) take = k;
            }
        } else if (strategy.policy == GroupingPolicy::asn_greedy) {
            double best = kInfiniteAsn;
            for (std::size_t k = 1; k <= remaining; ++k) {
                CandidateSet gset;
                for (std::size_t j = 0; j < k; ++j) gset.insert(order[i + j]);
                if (k > 1 && !simultaneous_group_valid(e, standing, gset))
                    continue;
                std::vector<CandidateId> group(order.begin() + i,
                                               order.begin() + i + k);
                const AuditUnit unit = detail::make_round_unit(
                    e, standing, group, strategy.alpha, strategy.gamma);
                const double asn = detail::unit_asn(e, unit, strategy.kind,
                                                    strategy.alpha,
                                                    strategy.gamma);
                if (asn < best) {
                    best = asn;
                    take = k;
                }
            }
        }
        std::vector<CandidateId> group(order.begin() + i,
                                       order.begin() + i + take);
        for (CandidateId c : group) standing.erase(c);
        groups.push_back(std::move(group));
        i += take;
    }
    return groups;
}

// True when `order` is what tabulating `e` produces; grouping is computed on
// whatever order is supplied, so callers that accept foreign orders can warn.
inline bool order_matches_tabulation(const Election& e, const Ranking& order) {
    return tabulate_irv(e).order == order;
}

namespace detail {

inline AuditPlan build_grouped_plan(const Election& e, PlanMethod method,
                                    AuditKind kind, double alpha, double gamma,
                                    const std::vector<std::vector<CandidateId>>&
                                        groups) {
    AuditPlan plan;
    plan.method = method;
    plan.kind = kind;
    plan.alpha = alpha;
    plan.gamma = gamma;
    plan.total_ballots = e.total_ballots();
    CandidateSet standing = e.full_roster();
    int round = 1;
    for (const std::vector<CandidateId>& group : groups) {
        AuditUnit unit = make_round_unit(e, standing, group, alpha, gamma);
        unit.label = "round " + std::to_string(round) + ": " + unit.label;
        unit.finalize(kind, e.total_ballots(), alpha, gamma);
        plan.units.push_back(std::move(unit));
        for (CandidateId c : group) standing.erase(c);
        ++round;
    }
    plan.finalize();
    return plan;
}

}  // namespace detail

// One FPTP election per IRV round, the eliminated candidate as sole loser.
inline AuditPlan plan_eo(const Election& e, AuditKind kind, double alpha,
                         double gamma) {
    const EliminationSequence seq = tabulate_irv(e);
    std::vector<std::vector<CandidateId>> singletons;
    for (std::size_t i = 0; i + 1 < seq.order.size(); ++i)
        singletons.push_back({seq.order[i]});
    return detail::build_grouped_plan(e, PlanMethod::eo, kind, alpha, gamma,
                                      singletons);
}

// Like EO but consecutive eliminations merge into grouped-loser rounds where
// the simultaneous-elimination condition allows and the strategy elects to.
inline AuditPlan plan_se(const Election& e, AuditKind kind, double alpha,
                         double gamma,
                         GroupingPolicy policy = GroupingPolicy::asn_greedy) {
    const EliminationSequence seq = tabulate_irv(e);
    GroupingStrategy strategy{policy, kind, alpha, gamma};
    const auto groups = group_eliminations(e, seq.order, strategy);
    return detail::build_grouped_plan(e, PlanMethod::se, kind, alpha, gamma,
                                      groups);
}

// Winner-only: one hypothesis per loser, the winner on its first
// preferences against the loser's maximal attainable tally. Every pair is
// its own unit (a separate MACRO application for comparison audits).
inline AuditPlan plan_wo(const Election& e, AuditKind kind, double alpha,
                         double gamma) {
    AuditPlan plan;
    plan.method = PlanMethod::wo;
    plan.kind = kind;
    plan.alpha = alpha;
    plan.gamma = gamma;
    plan.total_ballots = e.total_ballots();
    CandidateId w = -1;
    if (auto reported = e.reported_winner_id()) w = *reported;
    else w = tabulate_irv(e).winner();
    for (CandidateId l = 0; l < e.candidate_count(); ++l) {
        if (l == w) continue;
        AuditUnit unit;
        unit.label = "wo " + e.candidate_name(w) + " vs " + e.candidate_name(l);
        unit.hypotheses.push_back(
            make_hypothesis(e, WinnerOnlyInterp{w, l}, w, l, alpha, gamma));
        unit.finalize(kind, e.total_ballots(), alpha, gamma);
        plan.units.push_back(std::move(unit));
    }
    plan.finalize();
    return plan;
}

}  // namespace irvaudit
