// Best-first search over alternate elimination-order suffixes for the
// cheapest set of assertions that certifies the reported IRV winner, plus
// the exhaustive soundness checker used to validate any plan at desk scale.
#pragma once

#include <set>
#include <sstream>

#include "plans.hpp"

namespace irvaudit {

// A provable claim that rules out some family of elimination orders.
//   winner_only:      winner's first preferences beat the loser's maximal
//                     tally, so the winner can never be eliminated first.
//   irv_elimination:  winner beats loser with exactly `standing` remaining,
//                     so the winner is not the next eliminated there.
struct Assertion {
    enum class Kind { winner_only, irv_elimination };
    Kind kind = Kind::winner_only;
    CandidateId winner = -1;
    CandidateId loser = -1;
    CandidateSet standing;  // irv_elimination context; empty for winner_only
    PairwiseHypothesis hypothesis;
    double asn = kInfiniteAsn;

    std::string describe(const Election& e) const {
        std::ostringstream os;
        if (kind == Kind::winner_only) {
            os << "WO(" << e.candidate_name(winner) << ","
               << e.candidate_name(loser) << ")";
        } else {
            os << "IRV(" << e.candidate_name(winner) << ","
               << e.candidate_name(loser) << " | standing";
            for (CandidateId c : standing) os << " " << e.candidate_name(c);
            os << ")";
        }
        return os.str();
    }
};

inline bool same_assertion(const Assertion& a, const Assertion& b) {
    return a.kind == b.kind && a.winner == b.winner && a.loser == b.loser &&
           a.standing == b.standing;
}

// Cheapest single assertion invalidating the suffix outcome `pi` (last
// element the alternate winner), or nothing when no family member costs
// fewer than |B| expected draws. Families considered:
//   WO(c, c')  for c = first(pi), c' later in pi
//   WO(c'', c) for c'' outside pi
//   IRV(c, c', set(pi)) for c' elsewhere in pi
// Single-candidate suffixes use only the WO(c'', c) family.
inline std::optional<Assertion> find_best_audit(const Ranking& pi,
                                                const Election& e,
                                                AuditKind kind, double alpha,
                                                double gamma) {
    if (pi.empty()) throw std::invalid_argument("empty suffix");
    const CandidateId c = pi.front();
    const CandidateSet pi_set = CandidateSet::from_range(pi.begin(), pi.end());
    if (static_cast<std::size_t>(pi_set.size()) != pi.size())
        throw std::invalid_argument("suffix has duplicate candidates");
    const double cap = static_cast<double>(e.total_ballots());

    std::optional<Assertion> best;
    auto consider = [&](Assertion a) {
        if (a.asn >= cap) return;
        if (!best || a.asn < best->asn) best = std::move(a);
    };
    auto wo_assertion = [&](CandidateId w, CandidateId l) {
        Assertion a;
        a.kind = Assertion::Kind::winner_only;
        a.winner = w;
        a.loser = l;
        a.hypothesis =
            make_hypothesis(e, WinnerOnlyInterp{w, l}, w, l, alpha, gamma);
        a.asn = hypothesis_asn(a.hypothesis, kind);
        return a;
    };

    if (pi.size() > 1)
        for (std::size_t i = 1; i < pi.size(); ++i)
            consider(wo_assertion(c, pi[i]));
    for (CandidateId out = 0; out < e.candidate_count(); ++out)
        if (!pi_set.contains(out)) consider(wo_assertion(out, c));
    if (pi.size() > 1) {
        for (std::size_t i = 1; i < pi.size(); ++i) {
            Assertion a;
            a.kind = Assertion::Kind::irv_elimination;
            a.winner = c;
            a.loser = pi[i];
            a.standing = pi_set;
            a.hypothesis = make_hypothesis(e, StandingInterp{pi_set}, c, pi[i],
                                           alpha, gamma);
            a.asn = hypothesis_asn(a.hypothesis, kind);
            consider(std::move(a));
        }
    }
    return best;
}

struct RaireTrace {
    std::int64_t nodes_expanded = 0;
    std::int64_t commits = 0;
    std::int64_t duplicate_commits = 0;
    std::int64_t pruned = 0;
    std::vector<std::string> events;  // populated only when requested
};

struct RaireResult {
    bool full_recount = false;
    AuditPlan plan;                     // empty when full_recount
    std::vector<Assertion> assertions;  // commit order
    double overall_asn = kInfiniteAsn;  // == LB at termination
    RaireTrace trace;
};

namespace detail {

struct RaireNode {
    Ranking seq;                            // suffix; last = alternate winner
    std::optional<Assertion> asr;           // best assertion for seq
    Ranking ba_seq;                         // best-ancestor suffix
    std::optional<Assertion> ba_assertion;  // its assertion (empty = INF)

    double asr_asn() const { return asr ? asr->asn : kInfiniteAsn; }
    double ba_asn() const {
        return ba_assertion ? ba_assertion->asn : kInfiniteAsn;
    }
};

// Pop order: largest ASN first; ties broken by shorter suffix, then by
// lexicographic candidate order, so runs are reproducible.
struct RaireNodeOrder {
    bool operator()(const RaireNode& a, const RaireNode& b) const {
        const double x = a.asr_asn(), y = b.asr_asn();
        if (x != y) return x > y;
        if (a.seq.size() != b.seq.size()) return a.seq.size() < b.seq.size();
        return a.seq < b.seq;
    }
};

inline bool is_suffix_of(const Ranking& suffix, const Ranking& seq) {
    if (suffix.size() > seq.size()) return false;
    return std::equal(suffix.rbegin(), suffix.rend(), seq.rbegin());
}

inline std::string seq_names(const Election& e, const Ranking& seq) {
    std::string s = "[";
    for (std::size_t i = 0; i < seq.size(); ++i) {
        if (i) s += ",";
        s += e.candidate_name(seq[i]);
    }
    return s + "]";
}

}  // namespace detail

// The assertion search: explore alternate elimination-order suffixes,
// expanding the frontier node with the largest best-assertion ASN, and
// commit each popped branch's cheapest covering assertion once the audit's
// lower bound has caught up with it. Returns either the committed assertion
// set (max ASN minimised) or a full-recount verdict when some alternate
// outcome cannot be ruled out for fewer than |B| expected draws.
inline RaireResult raire(const Election& e, CandidateId reported_winner,
                         AuditKind kind, double alpha, double gamma,
                         bool trace_events = false) {
    const int n = e.candidate_count();
    if (reported_winner < 0 || reported_winner >= n)
        throw std::invalid_argument("reported winner out of range");

    RaireResult result;
    RaireTrace& trace = result.trace;
    auto log_event = [&](const std::string& s) {
        if (trace_events) trace.events.push_back(s);
    };

    std::vector<Assertion>& committed = result.assertions;
    double lower_bound = 0.0;
    std::multiset<detail::RaireNode, detail::RaireNodeOrder> frontier;

    auto commit = [&](const Assertion& a) {
        ++trace.commits;
        for (const Assertion& prev : committed)
            if (same_assertion(prev, a)) {
                ++trace.duplicate_commits;
                return;
            }
        committed.push_back(a);
        log_event("commit " + a.describe(e));
    };
    auto prune_covered_by = [&](const Ranking& ancestor) {
        for (auto it = frontier.begin(); it != frontier.end();) {
            if (detail::is_suffix_of(ancestor, it->seq)) {
                ++trace.pruned;
                log_event("prune " + detail::seq_names(e, it->seq));
                it = frontier.erase(it);
            } else {
                ++it;
            }
        }
    };

    for (CandidateId c = 0; c < n; ++c) {
        if (c == reported_winner) continue;
        detail::RaireNode node;
        node.seq = {c};
        node.asr = find_best_audit(node.seq, e, kind, alpha, gamma);
        node.ba_seq = node.seq;
        node.ba_assertion = node.asr;
        frontier.insert(std::move(node));
    }

    while (!frontier.empty()) {
        detail::RaireNode node = *frontier.begin();
        frontier.erase(frontier.begin());

        if (node.ba_asn() <= lower_bound) {
            commit(*node.ba_assertion);
            prune_covered_by(node.ba_seq);
            continue;
        }

        ++trace.nodes_expanded;
        log_event("expand " + detail::seq_names(e, node.seq));
        const CandidateSet in_seq =
            CandidateSet::from_range(node.seq.begin(), node.seq.end());
        for (CandidateId c = 0; c < n; ++c) {
            if (in_seq.contains(c)) continue;
            detail::RaireNode child;
            child.seq.reserve(node.seq.size() + 1);
            child.seq.push_back(c);
            child.seq.insert(child.seq.end(), node.seq.begin(),
                             node.seq.end());
            child.asr = find_best_audit(child.seq, e, kind, alpha, gamma);
            if (child.asr_asn() < node.ba_asn()) {
                child.ba_seq = child.seq;
                child.ba_assertion = child.asr;
            } else {
                child.ba_seq = node.ba_seq;
                child.ba_assertion = node.ba_assertion;
            }
            if (static_cast<int>(child.seq.size()) == n) {
                if (!child.ba_assertion) {
                    log_event("dead end " + detail::seq_names(e, child.seq));
                    result.full_recount = true;
                    result.assertions.clear();
                    result.overall_asn = kInfiniteAsn;
                    return result;
                }
                commit(*child.ba_assertion);
                lower_bound = std::max(lower_bound, child.ba_asn());
                prune_covered_by(child.ba_seq);
            } else {
                frontier.insert(std::move(child));
            }
        }
    }

    result.full_recount = false;
    result.overall_asn = lower_bound;
    AuditPlan& plan = result.plan;
    plan.method = PlanMethod::raire;
    plan.kind = kind;
    plan.alpha = alpha;
    plan.gamma = gamma;
    plan.total_ballots = e.total_ballots();
    for (const Assertion& a : committed) {
        AuditUnit unit;
        unit.label = a.describe(e);
        unit.hypotheses.push_back(a.hypothesis);
        unit.finalize(kind, e.total_ballots(), alpha, gamma);
        plan.units.push_back(std::move(unit));
    }
    plan.finalize();
    return result;
}

// ---- exhaustive soundness check ------------------------------------------

struct SoundnessVerdict {
    bool sound = false;
    std::optional<Ranking> uncovered_order;  // witness when unsound
};

namespace detail {

// Does this hypothesis, read as a claim about the true ballots, contradict
// the complete elimination order `order`? `pos[c]` is c's elimination stage.
inline bool hypothesis_contradicts(const PairwiseHypothesis& h,
                                   const Ranking& order,
                                   const std::vector<int>& pos) {
    const int n = static_cast<int>(order.size());
    if (const auto* wo = std::get_if<WinnerOnlyInterp>(&h.interp)) {
        // Winner can never be eliminated before the loser.
        return pos[static_cast<std::size_t>(wo->winner)] <
               pos[static_cast<std::size_t>(wo->loser)];
    }
    if (const auto* st = std::get_if<StandingInterp>(&h.interp)) {
        // Winner beats loser with exactly `standing` remaining: the order
        // cannot eliminate the winner at that stage.
        const int stage = n - st->standing.size();
        if (stage < 0 || stage >= n) return false;
        CandidateSet suffix;
        for (int i = stage; i < n; ++i)
            suffix.insert(order[static_cast<std::size_t>(i)]);
        return suffix == st->standing &&
               order[static_cast<std::size_t>(stage)] == h.winner;
    }
    const auto& gl = std::get<GroupedLoserInterp>(h.interp);
    // From `standing`, the winner outlasts the whole group: the order cannot
    // reach `standing` and then drop the winner while group members remain.
    const int stage = n - gl.standing.size();
    if (stage < 0 || stage >= n) return false;
    CandidateSet suffix;
    for (int i = stage; i < n; ++i)
        suffix.insert(order[static_cast<std::size_t>(i)]);
    if (suffix != gl.standing) return false;
    int last_group_pos = -1;
    for (CandidateId g : gl.group)
        last_group_pos = std::max(last_group_pos, pos[static_cast<std::size_t>(g)]);
    return pos[static_cast<std::size_t>(h.winner)] < last_group_pos;
}

}  // namespace detail

// Enumerate every complete elimination order ending in a candidate other
// than the reported winner and confirm that at least one plan hypothesis
// contradicts it. Exhaustive, so the roster is bounded.
inline SoundnessVerdict verify_plan_soundness(const AuditPlan& plan,
                                              const Election& e,
                                              CandidateId reported_winner,
                                              int max_candidates = 7) {
    const int n = e.candidate_count();
    if (n > max_candidates)
        throw std::invalid_argument(
            "roster too large for exhaustive soundness enumeration");
    Ranking order(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) order[static_cast<std::size_t>(i)] = i;
    std::vector<int> pos(static_cast<std::size_t>(n));
    do {
        if (order.back() == reported_winner) continue;
        for (int i = 0; i < n; ++i)
            pos[static_cast<std::size_t>(order[static_cast<std::size_t>(i)])] = i;
        bool covered = false;
        for (const AuditUnit& unit : plan.units) {
            for (const PairwiseHypothesis& h : unit.hypotheses) {
                if (detail::hypothesis_contradicts(h, order, pos)) {
                    covered = true;
                    break;
                }
            }
            if (covered) break;
        }
        if (!covered) return {false, order};
    } while (std::next_permutation(order.begin(), order.end()));
    return {true, std::nullopt};
}

}  // namespace irvaudit
