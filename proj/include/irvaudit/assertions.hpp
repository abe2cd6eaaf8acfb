// Assertion semantics: how a ballot counts as a vote under each audit mode,
// the pairwise tally-dominance hypothesis built on top, and the audit-plan
// containers shared by every plan builder. Plans serialize to/from JSON.
#pragma once

#include <span>
#include <variant>

#include <json.hpp>

#include "ballots.hpp"
#include "bravo.hpp"
#include "macro.hpp"

namespace irvaudit {

enum class AuditKind { ballot_polling, comparison };
enum class PlanMethod { eo, se, wo, raire };

inline const char* to_string(AuditKind k) {
    return k == AuditKind::ballot_polling ? "bp" : "cp";
}
inline const char* to_string(PlanMethod m) {
    switch (m) {
        case PlanMethod::eo: return "eo";
        case PlanMethod::se: return "se";
        case PlanMethod::wo: return "wo";
        case PlanMethod::raire: return "raire";
    }
    return "?";
}

// Ballot counts for first(p_S(b)) among a standing set S.
struct StandingInterp {
    CandidateSet standing;
    friend bool operator==(const StandingInterp&, const StandingInterp&) = default;
};

// Winner-only rule: the winner gets only ballots ranking it first; the
// loser gets every ballot preferring it to the winner.
struct WinnerOnlyInterp {
    CandidateId winner = -1;
    CandidateId loser = -1;
    friend bool operator==(const WinnerOnlyInterp&, const WinnerOnlyInterp&) = default;
};

// Simultaneous-elimination rule: within standing set S the grouped
// candidates E act as a single loser.
struct GroupedLoserInterp {
    CandidateSet standing;
    CandidateSet group;  // E, a strict subset of standing
    friend bool operator==(const GroupedLoserInterp&, const GroupedLoserInterp&) = default;
};

using VoteInterp =
    std::variant<StandingInterp, WinnerOnlyInterp, GroupedLoserInterp>;

struct InterpretedVote {
    enum class Party { none, candidate, loser_group };
    Party party = Party::none;
    CandidateId cand = -1;  // valid when party == candidate
};

// Classify one ballot under a vote-interpretation mode. A ballot counts for
// at most one party; `none` when its projection is empty or names a
// candidate not involved in the mode.
inline InterpretedVote interpret(const Ranking& b, const VoteInterp& interp) {
    using Party = InterpretedVote::Party;
    if (const auto* st = std::get_if<StandingInterp>(&interp)) {
        if (auto c = first_standing(b, st->standing))
            return {Party::candidate, *c};
        return {};
    }
    if (const auto* wo = std::get_if<WinnerOnlyInterp>(&interp)) {
        if (!b.empty() && b.front() == wo->winner)
            return {Party::candidate, wo->winner};
        const auto pair_first = first_standing(
            b, CandidateSet::of({wo->winner, wo->loser}));
        if (pair_first && *pair_first == wo->loser)
            return {Party::candidate, wo->loser};
        return {};
    }
    const auto& gl = std::get<GroupedLoserInterp>(interp);
    if (auto c = first_standing(b, gl.standing)) {
        if (gl.group.contains(*c)) return {Party::loser_group, -1};
        return {Party::candidate, *c};
    }
    return {};
}

// One null hypothesis {t(winner) <= t(loser-party)} under a vote
// interpretation, with its reported tallies and both ASN estimates.
// `loser` is empty when the loser is the grouped set in the interp.
struct PairwiseHypothesis {
    VoteInterp interp;
    CandidateId winner = -1;
    std::optional<CandidateId> loser;
    Count winner_tally = 0;
    Count loser_tally = 0;
    Count margin = 0;         // winner_tally - loser_tally
    Count context_total = 0;  // ballots counting for any party under interp
    double asn_bp = kInfiniteAsn;
    double asn_cp = kInfiniteAsn;

    bool counts_for_winner(const Ranking& b) const {
        const InterpretedVote v = interpret(b, interp);
        return v.party == InterpretedVote::Party::candidate && v.cand == winner;
    }
    bool counts_for_loser(const Ranking& b) const {
        const InterpretedVote v = interpret(b, interp);
        if (loser)
            return v.party == InterpretedVote::Party::candidate &&
                   v.cand == *loser;
        return v.party == InterpretedVote::Party::loser_group;
    }
    PollSignal poll_signal(const Ranking& b) const {
        const InterpretedVote v = interpret(b, interp);
        if (v.party == InterpretedVote::Party::candidate) {
            if (v.cand == winner) return PollSignal::for_winner;
            if (loser && v.cand == *loser) return PollSignal::for_loser;
            return PollSignal::neutral;
        }
        if (v.party == InterpretedVote::Party::loser_group && !loser)
            return PollSignal::for_loser;
        return PollSignal::neutral;
    }
};

// Recompute a hypothesis's tallies and context total from an election.
// Construction runs this; the simulator reruns it to detect plan/election
// mismatches.
struct HypothesisTallies {
    Count winner_tally = 0;
    Count loser_tally = 0;
    Count context_total = 0;
};

inline HypothesisTallies recompute_tallies(const Election& e,
                                           const VoteInterp& interp,
                                           CandidateId winner,
                                           std::optional<CandidateId> loser) {
    HypothesisTallies t;
    for (const BallotClass& bc : e.ballots()) {
        const InterpretedVote v = interpret(bc.ranking, interp);
        if (v.party == InterpretedVote::Party::none) continue;
        t.context_total += bc.count;
        if (v.party == InterpretedVote::Party::candidate) {
            if (v.cand == winner) t.winner_tally += bc.count;
            else if (loser && v.cand == *loser) t.loser_tally += bc.count;
        } else if (!loser) {
            t.loser_tally += bc.count;
        }
    }
    return t;
}

inline PairwiseHypothesis make_hypothesis(const Election& e, VoteInterp interp,
                                          CandidateId winner,
                                          std::optional<CandidateId> loser,
                                          double alpha, double gamma) {
    PairwiseHypothesis h;
    h.interp = std::move(interp);
    h.winner = winner;
    h.loser = loser;
    const HypothesisTallies t = recompute_tallies(e, h.interp, winner, loser);
    h.winner_tally = t.winner_tally;
    h.loser_tally = t.loser_tally;
    h.margin = t.winner_tally - t.loser_tally;
    h.context_total = t.context_total;
    h.asn_bp = t.context_total > 0
                   ? asn_bp(h.winner_tally, h.loser_tally, h.context_total, alpha)
                   : kInfiniteAsn;
    h.asn_cp = asn_cp(e.total_ballots(), h.margin, alpha, gamma);
    return h;
}

// A collection of hypotheses audited as one unit: every hypothesis of an
// IRV round for ballot polling, or one MACRO application for comparison.
struct AuditUnit {
    std::string label;
    std::vector<PairwiseHypothesis> hypotheses;
    Count v_min = 0;   // min margin over hypotheses
    double asn = kInfiniteAsn;

    void finalize(AuditKind kind, Count total_ballots, double alpha,
                  double gamma) {
        v_min = 0;
        bool first = true;
        for (const PairwiseHypothesis& h : hypotheses) {
            if (first || h.margin < v_min) v_min = h.margin;
            first = false;
        }
        if (kind == AuditKind::comparison) {
            asn = asn_cp(total_ballots, v_min, alpha, gamma);
        } else {
            asn = 0.0;
            for (const PairwiseHypothesis& h : hypotheses)
                asn = std::max(asn, h.asn_bp);
        }
    }
};

struct AuditPlan {
    PlanMethod method = PlanMethod::eo;
    AuditKind kind = AuditKind::ballot_polling;
    double alpha = 0.05;
    double gamma = 1.1;
    Count total_ballots = 0;
    std::vector<AuditUnit> units;
    double overall_asn = 0.0;  // max over unit ASNs

    void finalize() {
        overall_asn = 0.0;
        for (const AuditUnit& u : units)
            overall_asn = std::max(overall_asn, u.asn);
    }
    std::size_t hypothesis_count() const {
        std::size_t n = 0;
        for (const AuditUnit& u : units) n += u.hypotheses.size();
        return n;
    }
};

// Maximum relative overstatement e_b of one (reported, actual) ballot pair
// across the unit's hypotheses: max of (v_bw - a_bw - v_bl + a_bl) / V_wl.
inline double macro_discrepancy(std::span<const PairwiseHypothesis> pairs,
                                const Ranking& reported,
                                const Ranking& actual) {
    double e_b = -std::numeric_limits<double>::infinity();
    for (const PairwiseHypothesis& h : pairs) {
        if (h.margin <= 0)
            throw std::invalid_argument(
                "macro_discrepancy: pair margin must be positive");
        const int v_w = h.counts_for_winner(reported) ? 1 : 0;
        const int a_w = h.counts_for_winner(actual) ? 1 : 0;
        const int v_l = h.counts_for_loser(reported) ? 1 : 0;
        const int a_l = h.counts_for_loser(actual) ? 1 : 0;
        const int overstatement = v_w - a_w - v_l + a_l;
        e_b = std::max(e_b, static_cast<double>(overstatement) /
                               static_cast<double>(h.margin));
    }
    if (pairs.empty())
        throw std::invalid_argument("macro_discrepancy: no pairs");
    return e_b;
}

inline double macro_discrepancy(const AuditUnit& unit, const Ranking& reported,
                                const Ranking& actual) {
    return macro_discrepancy(std::span<const PairwiseHypothesis>(unit.hypotheses),
                             reported, actual);
}

// ---- plan JSON ----------------------------------------------------------

namespace detail {

inline nlohmann::json asn_to_json(double asn) {
    if (std::isinf(asn)) return "inf";
    return asn;
}
inline double asn_from_json(const nlohmann::json& j) {
    if (j.is_string()) return kInfiniteAsn;
    return j.get<double>();
}
inline nlohmann::json names_of(const Election& e, CandidateSet s) {
    nlohmann::json arr = nlohmann::json::array();
    for (CandidateId c : s) arr.push_back(e.candidate_name(c));
    return arr;
}
inline CandidateSet set_from_names(const Election& e, const nlohmann::json& arr) {
    CandidateSet s;
    for (const auto& name : arr) {
        auto idx = e.candidate_index(name.get<std::string>());
        if (!idx)
            throw std::invalid_argument("plan names unknown candidate: " +
                                        name.get<std::string>());
        s.insert(*idx);
    }
    return s;
}

}  // namespace detail

inline nlohmann::json plan_to_json(const AuditPlan& plan, const Election& e) {
    nlohmann::json doc;
    doc["method"] = to_string(plan.method);
    doc["kind"] = to_string(plan.kind);
    doc["alpha"] = plan.alpha;
    doc["gamma"] = plan.gamma;
    doc["total_ballots"] = plan.total_ballots;
    doc["overall_asn"] = detail::asn_to_json(plan.overall_asn);
    doc["units"] = nlohmann::json::array();
    for (const AuditUnit& u : plan.units) {
        nlohmann::json ju;
        ju["label"] = u.label;
        ju["v_min"] = u.v_min;
        ju["asn"] = detail::asn_to_json(u.asn);
        ju["hypotheses"] = nlohmann::json::array();
        for (const PairwiseHypothesis& h : u.hypotheses) {
            nlohmann::json jh;
            jh["winner"] = e.candidate_name(h.winner);
            jh["loser"] = h.loser ? nlohmann::json(e.candidate_name(*h.loser))
                                  : nlohmann::json(nullptr);
            if (const auto* st = std::get_if<StandingInterp>(&h.interp)) {
                jh["mode"] = "standing";
                jh["standing"] = detail::names_of(e, st->standing);
            } else if (std::holds_alternative<WinnerOnlyInterp>(h.interp)) {
                jh["mode"] = "winner_only";
            } else {
                const auto& gl = std::get<GroupedLoserInterp>(h.interp);
                jh["mode"] = "grouped_loser";
                jh["standing"] = detail::names_of(e, gl.standing);
                jh["group"] = detail::names_of(e, gl.group);
            }
            jh["winner_tally"] = h.winner_tally;
            jh["loser_tally"] = h.loser_tally;
            jh["margin"] = h.margin;
            jh["context_total"] = h.context_total;
            jh["asn_bp"] = detail::asn_to_json(h.asn_bp);
            jh["asn_cp"] = detail::asn_to_json(h.asn_cp);
            ju["hypotheses"].push_back(std::move(jh));
        }
        doc["units"].push_back(std::move(ju));
    }
    return doc;
}

inline AuditPlan plan_from_json(const nlohmann::json& doc, const Election& e) {
    AuditPlan plan;
    const std::string method = doc.at("method").get<std::string>();
    if (method == "eo") plan.method = PlanMethod::eo;
    else if (method == "se") plan.method = PlanMethod::se;
    else if (method == "wo") plan.method = PlanMethod::wo;
    else if (method == "raire") plan.method = PlanMethod::raire;
    else throw std::invalid_argument("unknown plan method: " + method);
    plan.kind = doc.at("kind").get<std::string>() == "cp"
                    ? AuditKind::comparison
                    : AuditKind::ballot_polling;
    plan.alpha = doc.at("alpha").get<double>();
    plan.gamma = doc.at("gamma").get<double>();
    plan.total_ballots = doc.at("total_ballots").get<Count>();
    for (const auto& ju : doc.at("units")) {
        AuditUnit u;
        u.label = ju.value("label", "");
        u.v_min = ju.at("v_min").get<Count>();
        u.asn = detail::asn_from_json(ju.at("asn"));
        for (const auto& jh : ju.at("hypotheses")) {
            PairwiseHypothesis h;
            auto widx = e.candidate_index(jh.at("winner").get<std::string>());
            if (!widx) throw std::invalid_argument("plan winner not on roster");
            h.winner = *widx;
            if (!jh.at("loser").is_null()) {
                auto lidx = e.candidate_index(jh.at("loser").get<std::string>());
                if (!lidx) throw std::invalid_argument("plan loser not on roster");
                h.loser = *lidx;
            }
            const std::string mode = jh.at("mode").get<std::string>();
            if (mode == "standing") {
                h.interp = StandingInterp{
                    detail::set_from_names(e, jh.at("standing"))};
            } else if (mode == "winner_only") {
                if (!h.loser)
                    throw std::invalid_argument("winner_only needs a loser");
                h.interp = WinnerOnlyInterp{h.winner, *h.loser};
            } else if (mode == "grouped_loser") {
                h.interp = GroupedLoserInterp{
                    detail::set_from_names(e, jh.at("standing")),
                    detail::set_from_names(e, jh.at("group"))};
            } else {
                throw std::invalid_argument("unknown hypothesis mode: " + mode);
            }
            h.winner_tally = jh.at("winner_tally").get<Count>();
            h.loser_tally = jh.at("loser_tally").get<Count>();
            h.margin = jh.at("margin").get<Count>();
            h.context_total = jh.at("context_total").get<Count>();
            h.asn_bp = detail::asn_from_json(jh.at("asn_bp"));
            h.asn_cp = detail::asn_from_json(jh.at("asn_cp"));
            u.hypotheses.push_back(std::move(h));
        }
        plan.units.push_back(std::move(u));
    }
    plan.finalize();
    return plan;
}

}  // namespace irvaudit
