#include <catch2/catch_amalgamated.hpp>

#include "helpers.hpp"

using namespace irvaudit;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;
using test_helpers::cid;
using test_helpers::make_election;

namespace {

// Hypothesis for (winner, loser) inside a unit, by candidate ids.
const PairwiseHypothesis& find_pair(const AuditUnit& unit, CandidateId w,
                                    std::optional<CandidateId> l) {
    for (const PairwiseHypothesis& h : unit.hypotheses)
        if (h.winner == w && h.loser == l) return h;
    throw std::runtime_error("pair not in unit");
}

Election random_election(Rng& rng, int n_candidates, int n_classes) {
    std::vector<std::string> names;
    for (int i = 0; i < n_candidates; ++i)
        names.push_back("c" + std::to_string(i + 1));
    std::vector<BallotClass> classes;
    for (int k = 0; k < n_classes; ++k) {
        Ranking perm(static_cast<std::size_t>(n_candidates));
        for (int i = 0; i < n_candidates; ++i)
            perm[static_cast<std::size_t>(i)] = i;
        for (int i = n_candidates - 1; i > 0; --i)
            std::swap(perm[static_cast<std::size_t>(i)],
                      perm[rng.uniform_below(static_cast<std::uint64_t>(i + 1))]);
        perm.resize(1 + rng.uniform_below(static_cast<std::uint64_t>(n_candidates)));
        classes.push_back({perm, static_cast<Count>(1 + rng.uniform_below(300))});
    }
    return Election(std::move(names), std::move(classes));
}

}  // namespace

TEST_CASE("interpretation rules") {
    Election e = test_helpers::table1();
    const CandidateId c1 = cid(e, "c1"), c2 = cid(e, "c2"), c3 = cid(e, "c3"),
                      c4 = cid(e, "c4");

    SECTION("winner-only awards the winner first preferences only") {
        const VoteInterp wo = WinnerOnlyInterp{c1, c3};
        const InterpretedVote none = interpret({c2, c1, c3}, wo);
        CHECK(none.party == InterpretedVote::Party::none);
        const InterpretedVote loser = interpret({c3, c4}, wo);
        CHECK(loser.party == InterpretedVote::Party::candidate);
        CHECK(loser.cand == c3);
        const InterpretedVote winner = interpret({c1, c3}, wo);
        CHECK(winner.cand == c1);
    }
    SECTION("standing mode follows the projection") {
        const VoteInterp st = StandingInterp{CandidateSet::of({c1, c4})};
        const InterpretedVote v = interpret({c2, c3, c4}, st);
        CHECK(v.party == InterpretedVote::Party::candidate);
        CHECK(v.cand == c4);
        CHECK(interpret({c2, c3}, st).party == InterpretedVote::Party::none);
    }
    SECTION("grouped mode folds the group into one loser") {
        const VoteInterp gl =
            GroupedLoserInterp{e.full_roster(), CandidateSet::of({c2, c3})};
        CHECK(interpret({c2, c1}, gl).party ==
              InterpretedVote::Party::loser_group);
        CHECK(interpret({c3}, gl).party == InterpretedVote::Party::loser_group);
        const InterpretedVote v = interpret({c4, c2}, gl);
        CHECK(v.party == InterpretedVote::Party::candidate);
        CHECK(v.cand == c4);
        CHECK(interpret({}, gl).party == InterpretedVote::Party::none);
    }
}

TEST_CASE("entire-elimination-order plan, ballot polling") {
    Election e = test_helpers::table1();
    AuditPlan plan = plan_eo(e, AuditKind::ballot_polling, 0.05, 1.1);
    const CandidateId c1 = cid(e, "c1"), c2 = cid(e, "c2"), c3 = cid(e, "c3"),
                      c4 = cid(e, "c4");
    REQUIRE(plan.units.size() == 3);
    // Sum over rounds of (candidates standing - 1) hypotheses.
    CHECK(plan.hypothesis_count() == 3 + 2 + 1);

    const AuditUnit& r1 = plan.units[0];
    CHECK_THAT(find_pair(r1, c1, c3).asn_bp, WithinAbs(44.5, 0.5));
    CHECK_THAT(find_pair(r1, c2, c3).asn_bp, WithinRel(6885.0, 0.002));
    CHECK_THAT(find_pair(r1, c4, c3).asn_bp, WithinAbs(246.0, 0.5));

    const AuditUnit& r2 = plan.units[1];
    CHECK_THAT(find_pair(r2, c1, c2).asn_bp, WithinAbs(51.8, 0.05));
    CHECK_THAT(find_pair(r2, c4, c2).asn_bp, WithinAbs(64.0, 0.05));

    const AuditUnit& r3 = plan.units[2];
    CHECK(find_pair(r3, c4, c1).context_total == 56000);
    CHECK_THAT(find_pair(r3, c4, c1).asn_bp, WithinAbs(1186.8, 0.1));

    CHECK_THAT(plan.overall_asn, WithinRel(6885.561482123682, 1e-9));
}

TEST_CASE("entire-elimination-order plan, comparison") {
    Election e = test_helpers::table1();
    AuditPlan plan = plan_eo(e, AuditKind::comparison, 0.05, 1.1);
    REQUIRE(plan.units.size() == 3);
    CHECK(plan.units[0].v_min == 1000);
    CHECK_THAT(plan.units[0].asn, WithinAbs(395.4, 0.05));
    CHECK_THAT(plan.units[1].asn, WithinAbs(28.2, 0.05));
    CHECK_THAT(plan.units[2].asn, WithinAbs(98.9, 0.05));
    CHECK_THAT(plan.overall_asn, WithinAbs(395.4, 0.05));
}

TEST_CASE("a two-candidate election plans to a single pair") {
    Election e = make_election({"a", "b"}, {{{"a"}, 60}, {{"b"}, 40}});
    for (AuditKind kind :
         {AuditKind::ballot_polling, AuditKind::comparison}) {
        AuditPlan plan = plan_eo(e, kind, 0.05, 1.1);
        REQUIRE(plan.units.size() == 1);
        REQUIRE(plan.units[0].hypotheses.size() == 1);
        CHECK(plan.units[0].hypotheses[0].margin == 20);
    }
}

TEST_CASE("grouping strategies on the five-candidate example") {
    Election e = test_helpers::hard_first_round();
    const Ranking order = tabulate_irv(e).order;
    const CandidateId c2 = cid(e, "c2"), c3 = cid(e, "c3"), c4 = cid(e, "c4"),
                      c5 = cid(e, "c5");

    auto none = group_eliminations(e, order, GroupingStrategy::none());
    REQUIRE(none.size() == 4);
    for (const auto& g : none) CHECK(g.size() == 1);

    auto maximal = group_eliminations(e, order, GroupingStrategy::maximal());
    REQUIRE(maximal.size() == 2);
    CHECK(maximal[0] == std::vector<CandidateId>{c5, c4, c3});
    CHECK(maximal[1] == std::vector<CandidateId>{c2});

    for (AuditKind kind : {AuditKind::ballot_polling, AuditKind::comparison}) {
        auto greedy = group_eliminations(
            e, order, GroupingStrategy::asn_greedy(kind, 0.05, 1.1));
        REQUIRE(greedy.size() == 3);
        CHECK(greedy[0] == std::vector<CandidateId>{c5, c4});
        CHECK(greedy[1] == std::vector<CandidateId>{c3});
        CHECK(greedy[2] == std::vector<CandidateId>{c2});
    }

    CHECK_THROWS_AS(group_eliminations(e, Ranking{c2, c3}, GroupingStrategy::none()),
                    std::invalid_argument);
}

TEST_CASE("emitted multi-candidate groups satisfy the strict condition") {
    Rng rng(41);
    for (int t = 0; t < 60; ++t) {
        Election e = random_election(rng, 5, 8);
        const Ranking order = tabulate_irv(e).order;
        for (auto policy : {GroupingPolicy::maximal, GroupingPolicy::asn_greedy}) {
            GroupingStrategy strategy{policy, AuditKind::ballot_polling, 0.05, 1.1};
            CandidateSet standing = e.full_roster();
            for (const auto& group : group_eliminations(e, order, strategy)) {
                if (group.size() >= 2)
                    CHECK(simultaneous_group_valid(
                        e, standing,
                        CandidateSet::from_range(group.begin(), group.end())));
                for (CandidateId c : group) standing.erase(c);
            }
        }
    }
}

TEST_CASE("simultaneous-elimination plan, ballot polling") {
    Election e = test_helpers::hard_first_round();
    const CandidateId c1 = cid(e, "c1"), c2 = cid(e, "c2"), c3 = cid(e, "c3");

    AuditPlan plan = plan_se(e, AuditKind::ballot_polling, 0.05, 1.1);
    REQUIRE(plan.units.size() == 3);

    const AuditUnit& grouped = plan.units[0];
    REQUIRE(grouped.hypotheses.size() == 3);
    CHECK_THAT(find_pair(grouped, c1, std::nullopt).asn_bp, WithinAbs(17.0, 0.05));
    CHECK_THAT(find_pair(grouped, c2, std::nullopt).asn_bp, WithinAbs(36.2, 0.05));
    CHECK_THAT(find_pair(grouped, c3, std::nullopt).asn_bp, WithinAbs(49.1, 0.05));

    const AuditUnit& round2 = plan.units[1];
    CHECK_THAT(find_pair(round2, c1, c3).asn_bp, WithinAbs(77.6, 0.05));
    CHECK_THAT(find_pair(round2, c2, c3).asn_bp, WithinAbs(1402.0, 0.5));

    const AuditUnit& round3 = plan.units[2];
    CHECK_THAT(find_pair(round3, c1, c2).asn_bp,
               WithinRel(299.0990604911565, 1e-9));
    CHECK_THAT(plan.overall_asn, WithinAbs(1402.2, 0.1));
}

TEST_CASE("maximal grouping makes the near-tie hypothesis explicit") {
    Election e = test_helpers::hard_first_round();
    AuditPlan plan = plan_se(e, AuditKind::ballot_polling, 0.05, 1.1,
                             GroupingPolicy::maximal);
    REQUIRE(plan.units.size() == 2);
    const AuditUnit& grouped = plan.units[0];
    REQUIRE(grouped.hypotheses.size() == 2);
    // t(c2) = 6000 versus the 5999 combined group votes.
    const PairwiseHypothesis& tight =
        find_pair(grouped, cid(e, "c2"), std::nullopt);
    CHECK(tight.margin == 1);
    CHECK_THAT(tight.asn_bp, WithinRel(1581564932.8869274, 1e-9));
}

TEST_CASE("simultaneous-elimination plan, comparison") {
    Election e = test_helpers::hard_first_round();
    AuditPlan plan = plan_se(e, AuditKind::comparison, 0.05, 1.1);
    REQUIRE(plan.units.size() == 3);
    CHECK(plan.units[0].v_min == 4001);
    CHECK_THAT(plan.units[0].asn, WithinAbs(36.2, 0.05));
    CHECK(plan.units[1].v_min == 1000);
    CHECK_THAT(plan.units[1].asn, WithinAbs(145.0, 0.15));
    CHECK(plan.units[2].v_min == 3000);
    CHECK_THAT(plan.units[2].asn, WithinAbs(48.3, 0.05));
    CHECK_THAT(plan.overall_asn, WithinAbs(145.0, 0.15));
}

TEST_CASE("winner-only plan on the three-candidate example") {
    Election e = test_helpers::winner_only_demo();
    const CandidateId c1 = cid(e, "c1"), c2 = cid(e, "c2"), c3 = cid(e, "c3");

    AuditPlan bp = plan_wo(e, AuditKind::ballot_polling, 0.05, 1.1);
    REQUIRE(bp.units.size() == 2);  // n - 1 hypotheses
    const PairwiseHypothesis& h12 = find_pair(bp.units[0], c1, c2);
    const PairwiseHypothesis& h13 = find_pair(bp.units[1], c1, c3);
    CHECK(h12.winner_tally == 10000);
    CHECK(h12.loser_tally == 6000);
    CHECK(h12.context_total == 16000);
    CHECK_THAT(h12.asn_bp, WithinAbs(98.4, 0.05));
    CHECK_THAT(h13.asn_bp, WithinAbs(98.3, 0.05));

    AuditPlan cp = plan_wo(e, AuditKind::comparison, 0.05, 1.1);
    CHECK(cp.units[0].v_min == 4000);
    CHECK(cp.units[1].v_min == 4001);
    CHECK_THAT(cp.units[0].asn, WithinAbs(36.2, 0.05));
    CHECK_THAT(cp.units[1].asn, WithinAbs(36.2, 0.05));
}

TEST_CASE("the winner-only variant has an unprovable hypothesis") {
    Election e = test_helpers::winner_only_variant();
    AuditPlan plan = plan_wo(e, AuditKind::ballot_polling, 0.05, 1.1);
    const PairwiseHypothesis& h13 =
        find_pair(plan.units[1], cid(e, "c1"), cid(e, "c3"));
    CHECK(h13.loser_tally == 11999);
    CHECK(h13.margin < 0);
    CHECK(std::isinf(h13.asn_bp));
    CHECK(std::isinf(h13.asn_cp));
    CHECK(std::isinf(plan.overall_asn));
}

TEST_CASE("hypothesis ASNs for the assertion-search example") {
    Election e = test_helpers::search_demo();
    const CandidateId c1 = cid(e, "c1"), c2 = cid(e, "c2");
    PairwiseHypothesis h = make_hypothesis(
        e, StandingInterp{CandidateSet::of({c1, c2})}, c1, c2, 0.05, 1.1);
    CHECK(h.winner_tally == 15500);
    CHECK(h.loser_tally == 11500);
    CHECK(h.margin == 4000);
    CHECK_THAT(hypothesis_asn(h, AuditKind::comparison),
               WithinRel(44.48662426227677, 1e-12));
    CHECK_THAT(hypothesis_asn(h, AuditKind::comparison) / 27000.0 * 100.0,
               WithinAbs(0.17, 0.01));
    // Ballot polling: roughly 1% of ballots.
    CHECK_THAT(hypothesis_asn(h, AuditKind::ballot_polling),
               WithinRel(270.0, 0.05));
    PairwiseHypothesis tie = h;
    tie.margin = 0;
    CHECK(std::isinf(asn_cp(27000, tie.margin, 0.05, 1.1)));
}

TEST_CASE("plan hypothesis counts follow the method") {
    Rng rng(42);
    for (int t = 0; t < 30; ++t) {
        const int n = 2 + static_cast<int>(rng.uniform_below(4));
        Election e = random_election(rng, n, 7);
        AuditPlan eo = plan_eo(e, AuditKind::ballot_polling, 0.05, 1.1);
        std::size_t expected = 0;
        for (int i = 1; i <= n - 1; ++i)
            expected += static_cast<std::size_t>(n - i);
        CHECK(eo.hypothesis_count() == expected);
        AuditPlan wo = plan_wo(e, AuditKind::ballot_polling, 0.05, 1.1);
        CHECK(wo.hypothesis_count() == static_cast<std::size_t>(n - 1));
    }
}

TEST_CASE("stored tallies always match an independent recomputation") {
    Rng rng(43);
    for (int t = 0; t < 30; ++t) {
        const int n = 2 + static_cast<int>(rng.uniform_below(4));
        Election e = random_election(rng, n, 8);
        for (AuditKind kind :
             {AuditKind::ballot_polling, AuditKind::comparison}) {
            for (const AuditPlan& plan :
                 {plan_eo(e, kind, 0.05, 1.1), plan_se(e, kind, 0.05, 1.1),
                  plan_wo(e, kind, 0.05, 1.1)}) {
                for (const AuditUnit& unit : plan.units) {
                    for (const PairwiseHypothesis& h : unit.hypotheses) {
                        const HypothesisTallies t =
                            recompute_tallies(e, h.interp, h.winner, h.loser);
                        CHECK(t.winner_tally == h.winner_tally);
                        CHECK(t.loser_tally == h.loser_tally);
                        CHECK(t.context_total == h.context_total);
                        CHECK(h.margin == h.winner_tally - h.loser_tally);
                    }
                }
            }
        }
    }
}

TEST_CASE("winner-only tallies bound the standing-context tallies") {
    // f(w) is the least tally w can ever hold, t_{w,l}(l) the most l can.
    Rng rng(44);
    for (int t = 0; t < 25; ++t) {
        Election e = random_election(rng, 4, 8);
        const int n = e.candidate_count();
        for (CandidateId w = 0; w < n; ++w) {
            for (CandidateId l = 0; l < n; ++l) {
                if (w == l) continue;
                PairwiseHypothesis h = make_hypothesis(
                    e, WinnerOnlyInterp{w, l}, w, l, 0.05, 1.1);
                for (std::uint64_t mask = 1; mask < (1u << n); ++mask) {
                    CandidateSet s{mask};
                    if (!s.contains(w) || !s.contains(l)) continue;
                    auto counts = tally_counts(e, s);
                    CHECK(h.winner_tally <=
                          counts[static_cast<std::size_t>(w)]);
                    CHECK(h.loser_tally >= counts[static_cast<std::size_t>(l)]);
                }
            }
        }
    }
}
