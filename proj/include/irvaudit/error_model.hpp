// Discrepancy injection between actual ballots and their electronic
// records. Each ballot is manipulated independently with the model's rate,
// applying one of four operations: replace a ranked candidate with an
// absent one, insert an absent candidate, swap two positions, or remove a
// candidate. Infeasible operations (no absent candidate, ranking too short
// to swap) are redrawn uniformly among the feasible ones; a removal that
// empties the ranking keeps the empty record in the multiset.
#pragma once

#include "ballots.hpp"
#include "rng.hpp"

namespace irvaudit {

struct ErrorModel {
    double rate = 0.0;
    std::uint64_t seed = 1;
};

// Reported/actual pair with one ballot class per physical ballot, in the
// same order on both sides, so ballot i of one expansion matches ballot i
// of the other.
struct PairedElections {
    Election reported;
    Election actual;
};

inline Ranking apply_replace(Ranking r, std::size_t pos, CandidateId absent) {
    r.at(pos) = absent;
    return r;
}
inline Ranking apply_insert(Ranking r, std::size_t pos, CandidateId absent) {
    r.insert(r.begin() + static_cast<std::ptrdiff_t>(pos), absent);
    return r;
}
inline Ranking apply_swap(Ranking r, std::size_t i, std::size_t j) {
    std::swap(r.at(i), r.at(j));
    return r;
}
inline Ranking apply_remove(Ranking r, std::size_t pos) {
    r.erase(r.begin() + static_cast<std::ptrdiff_t>(pos));
    return r;
}

namespace detail {

enum class Manipulation { replace, insert, swap, remove };

inline Ranking manipulate(const Ranking& r, int n_candidates, Rng& rng) {
    std::vector<CandidateId> absent;
    CandidateSet present = CandidateSet::from_range(r.begin(), r.end());
    for (CandidateId c = 0; c < n_candidates; ++c)
        if (!present.contains(c)) absent.push_back(c);

    std::vector<Manipulation> feasible;
    if (!absent.empty()) feasible.push_back(Manipulation::replace);
    if (!absent.empty()) feasible.push_back(Manipulation::insert);
    if (r.size() >= 2) feasible.push_back(Manipulation::swap);
    if (!r.empty()) feasible.push_back(Manipulation::remove);
    if (feasible.empty()) return r;

    switch (feasible[rng.uniform_below(feasible.size())]) {
        case Manipulation::replace: {
            const std::size_t pos = rng.uniform_below(r.size());
            const CandidateId c = absent[rng.uniform_below(absent.size())];
            return apply_replace(r, pos, c);
        }
        case Manipulation::insert: {
            const CandidateId c = absent[rng.uniform_below(absent.size())];
            const std::size_t pos = rng.uniform_below(r.size() + 1);
            return apply_insert(r, pos, c);
        }
        case Manipulation::swap: {
            const std::size_t i = rng.uniform_below(r.size());
            std::size_t j = rng.uniform_below(r.size() - 1);
            if (j >= i) ++j;
            return apply_swap(r, i, j);
        }
        case Manipulation::remove:
            return apply_remove(r, rng.uniform_below(r.size()));
    }
    return r;
}

}  // namespace detail

inline PairedElections inject_errors(const Election& e, const ErrorModel& model) {
    if (!(model.rate >= 0.0 && model.rate <= 1.0))
        throw std::invalid_argument("error rate must be in [0,1]");
    if (model.rate == 0.0) return {e, e};

    Rng rng(splitmix64(model.seed));
    std::vector<BallotClass> actual;
    std::vector<BallotClass> reported;
    actual.reserve(static_cast<std::size_t>(e.total_ballots()));
    reported.reserve(static_cast<std::size_t>(e.total_ballots()));
    for (const BallotClass& bc : e.ballots()) {
        for (Count i = 0; i < bc.count; ++i) {
            actual.push_back({bc.ranking, 1});
            if (rng.bernoulli(model.rate))
                reported.push_back(
                    {detail::manipulate(bc.ranking, e.candidate_count(), rng), 1});
            else
                reported.push_back({bc.ranking, 1});
        }
    }
    return {Election(e.candidates(), std::move(reported), e.metadata()),
            Election(e.candidates(), std::move(actual), e.metadata())};
}

}  // namespace irvaudit
