// Ballot and election data model for preferential (IRV) contests, plus the
// projection/tally primitives and the IRV tabulation loop everything else in
// the library is built on. All types are immutable values after construction.
#pragma once

#include <algorithm>
#include <bit>
#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace irvaudit {

using CandidateId = int;
using Count = std::int64_t;

// A preference ranking: most-preferred first, no duplicates, possibly a
// strict subset of the roster.
using Ranking = std::vector<CandidateId>;

// Set of candidate indices. Rosters are capped at 64 candidates so the set
// fits in one word; the largest public dataset we know of has 36.
class CandidateSet {
public:
    static constexpr int kMaxCandidates = 64;

    constexpr CandidateSet() = default;
    explicit constexpr CandidateSet(std::uint64_t bits) : bits_(bits) {}

    static constexpr CandidateSet full(int n_candidates) {
        return CandidateSet(n_candidates >= kMaxCandidates
                                ? ~std::uint64_t{0}
                                : (std::uint64_t{1} << n_candidates) - 1);
    }
    static CandidateSet of(std::initializer_list<CandidateId> ids) {
        CandidateSet s;
        for (CandidateId c : ids) s.insert(c);
        return s;
    }
    template <typename It>
    static CandidateSet from_range(It first, It last) {
        CandidateSet s;
        for (; first != last; ++first) s.insert(*first);
        return s;
    }

    constexpr bool contains(CandidateId c) const {
        return (bits_ >> c) & 1u;
    }
    constexpr CandidateSet& insert(CandidateId c) {
        bits_ |= std::uint64_t{1} << c;
        return *this;
    }
    constexpr CandidateSet& erase(CandidateId c) {
        bits_ &= ~(std::uint64_t{1} << c);
        return *this;
    }
    constexpr CandidateSet without(CandidateId c) const {
        CandidateSet s(*this);
        s.erase(c);
        return s;
    }
    constexpr CandidateSet with(CandidateId c) const {
        CandidateSet s(*this);
        s.insert(c);
        return s;
    }
    constexpr int size() const { return std::popcount(bits_); }
    constexpr bool empty() const { return bits_ == 0; }
    constexpr std::uint64_t bits() const { return bits_; }
    constexpr bool is_subset_of(CandidateSet other) const {
        return (bits_ & ~other.bits_) == 0;
    }
    friend constexpr bool operator==(CandidateSet, CandidateSet) = default;

    class iterator {
    public:
        explicit constexpr iterator(std::uint64_t rest) : rest_(rest) {}
        constexpr CandidateId operator*() const {
            return static_cast<CandidateId>(std::countr_zero(rest_));
        }
        constexpr iterator& operator++() {
            rest_ &= rest_ - 1;
            return *this;
        }
        friend constexpr bool operator==(iterator, iterator) = default;

    private:
        std::uint64_t rest_;
    };
    constexpr iterator begin() const { return iterator(bits_); }
    constexpr iterator end() const { return iterator(0); }

private:
    std::uint64_t bits_ = 0;
};

// One equivalence class of identical ballots.
struct BallotClass {
    Ranking ranking;
    Count count = 0;

    friend bool operator==(const BallotClass&, const BallotClass&) = default;
};

struct ElectionMetadata {
    std::optional<std::string> reported_winner;
    std::optional<Count> margin_of_victory;
    std::optional<std::string> source;

    friend bool operator==(const ElectionMetadata&,
                           const ElectionMetadata&) = default;
};

// A contest: candidate roster plus a multiset of rankings. Depending on
// role an instance holds the reported or the actual ballots. Construction
// validates the roster/ballot invariants; empty rankings are tolerated
// in-memory (error injection can exhaust a record entirely) but rejected by
// the file parsers.
class Election {
public:
    Election(std::vector<std::string> candidates,
             std::vector<BallotClass> ballots, ElectionMetadata metadata = {})
        : candidates_(std::move(candidates)),
          ballots_(std::move(ballots)),
          metadata_(std::move(metadata)) {
        const int n = static_cast<int>(candidates_.size());
        if (n < 1) throw std::invalid_argument("election has no candidates");
        if (n > CandidateSet::kMaxCandidates)
            throw std::invalid_argument("more than 64 candidates");
        for (int i = 0; i < n; ++i) {
            if (candidates_[i].empty())
                throw std::invalid_argument("empty candidate name");
            for (int j = i + 1; j < n; ++j)
                if (candidates_[i] == candidates_[j])
                    throw std::invalid_argument("duplicate candidate name: " +
                                                candidates_[i]);
        }
        for (const BallotClass& bc : ballots_) {
            if (bc.count < 1)
                throw std::invalid_argument("ballot class count must be >= 1");
            CandidateSet seen;
            for (CandidateId c : bc.ranking) {
                if (c < 0 || c >= n)
                    throw std::invalid_argument("candidate id out of range");
                if (seen.contains(c))
                    throw std::invalid_argument(
                        "duplicate candidate in ranking: " + candidates_[c]);
                seen.insert(c);
            }
            total_ += bc.count;
        }
        if (total_ <= 0) throw std::invalid_argument("no ballots");
        if (metadata_.reported_winner &&
            !candidate_index(*metadata_.reported_winner))
            throw std::invalid_argument("reported winner not on roster: " +
                                        *metadata_.reported_winner);
    }

    int candidate_count() const { return static_cast<int>(candidates_.size()); }
    const std::vector<std::string>& candidates() const { return candidates_; }
    const std::vector<BallotClass>& ballots() const { return ballots_; }
    const ElectionMetadata& metadata() const { return metadata_; }
    Count total_ballots() const { return total_; }
    CandidateSet full_roster() const {
        return CandidateSet::full(candidate_count());
    }

    std::optional<CandidateId> candidate_index(std::string_view name) const {
        for (int i = 0; i < candidate_count(); ++i)
            if (candidates_[i] == name) return i;
        return std::nullopt;
    }
    const std::string& candidate_name(CandidateId c) const {
        return candidates_.at(static_cast<std::size_t>(c));
    }
    std::optional<CandidateId> reported_winner_id() const {
        if (!metadata_.reported_winner) return std::nullopt;
        return candidate_index(*metadata_.reported_winner);
    }

    // Canonical form: duplicate ranking classes merged, classes sorted
    // lexicographically by index sequence.
    Election canonical() const {
        std::map<Ranking, Count> merged;
        for (const BallotClass& bc : ballots_) merged[bc.ranking] += bc.count;
        std::vector<BallotClass> out;
        out.reserve(merged.size());
        for (auto& [ranking, count] : merged) out.push_back({ranking, count});
        return Election(candidates_, std::move(out), metadata_);
    }

    friend bool operator==(const Election&, const Election&) = default;

private:
    std::vector<std::string> candidates_;
    std::vector<BallotClass> ballots_;
    ElectionMetadata metadata_;
    Count total_ = 0;
};

// Projection p_S: the subsequence of r retaining only members of standing.
inline Ranking project(const Ranking& r, CandidateSet standing) {
    Ranking out;
    out.reserve(r.size());
    for (CandidateId c : r)
        if (standing.contains(c)) out.push_back(c);
    return out;
}

// first(p_S(r)) without materialising the projection.
inline std::optional<CandidateId> first_standing(const Ranking& r,
                                                 CandidateSet standing) {
    for (CandidateId c : r)
        if (standing.contains(c)) return c;
    return std::nullopt;
}

// Dense tallies t_S(c) indexed by candidate id; entries for candidates not
// in `standing` are 0 and carry no meaning.
inline std::vector<Count> tally_counts(const Election& e,
                                       CandidateSet standing) {
    if (standing.empty()) throw std::invalid_argument("empty standing set");
    if (!standing.is_subset_of(e.full_roster()))
        throw std::invalid_argument("standing set is not within the roster");
    std::vector<Count> t(static_cast<std::size_t>(e.candidate_count()), 0);
    for (const BallotClass& bc : e.ballots())
        if (auto c = first_standing(bc.ranking, standing))
            t[static_cast<std::size_t>(*c)] += bc.count;
    return t;
}

// Tally as a map holding exactly the standing candidates.
inline std::map<CandidateId, Count> tally(const Election& e,
                                          CandidateSet standing) {
    std::vector<Count> dense = tally_counts(e, standing);
    std::map<CandidateId, Count> out;
    for (CandidateId c : standing) out[c] = dense[static_cast<std::size_t>(c)];
    return out;
}

// Primary votes f(c) = t_C(c) over the full roster.
inline std::map<CandidateId, Count> first_preferences(const Election& e) {
    return tally(e, e.full_roster());
}

// Ballots whose projection onto `standing` is nonempty. This is the ballot
// count of the FPTP election a standing-set hypothesis lives in.
inline Count context_total(const Election& e, CandidateSet standing) {
    Count n = 0;
    for (const BallotClass& bc : e.ballots())
        if (first_standing(bc.ranking, standing)) n += bc.count;
    return n;
}

struct TieBreak {
    int round = 0;                       // 1-based counting round
    CandidateId eliminated = -1;         // lowest-index tied candidate
    std::vector<CandidateId> tied_with;  // the other minimum-tally candidates
};

// Result of a full IRV count. `order` lists candidates first-eliminated
// first with the winner last; `round_tallies[r][c]` is t_S(c) at the start
// of round r, or -1 when c was no longer standing.
struct EliminationSequence {
    Ranking order;
    std::vector<std::vector<Count>> round_tallies;
    std::vector<TieBreak> tie_breaks;

    CandidateId winner() const { return order.back(); }
};

inline constexpr Count kNotStanding = -1;

// IRV counting: repeatedly eliminate the standing candidate with the
// smallest tally until one remains. Ties eliminate the lowest roster index
// and are recorded in the result.
inline EliminationSequence tabulate_irv(const Election& e) {
    const int n = e.candidate_count();
    EliminationSequence seq;
    CandidateSet standing = e.full_roster();
    for (int round = 1; standing.size() > 1; ++round) {
        std::vector<Count> t = tally_counts(e, standing);
        std::vector<Count> recorded(static_cast<std::size_t>(n), kNotStanding);
        CandidateId loser = -1;
        for (CandidateId c : standing) {
            recorded[static_cast<std::size_t>(c)] = t[static_cast<std::size_t>(c)];
            if (loser == -1 || t[static_cast<std::size_t>(c)] <
                                   t[static_cast<std::size_t>(loser)])
                loser = c;
        }
        std::vector<CandidateId> tied;
        for (CandidateId c : standing)
            if (c != loser && t[static_cast<std::size_t>(c)] ==
                                  t[static_cast<std::size_t>(loser)])
                tied.push_back(c);
        if (!tied.empty()) seq.tie_breaks.push_back({round, loser, tied});
        seq.round_tallies.push_back(std::move(recorded));
        seq.order.push_back(loser);
        standing.erase(loser);
    }
    seq.order.push_back(*standing.begin());
    return seq;
}

// Eq-8 style condition: with C standing, the candidates in `group` can be
// eliminated simultaneously iff every other standing candidate's tally
// strictly exceeds the group's combined tally.
inline bool simultaneous_group_valid(const Election& e, CandidateSet standing,
                                     CandidateSet group) {
    if (group.empty() || !group.is_subset_of(standing) ||
        group == standing)
        return false;
    std::vector<Count> t = tally_counts(e, standing);
    Count group_sum = 0;
    for (CandidateId c : group) group_sum += t[static_cast<std::size_t>(c)];
    for (CandidateId c : standing) {
        if (group.contains(c)) continue;
        if (t[static_cast<std::size_t>(c)] <= group_sum) return false;
    }
    return true;
}

}  // namespace irvaudit
