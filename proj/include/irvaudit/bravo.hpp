// BRAVO ballot-polling kernel: the per-hypothesis T_wl statistic and its
// expected-sample-number estimate. T_wl is held as integer draw counts and
// exponentiated on demand, so the statistic is exactly reproducible from the
// counts and immune to overflow on very long runs.
#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>

#include "ballots.hpp"

namespace irvaudit {

inline constexpr double kInfiniteAsn = std::numeric_limits<double>::infinity();

// Expected ballots sampled to reject {t(w) <= t(l)} at risk limit `alpha`,
// assuming the reported tallies are accurate:
//
//   ASN = (ln(1/a) + 0.5 ln(2s)) / (p_w ln(2s) + p_l ln(2-2s))
//
// with s = tw/(tw+tl), p_w = tw/total, p_l = tl/total. `total` is the ballot
// count of the FPTP election the pair lives in (exhausted ballots excluded).
// Unwinnable or degenerate inputs yield +infinity rather than an error.
inline double asn_bp(Count tally_w, Count tally_l, Count total, double alpha) {
    if (total <= 0) throw std::invalid_argument("asn_bp: total must be > 0");
    if (!(alpha > 0.0 && alpha < 1.0))
        throw std::invalid_argument("asn_bp: alpha must be in (0,1)");
    if (tally_w <= tally_l || tally_w <= 0) return kInfiniteAsn;

    const double pw = static_cast<double>(tally_w) / static_cast<double>(total);
    const double pl = static_cast<double>(tally_l) / static_cast<double>(total);
    const double s = static_cast<double>(tally_w) /
                     static_cast<double>(tally_w + tally_l);
    const double log_gain = std::log(2.0 * s);
    double denom = pw * log_gain;
    if (tally_l > 0) denom += pl * std::log(2.0 - 2.0 * s);
    if (!(denom > 0.0)) return kInfiniteAsn;
    const double num = std::log(1.0 / alpha) + 0.5 * log_gain;
    const double asn = num / denom;
    return asn > 0.0 ? asn : kInfiniteAsn;
}

enum class PollSignal { for_winner, for_loser, neutral };

// State of one BRAVO null-hypothesis test {t(w) <= t(l)}.
class BravoState {
public:
    BravoState(double s_wl, double alpha) : s_wl_(s_wl), alpha_(alpha) {
        if (!(s_wl > 0.0 && s_wl < 1.0) && s_wl != 1.0)
            throw std::invalid_argument("s_wl must be in (0,1]");
        if (!(alpha > 0.0 && alpha < 1.0))
            throw std::invalid_argument("alpha must be in (0,1)");
        log_gain_ = std::log(2.0 * s_wl);
        log_loss_ = s_wl < 1.0 ? std::log(2.0 - 2.0 * s_wl)
                               : -std::numeric_limits<double>::infinity();
        reject_threshold_ = std::log(1.0 / alpha);
    }

    static BravoState from_tallies(Count tally_w, Count tally_l, double alpha) {
        if (tally_w + tally_l <= 0)
            throw std::invalid_argument("pair has no votes");
        return BravoState(static_cast<double>(tally_w) /
                              static_cast<double>(tally_w + tally_l),
                          alpha);
    }

    void record(PollSignal sig) {
        if (rejected_)
            throw std::logic_error("bravo_update on a closed state");
        switch (sig) {
            case PollSignal::for_winner: ++winner_draws_; break;
            case PollSignal::for_loser: ++loser_draws_; break;
            case PollSignal::neutral: return;
        }
        if (log_t() >= reject_threshold_) rejected_ = true;
    }

    // T_wl = (2s)^{k_w} (2-2s)^{k_l}, evaluated in the log domain. Terms are
    // added only when their count is nonzero so that s_wl == 1 (log_loss of
    // -inf) cannot poison an untouched statistic.
    double log_t() const {
        double v = 0.0;
        if (winner_draws_ > 0) v += static_cast<double>(winner_draws_) * log_gain_;
        if (loser_draws_ > 0) v += static_cast<double>(loser_draws_) * log_loss_;
        return v;
    }
    double t_statistic() const { return std::exp(log_t()); }

    bool rejected_null() const { return rejected_; }
    bool open() const { return !rejected_; }
    double s_wl() const { return s_wl_; }
    double alpha() const { return alpha_; }
    std::int64_t winner_draws() const { return winner_draws_; }
    std::int64_t loser_draws() const { return loser_draws_; }

private:
    double s_wl_;
    double alpha_;
    double log_gain_;
    double log_loss_;
    double reject_threshold_;
    std::int64_t winner_draws_ = 0;
    std::int64_t loser_draws_ = 0;
    bool rejected_ = false;
};

// Pure-transition spelling of BravoState::record.
inline BravoState bravo_update(BravoState st, PollSignal sig) {
    st.record(sig);
    return st;
}

}  // namespace irvaudit
