// MACRO ballot-level comparison kernel: the Kaplan-Markov running P-value
// and its expected-sample-number estimate. The error-tolerance parameter
// lambda of the underlying method is fixed to 0 (single-ballot draws only;
// batch sizing is out of scope).
#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>

#include "bravo.hpp"

namespace irvaudit {

// Expected ballots checked by a MACRO audit with no discrepancies:
//   ASN = -ln(alpha) * U,  U = 2*gamma*total / v_min.
// `total` is the full ballot count |B| (every ballot is drawable in a
// comparison audit, exhausted or not); v_min the smallest winner/loser
// margin covered by the audit.
inline double asn_cp(Count total, Count v_min, double alpha, double gamma) {
    if (total <= 0) throw std::invalid_argument("asn_cp: total must be > 0");
    if (!(alpha > 0.0 && alpha <= 1.0))
        throw std::invalid_argument("asn_cp: alpha must be in (0,1]");
    if (gamma < 1.0) throw std::invalid_argument("asn_cp: gamma must be >= 1");
    if (v_min <= 0) return kInfiniteAsn;
    const double u = 2.0 * gamma * static_cast<double>(total) /
                     static_cast<double>(v_min);
    return -std::log(alpha) * u;
}

// Zero-error confirmation draw count: smallest m with (1-1/U)^m <= alpha.
inline std::int64_t macro_zero_error_draws(Count total, Count v_min,
                                           double alpha, double gamma) {
    const double u = 2.0 * gamma * static_cast<double>(total) /
                     static_cast<double>(v_min);
    return static_cast<std::int64_t>(
        std::ceil(std::log(alpha) / std::log1p(-1.0 / u)));
}

// State of one MACRO application (one audit unit). Clean draws are counted
// and only nonzero-discrepancy multipliers accumulate in the log residual,
// so zero-error runs are bit-exact and order-independent.
class MacroState {
public:
    MacroState(Count total_ballots, Count v_min, double gamma)
        : total_ballots_(total_ballots), v_min_(v_min), gamma_(gamma) {
        if (total_ballots <= 0)
            throw std::invalid_argument("total_ballots must be > 0");
        if (v_min <= 0) throw std::invalid_argument("v_min must be > 0");
        if (gamma < 1.0) throw std::invalid_argument("gamma must be >= 1");
        u_ = 2.0 * gamma_ * static_cast<double>(total_ballots_) /
             static_cast<double>(v_min_);
        if (!(u_ > 1.0)) throw std::invalid_argument("diluted bound U must exceed 1");
        log_clean_step_ = std::log1p(-1.0 / u_);
        taint_cap_ = 2.0 * gamma_ / static_cast<double>(v_min_);
    }

    // Consume the maximum relative overstatement of one drawn ballot.
    // A discrepancy at or above the 2*gamma/V_min bound makes the
    // Kaplan-Markov multiplier undefined; the unit escalates and can never
    // confirm (P_KM is +infinity from then on).
    void record(double e_b, double alpha) {
        if (confirmed_) throw std::logic_error("macro_update on a closed state");
        if (!(alpha > 0.0 && alpha < 1.0))
            throw std::invalid_argument("alpha must be in (0,1)");
        if (e_b == 0.0) {
            ++clean_draws_;
        } else {
            const double denom = 1.0 - e_b / taint_cap_;
            if (denom <= 0.0) {
                escalated_ = true;
                return;
            }
            log_p_dirty_ += log_clean_step_ - std::log(denom);
        }
        if (!escalated_ && log_p_km() <= std::log(alpha)) confirmed_ = true;
    }

    double log_p_km() const {
        if (escalated_) return std::numeric_limits<double>::infinity();
        return static_cast<double>(clean_draws_) * log_clean_step_ +
               log_p_dirty_;
    }
    double p_km() const { return std::exp(log_p_km()); }

    bool confirmed() const { return confirmed_; }
    bool escalated() const { return escalated_; }
    bool open() const { return !confirmed_; }
    double u() const { return u_; }
    Count v_min() const { return v_min_; }
    double gamma() const { return gamma_; }
    std::int64_t clean_draws() const { return clean_draws_; }

private:
    Count total_ballots_;
    Count v_min_;
    double gamma_;
    double u_;
    double log_clean_step_;
    double taint_cap_;  // 2*gamma / v_min
    std::int64_t clean_draws_ = 0;
    double log_p_dirty_ = 0.0;
    bool confirmed_ = false;
    bool escalated_ = false;
};

inline MacroState macro_update(MacroState st, double e_b, double alpha) {
    st.record(e_b, alpha);
    return st;
}

}  // namespace irvaudit
