#pragma once

// Builders for complexes with prescribed averaged characteristic:
//   - one_over_m:      the sparse periodic family with value 1/(2m);
//   - rational_target: finite direct sums and shifts realizing any rational;
//   - real_target:     a greedy rank schedule whose averaged homology
//                      sequence converges to an arbitrary real target given
//                      as an exact rational (e.g. a truncated decimal);
//   - topology_builtin: small zero-differential homology models of classical
//                      spaces (infinite wedges of spheres, the point).
//
// The greedy schedule emits ranks only in even degrees, alternating between
// "low" blocks of rank 2a and "high" blocks of rank 2b. Writing S_n for the
// partial sum of the signed homology-rank sequence (all contributions are
// positive, sitting in even degrees), the running mean S_n / n is compared
// against the target at every even index n = 2t; the comparison happens
// before the degree-2t rank is emitted, and a crossing flips the phase so
// the new rank already pushes the mean back toward the target. Once the
// mean has crossed the target, it stays within 2b/n of it forever.

#include <hoelder/chain.hpp>

#include <cstddef>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <utility>
#include <vector>

namespace hoelder {

// --- sparse periodic family ---------------------------------------------------

// One generator in every degree divisible by 2m, nothing else, zero
// differentials. The signed homology-rank sequence is periodic with period
// 2m and a single +1 per period, so the averaged characteristic is exactly
// 1/(2m).
inline ChainComplex one_over_m(long m) {
    if (m < 1) throw PreconditionError("one_over_m needs m >= 1");
    ExplicitBlock rep;
    rep.ranks.assign(static_cast<std::size_t>(2 * m), 0);
    rep.ranks[0] = 1;
    for (std::size_t i = 0; i + 1 < rep.ranks.size(); ++i)
        rep.boundaries.emplace_back(rep.ranks[i], rep.ranks[i + 1]);
    return ChainComplex::periodic(ExplicitBlock{}, std::move(rep), IntMatrix(0, 1),
                                  IntMatrix(0, 1));
}

// --- rational targets -----------------------------------------------------------

namespace detail {

// Balanced direct-sum tree of `count` copies of one block. Balancing keeps
// the preperiod of the folded periodic representation logarithmic in count.
inline ChainComplex sum_copies(const ChainComplex& block, long count) {
    if (count < 1) throw PreconditionError("need at least one copy");
    if (count == 1) return block;
    long half = count / 2;
    return direct_sum(sum_copies(block, half), sum_copies(block, count - half));
}

}  // namespace detail

// A complex whose averaged characteristic is exactly q: writing |q| = a/b in
// lowest terms, 2a copies of the 1/(2b) building block are summed, and
// negative targets are realized by shifting the positive construction up one
// degree (which negates the value). q = 0 yields the zero complex.
inline ChainComplex rational_target(Rat q) {
    q.canonicalize();
    if (q == 0) return ChainComplex::zero_complex();
    Rat mag = ::abs(q);
    if (!mag.get_num().fits_slong_p() || !mag.get_den().fits_slong_p())
        throw PreconditionError("target numerator or denominator too large to materialize");
    long a = mag.get_num().get_si();
    long b = mag.get_den().get_si();
    ChainComplex sum = detail::sum_copies(one_over_m(b), 2 * a);
    if (q < 0) sum = shift_complex(sum, 1);
    return sum;
}

// --- greedy real targets ----------------------------------------------------------

// Snapshot of a greedy schedule: everything needed to audit or reproducibly
// extend the construction.
struct GreedyState {
    Rat target;                // the value the running mean is steered toward
    long lower = 0;            // a: low blocks emit rank 2a
    long upper = 1;            // b: high blocks emit rank 2b; a < target < b
    long index = 0;            // highest sequence index n with terms 1..n emitted
    Int running_sum;           // S_index: sum of the emitted signed rank terms
    bool low_phase = false;    // true while even degrees emit rank 2a
    std::vector<long> blocks;  // m_1 < m_2 < ...: phase flips happened at index 2*m_i
};

// Memoized, thread-safe emitter of the greedy rank schedule. Ranks live in
// even degrees only; rank_at_even(t) is the rank of degree 2t. The schedule
// extends itself on demand and never changes a value once emitted.
class GreedyScheduler {
  public:
    GreedyScheduler(Rat target, long lower, long upper)
        : target_(std::move(target)), lower_(lower), upper_(upper) {
        if (lower_ < 0 || !(Rat(lower_) < target_) || !(target_ < Rat(upper_)))
            throw PreconditionError(
                "greedy bounds must be integers with 0 <= lower < target < upper");
        num_ = target_.get_num();
        den_ = target_.get_den();
        ranks_.push_back(2 * upper_);  // degree 0 starts high
        sum_ = 2 * upper_;             // S_1
        low_ = true;                   // the mean starts above the target: descend
    }

    GreedyScheduler(const GreedyScheduler&) = delete;
    GreedyScheduler& operator=(const GreedyScheduler&) = delete;

    Rat target() const { return target_; }
    long lower() const { return lower_; }
    long upper() const { return upper_; }

    // Rank of degree 2t (t >= 0).
    long rank_at_even(long t) {
        if (t < 0) throw PreconditionError("degrees start at 0");
        std::lock_guard<std::mutex> g(mu_);
        extend_locked(t);
        return ranks_[static_cast<std::size_t>(t)];
    }

    // Rank of an arbitrary degree; odd degrees are always zero.
    long rank_at_degree(long d) {
        if (d < 0) throw PreconditionError("degrees start at 0");
        if (d % 2 == 1) return 0;
        return rank_at_even(d / 2);
    }

    // Ensure every degree <= d has been scheduled.
    void extend_to_degree(long d) {
        if (d < 0) return;
        std::lock_guard<std::mutex> g(mu_);
        extend_locked(d / 2);
    }

    GreedyState snapshot() const {
        std::lock_guard<std::mutex> g(mu_);
        GreedyState s;
        s.target = target_;
        s.lower = lower_;
        s.upper = upper_;
        s.index = 2 * static_cast<long>(ranks_.size()) - 1;
        s.running_sum = sum_;
        s.low_phase = low_;
        s.blocks = blocks_;
        return s;
    }

  private:
    // Emit ranks of degrees 2*size, ..., 2*t. For each even degree 2t the
    // running sum is unchanged since the previous emission (degree 2t-1 is
    // odd, rank zero), so sum_ equals S_{2t} exactly when the crossing test
    // runs; a detected crossing flips the phase before the rank goes out.
    void extend_locked(long t) {
        while (static_cast<long>(ranks_.size()) <= t) {
            long at = static_cast<long>(ranks_.size());
            Int lhs = sum_ * den_;
            Int rhs = num_ * (2 * at);
            if (low_ ? (lhs < rhs) : (lhs > rhs)) {
                blocks_.push_back(at);
                low_ = !low_;
            }
            long rk = low_ ? 2 * lower_ : 2 * upper_;
            ranks_.push_back(rk);
            sum_ += rk;
        }
    }

    mutable std::mutex mu_;
    Rat target_;
    Int num_, den_;
    long lower_ = 0;
    long upper_ = 1;
    std::vector<long> ranks_;
    Int sum_;
    bool low_ = true;
    std::vector<long> blocks_;
};

// A complex carrying the greedy schedule as its homology ranks (zero
// differentials, so chain ranks coincide), plus the live schedule behind it.
struct RealTargetResult {
    ChainComplex complex;
    std::shared_ptr<GreedyScheduler> schedule;

    GreedyState state() const { return schedule->snapshot(); }
};

// Build the greedy complex for an exact rational target r with integer
// bounds lower < r < upper. The rank rule extends on demand past the
// initial horizon; querying it through the complex or through the schedule
// handle yields identical, deterministic values.
inline RealTargetResult real_target(const Rat& r, long lower, long upper, long horizon = 1000) {
    if (horizon < 0) throw PreconditionError("horizon must be >= 0");
    auto sched = std::make_shared<GreedyScheduler>(r, lower, upper);
    sched->extend_to_degree(horizon);
    std::map<std::string, Rat> params{
        {"target", r}, {"lower", Rat(lower)}, {"upper", Rat(upper)}};
    RationalSeq hranks = RationalSeq::rule(
        "greedy_rank_schedule",
        [sched](long n) { return Rat(sched->rank_at_degree(n - 1)); }, std::move(params),
        Rat(2 * upper));
    return RealTargetResult{ChainComplex::homology_only(std::move(hranks), true), sched};
}

// Exact audit of an emitted schedule over indices 1..n_max: locates the
// first crossing of the target by the running mean, counts crossings, and
// maximizes |S_n - target*n| from the first crossing on. within_bound
// witnesses the amplitude guarantee |mean_n - target| <= 2*upper/n.
struct GreedyCheck {
    long first_crossing_index = 0;  // n = 2*m_1; 0 when no crossing happened yet
    long crossings = 0;             // phase flips with 2*m_i <= n_max
    Rat max_deviation{0};           // max over n >= first crossing of |S_n - target*n|
    Rat amplitude_bound{0};         // 2*upper
    bool within_bound = true;       // max_deviation <= amplitude_bound
};

inline GreedyCheck check_real_target(GreedyScheduler& sched, long n_max) {
    if (n_max < 1) throw PreconditionError("audit horizon must be >= 1");
    // Indices 1..n_max are fed by degrees 0..n_max-1, but the crossing test
    // at index n_max itself runs when the degree-n_max rank is emitted, so
    // extend one degree further to complete the crossing bookkeeping.
    sched.extend_to_degree(n_max);
    GreedyState st = sched.snapshot();
    GreedyCheck out;
    out.amplitude_bound = Rat(2 * st.upper);
    for (long m : st.blocks) {
        if (2 * m > n_max) break;
        ++out.crossings;
    }
    if (out.crossings == 0) return out;
    out.first_crossing_index = 2 * st.blocks.front();
    Int num = st.target.get_num(), den = st.target.get_den();
    Int sum = 0, worst = 0;
    for (long n = 1; n <= n_max; ++n) {
        sum += sched.rank_at_degree(n - 1);
        if (n < out.first_crossing_index) continue;
        Int dev = sum * den - num * n;
        if (dev < 0) dev = -dev;
        if (dev > worst) worst = dev;
    }
    out.max_deviation = make_rat(worst, den);
    out.within_bound = out.max_deviation <= out.amplitude_bound;
    return out;
}

// --- decimal literals --------------------------------------------------------------

// Exact rational value of a plain decimal literal such as "3", "-0.5", or
// "1.41421356237" (sign, digits, optional fractional digits; no exponents).
inline Rat rat_from_decimal(const std::string& text) {
    std::size_t pos = 0;
    bool neg = false;
    if (pos < text.size() && (text[pos] == '+' || text[pos] == '-')) {
        neg = text[pos] == '-';
        ++pos;
    }
    std::string digits;
    long frac_digits = 0;
    bool seen_dot = false;
    for (; pos < text.size(); ++pos) {
        char c = text[pos];
        if (c == '.') {
            if (seen_dot) throw ParseError("not a decimal literal: '" + text + "'");
            seen_dot = true;
            continue;
        }
        if (c < '0' || c > '9') throw ParseError("not a decimal literal: '" + text + "'");
        digits.push_back(c);
        if (seen_dot) ++frac_digits;
    }
    if (digits.empty()) throw ParseError("not a decimal literal: '" + text + "'");
    Int num(digits, 10);
    Int den;
    mpz_ui_pow_ui(den.get_mpz_t(), 10, static_cast<unsigned long>(frac_digits));
    if (neg) num = -num;
    return make_rat(num, den);
}

// --- topological builtins ------------------------------------------------------------

// Zero-differential homology models:
//   wedge_all_spheres:  one generator in every degree          -> value 0
//   wedge_odd_spheres:  degree 0 plus every odd degree         -> value -1/2
//   point:              a single generator in degree 0         -> value 0
inline ChainComplex topology_builtin(const std::string& name) {
    if (name == "wedge_all_spheres") {
        ExplicitBlock rep;
        rep.ranks = {1};
        return ChainComplex::periodic(ExplicitBlock{}, std::move(rep), IntMatrix(0, 1),
                                      IntMatrix(1, 1));
    }
    if (name == "wedge_odd_spheres") {
        ExplicitBlock pre;
        pre.ranks = {1};
        ExplicitBlock rep;
        rep.ranks = {1, 0};
        rep.boundaries.emplace_back(1, 0);
        return ChainComplex::periodic(std::move(pre), std::move(rep), IntMatrix(1, 1),
                                      IntMatrix(0, 1));
    }
    if (name == "point") return ChainComplex::explicit_complex({1}, {});
    throw PreconditionError("unknown topology builtin '" + name + "'");
}

}  // namespace hoelder
