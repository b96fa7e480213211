#pragma once

// Lazy exact rational sequences (1-based) with iterated-averaging support:
// the averaging operator M maps a to (Ma)_i = (1/i) * sum_{j<=i} a_j, and a
// sequence H-converges when some iterate M^k a converges. This header
// provides the sequence value type, streaming evaluation, closed-form limit
// extraction for eventually-periodic/affine structure, an empirical
// tail-window ladder, and the "is o(n) in the H sense" verdict.

#include <algorithm>
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "hoelder/rational.hpp"

namespace hoelder {

enum class Tri { yes, no, unknown };

inline std::string tri_string(Tri t) {
    switch (t) {
        case Tri::yes: return "true";
        case Tri::no: return "false";
        default: return "inconclusive";
    }
}

struct SummabilityConfig {
    long n_max = 100000;
    int k_max = 8;
    Rat tol = Rat(1, 1000000);
    Rat tail_fraction = Rat(1, 10);

    void validate() const {
        if (n_max < 10) throw PreconditionError("n_max must be >= 10");
        if (k_max < 1) throw PreconditionError("k_max must be >= 1");
        if (tol <= 0) throw PreconditionError("tol must be positive");
        if (tail_fraction <= 0 || tail_fraction >= 1)
            throw PreconditionError("tail_fraction must lie strictly between 0 and 1");
    }

    long window_width() const {
        Int w = (tail_fraction.get_num() * n_max) / tail_fraction.get_den();
        long width = static_cast<long>(w.get_si());
        return std::max<long>(2, std::min(width, n_max));
    }
};

class RationalSeq {
  public:
    struct Node;

    // --- construction -----------------------------------------------------

    // Finite list of terms; beyond it either zeros or an evaluation error.
    static RationalSeq explicit_prefix(std::vector<Rat> terms, bool zero_tail = true);
    // pre[0..], then period repeated forever. period must be non-empty.
    static RationalSeq eventually_periodic(std::vector<Rat> pre, std::vector<Rat> period);
    // Pure term generator; id names it for reports/serialization ("" = anonymous).
    // abs_bound, when given, is a caller-certified sup of |a_n| over all n;
    // it is trusted and feeds exact smallness verdicts downstream.
    static RationalSeq rule(std::string id, std::function<Rat(long)> fn,
                            std::map<std::string, Rat> params = {},
                            std::optional<Rat> abs_bound = std::nullopt);
    // a_n = c0 + c1 * n.
    static RationalSeq affine(Rat c0, Rat c1);
    // Explicit preperiod, then slot r of the cycle contributes c0_r + c1_r * n.
    static RationalSeq affine_cycle(std::vector<Rat> pre, std::vector<std::pair<Rat, Rat>> cycle);
    static RationalSeq constant(Rat c) { return eventually_periodic({}, {std::move(c)}); }
    static RationalSeq zero() { return constant(Rat(0)); }

    // --- transforms (lazy, immutable) --------------------------------------

    RationalSeq cesaro(int k) const;          // M^k applied to this sequence
    RationalSeq shifted(long m) const;        // b_i = a_{i-m} (zeros when i <= m); m < 0 drops terms
    RationalSeq abs() const;                  // termwise absolute value
    RationalSeq scaled(Rat c) const;          // termwise c * a_i
    RationalSeq plus(const RationalSeq& other) const;  // termwise sum
    RationalSeq div_by_index() const;         // b_i = a_i / i
    RationalSeq alt_sign() const;             // b_i = (-1)^(i-1) * a_i

    // --- evaluation ---------------------------------------------------------

    class Cursor {
      public:
        struct Impl {
            virtual ~Impl() = default;
            virtual Rat next() = 0;  // terms 1, 2, 3, ... in order
        };
        explicit Cursor(std::unique_ptr<Impl> impl) : impl_(std::move(impl)) {}
        Rat next() { return impl_->next(); }

      private:
        std::unique_ptr<Impl> impl_;
    };

    Cursor cursor() const;
    Rat term(long n) const;                 // 1-based; O(n) via a fresh cursor
    std::vector<Rat> prefix(long n) const;  // terms 1..n

    const Node& node() const { return *node_; }
    const std::shared_ptr<const Node>& node_ptr() const { return node_; }

  private:
    explicit RationalSeq(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
    std::shared_ptr<const Node> node_;
};

// --- node structure ---------------------------------------------------------

struct ExplicitPrefixNode {
    std::vector<Rat> terms;
    bool zero_tail;
};
struct EventuallyPeriodicNode {
    std::vector<Rat> pre;
    std::vector<Rat> period;
};
struct RuleNode {
    std::string id;
    std::function<Rat(long)> fn;
    std::map<std::string, Rat> params;
    std::optional<Rat> abs_bound;  // caller-certified sup of |a_n|, if any
};
struct AffineCycleNode {
    std::vector<Rat> pre;
    std::vector<std::pair<Rat, Rat>> cycle;  // (c0, c1): term n contributes c0 + c1*n
};
struct CesaroNode {
    RationalSeq base;
    int k;
};
struct ShiftNode {
    RationalSeq base;
    long m;
};
struct AbsNode {
    RationalSeq base;
};
struct ScaleNode {
    RationalSeq base;
    Rat c;
};
struct PlusNode {
    RationalSeq a, b;
};
struct DivIndexNode {
    RationalSeq base;
};
struct AltSignNode {
    RationalSeq base;
};

struct RationalSeq::Node {
    std::variant<ExplicitPrefixNode, EventuallyPeriodicNode, RuleNode, AffineCycleNode,
                 CesaroNode, ShiftNode, AbsNode, ScaleNode, PlusNode, DivIndexNode, AltSignNode>
        v;
};

namespace detail {

template <class T, class... Args>
std::shared_ptr<const RationalSeq::Node> make_node(Args&&... args) {
    return std::make_shared<const RationalSeq::Node>(
        RationalSeq::Node{T{std::forward<Args>(args)...}});
}

// One averaging stage as a streaming accumulator. State after i feeds:
// p/q = sum of the first i input terms, so the stage's i-th output term is
// p / (q*i). q grows multiplicatively (q_new = lcm(q, den)), which keeps
// every update linear in the size of q.
struct CesaroAccum {
    Int p{0};
    Int q{1};
    long count{0};

    void feed(const Int& num, const Int& den) {
        if (den != 1) {
            Int g = gcd(q, den);
            if (g != den) {
                Int f = den / g;
                p *= f;
                q *= f;
            }
            p += num * (q / den);
        } else {
            p += num * q;
        }
        ++count;
    }
};

}  // namespace detail

// --- constructors -------------------------------------------------------------

inline RationalSeq RationalSeq::explicit_prefix(std::vector<Rat> terms, bool zero_tail) {
    return RationalSeq(detail::make_node<ExplicitPrefixNode>(std::move(terms), zero_tail));
}
inline RationalSeq RationalSeq::eventually_periodic(std::vector<Rat> pre, std::vector<Rat> period) {
    if (period.empty()) throw PreconditionError("eventually periodic sequence needs a non-empty period");
    return RationalSeq(detail::make_node<EventuallyPeriodicNode>(std::move(pre), std::move(period)));
}
inline RationalSeq RationalSeq::rule(std::string id, std::function<Rat(long)> fn,
                                     std::map<std::string, Rat> params,
                                     std::optional<Rat> abs_bound) {
    if (!fn) throw PreconditionError("rule sequence needs a generator");
    if (abs_bound && *abs_bound < 0)
        throw PreconditionError("a magnitude bound cannot be negative");
    return RationalSeq(detail::make_node<RuleNode>(std::move(id), std::move(fn), std::move(params),
                                                   std::move(abs_bound)));
}
inline RationalSeq RationalSeq::affine(Rat c0, Rat c1) {
    return RationalSeq(detail::make_node<AffineCycleNode>(
        std::vector<Rat>{}, std::vector<std::pair<Rat, Rat>>{{std::move(c0), std::move(c1)}}));
}
inline RationalSeq RationalSeq::affine_cycle(std::vector<Rat> pre,
                                             std::vector<std::pair<Rat, Rat>> cycle) {
    if (cycle.empty()) throw PreconditionError("affine cycle sequence needs a non-empty cycle");
    return RationalSeq(detail::make_node<AffineCycleNode>(std::move(pre), std::move(cycle)));
}

inline RationalSeq RationalSeq::cesaro(int k) const {
    if (k < 0) throw PreconditionError("averaging order must be >= 0");
    if (k == 0) return *this;
    return RationalSeq(detail::make_node<CesaroNode>(*this, k));
}
inline RationalSeq RationalSeq::shifted(long m) const {
    if (m == 0) return *this;
    return RationalSeq(detail::make_node<ShiftNode>(*this, m));
}
inline RationalSeq RationalSeq::abs() const { return RationalSeq(detail::make_node<AbsNode>(*this)); }
inline RationalSeq RationalSeq::scaled(Rat c) const {
    return RationalSeq(detail::make_node<ScaleNode>(*this, std::move(c)));
}
inline RationalSeq RationalSeq::plus(const RationalSeq& other) const {
    return RationalSeq(detail::make_node<PlusNode>(*this, other));
}
inline RationalSeq RationalSeq::div_by_index() const {
    return RationalSeq(detail::make_node<DivIndexNode>(*this));
}
inline RationalSeq RationalSeq::alt_sign() const {
    return RationalSeq(detail::make_node<AltSignNode>(*this));
}

// --- cursors -------------------------------------------------------------------

namespace detail {

using CursorImpl = RationalSeq::Cursor::Impl;

struct ExplicitCursor final : CursorImpl {
    const ExplicitPrefixNode* n;
    std::shared_ptr<const RationalSeq::Node> keep;
    long i = 0;
    Rat next() override {
        ++i;
        if (i <= static_cast<long>(n->terms.size())) return n->terms[static_cast<std::size_t>(i - 1)];
        if (n->zero_tail) return Rat(0);
        throw EvalError("explicit sequence has no term " + std::to_string(i) +
                        " (declared length " + std::to_string(n->terms.size()) + ")");
    }
};

struct PeriodicCursor final : CursorImpl {
    const EventuallyPeriodicNode* n;
    std::shared_ptr<const RationalSeq::Node> keep;
    long i = 0;
    Rat next() override {
        ++i;
        long p = static_cast<long>(n->pre.size());
        if (i <= p) return n->pre[static_cast<std::size_t>(i - 1)];
        long r = (i - p - 1) % static_cast<long>(n->period.size());
        return n->period[static_cast<std::size_t>(r)];
    }
};

struct RuleCursor final : CursorImpl {
    const RuleNode* n;
    std::shared_ptr<const RationalSeq::Node> keep;
    long i = 0;
    Rat next() override { return n->fn(++i); }
};

struct AffineCursor final : CursorImpl {
    const AffineCycleNode* n;
    std::shared_ptr<const RationalSeq::Node> keep;
    long i = 0;
    Rat next() override {
        ++i;
        long p = static_cast<long>(n->pre.size());
        if (i <= p) return n->pre[static_cast<std::size_t>(i - 1)];
        long r = (i - p - 1) % static_cast<long>(n->cycle.size());
        const auto& [c0, c1] = n->cycle[static_cast<std::size_t>(r)];
        return c0 + c1 * i;
    }
};

struct CesaroCursor final : CursorImpl {
    std::unique_ptr<CursorImpl> base;
    std::vector<CesaroAccum> stages;
    Int denbuf;
    Rat next() override {
        Rat t = base->next();
        stages[0].feed(t.get_num(), t.get_den());
        for (std::size_t s = 1; s < stages.size(); ++s) {
            denbuf = stages[s - 1].q * stages[s - 1].count;
            stages[s].feed(stages[s - 1].p, denbuf);
        }
        return make_rat(stages.back().p, stages.back().q * stages.back().count);
    }
};

struct ShiftCursor final : CursorImpl {
    std::unique_ptr<CursorImpl> base;
    long pending_zeros = 0;  // m > 0
    long to_skip = 0;        // m < 0
    bool skipped = false;
    Rat next() override {
        if (pending_zeros > 0) {
            --pending_zeros;
            return Rat(0);
        }
        if (!skipped) {
            for (long j = 0; j < to_skip; ++j) base->next();
            skipped = true;
        }
        return base->next();
    }
};

struct AbsCursor final : CursorImpl {
    std::unique_ptr<CursorImpl> base;
    Rat next() override { return ::abs(base->next()); }
};

struct ScaleCursor final : CursorImpl {
    std::unique_ptr<CursorImpl> base;
    Rat c;
    Rat next() override { return c * base->next(); }
};

struct PlusCursor final : CursorImpl {
    std::unique_ptr<CursorImpl> a, b;
    Rat next() override { return a->next() + b->next(); }
};

struct DivIndexCursor final : CursorImpl {
    std::unique_ptr<CursorImpl> base;
    long i = 0;
    Rat next() override {
        ++i;
        return base->next() / Rat(i);
    }
};

struct AltSignCursor final : CursorImpl {
    std::unique_ptr<CursorImpl> base;
    long i = 0;
    Rat next() override {
        ++i;
        Rat t = base->next();
        return (i % 2 == 1) ? t : -t;
    }
};

inline std::unique_ptr<CursorImpl> make_cursor(std::shared_ptr<const RationalSeq::Node> node);

struct CursorBuilder {
    const std::shared_ptr<const RationalSeq::Node>& keep;

    std::unique_ptr<CursorImpl> operator()(const ExplicitPrefixNode& n) const {
        auto c = std::make_unique<ExplicitCursor>();
        c->n = &n;
        c->keep = keep;
        return c;
    }
    std::unique_ptr<CursorImpl> operator()(const EventuallyPeriodicNode& n) const {
        auto c = std::make_unique<PeriodicCursor>();
        c->n = &n;
        c->keep = keep;
        return c;
    }
    std::unique_ptr<CursorImpl> operator()(const RuleNode& n) const {
        auto c = std::make_unique<RuleCursor>();
        c->n = &n;
        c->keep = keep;
        return c;
    }
    std::unique_ptr<CursorImpl> operator()(const AffineCycleNode& n) const {
        auto c = std::make_unique<AffineCursor>();
        c->n = &n;
        c->keep = keep;
        return c;
    }
    std::unique_ptr<CursorImpl> operator()(const CesaroNode& n) const {
        auto c = std::make_unique<CesaroCursor>();
        c->base = make_cursor_of(n.base);
        c->stages.resize(static_cast<std::size_t>(n.k));
        return c;
    }
    std::unique_ptr<CursorImpl> operator()(const ShiftNode& n) const {
        auto c = std::make_unique<ShiftCursor>();
        c->base = make_cursor_of(n.base);
        if (n.m > 0) c->pending_zeros = n.m;
        else c->to_skip = -n.m;
        return c;
    }
    std::unique_ptr<CursorImpl> operator()(const AbsNode& n) const {
        auto c = std::make_unique<AbsCursor>();
        c->base = make_cursor_of(n.base);
        return c;
    }
    std::unique_ptr<CursorImpl> operator()(const ScaleNode& n) const {
        auto c = std::make_unique<ScaleCursor>();
        c->base = make_cursor_of(n.base);
        c->c = n.c;
        return c;
    }
    std::unique_ptr<CursorImpl> operator()(const PlusNode& n) const {
        auto c = std::make_unique<PlusCursor>();
        c->a = make_cursor_of(n.a);
        c->b = make_cursor_of(n.b);
        return c;
    }
    std::unique_ptr<CursorImpl> operator()(const DivIndexNode& n) const {
        auto c = std::make_unique<DivIndexCursor>();
        c->base = make_cursor_of(n.base);
        return c;
    }
    std::unique_ptr<CursorImpl> operator()(const AltSignNode& n) const {
        auto c = std::make_unique<AltSignCursor>();
        c->base = make_cursor_of(n.base);
        return c;
    }

    static std::unique_ptr<CursorImpl> make_cursor_of(const RationalSeq& s);
};

inline std::unique_ptr<CursorImpl> make_cursor(std::shared_ptr<const RationalSeq::Node> node) {
    return std::visit(CursorBuilder{node}, node->v);
}

}  // namespace detail

inline RationalSeq::Cursor RationalSeq::cursor() const { return Cursor(detail::make_cursor(node_)); }

inline std::unique_ptr<detail::CursorImpl> detail::CursorBuilder::make_cursor_of(const RationalSeq& s) {
    return detail::make_cursor(s.node_ptr());
}

inline Rat RationalSeq::term(long n) const {
    if (n < 1) throw PreconditionError("sequence indices start at 1");
    auto c = cursor();
    Rat t;
    for (long i = 0; i < n; ++i) t = c.next();
    return t;
}

inline std::vector<Rat> RationalSeq::prefix(long n) const {
    if (n < 0) throw PreconditionError("prefix length must be >= 0");
    std::vector<Rat> out;
    out.reserve(static_cast<std::size_t>(n));
    auto c = cursor();
    for (long i = 0; i < n; ++i) out.push_back(c.next());
    return out;
}

// --- prefix-level averaging -----------------------------------------------------

// One averaging pass over explicit terms.
inline std::vector<Rat> cesaro_prefix_vec(const std::vector<Rat>& terms) {
    std::vector<Rat> out;
    out.reserve(terms.size());
    detail::CesaroAccum acc;
    for (const auto& t : terms) {
        acc.feed(t.get_num(), t.get_den());
        out.push_back(make_rat(acc.p, acc.q * acc.count));
    }
    return out;
}

// Terms 1..n of M^k a, exactly.
inline std::vector<Rat> cesaro_power_prefix(const RationalSeq& a, int k, long n) {
    if (k < 0) throw PreconditionError("averaging order must be >= 0");
    return a.cesaro(k).prefix(n);
}

inline std::vector<Rat> cesaro_prefix(const RationalSeq& a, long n) {
    return cesaro_power_prefix(a, 1, n);
}

// --- eventually-affine normal form ----------------------------------------------

// Normal form "explicit preperiod, then cyclic affine slots": subsumes the
// eventually periodic case (all slopes zero) and makes limits of a/n exactly
// decidable. Normalization is structural; rule-based sequences do not
// normalize.
struct AffineCycleForm {
    std::vector<Rat> pre;
    std::vector<std::pair<Rat, Rat>> cycle;

    Rat term(long n) const {
        long p = static_cast<long>(pre.size());
        if (n <= p) return pre[static_cast<std::size_t>(n - 1)];
        long r = (n - p - 1) % static_cast<long>(cycle.size());
        const auto& [c0, c1] = cycle[static_cast<std::size_t>(r)];
        return c0 + c1 * n;
    }
    Rat mean_slope() const {
        Rat s(0);
        for (const auto& [c0, c1] : cycle) s += c1;
        return s / Rat(static_cast<long>(cycle.size()));
    }
    bool all_slopes_zero() const {
        for (const auto& [c0, c1] : cycle)
            if (c1 != 0) return false;
        return true;
    }
};

namespace detail {

// Guard against pathological preperiod/cycle blowup during normalization.
constexpr long kAffineBudget = 1 << 16;

inline std::optional<AffineCycleForm> normalize_affine_node(
    const std::shared_ptr<const RationalSeq::Node>& node);

inline std::optional<AffineCycleForm> normalize_affine_of(const RationalSeq& s) {
    return normalize_affine_node(s.node_ptr());
}

inline long lcm_long(long a, long b) {
    Int l = lcm(Int(a), Int(b));
    if (!l.fits_slong_p()) throw Error("cycle length overflow");
    return l.get_si();
}

struct AffineNormalizer {
    using Out = std::optional<AffineCycleForm>;

    Out operator()(const ExplicitPrefixNode& n) const {
        if (!n.zero_tail) return std::nullopt;  // partial sequence: no total closed form
        AffineCycleForm f;
        f.pre = n.terms;
        f.cycle = {{Rat(0), Rat(0)}};
        return f;
    }
    Out operator()(const EventuallyPeriodicNode& n) const {
        AffineCycleForm f;
        f.pre = n.pre;
        f.cycle.reserve(n.period.size());
        for (const auto& c : n.period) f.cycle.emplace_back(c, Rat(0));
        return f;
    }
    Out operator()(const RuleNode&) const { return std::nullopt; }
    Out operator()(const AffineCycleNode& n) const { return AffineCycleForm{n.pre, n.cycle}; }
    Out operator()(const CesaroNode&) const { return std::nullopt; }
    Out operator()(const DivIndexNode&) const { return std::nullopt; }

    Out operator()(const ShiftNode& n) const {
        auto base = normalize_affine_of(n.base);
        if (!base) return std::nullopt;
        long L = static_cast<long>(base->cycle.size());
        AffineCycleForm f;
        if (n.m >= 0) {
            if (n.m + static_cast<long>(base->pre.size()) > kAffineBudget) return std::nullopt;
            f.pre.assign(static_cast<std::size_t>(n.m), Rat(0));
            f.pre.insert(f.pre.end(), base->pre.begin(), base->pre.end());
            f.cycle.reserve(base->cycle.size());
            for (const auto& [c0, c1] : base->cycle) f.cycle.emplace_back(c0 - c1 * n.m, c1);
            return f;
        }
        long d = -n.m;
        long p = static_cast<long>(base->pre.size());
        if (d <= p) {
            f.pre.assign(base->pre.begin() + d, base->pre.end());
            f.cycle.reserve(base->cycle.size());
            for (const auto& [c0, c1] : base->cycle) f.cycle.emplace_back(c0 + c1 * d, c1);
            return f;
        }
        long extra = (d - p) % L;
        f.cycle.resize(static_cast<std::size_t>(L));
        for (long j = 0; j < L; ++j) {
            const auto& [c0, c1] = base->cycle[static_cast<std::size_t>((j + extra) % L)];
            f.cycle[static_cast<std::size_t>(j)] = {c0 + c1 * d, c1};
        }
        return f;
    }

    Out operator()(const AbsNode& n) const {
        auto base = normalize_affine_of(n.base);
        if (!base) return std::nullopt;
        long L = static_cast<long>(base->cycle.size());
        long p = static_cast<long>(base->pre.size());
        // index from which each slot's sign is stable
        long stable = p;
        for (const auto& [c0, c1] : base->cycle) {
            if (c1 == 0) continue;
            // c0 + c1*n keeps the sign of c1 for n > -c0/c1
            Rat thr = -c0 / c1;
            Int fl;
            mpz_fdiv_q(fl.get_mpz_t(), thr.get_num().get_mpz_t(), thr.get_den().get_mpz_t());
            if (!fl.fits_slong_p()) return std::nullopt;
            stable = std::max(stable, fl.get_si() + 1);
        }
        long new_p = p;
        if (stable > p) new_p = p + ((stable - p + L - 1) / L) * L;  // keep cycle phase
        if (new_p > kAffineBudget) return std::nullopt;
        AffineCycleForm f;
        f.pre.reserve(static_cast<std::size_t>(new_p));
        for (long n1 = 1; n1 <= new_p; ++n1) f.pre.push_back(::abs(base->term(n1)));
        f.cycle.resize(static_cast<std::size_t>(L));
        for (long j = 0; j < L; ++j) {
            auto [c0, c1] = base->cycle[static_cast<std::size_t>(j)];
            int sgn;
            if (c1 != 0) sgn = c1 > 0 ? 1 : -1;
            else sgn = c0 >= 0 ? 1 : -1;
            f.cycle[static_cast<std::size_t>(j)] = {sgn > 0 ? c0 : -c0, sgn > 0 ? c1 : -c1};
        }
        return f;
    }

    Out operator()(const ScaleNode& n) const {
        auto base = normalize_affine_of(n.base);
        if (!base) return std::nullopt;
        for (auto& t : base->pre) t *= n.c;
        for (auto& [c0, c1] : base->cycle) {
            c0 *= n.c;
            c1 *= n.c;
        }
        return base;
    }

    Out operator()(const PlusNode& n) const {
        auto a = normalize_affine_of(n.a);
        if (!a) return std::nullopt;
        auto b = normalize_affine_of(n.b);
        if (!b) return std::nullopt;
        long La = static_cast<long>(a->cycle.size()), Lb = static_cast<long>(b->cycle.size());
        long L = lcm_long(La, Lb);
        long P = std::max(static_cast<long>(a->pre.size()), static_cast<long>(b->pre.size()));
        if (L > kAffineBudget || P > kAffineBudget) return std::nullopt;
        AffineCycleForm f;
        f.pre.reserve(static_cast<std::size_t>(P));
        for (long n1 = 1; n1 <= P; ++n1) f.pre.push_back(a->term(n1) + b->term(n1));
        f.cycle.resize(static_cast<std::size_t>(L));
        for (long j = 0; j < L; ++j) {
            // slot for index n = P + j + 1 (+ multiples of L)
            auto slot = [&](const AffineCycleForm& g) {
                long pg = static_cast<long>(g.pre.size());
                long Lg = static_cast<long>(g.cycle.size());
                long r = (P + j + 1 - pg - 1) % Lg;
                return g.cycle[static_cast<std::size_t>(r)];
            };
            auto [a0, a1] = slot(*a);
            auto [b0, b1] = slot(*b);
            f.cycle[static_cast<std::size_t>(j)] = {a0 + b0, a1 + b1};
        }
        return f;
    }

    Out operator()(const AltSignNode& n) const {
        auto base = normalize_affine_of(n.base);
        if (!base) return std::nullopt;
        long L = static_cast<long>(base->cycle.size());
        long P = static_cast<long>(base->pre.size());
        long L2 = lcm_long(L, 2);
        if (L2 > kAffineBudget) return std::nullopt;
        AffineCycleForm f;
        f.pre.reserve(static_cast<std::size_t>(P));
        for (long n1 = 1; n1 <= P; ++n1) {
            Rat t = base->pre[static_cast<std::size_t>(n1 - 1)];
            f.pre.push_back(n1 % 2 == 1 ? t : -t);
        }
        f.cycle.resize(static_cast<std::size_t>(L2));
        for (long j = 0; j < L2; ++j) {
            auto [c0, c1] = base->cycle[static_cast<std::size_t>(j % L)];
            // index n = P + j + 1 + m*L2; parity of n-1 = parity of P + j
            bool flip = ((P + j) % 2) != 0;
            f.cycle[static_cast<std::size_t>(j)] = {flip ? -c0 : c0, flip ? -c1 : c1};
        }
        return f;
    }
};

inline std::optional<AffineCycleForm> normalize_affine_node(
    const std::shared_ptr<const RationalSeq::Node>& node) {
    return std::visit(AffineNormalizer{}, node->v);
}

}  // namespace detail

inline std::optional<AffineCycleForm> normalize_affine(const RationalSeq& s) {
    return detail::normalize_affine_of(s);
}

// --- certified magnitude bounds ---------------------------------------------------

namespace detail {

// Sup bound on |a_n| when one is derivable from the construction: closed
// forms carry their own maxima, rule nodes may declare one, and every
// transform either preserves or arithmetically combines bounds. nullopt
// means "no bound known", never "unbounded".
inline std::optional<Rat> abs_bound_node(const std::shared_ptr<const RationalSeq::Node>& node);

inline std::optional<Rat> abs_bound_of(const RationalSeq& s) { return abs_bound_node(s.node_ptr()); }

struct AbsBoundVisitor {
    using Out = std::optional<Rat>;

    static Rat fold_max_abs(const std::vector<Rat>& v, Rat acc) {
        for (const auto& t : v) {
            Rat m = ::abs(t);
            if (m > acc) acc = m;
        }
        return acc;
    }

    Out operator()(const ExplicitPrefixNode& n) const {
        if (!n.zero_tail) return std::nullopt;  // partial sequence: tail unknown
        return fold_max_abs(n.terms, Rat(0));
    }
    Out operator()(const EventuallyPeriodicNode& n) const {
        return fold_max_abs(n.period, fold_max_abs(n.pre, Rat(0)));
    }
    Out operator()(const RuleNode& n) const { return n.abs_bound; }
    Out operator()(const AffineCycleNode& n) const {
        Rat acc(0);
        for (const auto& [c0, c1] : n.cycle) {
            if (c1 != 0) return std::nullopt;  // a nonzero slope is unbounded
            Rat m = ::abs(c0);
            if (m > acc) acc = m;
        }
        return fold_max_abs(n.pre, acc);
    }
    // Averages of terms in [-B, B] stay in [-B, B].
    Out operator()(const CesaroNode& n) const { return abs_bound_of(n.base); }
    // Shifting inserts zeros or drops a prefix; neither raises the sup.
    Out operator()(const ShiftNode& n) const { return abs_bound_of(n.base); }
    Out operator()(const AbsNode& n) const { return abs_bound_of(n.base); }
    Out operator()(const ScaleNode& n) const {
        auto b = abs_bound_of(n.base);
        if (!b) return std::nullopt;
        return Rat(*b * ::abs(n.c));
    }
    Out operator()(const PlusNode& n) const {
        auto a = abs_bound_of(n.a);
        if (!a) return std::nullopt;
        auto b = abs_bound_of(n.b);
        if (!b) return std::nullopt;
        return Rat(*a + *b);
    }
    // Indices are >= 1, so dividing by the index cannot raise the sup.
    Out operator()(const DivIndexNode& n) const { return abs_bound_of(n.base); }
    Out operator()(const AltSignNode& n) const { return abs_bound_of(n.base); }
};

inline std::optional<Rat> abs_bound_node(const std::shared_ptr<const RationalSeq::Node>& node) {
    return std::visit(AbsBoundVisitor{}, node->v);
}

}  // namespace detail

// Certified sup of |a_n| over all n, when derivable (see detail notes above).
inline std::optional<Rat> certified_abs_bound(const RationalSeq& s) {
    return detail::abs_bound_of(s);
}

// --- exact limits -----------------------------------------------------------------

namespace detail {

struct ExactLimit {
    bool divergent = false;  // certified: no iterate of the averaging converges
    Rat value;
    int k_used = 1;
};

// Closed-form H-limit of an eventually-affine sequence.
//
// Write the tail (past the preperiod of length P) as b_n = c0'_r + c1_r * n
// with c0'_r = c0_r + 0 (coefficients are stored against absolute index n, so
// no re-centering is needed) for slot r = (n - P - 1) mod L. If the slopes
// have nonzero mean the averages grow linearly and no iterate converges. If
// the mean slope is zero, one averaging pass approaches the periodic pattern
// K/L + W_s (s = slot of n) up to o(1), where K = sum_r c1_r * (r+1) computed
// against the phase "slot 0 sits at n = P+1" and W_s = sum_{r<s} c1_r; a
// second pass therefore converges to mean(c0) + (K + sum_s W_s) / L. The
// value is invariant under re-phasing, as finite modifications must not
// change it.
inline std::optional<ExactLimit> exact_limit_of_affine(const AffineCycleForm& f) {
    long L = static_cast<long>(f.cycle.size());
    long P = static_cast<long>(f.pre.size());
    Rat slope_sum(0), c0_sum(0);
    for (const auto& [c0, c1] : f.cycle) {
        slope_sum += c1;
        c0_sum += c0;
    }
    if (slope_sum != 0) {
        ExactLimit e;
        e.divergent = true;
        return e;
    }
    if (f.all_slopes_zero()) {
        ExactLimit e;
        e.value = c0_sum / Rat(L);
        e.k_used = 1;
        return e;
    }
    // The stored c0 are against absolute n; shift-invariance lets us analyze
    // the pure tail with slot r at n = P + r + 1: effective constant term is
    // c0_r + c1_r * 0 adjusted via absolute indices already, but K must use
    // the in-block position (r+1) plus the P-offset, whose contribution
    // cancels because the slopes have zero mean.
    Rat K(0), Wsum(0), W(0);
    for (long r = 0; r < L; ++r) {
        const auto& [c0, c1] = f.cycle[static_cast<std::size_t>(r)];
        K += c1 * Rat(r + 1 + P);
        W += c1;
        Wsum += W;
    }
    ExactLimit e;
    e.value = (c0_sum + K + Wsum) / Rat(L);
    e.k_used = 2;
    return e;
}

inline std::optional<ExactLimit> exact_h_limit_node(
    const std::shared_ptr<const RationalSeq::Node>& node);

inline std::optional<ExactLimit> exact_h_limit_of(const RationalSeq& s) {
    return exact_h_limit_node(s.node_ptr());
}

struct ExactLimitVisitor {
    const std::shared_ptr<const RationalSeq::Node>& node;
    using Out = std::optional<ExactLimit>;

    Out from_affine() const {
        if (auto f = normalize_affine_node(node)) return exact_limit_of_affine(*f);
        return std::nullopt;
    }

    Out operator()(const ExplicitPrefixNode&) const { return from_affine(); }
    Out operator()(const EventuallyPeriodicNode&) const { return from_affine(); }
    Out operator()(const AffineCycleNode&) const { return from_affine(); }
    Out operator()(const RuleNode&) const { return std::nullopt; }
    Out operator()(const AbsNode&) const { return from_affine(); }
    Out operator()(const AltSignNode&) const { return from_affine(); }

    Out operator()(const CesaroNode& n) const {
        // Averaging preserves the limit once it exists (and divergence of the
        // certified linear-growth kind).
        return exact_h_limit_of(n.base);
    }
    Out operator()(const ShiftNode& n) const {
        if (auto f = from_affine()) return f;
        return exact_h_limit_of(n.base);  // finite modification
    }
    Out operator()(const ScaleNode& n) const {
        if (n.c == 0) return ExactLimit{false, Rat(0), 1};
        auto b = exact_h_limit_of(n.base);
        if (!b) return std::nullopt;
        if (!b->divergent) b->value *= n.c;
        return b;
    }
    Out operator()(const PlusNode& n) const {
        if (auto f = from_affine()) return f;
        auto a = exact_h_limit_of(n.a);
        auto b = exact_h_limit_of(n.b);
        if (a && b && !a->divergent && !b->divergent)
            return ExactLimit{false, a->value + b->value, std::max(a->k_used, b->k_used)};
        if (a && b && (a->divergent != b->divergent)) {
            ExactLimit e;
            e.divergent = true;  // convergent + certified-divergent stays divergent
            return e;
        }
        return std::nullopt;
    }
    Out operator()(const DivIndexNode& n) const {
        // (c0 + c1*n)/n = c1 + c0/n: the 1/n part vanishes, the slopes form a
        // periodic sequence whose averages converge to the mean slope.
        if (auto f = normalize_affine_of(n.base)) return ExactLimit{false, f->mean_slope(), 1};
        auto b = exact_h_limit_of(n.base);
        if (b && !b->divergent) return ExactLimit{false, Rat(0), b->k_used};  // convergent/n -> 0
        return std::nullopt;
    }
};

inline std::optional<ExactLimit> exact_h_limit_node(
    const std::shared_ptr<const RationalSeq::Node>& node) {
    return std::visit(ExactLimitVisitor{node}, node->v);
}

}  // namespace detail

// --- h_limit ------------------------------------------------------------------------

enum class LimitStatus { exact, empirical, inconclusive };

inline std::string limit_status_string(LimitStatus s) {
    switch (s) {
        case LimitStatus::exact: return "exact";
        case LimitStatus::empirical: return "empirical";
        default: return "inconclusive";
    }
}

struct HLimitResult {
    LimitStatus status = LimitStatus::inconclusive;
    std::optional<Rat> value;
    int k_used = 0;
    long n_used = 0;
    long window = 0;
    std::optional<Rat> oscillation;  // tail-window max - min at the reported k
    std::vector<std::string> notes;

    bool has_value() const { return value.has_value(); }
};

namespace detail {

struct RawRat {  // den > 0, not necessarily reduced
    Int num, den;
};

struct WindowScan {
    bool any = false;
    RawRat mn, mx;

    void offer(const Int& num, const Int& den) {
        if (!any) {
            mn = RawRat{num, den};
            mx = mn;
            any = true;
            return;
        }
        if (num * mn.den < mn.num * den) mn = RawRat{num, den};
        else if (num * mx.den > mx.num * den) mx = RawRat{num, den};
    }
    Rat oscillation() const { return make_rat(mx.num * mn.den - mn.num * mx.den, mx.den * mn.den); }
    Rat midpoint() const { return make_rat(mx.num * mn.den + mn.num * mx.den, 2 * mx.den * mn.den); }
};

// Stream M^k a over 1..n_max, scanning the last `width` terms.
inline WindowScan ladder_pass(const RationalSeq& a, int k, long n_max, long width) {
    auto cur = a.cursor();
    std::vector<CesaroAccum> stages(static_cast<std::size_t>(k));
    WindowScan scan;
    long lo = n_max - width + 1;
    Int denbuf;
    for (long i = 1; i <= n_max; ++i) {
        Rat t = cur.next();
        stages[0].feed(t.get_num(), t.get_den());
        for (std::size_t s = 1; s < stages.size(); ++s) {
            denbuf = stages[s - 1].q * stages[s - 1].count;
            stages[s].feed(stages[s - 1].p, denbuf);
        }
        if (i >= lo) {
            denbuf = stages.back().q * stages.back().count;
            scan.offer(stages.back().p, denbuf);
        }
    }
    return scan;
}

}  // namespace detail

// Exact branch when the sequence has eventually-periodic/affine structure
// (including under shift/scale/sum/abs/sign/averaging transforms); otherwise
// an empirical ladder: for k = 1..k_max stream M^k a to n_max and accept when
// the last-window oscillation is within tol, reporting the window midpoint.
inline HLimitResult h_limit(const RationalSeq& a, const SummabilityConfig& cfg = {}) {
    cfg.validate();
    HLimitResult res;
    if (auto ex = detail::exact_h_limit_of(a)) {
        if (ex->divergent) {
            res.status = LimitStatus::inconclusive;
            res.k_used = cfg.k_max;
            res.notes.push_back(
                "certified divergent: terms grow linearly with nonzero mean slope, so no "
                "averaging iterate converges");
            return res;
        }
        res.status = LimitStatus::exact;
        res.value = ex->value;
        res.k_used = ex->k_used;
        res.n_used = 0;
        res.notes.push_back("closed form from eventually-periodic/affine structure");
        return res;
    }
    long width = cfg.window_width();
    for (int k = 1; k <= cfg.k_max; ++k) {
        auto scan = detail::ladder_pass(a, k, cfg.n_max, width);
        Rat osc = scan.oscillation();
        if (osc <= cfg.tol) {
            res.status = LimitStatus::empirical;
            res.value = scan.midpoint();
            res.k_used = k;
            res.n_used = cfg.n_max;
            res.window = width;
            res.oscillation = osc;
            return res;
        }
        res.oscillation = osc;  // keep the last k's diagnostics
        res.k_used = k;
    }
    res.status = LimitStatus::inconclusive;
    res.n_used = cfg.n_max;
    res.window = width;
    res.notes.push_back("tail-window oscillation stayed above tolerance for every k tried");
    return res;
}

// --- is_h_o_n ------------------------------------------------------------------------

struct HNullVerdict {
    Tri verdict = Tri::unknown;
    LimitStatus certificate = LimitStatus::inconclusive;  // exact/empirical evidence kind
    std::optional<Rat> limit;                             // H-limit of (tested)/n when known
    std::string detail;
};

// Decides whether a (or |a|) grows slower than n in the averaged sense, i.e.
// whether (tested)/n is H-null. Exact verdicts come from eventually-affine
// structure (the limit of (tested)/n is the mean slope); empirically only a
// "yes" can be certified, never a "no".
inline HNullVerdict is_h_o_n(const RationalSeq& a, bool absolute,
                             const SummabilityConfig& cfg = {}) {
    cfg.validate();
    RationalSeq tested = absolute ? a.abs() : a;
    HNullVerdict v;
    if (auto f = normalize_affine(tested)) {
        Rat m = f->mean_slope();
        v.verdict = (m == 0) ? Tri::yes : Tri::no;
        v.certificate = LimitStatus::exact;
        v.limit = m;
        v.detail = "eventually-affine structure: (tested)/n has exact limit " + rat_string(m);
        return v;
    }
    if (auto bound = detail::abs_bound_of(tested)) {
        v.verdict = Tri::yes;
        v.certificate = LimitStatus::exact;
        v.limit = Rat(0);
        v.detail = "terms are bounded in magnitude by " + rat_string(*bound) +
                   ", so the index-scaled sequence vanishes";
        return v;
    }
    RationalSeq t = tested.div_by_index();
    HLimitResult r = h_limit(t, cfg);
    switch (r.status) {
        case LimitStatus::exact:
            v.verdict = (*r.value == 0) ? Tri::yes : Tri::no;
            v.certificate = LimitStatus::exact;
            v.limit = r.value;
            v.detail = "exact limit of (tested)/n is " + rat_string(*r.value);
            return v;
        case LimitStatus::empirical: {
            Rat mag = ::abs(*r.value);
            if (mag <= cfg.tol) {
                v.verdict = Tri::yes;
                v.certificate = LimitStatus::empirical;
                v.limit = r.value;
                v.detail = "empirical limit of (tested)/n within tolerance of 0 (k=" +
                           std::to_string(r.k_used) + ")";
            } else {
                v.verdict = Tri::unknown;
                v.certificate = LimitStatus::empirical;
                v.limit = r.value;
                v.detail = "empirical limit of (tested)/n is nonzero (" + decimal_string(*r.value) +
                           "); only exact evidence can refute";
            }
            return v;
        }
        default:
            v.verdict = Tri::unknown;
            v.certificate = LimitStatus::inconclusive;
            v.detail = "no convergence detected for (tested)/n";
            return v;
    }
}

// --- builtin rule table ---------------------------------------------------------------

// Named constructors usable from serialized inputs.
inline RationalSeq make_rule_seq(const std::string& id, const std::map<std::string, Rat>& params = {}) {
    if (id == "alt_ceil_half") {
        // a_n = (-1)^(n-1) * ceil(n/2)
        return RationalSeq::rule(id, [](long n) {
            Rat v((n + 1) / 2);
            return n % 2 == 1 ? v : -v;
        });
    }
    if (id == "alt_sign_const") {
        Rat c(1);
        if (auto it = params.find("c"); it != params.end()) c = it->second;
        return RationalSeq::eventually_periodic({}, {c, -c});
    }
    throw ParseError("unknown rule id '" + id + "'");
}

// Structural equality of the eventually-affine closures of two sequences,
// when both normalize. Two affine slots agree as functions iff they agree at
// two indices one cycle apart, so comparing a long enough prefix decides it.
inline std::optional<bool> eventually_equal(const RationalSeq& a, const RationalSeq& b) {
    auto fa = normalize_affine(a), fb = normalize_affine(b);
    if (!fa || !fb) return std::nullopt;
    long L = detail::lcm_long(static_cast<long>(fa->cycle.size()),
                              static_cast<long>(fb->cycle.size()));
    long P = std::max(fa->pre.size(), fb->pre.size());
    // Terms before max(pre) are allowed to differ. Two aligned affine cycles
    // agreeing on 2L consecutive slots agree everywhere beyond them.
    for (long n = P + 1; n <= P + 2 * L; ++n)
        if (fa->term(n) != fb->term(n)) return false;
    return true;
}

}  // namespace hoelder
