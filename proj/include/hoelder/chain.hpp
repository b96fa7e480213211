#pragma once

// Non-negatively graded chain complexes of free finite-rank integer modules.
// Three representations:
//   - Explicit: finitely many degrees, dense boundary matrices, zero above.
//   - PeriodicPattern: a finite preperiod block followed by a repeating block
//     glued head-to-tail forever (seam matrices included).
//   - HomologyOnly: just the homology rank sequence (possibly rule-based and
//     infinite), for complexes known only through their homology; carries a
//     zero-differential marker when chain ranks coincide with homology ranks.
//
// Degree/index convention used throughout: sequence index n >= 1 refers to
// degree n-1 and signed sequences carry the sign (-1)^(n-1), i.e. even
// degrees contribute with +, odd degrees with -.

#include <hoelder/linalg.hpp>
#include <hoelder/seq.hpp>

#include <algorithm>
#include <numeric>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace hoelder {

// A contiguous block of degrees: ranks r_0..r_N and the boundary maps inside
// the block (boundaries[i] is the map out of degree i+1 into degree i).
struct ExplicitBlock {
    std::vector<long> ranks;
    std::vector<IntMatrix> boundaries;

    long degrees() const { return static_cast<long>(ranks.size()); }
};

class ChainComplex {
  public:
    struct ExplicitData {
        ExplicitBlock body;
    };
    struct PeriodicData {
        ExplicitBlock preperiod;  // may cover zero degrees
        ExplicitBlock repeat;     // covers >= 1 degree per copy
        // map out of the first repeat degree of copy 1 into the last
        // preperiod degree (rows = 0 when the preperiod is empty)
        IntMatrix seam_from_preperiod;
        // map out of the first repeat degree of copy k+1 into the last degree
        // of copy k
        IntMatrix seam_wrap;
    };
    struct HomologyOnlyData {
        RationalSeq hranks;             // unsigned: term n = rank H_{n-1}
        bool zero_differentials = false;  // chain ranks equal homology ranks
    };

    using Storage = std::variant<ExplicitData, PeriodicData, HomologyOnlyData>;

    static ChainComplex explicit_complex(std::vector<long> ranks,
                                         std::vector<IntMatrix> boundaries) {
        ExplicitData d{ExplicitBlock{std::move(ranks), std::move(boundaries)}};
        return ChainComplex(Storage{std::move(d)});
    }
    static ChainComplex zero_complex() { return explicit_complex({}, {}); }

    static ChainComplex periodic(ExplicitBlock preperiod, ExplicitBlock repeat,
                                 IntMatrix seam_from_preperiod, IntMatrix seam_wrap) {
        PeriodicData d{std::move(preperiod), std::move(repeat), std::move(seam_from_preperiod),
                       std::move(seam_wrap)};
        return ChainComplex(Storage{std::move(d)});
    }

    static ChainComplex homology_only(RationalSeq hranks, bool zero_differentials = false) {
        return ChainComplex(Storage{HomologyOnlyData{std::move(hranks), zero_differentials}});
    }

    bool is_explicit() const { return std::holds_alternative<ExplicitData>(st_); }
    bool is_periodic() const { return std::holds_alternative<PeriodicData>(st_); }
    bool is_homology_only() const { return std::holds_alternative<HomologyOnlyData>(st_); }

    const ExplicitData& as_explicit() const { return std::get<ExplicitData>(st_); }
    const PeriodicData& as_periodic() const { return std::get<PeriodicData>(st_); }
    const HomologyOnlyData& as_homology_only() const { return std::get<HomologyOnlyData>(st_); }

    // Chain rank of degree d (not available for HomologyOnly without the
    // zero-differential marker).
    long rank_at(long d) const {
        if (d < 0) return 0;
        if (const auto* e = std::get_if<ExplicitData>(&st_)) {
            return d < e->body.degrees() ? e->body.ranks[static_cast<std::size_t>(d)] : 0;
        }
        if (const auto* p = std::get_if<PeriodicData>(&st_)) {
            long pre = p->preperiod.degrees();
            if (d < pre) return p->preperiod.ranks[static_cast<std::size_t>(d)];
            long j = (d - pre) % p->repeat.degrees();
            return p->repeat.ranks[static_cast<std::size_t>(j)];
        }
        const auto& h = std::get<HomologyOnlyData>(st_);
        if (!h.zero_differentials)
            throw PreconditionError("chain ranks are not determined by homology ranks alone");
        Rat t = h.hranks.term(d + 1);
        if (t.get_den() != 1 || t < 0)
            throw PreconditionError("homology rank sequence must have non-negative integer terms");
        return static_cast<long>(t.get_num().get_si());
    }

    // Boundary map out of degree d (d >= 1). Maps above the top degree of an
    // Explicit complex are the appropriately shaped zero matrices.
    IntMatrix boundary_at(long d) const {
        if (d < 1) throw PreconditionError("boundary maps start at degree 1");
        if (const auto* e = std::get_if<ExplicitData>(&st_)) {
            long n = e->body.degrees();
            if (d < n) return e->body.boundaries[static_cast<std::size_t>(d - 1)];
            return IntMatrix(rank_at(d - 1), rank_at(d));
        }
        if (const auto* p = std::get_if<PeriodicData>(&st_)) {
            long pre = p->preperiod.degrees();
            if (d < pre) return p->preperiod.boundaries[static_cast<std::size_t>(d - 1)];
            long per = p->repeat.degrees();
            long j = (d - pre) % per;
            if (j != 0) return p->repeat.boundaries[static_cast<std::size_t>(j - 1)];
            return d == pre ? p->seam_from_preperiod : p->seam_wrap;
        }
        const auto& h = std::get<HomologyOnlyData>(st_);
        if (!h.zero_differentials)
            throw PreconditionError("boundary maps are not available for homology-only data");
        return IntMatrix(rank_at(d - 1), rank_at(d));
    }

    // True when every boundary map is known to vanish.
    bool zero_differentials() const {
        if (const auto* e = std::get_if<ExplicitData>(&st_)) {
            for (const auto& b : e->body.boundaries)
                if (!b.is_zero()) return false;
            return true;
        }
        if (const auto* p = std::get_if<PeriodicData>(&st_)) {
            for (const auto& b : p->preperiod.boundaries)
                if (!b.is_zero()) return false;
            for (const auto& b : p->repeat.boundaries)
                if (!b.is_zero()) return false;
            return p->seam_from_preperiod.is_zero() && p->seam_wrap.is_zero();
        }
        return std::get<HomologyOnlyData>(st_).zero_differentials;
    }

  private:
    explicit ChainComplex(Storage st) : st_(std::move(st)) {}
    Storage st_;
};

struct ValidationReport {
    bool valid = true;
    std::string detail;  // first failing check, empty when valid
};

namespace detail {

inline std::optional<std::string> validate_block_shapes(const ExplicitBlock& b,
                                                        const std::string& what) {
    for (long r : b.ranks)
        if (r < 0) return what + ": negative rank";
    if (b.ranks.empty()) {
        if (!b.boundaries.empty()) return what + ": boundaries without degrees";
        return std::nullopt;
    }
    if (b.boundaries.size() + 1 != b.ranks.size())
        return what + ": expected one boundary map per adjacent degree pair";
    for (std::size_t i = 0; i < b.boundaries.size(); ++i) {
        const IntMatrix& m = b.boundaries[i];
        if (m.rows != b.ranks[i] || m.cols != b.ranks[i + 1])
            return what + ": boundary out of degree " + std::to_string(i + 1) +
                   " has shape " + std::to_string(m.rows) + "x" + std::to_string(m.cols) +
                   ", expected " + std::to_string(b.ranks[i]) + "x" +
                   std::to_string(b.ranks[i + 1]);
    }
    return std::nullopt;
}

// Degrees checked for HomologyOnly rank sanity (infinite tails cannot be
// checked exhaustively).
inline constexpr long kHomologyOnlyCheckPrefix = 128;

}  // namespace detail

// Materialized ranks and boundaries of degrees 0..top (inclusive), plus the
// boundary map out of degree top+1, so homology at `top` is computable.
inline ExplicitBlock materialize(const ChainComplex& c, long top) {
    if (top < -1) throw PreconditionError("materialize: negative degree bound");
    ExplicitBlock out;
    for (long d = 0; d <= top; ++d) out.ranks.push_back(c.rank_at(d));
    for (long d = 1; d <= top; ++d) out.boundaries.push_back(c.boundary_at(d));
    return out;
}

inline ValidationReport validate(const ChainComplex& c) {
    if (c.is_homology_only()) {
        const auto& h = c.as_homology_only().hranks;
        for (long n = 1; n <= detail::kHomologyOnlyCheckPrefix; ++n) {
            Rat t = h.term(n);
            if (t.get_den() != 1 || t < 0)
                return {false, "homology rank at degree " + std::to_string(n - 1) +
                                   " is not a non-negative integer"};
        }
        return {true, {}};
    }

    if (c.is_explicit()) {
        const auto& body = c.as_explicit().body;
        if (auto err = detail::validate_block_shapes(body, "explicit block"))
            return {false, *err};
        for (std::size_t i = 0; i + 1 < body.boundaries.size(); ++i) {
            if (!matmul(body.boundaries[i], body.boundaries[i + 1]).is_zero())
                return {false, "boundary composition out of degree " + std::to_string(i + 2) +
                                   " is nonzero"};
        }
        return {true, {}};
    }

    const auto& p = c.as_periodic();
    if (p.repeat.degrees() == 0) return {false, "repeat block covers no degrees"};
    if (auto err = detail::validate_block_shapes(p.preperiod, "preperiod block"))
        return {false, *err};
    if (auto err = detail::validate_block_shapes(p.repeat, "repeat block"))
        return {false, *err};
    long pre = p.preperiod.degrees();
    long per = p.repeat.degrees();
    long pre_tail_rank = pre > 0 ? p.preperiod.ranks[static_cast<std::size_t>(pre - 1)] : 0;
    long rep_head_rank = p.repeat.ranks.front();
    long rep_tail_rank = p.repeat.ranks.back();
    if (p.seam_from_preperiod.rows != pre_tail_rank ||
        p.seam_from_preperiod.cols != rep_head_rank)
        return {false, "preperiod seam matrix has mismatched shape"};
    if (p.seam_wrap.rows != rep_tail_rank || p.seam_wrap.cols != rep_head_rank)
        return {false, "wrap seam matrix has mismatched shape"};

    // Composite check over a window covering every distinct adjacent pair:
    // the preperiod plus two full repeats sees each seam in context.
    long top = pre + 2 * per;
    for (long d = 1; d < top; ++d) {
        IntMatrix lo = c.boundary_at(d);
        IntMatrix hi = c.boundary_at(d + 1);
        if (lo.cols != hi.rows)
            return {false, "adjacent boundary maps at degree " + std::to_string(d) +
                               " have incompatible shapes"};
        if (!matmul(lo, hi).is_zero())
            return {false,
                    "boundary composition out of degree " + std::to_string(d + 1) + " is nonzero"};
    }
    return {true, {}};
}

// rank H_d(C) over the rationals: (r_d - rank dC_d) - rank dC_{d+1}.
inline long homology_rank(const ChainComplex& c, long d) {
    if (d < 0) throw PreconditionError("homology degrees start at 0");
    if (c.is_homology_only()) {
        Rat t = c.as_homology_only().hranks.term(d + 1);
        if (t.get_den() != 1 || t < 0)
            throw PreconditionError("homology rank sequence must have non-negative integer terms");
        return static_cast<long>(t.get_num().get_si());
    }
    long cycles = c.rank_at(d) - (d == 0 ? 0 : rank_q(c.boundary_at(d)));
    long boundaries = rank_q(c.boundary_at(d + 1));
    return cycles - boundaries;
}

// The three signed rank sequences. hc is always present; bc/rc require chain
// data (or the zero-differential marker, which pins bc = 0 and rc = |hc|).
struct RankSeqBundle {
    RationalSeq hc;
    std::optional<RationalSeq> bc;
    std::optional<RationalSeq> rc;
};

namespace detail {

inline Rat signed_term(long degree, long magnitude) {
    return degree % 2 == 0 ? Rat(magnitude) : Rat(-magnitude);
}

// Build a signed eventually-periodic sequence from unsigned per-degree values
// val(0), val(1), ...: preperiod covers degrees [0, pre_len), the unsigned
// values repeat with period `per` beyond that. When `per` is odd the signs
// alternate between consecutive copies, so the signed period doubles.
template <typename F>
RationalSeq signed_ep_from_degrees(F&& val, long pre_len, long per) {
    std::vector<Rat> pre;
    pre.reserve(static_cast<std::size_t>(pre_len));
    for (long d = 0; d < pre_len; ++d) pre.push_back(signed_term(d, val(d)));
    long span = per % 2 == 0 ? per : 2 * per;
    std::vector<Rat> cyc;
    cyc.reserve(static_cast<std::size_t>(span));
    for (long j = 0; j < span; ++j) {
        long d = pre_len + j;
        cyc.push_back(signed_term(d, val(pre_len + (j % per))));
    }
    return RationalSeq::eventually_periodic(std::move(pre), std::move(cyc));
}

}  // namespace detail

inline RankSeqBundle rank_bundle(const ChainComplex& c) {
    if (c.is_homology_only()) {
        const auto& h = c.as_homology_only();
        RankSeqBundle out{h.hranks.alt_sign(), std::nullopt, std::nullopt};
        if (h.zero_differentials) {
            out.bc = RationalSeq::zero();
            out.rc = out.hc;  // zero differentials: chain ranks equal homology ranks
        }
        return out;
    }

    if (c.is_explicit()) {
        const long n = c.as_explicit().body.degrees();
        std::vector<Rat> h, b, r;
        for (long d = 0; d < n; ++d) {
            h.push_back(detail::signed_term(d, homology_rank(c, d)));
            r.push_back(detail::signed_term(d, c.rank_at(d)));
            if (d + 1 < n) b.push_back(detail::signed_term(d, rank_q(c.boundary_at(d + 1))));
        }
        return RankSeqBundle{RationalSeq::explicit_prefix(std::move(h), true),
                             RationalSeq::explicit_prefix(std::move(b), true),
                             RationalSeq::explicit_prefix(std::move(r), true)};
    }

    const auto& p = c.as_periodic();
    const long pre = p.preperiod.degrees();
    const long per = p.repeat.degrees();
    // Unsigned values over the preperiod, the first copy (whose homology can
    // still see the preperiod), and two more copies to confirm periodicity.
    const long span = pre + 3 * per;
    std::vector<long> h(static_cast<std::size_t>(span));
    std::vector<long> b(static_cast<std::size_t>(span));
    std::vector<long> r(static_cast<std::size_t>(span));
    for (long d = 0; d < span; ++d) {
        h[static_cast<std::size_t>(d)] = homology_rank(c, d);
        b[static_cast<std::size_t>(d)] = rank_q(c.boundary_at(d + 1));
        r[static_cast<std::size_t>(d)] = c.rank_at(d);
    }
    for (long j = 0; j < per; ++j) {
        bool ok = h[static_cast<std::size_t>(pre + per + j)] ==
                      h[static_cast<std::size_t>(pre + 2 * per + j)] &&
                  b[static_cast<std::size_t>(pre + per + j)] ==
                      b[static_cast<std::size_t>(pre + 2 * per + j)] &&
                  r[static_cast<std::size_t>(pre + per + j)] ==
                      r[static_cast<std::size_t>(pre + 2 * per + j)];
        if (!ok)
            throw InternalError("rank data failed to repeat with the declared period");
    }
    const long pre_len = pre + per;
    auto at = [pre_len, per](const std::vector<long>& v, long d) {
        if (d < pre_len) return v[static_cast<std::size_t>(d)];
        return v[static_cast<std::size_t>(pre_len + (d - pre_len) % per)];
    };
    return RankSeqBundle{
        detail::signed_ep_from_degrees([&](long d) { return at(h, d); }, pre_len, per),
        detail::signed_ep_from_degrees([&](long d) { return at(b, d); }, pre_len, per),
        detail::signed_ep_from_degrees([&](long d) { return at(r, d); }, pre_len, per)};
}

// Unsigned homology rank sequence (term n = rank H_{n-1}).
inline RationalSeq unsigned_hranks(const ChainComplex& c) {
    if (c.is_homology_only()) return c.as_homology_only().hranks;
    return rank_bundle(c).hc.alt_sign();  // alt_sign is an involution
}

namespace detail {

inline ExplicitBlock shift_block(const ExplicitBlock& b, long m) {
    ExplicitBlock out;
    out.ranks.assign(static_cast<std::size_t>(m), 0);
    out.ranks.insert(out.ranks.end(), b.ranks.begin(), b.ranks.end());
    long total = static_cast<long>(out.ranks.size());
    for (long d = 1; d < total; ++d) {
        if (d <= m) {
            out.boundaries.emplace_back(out.ranks[static_cast<std::size_t>(d - 1)],
                                        out.ranks[static_cast<std::size_t>(d)]);
        } else {
            out.boundaries.push_back(b.boundaries[static_cast<std::size_t>(d - m - 1)]);
        }
    }
    return out;
}

inline IntMatrix block_diag(const IntMatrix& a, const IntMatrix& b) {
    IntMatrix out(a.rows + b.rows, a.cols + b.cols);
    for (long i = 0; i < a.rows; ++i)
        for (long j = 0; j < a.cols; ++j) out(i, j) = a(i, j);
    for (long i = 0; i < b.rows; ++i)
        for (long j = 0; j < b.cols; ++j) out(a.rows + i, a.cols + j) = b(i, j);
    return out;
}

// Degree beyond which ranks and boundary maps repeat with the stated period.
// Explicit complexes are eventually zero: period 1 beyond their top degree.
inline long periodic_from(const ChainComplex& c) {
    if (c.is_periodic()) return c.as_periodic().preperiod.degrees() + 1;
    return c.as_explicit().body.degrees() + 1;
}

inline long period_length(const ChainComplex& c) {
    return c.is_periodic() ? c.as_periodic().repeat.degrees() : 1;
}

}  // namespace detail

// Suspension: degrees move up by m, padding the bottom with zeros.
inline ChainComplex shift_complex(const ChainComplex& c, long m) {
    if (m < 0) throw PreconditionError("negative shifts would create negative degrees");
    if (m == 0) return c;
    if (c.is_homology_only()) {
        const auto& h = c.as_homology_only();
        return ChainComplex::homology_only(h.hranks.shifted(m), h.zero_differentials);
    }
    if (c.is_explicit()) {
        auto blk = detail::shift_block(c.as_explicit().body, m);
        return ChainComplex::explicit_complex(std::move(blk.ranks), std::move(blk.boundaries));
    }
    const auto& p = c.as_periodic();
    ExplicitBlock pre = detail::shift_block(p.preperiod, m);
    IntMatrix seam_pre = p.seam_from_preperiod;
    if (p.preperiod.degrees() == 0) {
        // the old seam out of the first repeat copy now lands in a zero degree
        seam_pre = IntMatrix(0, p.repeat.ranks.front());
    }
    return ChainComplex::periodic(std::move(pre), p.repeat, std::move(seam_pre), p.seam_wrap);
}

// Degreewise direct sum with block-diagonal boundary maps.
inline ChainComplex direct_sum(const ChainComplex& a, const ChainComplex& b) {
    if (a.is_homology_only() || b.is_homology_only()) {
        RationalSeq ha = unsigned_hranks(a);
        RationalSeq hb = unsigned_hranks(b);
        return ChainComplex::homology_only(ha.plus(hb),
                                           a.zero_differentials() && b.zero_differentials());
    }

    if (a.is_explicit() && b.is_explicit()) {
        long top = std::max(a.as_explicit().body.degrees(), b.as_explicit().body.degrees());
        std::vector<long> ranks;
        std::vector<IntMatrix> bnd;
        for (long d = 0; d < top; ++d) {
            ranks.push_back(a.rank_at(d) + b.rank_at(d));
            if (d >= 1) bnd.push_back(detail::block_diag(a.boundary_at(d), b.boundary_at(d)));
        }
        return ChainComplex::explicit_complex(std::move(ranks), std::move(bnd));
    }

    // At least one periodic side: both ranks and boundaries repeat beyond a
    // common point, so the sum does too.
    long L = std::lcm(detail::period_length(a), detail::period_length(b));
    long P = std::max(detail::periodic_from(a), detail::periodic_from(b));
    auto rank_sum = [&](long d) { return a.rank_at(d) + b.rank_at(d); };
    auto bnd_sum = [&](long d) { return detail::block_diag(a.boundary_at(d), b.boundary_at(d)); };

    ExplicitBlock pre;
    for (long d = 0; d < P; ++d) pre.ranks.push_back(rank_sum(d));
    for (long d = 1; d < P; ++d) pre.boundaries.push_back(bnd_sum(d));
    ExplicitBlock rep;
    for (long d = P; d < P + L; ++d) rep.ranks.push_back(rank_sum(d));
    for (long d = P + 1; d < P + L; ++d) rep.boundaries.push_back(bnd_sum(d));
    return ChainComplex::periodic(std::move(pre), std::move(rep), bnd_sum(P), bnd_sum(P + L));
}

// Keep degrees 0..n-1, zero everything above.
inline ChainComplex truncate_below(const ChainComplex& c, long n) {
    if (n < 0) throw PreconditionError("truncation bound must be non-negative");
    if (c.is_homology_only() && !c.as_homology_only().zero_differentials)
        throw PreconditionError("truncation requires chain-level data");
    std::vector<long> ranks;
    std::vector<IntMatrix> bnd;
    for (long d = 0; d < n; ++d) {
        ranks.push_back(c.rank_at(d));
        if (d >= 1) bnd.push_back(c.boundary_at(d));
    }
    return ChainComplex::explicit_complex(std::move(ranks), std::move(bnd));
}

}  // namespace hoelder
