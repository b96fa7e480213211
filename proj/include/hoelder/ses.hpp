#pragma once

// Short exact sequences 0 -> A -f-> B -g-> C -> 0 of explicit chain
// complexes, validated exactly at the integer-lattice level, together with:
//   - the connecting-map rank sequence (signed, like the homology sequence);
//   - weak/strong admissibility of the sequence;
//   - the unconditional averaged identity
//       (M hA)_n - (M hB)_n + (M hC)_n = delta_n / n,  exactly, per n;
//   - the alternating-sum law for the averaged characteristic;
//   - the two-out-of-three admissibility transfer with its termwise identity;
//   - mapping-cone constructors used to generate valid sequences in bulk.

#include <hoelder/euler.hpp>

#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace hoelder {

struct SesSpec {
    ChainComplex a;            // subcomplex
    ChainComplex b;            // total complex
    ChainComplex c;            // quotient complex
    std::vector<IntMatrix> f;  // degreewise maps A_d -> B_d, d = 0..N-1
    std::vector<IntMatrix> g;  // degreewise maps B_d -> C_d, d = 0..N-1

    // Common degree count: members are zero-extended up to this.
    long degree_count() const {
        long n = 0;
        for (const ChainComplex* x : {&a, &b, &c})
            if (x->is_explicit()) n = std::max(n, x->as_explicit().body.degrees());
        return n;
    }
};

inline ValidationReport validate_ses(const SesSpec& s) {
    if (!s.a.is_explicit() || !s.b.is_explicit() || !s.c.is_explicit())
        return {false, "sequence members must be explicit complexes"};
    {
        ValidationReport va = validate(s.a);
        if (!va.valid) return {false, "first member invalid: " + va.detail};
        ValidationReport vb = validate(s.b);
        if (!vb.valid) return {false, "middle member invalid: " + vb.detail};
        ValidationReport vc = validate(s.c);
        if (!vc.valid) return {false, "last member invalid: " + vc.detail};
    }
    long n = s.degree_count();
    if (static_cast<long>(s.f.size()) != n || static_cast<long>(s.g.size()) != n)
        return {false, "expected one map per degree 0.." + std::to_string(n - 1) +
                           " on both sides, got " + std::to_string(s.f.size()) + " and " +
                           std::to_string(s.g.size())};

    for (long d = 0; d < n; ++d) {
        const IntMatrix& fd = s.f[static_cast<std::size_t>(d)];
        const IntMatrix& gd = s.g[static_cast<std::size_t>(d)];
        std::string at = "degree " + std::to_string(d) + ": ";
        if (fd.rows != s.b.rank_at(d) || fd.cols != s.a.rank_at(d))
            return {false, at + "injection map has the wrong shape"};
        if (gd.rows != s.c.rank_at(d) || gd.cols != s.b.rank_at(d))
            return {false, at + "projection map has the wrong shape"};
    }
    for (long d = 1; d < n; ++d) {
        std::string at = "degree " + std::to_string(d) + ": ";
        if (matmul(s.b.boundary_at(d), s.f[static_cast<std::size_t>(d)]) !=
            matmul(s.f[static_cast<std::size_t>(d - 1)], s.a.boundary_at(d)))
            return {false, at + "injection does not commute with the boundary maps"};
        if (matmul(s.c.boundary_at(d), s.g[static_cast<std::size_t>(d)]) !=
            matmul(s.g[static_cast<std::size_t>(d - 1)], s.b.boundary_at(d)))
            return {false, at + "projection does not commute with the boundary maps"};
    }
    for (long d = 0; d < n; ++d) {
        const IntMatrix& fd = s.f[static_cast<std::size_t>(d)];
        const IntMatrix& gd = s.g[static_cast<std::size_t>(d)];
        std::string at = "degree " + std::to_string(d) + ": ";
        if (!kernel_lattice(fd).is_zero()) return {false, at + "injection has a nonzero kernel"};
        if (!image_lattice(gd).is_full())
            return {false, at + "projection is not surjective onto the full lattice"};
        if (!lattice_eq(image_lattice(fd), kernel_lattice(gd)))
            return {false, at + "image of the injection differs from the kernel of the "
                                "projection"};
    }
    return {true, {}};
}

// Rank of the map induced on degree-d homology (over the rationals) by the
// degreewise entry fd: X_d -> Y_d of a chain map: push a cycle basis through
// fd and count how much rank it adds over the boundaries of Y.
inline long induced_homology_rank(const ChainComplex& x, const ChainComplex& y,
                                  const IntMatrix& fd, long d) {
    if (d < 0) throw PreconditionError("homology degrees start at 0");
    IntMatrix kx = d == 0 ? IntMatrix::identity(x.rank_at(0))
                          : kernel_lattice(x.boundary_at(d)).basis_matrix();
    IntMatrix pushed = matmul(fd, kx);
    IntMatrix by = y.boundary_at(d + 1);
    return rank_q(hstack(pushed, by)) - rank_q(by);
}

// Signed connecting-map rank sequence: term n carries rank im delta_n with
// sign (-1)^(n-1), where delta_n goes from degree-n homology of the quotient
// to degree-(n-1) homology of the subcomplex.
struct DeltaSeq {
    RationalSeq seq;
    std::vector<long> ranks;  // unsigned, index i = rank im delta_(i+1)
};

inline DeltaSeq delta_seq(const SesSpec& s) {
    long n = s.degree_count();
    std::vector<long> ranks;
    std::vector<Rat> terms;
    for (long k = 1; k <= n + 1; ++k) {
        long d = k - 1;  // delta_k lands in degree d homology of the subcomplex
        IntMatrix fd = d < n ? s.f[static_cast<std::size_t>(d)]
                             : IntMatrix(s.b.rank_at(d), s.a.rank_at(d));
        long r = homology_rank(s.a, d) - induced_homology_rank(s.a, s.b, fd, d);
        ranks.push_back(r);
        terms.push_back(k % 2 == 1 ? Rat(r) : Rat(-r));
    }
    return DeltaSeq{RationalSeq::explicit_prefix(std::move(terms), true), std::move(ranks)};
}

struct SesAdmissibility {
    Tri weak = Tri::unknown;
    Tri strong = Tri::unknown;
};

inline SesAdmissibility admissibility_of_ses(const SesSpec& s, const SummabilityConfig& cfg = {}) {
    RationalSeq d = delta_seq(s).seq;
    SesAdmissibility out;
    out.strong = is_h_o_n(d, /*absolute=*/true, cfg).verdict;
    out.weak = is_h_o_n(d, /*absolute=*/false, cfg).verdict;
    if (out.strong == Tri::yes && out.weak != Tri::yes) out.weak = Tri::yes;
    return out;
}

// Exact residuals of the averaged identity
//   (M hA)_n - (M hB)_n + (M hC)_n - delta_n / n,  n = 1..n_max.
// The identity precedes any limit, so every residual must vanish.
inline std::vector<Rat> additivity_identity_check(const SesSpec& s, long n_max) {
    if (n_max < 1) throw PreconditionError("residual range must cover at least n = 1");
    std::vector<Rat> ma = rank_bundle(s.a).hc.cesaro(1).prefix(n_max);
    std::vector<Rat> mb = rank_bundle(s.b).hc.cesaro(1).prefix(n_max);
    std::vector<Rat> mc = rank_bundle(s.c).hc.cesaro(1).prefix(n_max);
    std::vector<Rat> dl = delta_seq(s).seq.prefix(n_max);
    std::vector<Rat> res;
    res.reserve(static_cast<std::size_t>(n_max));
    for (long n = 1; n <= n_max; ++n) {
        std::size_t i = static_cast<std::size_t>(n - 1);
        res.push_back(ma[i] - mb[i] + mc[i] - dl[i] / n);
    }
    return res;
}

struct ChiAdditivityReport {
    Rat chi_a;
    Rat chi_b;
    Rat chi_c;
    LimitStatus evidence = LimitStatus::inconclusive;  // weakest of the three
    bool holds = false;  // chi_a - chi_b + chi_c vanishes
    std::string detail;
};

inline ChiAdditivityReport additivity_chi_check(const SesSpec& s,
                                                const SummabilityConfig& cfg = {}) {
    SesAdmissibility adm = admissibility_of_ses(s, cfg);
    if (adm.weak != Tri::yes)
        throw PreconditionError(
            "weak admissibility of the sequence is not established; refusing the alternating-sum "
            "law");
    ChiReport ra = chi_h(s.a, cfg);
    ChiReport rb = chi_h(s.b, cfg);
    ChiReport rc = chi_h(s.c, cfg);
    if (!ra.chi.has_value() || !rb.chi.has_value() || !rc.chi.has_value())
        throw PreconditionError("averaged characteristic unavailable for some member");
    ChiAdditivityReport out;
    out.chi_a = *ra.chi.value;
    out.chi_b = *rb.chi.value;
    out.chi_c = *rc.chi.value;
    out.evidence = detail::weaker_certificate(
        detail::weaker_certificate(ra.chi.status, rb.chi.status), rc.chi.status);
    Rat sum = out.chi_a - out.chi_b + out.chi_c;
    if (out.evidence == LimitStatus::exact) {
        out.holds = sum == 0;
    } else {
        Rat mag = sum < 0 ? Rat(-sum) : sum;
        out.holds = mag <= cfg.tol;
    }
    if (!out.holds)
        out.detail = "alternating sum " + rat_string(sum) + " does not vanish (" +
                     rat_string(out.chi_a) + " - " + rat_string(out.chi_b) + " + " +
                     rat_string(out.chi_c) + ")";
    return out;
}

// Admissibility transfer: when two members are established admissible, the
// third follows. Also verifies the underlying termwise rank identity
//   rank im delta_n + rank im delta_(n-1) = |hA|_n - |hB|_n + |hC|_n.
struct TwoOutOfThreeReport {
    Tri direct_a = Tri::unknown;
    Tri direct_b = Tri::unknown;
    Tri direct_c = Tri::unknown;
    int inferred_member = -1;  // 0/1/2 = A/B/C settled by transfer; -1 when none needed it
    Tri inferred = Tri::unknown;
    bool identity_holds = false;
};

inline TwoOutOfThreeReport two_out_of_three(const SesSpec& s, const SummabilityConfig& cfg = {}) {
    TwoOutOfThreeReport out;
    out.direct_a = is_h_o_n(rank_bundle(s.a).hc, /*absolute=*/true, cfg).verdict;
    out.direct_b = is_h_o_n(rank_bundle(s.b).hc, /*absolute=*/true, cfg).verdict;
    out.direct_c = is_h_o_n(rank_bundle(s.c).hc, /*absolute=*/true, cfg).verdict;

    DeltaSeq dl = delta_seq(s);
    long n = s.degree_count();
    out.identity_holds = true;
    for (long k = 1; k <= n + 2; ++k) {
        long lhs = 0;
        if (k - 1 <= static_cast<long>(dl.ranks.size()) && k - 1 >= 1)
            lhs += dl.ranks[static_cast<std::size_t>(k - 2)];  // rank im delta_(k-1)
        if (k <= static_cast<long>(dl.ranks.size()))
            lhs += dl.ranks[static_cast<std::size_t>(k - 1)];  // rank im delta_k
        long rhs = homology_rank(s.a, k - 1) - homology_rank(s.b, k - 1) +
                   homology_rank(s.c, k - 1);
        if (lhs != rhs) out.identity_holds = false;
    }

    Tri v[3] = {out.direct_a, out.direct_b, out.direct_c};
    int yes = 0;
    for (Tri t : v)
        if (t == Tri::yes) ++yes;
    if (yes >= 2) {
        out.inferred = Tri::yes;
        for (int i = 0; i < 3; ++i)
            if (v[i] != Tri::yes) out.inferred_member = i;
    }
    return out;
}

// --- mapping cones -----------------------------------------------------------------

namespace detail {

inline IntMatrix boundary_or_top(const ChainComplex& c, long d) {
    // boundary out of degree d, with the degree-0 convention of a 0-row map
    if (d == 0) return IntMatrix(0, c.rank_at(0));
    return c.boundary_at(d);
}

}  // namespace detail

// Cone of a degreewise chain map phi: U -> V. Degree d holds U_(d-1) + V_d;
// the boundary is [[-dU, 0], [-phi, dV]] blockwise.
inline ChainComplex mapping_cone(const ChainComplex& u, const ChainComplex& v,
                                 const std::vector<IntMatrix>& phi) {
    if (!u.is_explicit() || !v.is_explicit())
        throw PreconditionError("cone construction needs explicit complexes");
    long du = u.as_explicit().body.degrees();
    long dv = v.as_explicit().body.degrees();
    long n = std::max(du + 1, dv);
    auto phi_at = [&](long d) {
        if (d < static_cast<long>(phi.size())) return phi[static_cast<std::size_t>(d)];
        return IntMatrix(v.rank_at(d), u.rank_at(d));
    };
    for (long d = 0; d < n; ++d) {
        IntMatrix p = phi_at(d);
        if (p.rows != v.rank_at(d) || p.cols != u.rank_at(d))
            throw PreconditionError("chain map entry at degree " + std::to_string(d) +
                                    " has the wrong shape");
    }
    for (long d = 1; d < n; ++d)
        if (matmul(v.boundary_at(d), phi_at(d)) != matmul(phi_at(d - 1), u.boundary_at(d)))
            throw PreconditionError("chain map does not commute with the boundary at degree " +
                                    std::to_string(d));

    std::vector<long> ranks;
    std::vector<IntMatrix> bnd;
    for (long d = 0; d < n; ++d) {
        ranks.push_back(u.rank_at(d - 1) + v.rank_at(d));
        if (d >= 1) {
            IntMatrix top = hstack(scaled(detail::boundary_or_top(u, d - 1), Int(-1)),
                                   IntMatrix(u.rank_at(d - 2), v.rank_at(d)));
            IntMatrix bot = hstack(scaled(phi_at(d - 1), Int(-1)), v.boundary_at(d));
            bnd.push_back(vstack(top, bot));
        }
    }
    return ChainComplex::explicit_complex(std::move(ranks), std::move(bnd));
}

// The canonical sequence 0 -> V -> Cone(phi) -> U-shifted-up -> 0. The
// quotient carries the negated boundary of U, one degree up.
inline SesSpec mapping_cone_ses(const ChainComplex& u, const ChainComplex& v,
                                const std::vector<IntMatrix>& phi) {
    ChainComplex cone = mapping_cone(u, v, phi);
    long du = u.is_explicit() ? u.as_explicit().body.degrees() : 0;
    long n = cone.as_explicit().body.degrees();

    std::vector<long> cranks;
    std::vector<IntMatrix> cbnd;
    for (long d = 0; d < du + 1; ++d) {
        cranks.push_back(u.rank_at(d - 1));
        if (d == 1) cbnd.push_back(IntMatrix(0, u.rank_at(0)));
        if (d >= 2) cbnd.push_back(scaled(u.boundary_at(d - 1), Int(-1)));
    }
    ChainComplex quot = ChainComplex::explicit_complex(std::move(cranks), std::move(cbnd));

    std::vector<IntMatrix> f, g;
    for (long d = 0; d < n; ++d) {
        long ru = u.rank_at(d - 1);
        long rv = v.rank_at(d);
        f.push_back(vstack(IntMatrix(ru, rv), IntMatrix::identity(rv)));
        g.push_back(hstack(IntMatrix::identity(ru), IntMatrix(ru, rv)));
    }
    return SesSpec{v, std::move(cone), std::move(quot), std::move(f), std::move(g)};
}

// Split sequence 0 -> A -> A + C -> C -> 0 with canonical injection and
// projection (the summands keep their own boundaries).
inline SesSpec split_ses(const ChainComplex& a, const ChainComplex& c) {
    if (!a.is_explicit() || !c.is_explicit())
        throw PreconditionError("split construction needs explicit complexes");
    ChainComplex b = direct_sum(a, c);
    long n = std::max({a.as_explicit().body.degrees(), c.as_explicit().body.degrees()});
    std::vector<IntMatrix> f, g;
    for (long d = 0; d < n; ++d) {
        long ra = a.rank_at(d);
        long rc = c.rank_at(d);
        f.push_back(vstack(IntMatrix::identity(ra), IntMatrix(rc, ra)));
        g.push_back(hstack(IntMatrix(rc, ra), IntMatrix::identity(rc)));
    }
    return SesSpec{a, std::move(b), c, std::move(f), std::move(g)};
}

// Materialized doubling tower: E is the even-degree unit pattern truncated to
// `degrees` degrees, and the sequence is 0 -> E -> Cone(x2) -> E-shifted -> 0.
inline SesSpec doubling_tower_ses(long degrees) {
    if (degrees < 1) throw PreconditionError("tower needs at least one degree");
    std::vector<long> ranks;
    std::vector<IntMatrix> bnd;
    for (long d = 0; d < degrees; ++d) {
        ranks.push_back(d % 2 == 0 ? 1 : 0);
        if (d >= 1)
            bnd.emplace_back(ranks[static_cast<std::size_t>(d - 1)],
                             ranks[static_cast<std::size_t>(d)]);
    }
    ChainComplex e = ChainComplex::explicit_complex(std::move(ranks), std::move(bnd));
    std::vector<IntMatrix> phi;
    for (long d = 0; d < degrees; ++d) {
        long r = e.rank_at(d);
        phi.push_back(scaled(IntMatrix::identity(r), Int(2)));
    }
    return mapping_cone_ses(e, e, phi);
}

}  // namespace hoelder
