// Averaged Euler characteristic layer: closed-form values for the builtin
// patterns, admissibility verdicts, shift/direct-sum laws, the exact
// averaged-rank identity, and the gated chain-rank computation route.

#include <hoelder/euler.hpp>

#include <catch2/catch_amalgamated.hpp>

#include <random>
#include <vector>

using namespace hoelder;

namespace {

ChainComplex even_unit_complex() {
    ExplicitBlock rep;
    rep.ranks = {1, 0};
    rep.boundaries = {IntMatrix(1, 0)};
    return ChainComplex::periodic(ExplicitBlock{}, std::move(rep), IntMatrix(0, 1),
                                  IntMatrix(0, 1));
}

// Unit rank every 2m degrees (zero maps): averaged characteristic 1/(2m).
ChainComplex sparse_unit_complex(long m) {
    ExplicitBlock rep;
    rep.ranks.assign(static_cast<std::size_t>(2 * m), 0);
    rep.ranks[0] = 1;
    for (long d = 1; d < 2 * m; ++d)
        rep.boundaries.emplace_back(rep.ranks[static_cast<std::size_t>(d - 1)],
                                    rep.ranks[static_cast<std::size_t>(d)]);
    long tail = rep.ranks.back();
    return ChainComplex::periodic(ExplicitBlock{}, std::move(rep), IntMatrix(0, 1),
                                  IntMatrix(tail, 1));
}

IntMatrix rand_mat(std::mt19937_64& rng, long rows, long cols, int lo = -3, int hi = 3) {
    std::uniform_int_distribution<int> ent(lo, hi);
    IntMatrix m(rows, cols);
    for (long i = 0; i < rows; ++i)
        for (long j = 0; j < cols; ++j) m(i, j) = ent(rng);
    return m;
}

ChainComplex rand_explicit(std::mt19937_64& rng, long max_deg = 6, long max_rank = 4) {
    std::uniform_int_distribution<long> nd(1, max_deg), rk(0, max_rank);
    std::vector<long> ranks;
    long n = nd(rng);
    for (long i = 0; i < n; ++i) ranks.push_back(rk(rng));
    std::vector<IntMatrix> bnd;
    for (std::size_t d = 1; d < ranks.size(); ++d) {
        if (d == 1) {
            bnd.push_back(rand_mat(rng, ranks[0], ranks[1]));
        } else {
            Lattice K = kernel_lattice(bnd.back());
            bnd.push_back(matmul(K.basis_matrix(), rand_mat(rng, K.rank(), ranks[d], -2, 2)));
        }
    }
    return ChainComplex::explicit_complex(std::move(ranks), std::move(bnd));
}

ChainComplex rand_periodic(std::mt19937_64& rng, long max_pre = 3, long max_per = 4,
                           long max_rank = 3) {
    std::uniform_int_distribution<long> pd(0, max_pre), ld(1, max_per), rk(0, max_rank);
    auto chain = [&rng](std::vector<long>& ranks) {
        std::vector<IntMatrix> bnd;
        for (std::size_t d = 1; d < ranks.size(); ++d) {
            if (d == 1) {
                bnd.push_back(rand_mat(rng, ranks[0], ranks[1]));
            } else {
                Lattice K = kernel_lattice(bnd.back());
                bnd.push_back(matmul(K.basis_matrix(), rand_mat(rng, K.rank(), ranks[d], -2, 2)));
            }
        }
        return bnd;
    };
    ExplicitBlock pre;
    long np = pd(rng);
    for (long i = 0; i < np; ++i) pre.ranks.push_back(rk(rng));
    pre.boundaries = chain(pre.ranks);
    ExplicitBlock rep;
    long nr = ld(rng);
    for (long i = 0; i < nr; ++i) rep.ranks.push_back(rk(rng));
    rep.boundaries = chain(rep.ranks);
    long pre_tail = pre.ranks.empty() ? 0 : pre.ranks.back();
    IntMatrix seam_pre(pre_tail, rep.ranks.front());
    IntMatrix seam_wrap(rep.ranks.back(), rep.ranks.front());
    return ChainComplex::periodic(std::move(pre), std::move(rep), std::move(seam_pre),
                                  std::move(seam_wrap));
}

}  // namespace

TEST_CASE("unit in even degrees: exact value one half, fully admissible") {
    ChiReport r = chi_h(even_unit_complex());
    REQUIRE(r.chi.status == LimitStatus::exact);
    REQUIRE(r.chi.value == Rat(1, 2));
    REQUIRE(r.preadmissible == Tri::yes);
    REQUIRE(r.admissible == Tri::yes);
    REQUIRE(r.preadmissible_certificate == LimitStatus::exact);
    REQUIRE(r.admissible_certificate == LimitStatus::exact);
}

TEST_CASE("sparse unit patterns: exact value 1/(2m)") {
    for (long m = 1; m <= 6; ++m) {
        ChiReport r = chi_h(sparse_unit_complex(m));
        REQUIRE(r.chi.status == LimitStatus::exact);
        REQUIRE(r.chi.value == Rat(1, 2 * m));
        REQUIRE(r.admissible == Tri::yes);
    }
}

TEST_CASE("bounded complexes: exact zero") {
    std::mt19937_64 rng(4242);
    for (int rep = 0; rep < 30; ++rep) {
        ChainComplex c = rand_explicit(rng, 7, 5);
        ChiReport r = chi_h(c);
        REQUIRE(r.chi.status == LimitStatus::exact);
        // bounded support: finitely many nonzero homology ranks average to 0
        REQUIRE(r.chi.value == 0);
        REQUIRE(r.preadmissible == Tri::yes);
        REQUIRE(r.admissible == Tri::yes);
    }
}

TEST_CASE("closed-form value matches a long plain average") {
    // independent check of the closed form: one averaging pass at large n
    for (long m : {1L, 3L}) {
        ChainComplex c = sparse_unit_complex(m);
        ChiReport r = chi_h(c);
        Rat avg = rank_bundle(c).hc.cesaro(1).term(12000);
        Rat dev = avg - *r.chi.value;
        if (dev < 0) dev = -dev;
        REQUIRE(dev <= Rat(1, 100));
    }
}

TEST_CASE("linearly growing homology: certified not preadmissible") {
    // rank 2k+1 in even degree 2k, zero in odd degrees: the signed sequence
    // has nonzero mean slope, so no averaging iterate converges
    RationalSeq hranks = RationalSeq::affine_cycle(
        {}, {{Rat(0), Rat(1)}, {Rat(0), Rat(0)}});
    ChainComplex c = ChainComplex::homology_only(hranks, false);
    REQUIRE(validate(c).valid);
    ChiReport r = chi_h(c);
    REQUIRE(r.chi.status == LimitStatus::inconclusive);
    REQUIRE(r.preadmissible == Tri::no);
    REQUIRE(r.preadmissible_certificate == LimitStatus::exact);
    REQUIRE(r.admissible == Tri::no);
    REQUIRE_FALSE(r.notes.empty());
}

TEST_CASE("opaque rule homology: honest unknowns under a small budget") {
    RationalSeq hranks = RationalSeq::rule(
        "even_halves", [](long n) { return n % 2 == 0 ? Rat(n / 2) : Rat(0); });
    ChainComplex c = ChainComplex::homology_only(hranks, false);
    SummabilityConfig cfg;
    cfg.n_max = 2000;
    cfg.k_max = 3;
    ChiReport r = chi_h(c, cfg);
    REQUIRE(r.chi.status == LimitStatus::inconclusive);
    REQUIRE(r.preadmissible == Tri::unknown);
    REQUIRE(r.admissible == Tri::unknown);
}

TEST_CASE("admissible true never appears without preadmissible true") {
    std::mt19937_64 rng(1618);
    for (int rep = 0; rep < 40; ++rep) {
        ChainComplex c = rep % 2 == 0 ? rand_explicit(rng) : rand_periodic(rng);
        ChiReport r = chi_h(c);
        if (r.admissible == Tri::yes) REQUIRE(r.preadmissible == Tri::yes);
    }
}

TEST_CASE("equal homology rank sequences give identical reports") {
    // three complexes whose homology vanishes identically
    ChainComplex idc = ChainComplex::explicit_complex({1, 1}, {IntMatrix::from_rows({{1}})});
    ChainComplex two = ChainComplex::explicit_complex({1, 1}, {IntMatrix::from_rows({{2}})});
    ChainComplex zero = ChainComplex::zero_complex();
    std::vector<ChiReport> reports = {chi_h(idc), chi_h(two), chi_h(zero)};
    for (const ChiReport& r : reports) {
        REQUIRE(r.chi.status == reports[0].chi.status);
        REQUIRE(r.chi.value == reports[0].chi.value);
        REQUIRE(r.preadmissible == reports[0].preadmissible);
        REQUIRE(r.admissible == reports[0].admissible);
    }

    // same comparison for a pair with nonvanishing homology
    ChainComplex a =
        ChainComplex::explicit_complex({2, 2}, {IntMatrix::from_rows({{1, 1}, {1, 1}})});
    ChainComplex b = ChainComplex::explicit_complex({1, 1}, {IntMatrix(1, 1)});
    ChiReport ra = chi_h(a);
    ChiReport rb = chi_h(b);
    REQUIRE(ra.chi.value == rb.chi.value);
    REQUIRE(ra.admissible == rb.admissible);
}

TEST_CASE("shift and direct-sum laws hold exactly") {
    ChainComplex ez = even_unit_complex();
    ChainComplex s2 = sparse_unit_complex(2);

    SECTION("pinned: shifting the even-degree unit pattern once negates") {
        ChiLawReport r = chi_h_shift_dsum_laws(ez, ChainComplex::zero_complex(), 1);
        REQUIRE(r.shift_law_holds);
        REQUIRE(r.sum_law_holds);
        REQUIRE(r.chi_shifted == Rat(-1, 2));
        REQUIRE(r.chi_sum == Rat(1, 2));  // adding the zero complex changes nothing
        REQUIRE(r.detail.empty());
    }

    SECTION("pinned: two sparse patterns add to one half") {
        ChiLawReport r = chi_h_shift_dsum_laws(s2, s2, 0);
        REQUIRE(r.sum_law_holds);
        REQUIRE(r.chi_sum == Rat(1, 2));
    }

    SECTION("all builtin pairs and shifts up to four") {
        std::vector<ChainComplex> builtins = {ez, s2, sparse_unit_complex(3),
                                              ChainComplex::zero_complex()};
        for (const ChainComplex& c : builtins)
            for (const ChainComplex& d : builtins)
                for (long m = 0; m <= 4; ++m) {
                    ChiLawReport r = chi_h_shift_dsum_laws(c, d, m);
                    INFO(r.detail);
                    REQUIRE(r.shift_law_holds);
                    REQUIRE(r.sum_law_holds);
                }
    }

    SECTION("random complexes obey both laws") {
        std::mt19937_64 rng(271828);
        for (int rep = 0; rep < 25; ++rep) {
            ChainComplex c = rep % 2 == 0 ? rand_explicit(rng) : rand_periodic(rng);
            ChainComplex d = rep % 3 == 0 ? rand_periodic(rng) : rand_explicit(rng);
            ChiLawReport r = chi_h_shift_dsum_laws(c, d, rep % 4);
            INFO(r.detail);
            REQUIRE(r.shift_law_holds);
            REQUIRE(r.sum_law_holds);
        }
    }

    SECTION("no closed form available: refusal") {
        ChainComplex opaque = ChainComplex::homology_only(
            RationalSeq::rule("noise", [](long n) { return make_rat(n % 7, 3); }), false);
        SummabilityConfig cfg;
        cfg.n_max = 200;
        cfg.k_max = 1;
        cfg.tol = Rat(1, Int(1000000000000));
        REQUIRE_THROWS_AS(chi_h_shift_dsum_laws(opaque, ez, 1, cfg), PreconditionError);
    }
}

TEST_CASE("averaged-rank identity: residuals vanish identically") {
    SECTION("zero differentials: both averaged sides coincide") {
        ChainComplex ez = even_unit_complex();
        for (Rat r : rc_identity_check(ez, 40)) REQUIRE(r == 0);
    }

    SECTION("pinned two-term complex") {
        ChainComplex idc = ChainComplex::explicit_complex({1, 1}, {IntMatrix::from_rows({{1}})});
        std::vector<Rat> res = rc_identity_check(idc, 30);
        for (Rat r : res) REQUIRE(r == 0);
        // hand values behind the n = 1 entry: averaged chain ranks give 1,
        // averaged homology gives 0, boundary term gives 1
        RankSeqBundle b = rank_bundle(idc);
        REQUIRE(b.rc->cesaro(1).term(1) == 1);
        REQUIRE(b.hc.cesaro(1).term(1) == 0);
        REQUIRE(b.bc->term(1) == 1);
    }

    SECTION("random valid complexes") {
        std::mt19937_64 rng(31337);
        for (int rep = 0; rep < 40; ++rep) {
            ChainComplex c = rep % 2 == 0 ? rand_explicit(rng, 8, 4) : rand_periodic(rng);
            for (Rat r : rc_identity_check(c, 25)) REQUIRE(r == 0);
        }
    }

    SECTION("homology-only refusal without the zero-differential marker") {
        ChainComplex ho = ChainComplex::homology_only(
            RationalSeq::eventually_periodic({}, {Rat(1), Rat(0)}), false);
        REQUIRE_THROWS_AS(rc_identity_check(ho, 5), PreconditionError);
        ChainComplex marked = ChainComplex::homology_only(
            RationalSeq::eventually_periodic({}, {Rat(1), Rat(0)}), true);
        for (Rat r : rc_identity_check(marked, 20)) REQUIRE(r == 0);
        REQUIRE_THROWS_AS(rc_identity_check(marked, 0), PreconditionError);
    }
}

TEST_CASE("chain-rank route equals the homology-rank route when gated through") {
    SECTION("pinned patterns") {
        ChainComplex ez = even_unit_complex();
        HLimitResult via = chi_via_chain_modules(ez);
        REQUIRE(via.status == LimitStatus::exact);
        REQUIRE(via.value == Rat(1, 2));

        HLimitResult v2 = chi_via_chain_modules(sparse_unit_complex(2));
        REQUIRE(v2.status == LimitStatus::exact);
        REQUIRE(v2.value == Rat(1, 4));
    }

    SECTION("random complexes agree with the homology route") {
        std::mt19937_64 rng(55555);
        for (int rep = 0; rep < 30; ++rep) {
            ChainComplex c = rep % 2 == 0 ? rand_explicit(rng) : rand_periodic(rng);
            HLimitResult via = chi_via_chain_modules(c);
            ChiReport direct = chi_h(c);
            REQUIRE(via.status == LimitStatus::exact);
            REQUIRE(direct.chi.status == LimitStatus::exact);
            REQUIRE(via.value == direct.chi.value);
        }
    }

    SECTION("hypothesis gate refuses when boundary growth is unresolved") {
        // opaque boundary rank sequence: nothing exact, and the tolerance is
        // far below what one averaging pass over a short run can certify
        RationalSeq hc = RationalSeq::eventually_periodic({}, {Rat(1), Rat(0)});
        RationalSeq stairs = RationalSeq::rule("stairs", [](long n) {
            return Rat((n % 2 == 1 ? 1 : -1) * ((n + 1) / 2));
        });
        RankSeqBundle synthetic{hc, stairs, hc};
        SummabilityConfig tight;
        tight.n_max = 100;
        tight.k_max = 1;
        tight.tol = Rat(1, Int(1000000000000));
        REQUIRE_THROWS_AS(chi_via_chain_modules(synthetic, tight), PreconditionError);
    }

    SECTION("missing chain data refuses") {
        ChainComplex ho = ChainComplex::homology_only(
            RationalSeq::eventually_periodic({}, {Rat(1), Rat(0)}), false);
        REQUIRE_THROWS_AS(chi_via_chain_modules(ho), PreconditionError);
    }
}
