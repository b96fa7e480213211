// Target-side approximation layer. Oracles: hand-traced runs of the bottom-up
// construction on small complexes, direct homology-rank comparison, and cone
// exactness recomputed independently degree by degree.

#include <hoelder/fmodel.hpp>

#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <random>
#include <vector>

using namespace hoelder;

namespace {

IntMatrix rand_mat(std::mt19937_64& rng, long rows, long cols, int lo = -2, int hi = 2) {
    std::uniform_int_distribution<int> ent(lo, hi);
    IntMatrix m(rows, cols);
    for (long i = 0; i < rows; ++i)
        for (long j = 0; j < cols; ++j) m(i, j) = ent(rng);
    return m;
}

ChainComplex rand_explicit(std::mt19937_64& rng, long max_deg = 8, long max_rank = 4) {
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

// Chain map built from a random degreewise homotopy S_d : C_d -> D_(d+1);
// components f_d = dD_(d+1) S_d + S_(d-1) dC_d always commute.
ChainMap rand_null_homotopic(std::mt19937_64& rng, long max_deg = 8, long max_rank = 4) {
    ChainComplex c = rand_explicit(rng, max_deg, max_rank);
    ChainComplex d = rand_explicit(rng, max_deg, max_rank);
    long n = std::max(c.as_explicit().body.degrees(), d.as_explicit().body.degrees());
    std::vector<IntMatrix> S;
    for (long k = 0; k < n; ++k) S.push_back(rand_mat(rng, d.rank_at(k + 1), c.rank_at(k)));
    std::vector<IntMatrix> comp;
    for (long k = 0; k < n; ++k) {
        IntMatrix term = matmul(d.boundary_at(k + 1), S[static_cast<std::size_t>(k)]);
        if (k >= 1)
            term = term + matmul(S[static_cast<std::size_t>(k - 1)], c.boundary_at(k));
        comp.push_back(std::move(term));
    }
    return ChainMap{std::move(c), std::move(d), std::move(comp)};
}

IntMatrix mat(const std::vector<std::vector<long>>& rows) {
    std::vector<std::vector<Int>> conv;
    for (const auto& r : rows) conv.emplace_back(r.begin(), r.end());
    return IntMatrix::from_rows(conv);
}

Lattice span_of(long dim, const std::vector<std::vector<long>>& gens) {
    std::vector<std::vector<Int>> conv;
    for (const auto& g : gens) conv.emplace_back(g.begin(), g.end());
    return lattice_from_generators(dim, std::move(conv));
}

bool results_equal(const ApproximationResult& a, const ApproximationResult& b) {
    if (a.horizon != b.horizon) return false;
    if (!(a.sub.as_explicit().body.ranks == b.sub.as_explicit().body.ranks)) return false;
    if (!(a.sub.as_explicit().body.boundaries == b.sub.as_explicit().body.boundaries))
        return false;
    if (!(a.inclusion.components == b.inclusion.components)) return false;
    if (!(a.co_restriction.components == b.co_restriction.components)) return false;
    if (a.stages.size() != b.stages.size()) return false;
    for (std::size_t s = 0; s < a.stages.size(); ++s) {
        const FiltrationStage& x = a.stages[s];
        const FiltrationStage& y = b.stages[s];
        if (x.degree != y.degree || x.lifted_generators != y.lifted_generators) return false;
        if (!(x.filtration == y.filtration)) return false;
        if (!(x.image_part == y.image_part) || !(x.cycle_part == y.cycle_part)) return false;
        if (!(x.lift_part == y.lift_part) || !(x.killed_cycles == y.killed_cycles)) return false;
    }
    return true;
}

}  // namespace

TEST_CASE("chain map validation and identity maps") {
    ChainComplex d = ChainComplex::explicit_complex({1, 1}, {mat({{1}})});

    SECTION("identity maps validate with identity components") {
        ChainMap f = identity_map(d);
        REQUIRE(validate_chain_map(f).valid);
        REQUIRE(f.component(0) == IntMatrix::identity(1));
        REQUIRE(f.component(1) == IntMatrix::identity(1));
        REQUIRE(f.component(5) == IntMatrix(0, 0));  // zero-shaped beyond the top
    }

    SECTION("missing components default to zero maps") {
        ChainMap f{d, d, {}};
        REQUIRE(validate_chain_map(f).valid);
        REQUIRE(f.component(0).is_zero());
    }

    SECTION("shape mismatches are reported with their degree") {
        ChainMap f{d, d, {IntMatrix(2, 1)}};
        auto r = validate_chain_map(f);
        REQUIRE_FALSE(r.valid);
        REQUIRE(r.detail.find("degree 0") != std::string::npos);
    }

    SECTION("components that fail to commute are rejected") {
        ChainMap f{d, d, {IntMatrix::identity(1), scaled(IntMatrix::identity(1), Int(2))}};
        auto r = validate_chain_map(f);
        REQUIRE_FALSE(r.valid);
        REQUIRE(r.detail.find("degree 1") != std::string::npos);
    }

    SECTION("non-explicit complexes are rejected") {
        ChainComplex h = ChainComplex::homology_only(RationalSeq::constant(Rat(0)));
        ChainMap f{h, h, {}};
        REQUIRE_FALSE(validate_chain_map(f).valid);
        REQUIRE_THROWS_AS(identity_map(h), PreconditionError);
    }
}

TEST_CASE("the whole target is kept when its homology needs it") {
    // one generator mapping onto the first coordinate of a rank-two target
    ChainComplex c = ChainComplex::explicit_complex({1}, {});
    ChainComplex d = ChainComplex::explicit_complex({2}, {});
    ChainMap f{c, d, {mat({{1}, {0}})}};

    ApproximationResult res = approximate(f, 0);

    REQUIRE(res.horizon == 0);
    REQUIRE(res.sub.rank_at(0) == 2);
    REQUIRE(res.inclusion.component(0) == IntMatrix::identity(2));
    REQUIRE(res.co_restriction.component(0) == mat({{1}, {0}}));

    REQUIRE(res.stages.size() == 1);
    const FiltrationStage& st = res.stages[0];
    REQUIRE(st.degree == 0);
    REQUIRE(st.image_part == span_of(2, {{1, 0}}));
    REQUIRE(st.cycle_part == Lattice::full(2));  // both homology classes must be covered
    REQUIRE(st.lift_part.is_zero());
    REQUIRE(st.lifted_generators == 0);

    ApproximationReport rep = verify_approximation(res);
    REQUIRE(rep.passed());
    REQUIRE(rep.cone_failures.empty());
    for (const auto& dc : rep.degrees) {
        REQUIRE(dc.closure);
        REQUIRE(dc.surjection);
        REQUIRE(dc.injection);
    }
}

TEST_CASE("an acyclic summand is pruned away") {
    // target = (unit interval) + (isolated point): one summand carries no
    // homology and should not survive
    ChainComplex c = ChainComplex::zero_complex();
    ChainComplex d = ChainComplex::explicit_complex({2, 1}, {mat({{1}, {0}})});
    ChainMap f{c, d, {}};

    ApproximationResult res = approximate(f, 1);

    REQUIRE(res.sub.rank_at(0) == 1);
    REQUIRE(res.sub.rank_at(0) < d.rank_at(0));  // strictly smaller than the ambient rank
    REQUIRE(res.sub.rank_at(1) == 0);
    REQUIRE(res.inclusion.component(0) == mat({{0}, {1}}));

    REQUIRE(res.stages.size() == 2);
    REQUIRE(res.stages[0].image_part.is_zero());
    REQUIRE(res.stages[0].cycle_part == span_of(2, {{0, 1}}));
    REQUIRE(res.stages[1].image_part.is_zero());
    REQUIRE(res.stages[1].cycle_part.is_zero());
    REQUIRE(res.stages[1].lift_part.is_zero());
    REQUIRE(res.stages[1].lifted_generators == 0);

    REQUIRE(homology_rank(res.sub, 0) == homology_rank(d, 0));
    REQUIRE(homology_rank(res.sub, 1) == homology_rank(d, 1));

    ApproximationReport rep = verify_approximation(res);
    REQUIRE(rep.passed());

    SECTION("a zero map against a target with a dying class also prunes") {
        ChainComplex d2 = ChainComplex::explicit_complex({2, 1}, {mat({{0}, {1}})});
        ChainMap f2{c, d2, {}};
        ApproximationResult res2 = approximate(f2, 1);
        REQUIRE(res2.sub.rank_at(0) == 1);
        REQUIRE(res2.sub.rank_at(1) == 0);
        REQUIRE(res2.inclusion.component(0) == mat({{1}, {0}}));
        REQUIRE(verify_approximation(res2).passed());
    }
}

TEST_CASE("a class dying only in the target forces a lift") {
    // the incoming map hits a generator that is a boundary of the target; the
    // lift step must pull in the degree-one generator that kills it
    ChainComplex c = ChainComplex::explicit_complex({1}, {});
    ChainComplex d = ChainComplex::explicit_complex({2, 1}, {mat({{0}, {1}})});
    ChainMap f{c, d, {mat({{0}, {1}})}};

    ApproximationResult res = approximate(f, 1);

    REQUIRE(res.sub.rank_at(0) == 2);
    REQUIRE(res.sub.rank_at(1) == 1);
    REQUIRE(res.sub.boundary_at(1) == mat({{0}, {1}}));
    REQUIRE(res.inclusion.component(0) == IntMatrix::identity(2));
    REQUIRE(res.inclusion.component(1) == IntMatrix::identity(1));

    const FiltrationStage& s0 = res.stages[0];
    REQUIRE(s0.image_part == span_of(2, {{0, 1}}));
    REQUIRE(s0.cycle_part == span_of(2, {{1, 0}}));

    const FiltrationStage& s1 = res.stages[1];
    REQUIRE(s1.image_part.is_zero());
    REQUIRE(s1.cycle_part.is_zero());
    REQUIRE(s1.killed_cycles == span_of(2, {{0, 1}}));
    REQUIRE(s1.lift_part == Lattice::full(1));
    REQUIRE(s1.lifted_generators == 1);

    ApproximationReport rep = verify_approximation(res);
    REQUIRE(rep.passed());
}

TEST_CASE("identity maps reproduce the whole complex") {
    std::mt19937_64 rng(46368);
    for (int trial = 0; trial < 10; ++trial) {
        ChainComplex d = rand_explicit(rng, 6, 4);
        long top = d.as_explicit().body.degrees() - 1;
        ChainMap f = identity_map(d);
        ApproximationResult res = approximate(f, top);
        INFO("trial " << trial);
        for (long k = 0; k <= top; ++k) {
            REQUIRE(res.sub.rank_at(k) == d.rank_at(k));
            REQUIRE(res.inclusion.component(k) == IntMatrix::identity(d.rank_at(k)));
            REQUIRE(res.co_restriction.component(k) == IntMatrix::identity(d.rank_at(k)));
            if (k >= 1) REQUIRE(res.sub.boundary_at(k) == d.boundary_at(k));
        }
        REQUIRE(verify_approximation(res).passed());
    }
}

TEST_CASE("tampering with a chosen lift is detected") {
    ChainComplex c = ChainComplex::explicit_complex({1}, {});
    ChainComplex d = ChainComplex::explicit_complex({2, 1}, {mat({{0}, {1}})});
    ChainMap f{c, d, {mat({{0}, {1}})}};
    ApproximationResult res = approximate(f, 1);
    REQUIRE(verify_approximation(res).passed());

    // drop the degree-one generator that the lift step chose
    ApproximationResult tampered = res;
    tampered.sub = ChainComplex::explicit_complex({2, 0}, {IntMatrix(2, 0)});
    tampered.inclusion = ChainMap{tampered.sub, d, {IntMatrix::identity(2), IntMatrix(1, 0)}};
    tampered.co_restriction = ChainMap{c, tampered.sub, {res.co_restriction.component(0)}};

    ApproximationReport rep = verify_approximation(tampered);
    REQUIRE_FALSE(rep.passed());
    REQUIRE_FALSE(rep.quasi_isomorphism);
    REQUIRE(std::find(rep.cone_failures.begin(), rep.cone_failures.end(), 1) !=
            rep.cone_failures.end());
    REQUIRE_FALSE(rep.degrees[0].injection);  // (0,1) now dies only in the ambient complex
    REQUIRE_FALSE(rep.failures.empty());
}

TEST_CASE("randomized maps satisfy every stage invariant") {
    std::mt19937_64 rng(20250819);
    int checked = 0;
    for (int trial = 0; trial < 60; ++trial) {
        ChainMap f = [&]() {
            if (trial < 40) return rand_null_homotopic(rng, 8, 4);
            ChainComplex d = rand_explicit(rng, 8, 4);
            if (trial < 50) return identity_map(d);
            std::vector<IntMatrix> comp;  // doubling endomorphism
            for (long k = 0; k < d.as_explicit().body.degrees(); ++k)
                comp.push_back(scaled(IntMatrix::identity(d.rank_at(k)), Int(2)));
            return ChainMap{d, d, std::move(comp)};
        }();
        const ChainComplex& d = f.target;
        long top = d.as_explicit().body.degrees() - 1;

        ApproximationResult res = approximate(f, top);
        INFO("trial " << trial << ", horizon " << top);

        ApproximationReport rep = verify_approximation(res);
        for (const auto& msg : rep.failures) INFO(msg);
        REQUIRE(rep.passed());

        REQUIRE(static_cast<long>(res.stages.size()) == top + 1);
        const FiltrationStage& last = res.stages.back();
        for (long j = 0; j <= top; ++j) {
            const Lattice& gj = last.filtration[static_cast<std::size_t>(j)];
            REQUIRE(gj.rank() <= d.rank_at(j));  // never exceeds the ambient rank
            IntMatrix fj = f.component(j);
            for (long col = 0; col < fj.cols; ++col)
                REQUIRE(member(gj, fj.col(col)));  // the map lands inside the choice
            if (j >= 1) {
                Lattice img = image_lattice(matmul(d.boundary_at(j), gj.basis_matrix()));
                REQUIRE(lattice_subset(img, last.filtration[static_cast<std::size_t>(j - 1)]));
            }
        }
        for (long s = 0; s <= top; ++s) {
            const FiltrationStage& st = res.stages[static_cast<std::size_t>(s)];
            REQUIRE(st.degree == s);
            REQUIRE(static_cast<long>(st.filtration.size()) == s + 1);
            for (long j = 0; j <= s; ++j)  // earlier degrees never change afterwards
                REQUIRE(st.filtration[static_cast<std::size_t>(j)] ==
                        last.filtration[static_cast<std::size_t>(j)]);
        }
        ++checked;
    }
    REQUIRE(checked == 60);

    SECTION("the construction is deterministic") {
        std::mt19937_64 r1(121393), r2(121393);
        for (int trial = 0; trial < 3; ++trial) {
            ChainMap f1 = rand_null_homotopic(r1, 6, 3);
            ChainMap f2 = rand_null_homotopic(r2, 6, 3);
            long top = f1.target.as_explicit().body.degrees() - 1;
            REQUIRE(results_equal(approximate(f1, top), approximate(f2, top)));
        }
    }
}

TEST_CASE("approximation preconditions are enforced") {
    ChainComplex d = ChainComplex::explicit_complex({1, 1}, {mat({{0}})});
    ChainMap f = identity_map(d);

    SECTION("degree bound must stay within the target") {
        REQUIRE_THROWS_AS(approximate(f, 2), PreconditionError);
        REQUIRE_THROWS_AS(approximate(f, -1), PreconditionError);
    }

    SECTION("the map may not have support above the bound") {
        REQUIRE_THROWS_AS(approximate(f, 0), PreconditionError);
    }

    SECTION("invalid chain maps are refused") {
        ChainComplex e = ChainComplex::explicit_complex({1, 1}, {mat({{1}})});
        ChainMap bad{e, e, {IntMatrix::identity(1), scaled(IntMatrix::identity(1), Int(2))}};
        REQUIRE_THROWS_AS(approximate(bad, 1), PreconditionError);
    }
}
