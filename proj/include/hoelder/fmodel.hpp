#pragma once

// Degreewise finite approximation inside a chain-map target: given a chain map
// f : C -> D between explicit complexes and a degree bound, choose a subcomplex
// D' of D, expressed in its own canonical bases, such that f factors exactly as
// f = i . f' through the inclusion i : D' -> D and the inclusion induces an
// isomorphism on homology below the bound and a surjection at the bound.
//
// The construction walks degrees bottom-up. At each new degree it keeps
//   (a) the image of the incoming map,
//   (b) cycle generators covering the homology of the target at that degree,
//       pruned greedily against vectors that are already boundaries or already
//       chosen, and
//   (c) integral lifts chosen so that every class one degree down that dies in
//       the target also dies inside the subcomplex.
// All arithmetic is exact; every generator choice reads canonical Hermite bases
// in a fixed order, so the result is reproducible bit for bit.
//
// Degrees above the bound are left empty, so the inclusion is only certified
// through the bound; that truncation is inherent to a finite run.

#include <hoelder/ses.hpp>

#include <algorithm>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace hoelder {

// Degreewise map between explicit complexes: components[d] maps degree d of the
// source into degree d of the target. Components outside the stored range are
// zero maps of the appropriate shape.
struct ChainMap {
    ChainComplex source;
    ChainComplex target;
    std::vector<IntMatrix> components;

    long degree_count() const {
        long n = static_cast<long>(components.size());
        if (source.is_explicit()) n = std::max(n, source.as_explicit().body.degrees());
        if (target.is_explicit()) n = std::max(n, target.as_explicit().body.degrees());
        return n;
    }

    IntMatrix component(long d) const {
        if (d >= 0 && d < static_cast<long>(components.size()))
            return components[static_cast<std::size_t>(d)];
        return IntMatrix(target.rank_at(d), source.rank_at(d));
    }
};

inline ValidationReport validate_chain_map(const ChainMap& f) {
    if (!f.source.is_explicit() || !f.target.is_explicit())
        return {false, "chain map needs explicit source and target complexes"};
    if (auto r = validate(f.source); !r.valid) return {false, "source: " + r.detail};
    if (auto r = validate(f.target); !r.valid) return {false, "target: " + r.detail};
    long n = f.degree_count();
    for (long d = 0; d < n; ++d) {
        IntMatrix c = f.component(d);
        if (c.rows != f.target.rank_at(d) || c.cols != f.source.rank_at(d))
            return {false, "component at degree " + std::to_string(d) + " has shape " +
                               std::to_string(c.rows) + "x" + std::to_string(c.cols) +
                               ", expected " + std::to_string(f.target.rank_at(d)) + "x" +
                               std::to_string(f.source.rank_at(d))};
    }
    for (long d = 1; d < n; ++d) {
        if (matmul(f.target.boundary_at(d), f.component(d)) !=
            matmul(f.component(d - 1), f.source.boundary_at(d)))
            return {false,
                    "components do not commute with the boundary at degree " + std::to_string(d)};
    }
    return {true, {}};
}

inline ChainMap identity_map(const ChainComplex& c) {
    if (!c.is_explicit()) throw PreconditionError("identity map needs an explicit complex");
    std::vector<IntMatrix> comp;
    long n = c.as_explicit().body.degrees();
    comp.reserve(static_cast<std::size_t>(n));
    for (long d = 0; d < n; ++d) comp.push_back(IntMatrix::identity(c.rank_at(d)));
    return ChainMap{c, c, std::move(comp)};
}

// One completed step of the bottom-up construction. filtration[j] holds the
// generators chosen inside degree j of the target, for every j <= degree; the
// parts of the newly filled degree are kept separately. killed_cycles lives one
// degree down: its classes are exactly those that die in the target and were
// scheduled to become boundaries of the lift part.
struct FiltrationStage {
    long degree = 0;
    std::vector<Lattice> filtration;
    Lattice image_part = Lattice::zero(0);    // image of the incoming map here
    Lattice cycle_part = Lattice::zero(0);    // pruned cycle generators kept here
    Lattice lift_part = Lattice::zero(0);     // lifts chosen for lower dying classes
    Lattice killed_cycles = Lattice::zero(0); // boundary images of the lift part
    long lifted_generators = 0;               // number of lifts chosen at this step
};

struct ApproximationResult {
    ChainMap original;        // the map that was approximated
    ChainComplex sub;         // the chosen subcomplex, in its own bases
    ChainMap co_restriction;  // original.source -> sub
    ChainMap inclusion;       // sub -> original.target; columns are the chosen bases
    std::vector<FiltrationStage> stages;  // one entry per degree 0..horizon
    long horizon = 0;
};

namespace detail {

inline std::string vec_repr(const std::vector<Int>& v) {
    std::string s = "(";
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i != 0) s += ", ";
        s += v[i].get_str();
    }
    return s + ")";
}

}  // namespace detail

inline ApproximationResult approximate(const ChainMap& f, long max_degree) {
    if (auto r = validate_chain_map(f); !r.valid)
        throw PreconditionError("approximate: " + r.detail);
    const ChainComplex& tgt = f.target;
    long top = tgt.as_explicit().body.degrees() - 1;
    if (max_degree < 0) throw PreconditionError("approximate: degree bound must be non-negative");
    if (max_degree > top)
        throw PreconditionError("approximate: degree bound exceeds the top degree of the target");
    long nc = f.degree_count();
    for (long d = max_degree + 1; d < nc; ++d)
        if (!f.component(d).is_zero())
            throw PreconditionError(
                "approximate: the map has nonzero support above the degree bound at degree " +
                std::to_string(d));

    std::vector<Lattice> chosen;  // chosen[d] = generators selected inside degree d
    std::vector<FiltrationStage> stages;
    chosen.reserve(static_cast<std::size_t>(max_degree + 1));
    stages.reserve(static_cast<std::size_t>(max_degree + 1));

    for (long deg = 0; deg <= max_degree; ++deg) {
        long rd = tgt.rank_at(deg);
        Lattice image_part = image_lattice(f.component(deg));

        // cycle generators covering the homology of the target at this degree;
        // a canonical-basis cycle is kept only when it is not yet spanned by
        // boundaries plus the cycles kept before it
        Lattice cycles = kernel_lattice(detail::boundary_or_top(tgt, deg));
        Lattice covered = image_lattice(tgt.boundary_at(deg + 1));
        std::vector<std::vector<Int>> kept;
        for (const auto& v : cycles.basis) {
            if (member(covered, v)) continue;
            kept.push_back(v);
            covered = lattice_sum(covered, lattice_from_generators(rd, {v}));
        }
        Lattice cycle_part = lattice_from_generators(rd, std::move(kept));

        // lifts: a class one degree down that becomes a boundary in the target
        // must become a boundary inside the subcomplex as well
        Lattice lift_part = Lattice::zero(rd);
        Lattice killed_cycles = Lattice::zero(deg >= 1 ? tgt.rank_at(deg - 1) : 0);
        long lifted = 0;
        if (deg >= 1) {
            const Lattice& below = chosen[static_cast<std::size_t>(deg - 1)];
            IntMatrix basis_below = below.basis_matrix();
            IntMatrix bnd = tgt.boundary_at(deg);

            // in the coordinates of the chosen lower basis: everything already
            // sent down by the image and cycle parts of this degree
            Lattice already = lattice_sum(image_part, cycle_part);
            std::vector<std::vector<Int>> down;
            for (const auto& w : already.basis) {
                std::vector<Int> img = matvec(bnd, w);
                auto coords = lattice_coords(below, img);
                if (!coords)
                    throw InternalError("approximate: boundary image " + detail::vec_repr(img) +
                                        " escapes the chosen generators at degree " +
                                        std::to_string(deg - 1));
                down.push_back(std::move(*coords));
            }
            Lattice killed = lattice_from_generators(below.rank(), std::move(down));

            // coefficient vectors whose expansion is a boundary of the target
            Lattice dying = preimage_lattice(basis_below, image_lattice(bnd));
            std::vector<std::vector<Int>> cycles_down;
            std::vector<std::vector<Int>> lifts;
            for (const auto& p : dying.basis) {
                if (member(killed, p)) continue;
                std::vector<Int> cyc = matvec(basis_below, p);
                auto lift = solve_integer(bnd, cyc);
                if (!lift)
                    throw InternalError("approximate: no integral preimage at degree " +
                                        std::to_string(deg) + " for the cycle " +
                                        detail::vec_repr(cyc) + " scheduled to become a boundary");
                cycles_down.push_back(std::move(cyc));
                lifts.push_back(std::move(*lift));
                killed = lattice_sum(killed, lattice_from_generators(below.rank(), {p}));
            }
            lifted = static_cast<long>(lifts.size());
            killed_cycles = lattice_from_generators(tgt.rank_at(deg - 1), std::move(cycles_down));
            lift_part = lattice_from_generators(rd, std::move(lifts));
        }

        chosen.push_back(lattice_sum(lattice_sum(image_part, cycle_part), lift_part));

        FiltrationStage st;
        st.degree = deg;
        st.filtration.assign(chosen.begin(), chosen.end());
        st.image_part = std::move(image_part);
        st.cycle_part = std::move(cycle_part);
        st.lift_part = std::move(lift_part);
        st.killed_cycles = std::move(killed_cycles);
        st.lifted_generators = lifted;
        stages.push_back(std::move(st));
    }

    // assemble the subcomplex in its chosen bases, plus inclusion and
    // co-restriction expressed against those bases
    std::vector<long> ranks;
    std::vector<IntMatrix> bnd;
    std::vector<IntMatrix> inc;
    for (long d = 0; d <= max_degree; ++d) {
        ranks.push_back(chosen[static_cast<std::size_t>(d)].rank());
        inc.push_back(chosen[static_cast<std::size_t>(d)].basis_matrix());
    }
    for (long d = 1; d <= max_degree; ++d) {
        const Lattice& here = chosen[static_cast<std::size_t>(d)];
        const Lattice& below = chosen[static_cast<std::size_t>(d - 1)];
        IntMatrix bd = tgt.boundary_at(d);
        IntMatrix m(below.rank(), here.rank());
        for (long j = 0; j < here.rank(); ++j) {
            std::vector<Int> img = matvec(bd, here.basis[static_cast<std::size_t>(j)]);
            auto coords = lattice_coords(below, img);
            if (!coords)
                throw InternalError(
                    "approximate: the chosen generators are not closed under the boundary at "
                    "degree " +
                    std::to_string(d) + " (witness " + detail::vec_repr(img) + ")");
            for (long i = 0; i < below.rank(); ++i)
                m(i, j) = (*coords)[static_cast<std::size_t>(i)];
        }
        bnd.push_back(std::move(m));
    }
    ChainComplex sub = ChainComplex::explicit_complex(std::move(ranks), std::move(bnd));

    std::vector<IntMatrix> co;
    for (long d = 0; d < nc; ++d) {
        IntMatrix fd = f.component(d);
        long rows = d <= max_degree ? chosen[static_cast<std::size_t>(d)].rank() : 0;
        IntMatrix m(rows, fd.cols);
        if (d <= max_degree) {
            const Lattice& here = chosen[static_cast<std::size_t>(d)];
            for (long j = 0; j < fd.cols; ++j) {
                auto coords = lattice_coords(here, fd.col(j));
                if (!coords)
                    throw InternalError(
                        "approximate: a map column escapes the chosen generators at degree " +
                        std::to_string(d) + " (witness " + detail::vec_repr(fd.col(j)) + ")");
                for (long i = 0; i < rows; ++i) m(i, j) = (*coords)[static_cast<std::size_t>(i)];
            }
        }
        co.push_back(std::move(m));
    }

    return ApproximationResult{f,
                               sub,
                               ChainMap{f.source, sub, std::move(co)},
                               ChainMap{sub, tgt, std::move(inc)},
                               std::move(stages),
                               max_degree};
}

// Outcome of one verified degree: closure of the chosen generators under the
// boundary, surjectivity of the induced map on homology at this degree, and
// injectivity (meaningful below the horizon, where it is promised).
struct DegreeCheck {
    long degree = 0;
    bool closure = true;
    bool surjection = true;
    bool injection = true;
};

struct ApproximationReport {
    bool subcomplex = true;         // chosen generators closed under the boundary
    bool factorization = true;      // original = inclusion . co_restriction degreewise
    bool quasi_isomorphism = true;  // cone of the inclusion exact through the horizon
    bool stage_conditions = true;   // recorded stages consistent, homology covered
    std::vector<long> cone_failures;    // cone degrees where exactness fails
    std::vector<DegreeCheck> degrees;   // degree-by-degree outcome
    std::vector<std::string> failures;  // human-readable failures with witnesses

    bool passed() const {
        return subcomplex && factorization && quasi_isomorphism && stage_conditions;
    }
};

inline ApproximationReport verify_approximation(const ApproximationResult& r) {
    ApproximationReport rep;
    auto fail = [&](bool& flag, std::string msg) {
        flag = false;
        rep.failures.push_back(std::move(msg));
    };
    auto structural = [&](const std::string& msg) {
        rep.subcomplex = rep.factorization = rep.quasi_isomorphism = rep.stage_conditions = false;
        rep.failures.push_back("structural: " + msg);
        return rep;
    };
    auto same_explicit = [](const ChainComplex& a, const ChainComplex& b) {
        if (!a.is_explicit() || !b.is_explicit()) return false;
        return a.as_explicit().body.ranks == b.as_explicit().body.ranks &&
               a.as_explicit().body.boundaries == b.as_explicit().body.boundaries;
    };

    if (r.horizon < 0) return structural("negative horizon");
    if (auto v = validate(r.sub); !v.valid) return structural("subcomplex: " + v.detail);
    if (!r.sub.is_explicit() || r.sub.as_explicit().body.degrees() != r.horizon + 1)
        return structural("subcomplex does not cover exactly the degrees through the horizon");
    if (auto v = validate_chain_map(r.inclusion); !v.valid)
        return structural("inclusion: " + v.detail);
    if (auto v = validate_chain_map(r.co_restriction); !v.valid)
        return structural("co-restriction: " + v.detail);
    if (!same_explicit(r.inclusion.source, r.sub) || !same_explicit(r.co_restriction.target, r.sub))
        return structural("maps do not run through the stored subcomplex");
    if (!same_explicit(r.inclusion.target, r.original.target) ||
        !same_explicit(r.co_restriction.source, r.original.source))
        return structural("maps do not match the original source and target");

    const ChainComplex& tgt = r.original.target;
    const long hor = r.horizon;

    std::vector<Lattice> chosen;  // generator lattices, reconstructed from the inclusion
    for (long d = 0; d <= hor; ++d) chosen.push_back(image_lattice(r.inclusion.component(d)));
    for (long d = 0; d <= hor; ++d) rep.degrees.push_back(DegreeCheck{d, true, true, true});

    // (1) the generators form a subcomplex
    for (long d = 1; d <= hor; ++d) {
        Lattice img = image_lattice(matmul(tgt.boundary_at(d), r.inclusion.component(d)));
        if (!lattice_subset(img, chosen[static_cast<std::size_t>(d - 1)])) {
            rep.degrees[static_cast<std::size_t>(d)].closure = false;
            fail(rep.subcomplex,
                 "generators at degree " + std::to_string(d) + " are not closed under the boundary");
        }
    }

    // (2) the original map factors exactly through the subcomplex
    long n = std::max(r.original.degree_count(),
                      std::max(r.inclusion.degree_count(), r.co_restriction.degree_count()));
    for (long d = 0; d < n; ++d) {
        if (!(r.original.component(d) ==
              matmul(r.inclusion.component(d), r.co_restriction.component(d))))
            fail(rep.factorization, "factorization fails at degree " + std::to_string(d));
    }

    // (3) the cone of the inclusion is exact through the horizon, which encodes
    // homology isomorphism below it and surjectivity at it
    ChainComplex cone = mapping_cone(r.sub, tgt, r.inclusion.components);
    for (long d = 0; d <= hor; ++d) {
        Lattice zc = kernel_lattice(detail::boundary_or_top(cone, d));
        Lattice bc = image_lattice(cone.boundary_at(d + 1));
        if (!lattice_eq(zc, bc)) {
            rep.cone_failures.push_back(d);
            fail(rep.quasi_isomorphism,
                 "the cone of the inclusion is not exact at degree " + std::to_string(d));
        }
    }

    // (4) degreewise homology conditions, checked on the level of integral
    // lattices (so torsion discrepancies are caught), plus stage bookkeeping
    for (long d = 0; d <= hor; ++d) {
        IntMatrix inc_d = r.inclusion.component(d);
        Lattice cyc_sub = kernel_lattice(detail::boundary_or_top(r.sub, d));
        Lattice cycles_in_tgt = image_lattice(matmul(inc_d, cyc_sub.basis_matrix()));
        Lattice z_tgt = kernel_lattice(detail::boundary_or_top(tgt, d));
        Lattice b_tgt = image_lattice(tgt.boundary_at(d + 1));
        if (!lattice_eq(lattice_sum(cycles_in_tgt, b_tgt), z_tgt)) {
            rep.degrees[static_cast<std::size_t>(d)].surjection = false;
            fail(rep.stage_conditions, "homology classes of the target at degree " +
                                           std::to_string(d) + " are not all covered");
        }
        if (d < hor) {
            Lattice dying = preimage_lattice(inc_d, b_tgt);
            Lattice b_sub = image_lattice(r.sub.boundary_at(d + 1));
            if (!lattice_subset(dying, b_sub)) {
                rep.degrees[static_cast<std::size_t>(d)].injection = false;
                fail(rep.stage_conditions, "a class at degree " + std::to_string(d) +
                                               " dies in the target but not in the subcomplex");
            }
        }
    }

    if (static_cast<long>(r.stages.size()) != hor + 1) {
        fail(rep.stage_conditions, "expected one recorded stage per degree through the horizon");
    } else {
        for (long s = 0; s <= hor; ++s) {
            const FiltrationStage& st = r.stages[static_cast<std::size_t>(s)];
            if (st.degree != s || static_cast<long>(st.filtration.size()) != s + 1) {
                fail(rep.stage_conditions,
                     "stage " + std::to_string(s) + " bookkeeping is inconsistent");
                continue;
            }
            for (long j = 0; j <= s; ++j) {
                if (!lattice_eq(st.filtration[static_cast<std::size_t>(j)],
                                chosen[static_cast<std::size_t>(j)])) {
                    fail(rep.stage_conditions, "stage " + std::to_string(s) +
                                                   " generators at degree " + std::to_string(j) +
                                                   " disagree with the inclusion");
                    break;
                }
            }
            long rd = tgt.rank_at(s);
            if (st.image_part.dim != rd || st.cycle_part.dim != rd || st.lift_part.dim != rd) {
                fail(rep.stage_conditions, "stage " + std::to_string(s) +
                                               " parts live in the wrong ambient dimension");
            } else if (!lattice_eq(lattice_sum(st.image_part,
                                               lattice_sum(st.cycle_part, st.lift_part)),
                                   st.filtration[static_cast<std::size_t>(s)])) {
                fail(rep.stage_conditions, "stage " + std::to_string(s) +
                                               " parts do not span the recorded generators");
            }
        }
    }

    return rep;
}

}  // namespace hoelder
