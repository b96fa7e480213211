#pragma once

// Finite ledger presentation of the class group generated by chain
// complexes: named generator complexes, relations carried together with
// checkable witness data, an auditor verifying that the averaged
// characteristic respects every recorded relation, and witness
// constructions realizing any requested value as the characteristic of a
// ledger generator.
//
// The group itself is never materialized; the ledger only stores the
// presentation data, and every query is answered by exact computation on
// the carried complexes. Quotients with torsion admit no valid extension
// witness here: the exactness check compares the injection's image against
// the saturated kernel of the projection, so a cokernel with torsion can
// never be presented by any recorded projection.

#include <hoelder/construct.hpp>
#include <hoelder/euler.hpp>
#include <hoelder/fmodel.hpp>
#include <hoelder/ses.hpp>

#include <algorithm>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace hoelder {

// Relation declaring two generators interchangeable. Two witness modes:
//   - a carried chain map lhs -> rhs whose cone is checked to be exact in
//     every degree (a homology equivalence; decidable because the carried
//     complexes are finite), or
//   - a declared certificate (equal_ranks_declared) that the two signed
//     homology rank sequences eventually agree, re-verified at check time.
struct WeqRel {
    std::string lhs;
    std::string rhs;
    std::vector<IntMatrix> map;  // degreewise lhs -> rhs; ignored when declared
    bool equal_ranks_declared = false;
};

// Relation splitting a generator along a degreewise-injective map: carried
// injection and projection matrices are checked to form an exact sequence
//   0 -> sub -> total -> quotient -> 0
// degree by degree, after which the class of `total` must equal the sum of
// the classes of `sub` and `quotient`.
struct CofibRel {
    std::string sub;
    std::string total;
    std::string quotient;
    std::vector<IntMatrix> injection;   // degreewise sub -> total
    std::vector<IntMatrix> projection;  // degreewise total -> quotient
};

using K0Relation = std::variant<WeqRel, CofibRel>;

// Named generators plus relation records. Ledgers assembled through the
// constructors below always carry complete witness data; the checker
// re-verifies it rather than trusting it.
struct K0Ledger {
    std::map<std::string, ChainComplex> generators;
    std::vector<K0Relation> relations;

    // Registers (or replaces) a named generator.
    void add_generator(const std::string& name, const ChainComplex& c) {
        auto it = generators.find(name);
        if (it == generators.end())
            generators.emplace(name, c);
        else
            it->second = c;
    }

    void add_relation(K0Relation rel) { relations.push_back(std::move(rel)); }
};

// Finitely supported integer combination of generator names. Zero
// coefficients are never stored.
struct FormalSum {
    std::map<std::string, long> terms;

    static FormalSum of(const std::string& name, long coeff = 1) {
        FormalSum s;
        s.add(name, coeff);
        return s;
    }

    FormalSum& add(const std::string& name, long coeff) {
        if (coeff == 0) return *this;
        long& t = terms[name];
        t += coeff;
        if (t == 0) terms.erase(name);
        return *this;
    }

    bool empty() const { return terms.empty(); }
};

inline FormalSum operator+(FormalSum a, const FormalSum& b) {
    for (const auto& [name, coeff] : b.terms) a.add(name, coeff);
    return a;
}

inline FormalSum operator-(FormalSum a, const FormalSum& b) {
    for (const auto& [name, coeff] : b.terms) a.add(name, -coeff);
    return a;
}

inline FormalSum operator*(long k, FormalSum s) {
    if (k == 0) return FormalSum{};
    if (k != 1)
        for (auto& [name, coeff] : s.terms) coeff *= k;
    return s;
}

// Averaged characteristic of a formal combination: the coefficient-weighted
// sum of the generator values, carrying the weakest certificate that occurs
// in the support. Generators whose own characteristic cannot be certified
// are refused rather than silently folded in; the empty sum is exactly 0.
inline HLimitResult chi_on_class(const FormalSum& s, const K0Ledger& ledger,
                                 const SummabilityConfig& cfg = {}) {
    HLimitResult out;
    out.status = LimitStatus::exact;
    out.value = Rat(0);
    for (const auto& [name, coeff] : s.terms) {
        auto it = ledger.generators.find(name);
        if (it == ledger.generators.end())
            throw PreconditionError("class value: unknown generator '" + name + "'");
        ChiReport rep = chi_h(it->second, cfg);
        if (!rep.chi.has_value())
            throw PreconditionError("class value: generator '" + name +
                                    "' has no certified characteristic (" +
                                    limit_status_string(rep.chi.status) + ")");
        Rat contribution = *rep.chi.value;
        contribution *= Rat(coeff);
        Rat total = *out.value + contribution;
        out.value = total;
        out.status = detail::weaker_certificate(out.status, rep.chi.status);
        out.k_used = std::max(out.k_used, rep.chi.k_used);
        out.n_used = std::max(out.n_used, rep.chi.n_used);
    }
    out.notes.push_back("combined " + std::to_string(s.terms.size()) +
                        " weighted generator value(s)");
    return out;
}

// Outcome of auditing one relation: `witness_ok` states that the carried
// structural data verifies (the map is a homology equivalence, or the
// sequence is exact), `balanced` that the characteristic identity it
// implies holds, with the weakest certificate involved.
struct RelationCheck {
    std::size_t index = 0;
    std::string kind;  // "weak-equivalence" or "cofibration"
    bool witness_ok = false;
    bool balanced = false;
    LimitStatus certificate = LimitStatus::inconclusive;
    std::string detail;  // empty when the relation passed

    bool passed() const { return witness_ok && balanced; }
};

struct LedgerReport {
    std::vector<RelationCheck> relations;

    bool all_passed() const {
        return std::all_of(relations.begin(), relations.end(),
                           [](const RelationCheck& r) { return r.passed(); });
    }
};

namespace detail {

// Exactness of a finite explicit complex in every degree: cycles coincide
// with boundaries. Returns the first failing degree, if any.
inline std::optional<long> first_inexact_degree(const ChainComplex& c) {
    long n = c.as_explicit().body.degrees();
    for (long d = 0; d < n; ++d) {
        Lattice cycles = kernel_lattice(boundary_or_top(c, d));
        Lattice boundaries = image_lattice(c.boundary_at(d + 1));
        if (!lattice_eq(cycles, boundaries)) return d;
    }
    return std::nullopt;
}

}  // namespace detail

// Re-verifies every relation's witness data and checks the characteristic
// identity it implies. Nothing carried in the ledger is trusted.
inline LedgerReport check_relations(const K0Ledger& ledger, const SummabilityConfig& cfg = {}) {
    LedgerReport out;
    auto lookup = [&ledger](const std::string& name) -> const ChainComplex* {
        auto it = ledger.generators.find(name);
        return it == ledger.generators.end() ? nullptr : &it->second;
    };

    for (std::size_t idx = 0; idx < ledger.relations.size(); ++idx) {
        RelationCheck rc;
        rc.index = idx;
        const K0Relation& rel = ledger.relations[idx];

        if (const WeqRel* w = std::get_if<WeqRel>(&rel)) {
            rc.kind = "weak-equivalence";
            const ChainComplex* a = lookup(w->lhs);
            const ChainComplex* b = lookup(w->rhs);
            if (a == nullptr || b == nullptr) {
                rc.detail = "relation names a generator missing from the ledger";
                out.relations.push_back(std::move(rc));
                continue;
            }
            if (w->equal_ranks_declared) {
                std::optional<bool> same = eventually_equal(rank_bundle(*a).hc, rank_bundle(*b).hc);
                if (same.has_value() && *same)
                    rc.witness_ok = true;
                else
                    rc.detail =
                        "declared certificate failed: the signed homology rank sequences could "
                        "not be confirmed eventually equal";
            } else if (!a->is_explicit() || !b->is_explicit()) {
                rc.detail = "a carried map needs explicit complexes on both sides";
            } else {
                ChainMap f{*a, *b, w->map};
                ValidationReport v = validate_chain_map(f);
                if (!v.valid) {
                    rc.detail = "carried map: " + v.detail;
                } else {
                    std::optional<long> bad =
                        detail::first_inexact_degree(mapping_cone(*a, *b, w->map));
                    if (!bad.has_value())
                        rc.witness_ok = true;
                    else
                        rc.detail = "carried map is not a homology equivalence: its cone has "
                                    "homology in degree " +
                                    std::to_string(*bad);
                }
            }
            if (rc.witness_ok) {
                ChiReport ra = chi_h(*a, cfg);
                ChiReport rb = chi_h(*b, cfg);
                if (!ra.chi.has_value() || !rb.chi.has_value()) {
                    rc.detail = "a side of the relation has no certified characteristic";
                } else {
                    rc.certificate = detail::weaker_certificate(ra.chi.status, rb.chi.status);
                    Rat diff = *ra.chi.value - *rb.chi.value;
                    Rat mag = diff < 0 ? Rat(-diff) : diff;
                    rc.balanced =
                        rc.certificate == LimitStatus::exact ? diff == 0 : mag <= cfg.tol;
                    if (!rc.balanced)
                        rc.detail = "characteristics differ: " + rat_string(*ra.chi.value) +
                                    " vs " + rat_string(*rb.chi.value);
                }
            }
        } else {
            const CofibRel& c = std::get<CofibRel>(rel);
            rc.kind = "cofibration";
            const ChainComplex* a = lookup(c.sub);
            const ChainComplex* b = lookup(c.total);
            const ChainComplex* q = lookup(c.quotient);
            if (a == nullptr || b == nullptr || q == nullptr) {
                rc.detail = "relation names a generator missing from the ledger";
                out.relations.push_back(std::move(rc));
                continue;
            }
            SesSpec seq{*a, *b, *q, c.injection, c.projection};
            ValidationReport v = validate_ses(seq);
            if (!v.valid) {
                rc.detail = "carried sequence: " + v.detail;
            } else {
                rc.witness_ok = true;
                try {
                    ChiAdditivityReport add = additivity_chi_check(seq, cfg);
                    rc.certificate = add.evidence;
                    rc.balanced = add.holds;
                    if (!add.holds) rc.detail = add.detail;
                } catch (const PreconditionError& e) {
                    rc.detail = e.what();
                }
            }
        }
        out.relations.push_back(std::move(rc));
    }
    return out;
}

// A complex realizing a requested value as its averaged characteristic,
// together with the strongest certificate the construction supports:
// rational values are hit exactly; values given only as decimal
// approximations get the greedy construction for their magnitude between
// consecutive integers, whose running mean provably stays within
// amplitude_bound / n of the target once the first phase flip happens.
struct SurjectivityWitness {
    ChainComplex complex;
    LimitStatus certificate = LimitStatus::inconclusive;
    Rat target;                // the requested value
    std::optional<Rat> value;  // realized exactly, when certified exact
    std::optional<GreedyCheck> audit;           // amplitude audit of a greedy witness
    std::shared_ptr<GreedyScheduler> schedule;  // live handle into a greedy witness
    bool suspended = false;  // negative targets realize the magnitude, shifted once
    std::vector<std::string> notes;
};

// Exact route: every rational value is the characteristic of a block sum.
inline SurjectivityWitness surjectivity_witness(const Rat& r) {
    Rat q = make_rat(r.get_num(), r.get_den());
    return SurjectivityWitness{rational_target(q),
                               LimitStatus::exact,
                               q,
                               q,
                               std::nullopt,
                               nullptr,
                               false,
                               {"value realized exactly by a finite block pattern"}};
}

// Decimal route: integers delegate to the exact route; anything else gets
// the greedy construction for its magnitude, audited out to cfg.n_max, and
// one suspension when the requested value is negative.
inline SurjectivityWitness surjectivity_witness(const std::string& decimal,
                                                const SummabilityConfig& cfg = {}) {
    Rat q = rat_from_decimal(decimal);
    if (q.get_den() == 1) return surjectivity_witness(q);

    Rat mag = q < 0 ? Rat(-q) : q;
    Int whole = mag.get_num() / mag.get_den();  // mag > 0, so truncation is floor
    if (!whole.fits_slong_p())
        throw PreconditionError("witness target has an integer part too large to materialize");
    long lower = whole.get_si();
    long upper = lower + 1;

    RealTargetResult rt = real_target(mag, lower, upper);
    GreedyCheck audit = check_real_target(*rt.schedule, cfg.n_max);
    bool negative = q < 0;

    SurjectivityWitness w{negative ? shift_complex(rt.complex, 1) : rt.complex,
                          audit.within_bound ? LimitStatus::empirical
                                             : LimitStatus::inconclusive,
                          q,
                          std::nullopt,
                          audit,
                          rt.schedule,
                          negative,
                          {}};
    w.notes.push_back("greedy schedule for magnitude " + rat_string(mag) + " between " +
                      std::to_string(lower) + " and " + std::to_string(upper) +
                      ": running mean within " + rat_string(audit.amplitude_bound) +
                      "/n of the target from index " +
                      std::to_string(audit.first_crossing_index) + " out to " +
                      std::to_string(cfg.n_max) + ", " + std::to_string(audit.crossings) +
                      " crossing(s)");
    if (negative)
        w.notes.push_back("suspended once so the realized value is the negated magnitude");
    return w;
}

}  // namespace hoelder
