#pragma once

// JSON descriptions of the library's value types — sequences, complexes,
// chain maps, exact sequences, ledgers — plus report emission. Parsing is
// strict: rationals travel as integers or "p/q" strings (floating-point
// JSON numbers are rejected so no value is ever silently rounded), every
// error message carries the JSON path it arose at, and emission is
// deterministic so identical inputs produce identical bytes.

#include <hoelder/construct.hpp>
#include <hoelder/euler.hpp>
#include <hoelder/fmodel.hpp>
#include <hoelder/k0.hpp>
#include <hoelder/ses.hpp>

#include <json.hpp>

#include <map>
#include <string>
#include <utility>
#include <vector>

namespace hoelder::io {

using Json = nlohmann::ordered_json;

[[noreturn]] inline void fail(const std::string& where, const std::string& what) {
    throw ParseError(where + ": " + what);
}

inline const Json& field(const Json& j, const char* key, const std::string& where) {
    if (!j.is_object()) fail(where, "expected an object");
    auto it = j.find(key);
    if (it == j.end()) fail(where, std::string("missing field '") + key + "'");
    return *it;
}

inline const Json* opt_field(const Json& j, const char* key) {
    if (!j.is_object()) return nullptr;
    auto it = j.find(key);
    return it == j.end() ? nullptr : &*it;
}

inline std::string string_from_json(const Json& j, const std::string& where) {
    if (!j.is_string()) fail(where, "expected a string");
    return j.get<std::string>();
}

inline bool bool_from_json(const Json& j, const std::string& where) {
    if (!j.is_boolean()) fail(where, "expected a boolean");
    return j.get<bool>();
}

inline long long_from_json(const Json& j, const std::string& where) {
    if (j.is_number_float()) fail(where, "expected an integer, got a floating-point number");
    if (!j.is_number_integer() && !j.is_number_unsigned()) fail(where, "expected an integer");
    return static_cast<long>(j.get<long long>());
}

// --- numbers ---------------------------------------------------------------------

inline Int int_from_json(const Json& j, const std::string& where) {
    if (j.is_number_integer() || j.is_number_unsigned())
        return Int(static_cast<long>(j.get<long long>()));
    if (j.is_number_float())
        fail(where, "floating-point numbers are not accepted; write the integer as a string");
    if (j.is_string()) {
        try {
            return Int(j.get<std::string>());
        } catch (const std::invalid_argument&) {
            fail(where, "malformed integer literal '" + j.get<std::string>() + "'");
        }
    }
    fail(where, "expected an integer or an integer string");
}

inline Json int_to_json(const Int& v) {
    if (v.fits_slong_p()) return Json(static_cast<long long>(v.get_si()));
    return Json(v.get_str());
}

inline Rat rat_from_json(const Json& j, const std::string& where) {
    if (j.is_number_integer() || j.is_number_unsigned())
        return Rat(static_cast<long>(j.get<long long>()));
    if (j.is_number_float())
        fail(where,
             "floating-point numbers are not accepted; write the value as a \"p/q\" string");
    if (j.is_string()) {
        try {
            return parse_rat(j.get<std::string>());
        } catch (const ParseError& e) {
            fail(where, e.what());
        }
    }
    fail(where, "expected a rational as an integer or a \"p/q\" string");
}

inline Json rat_to_json(const Rat& r) {
    if (r.get_den() == 1 && r.get_num().fits_slong_p())
        return Json(static_cast<long long>(r.get_num().get_si()));
    return Json(rat_string(r));
}

inline std::vector<Rat> rats_from_json(const Json& j, const std::string& where) {
    if (!j.is_array()) fail(where, "expected an array of rationals");
    std::vector<Rat> out;
    for (std::size_t i = 0; i < j.size(); ++i)
        out.push_back(rat_from_json(j[i], where + "[" + std::to_string(i) + "]"));
    return out;
}

// --- matrices --------------------------------------------------------------------

inline IntMatrix matrix_from_json(const Json& j, const std::string& where) {
    long rows = long_from_json(field(j, "rows", where), where + ".rows");
    long cols = long_from_json(field(j, "cols", where), where + ".cols");
    if (rows < 0 || cols < 0) fail(where, "matrix dimensions must be non-negative");
    IntMatrix m(rows, cols);
    const Json& e = field(j, "entries", where);
    if (!e.is_array() || static_cast<long>(e.size()) != rows)
        fail(where + ".entries", "expected " + std::to_string(rows) + " row(s)");
    for (long i = 0; i < rows; ++i) {
        const Json& row = e[static_cast<std::size_t>(i)];
        std::string rw = where + ".entries[" + std::to_string(i) + "]";
        if (!row.is_array() || static_cast<long>(row.size()) != cols)
            fail(rw, "expected " + std::to_string(cols) + " entr(ies)");
        for (long k = 0; k < cols; ++k)
            m(i, k) = int_from_json(row[static_cast<std::size_t>(k)],
                                    rw + "[" + std::to_string(k) + "]");
    }
    return m;
}

inline Json matrix_to_json(const IntMatrix& m) {
    Json rows = Json::array();
    for (long i = 0; i < m.rows; ++i) {
        Json row = Json::array();
        for (long k = 0; k < m.cols; ++k) row.push_back(int_to_json(m(i, k)));
        rows.push_back(std::move(row));
    }
    return Json{{"rows", m.rows}, {"cols", m.cols}, {"entries", std::move(rows)}};
}

inline std::vector<IntMatrix> matrices_from_json(const Json& j, const std::string& where) {
    if (!j.is_array()) fail(where, "expected an array of matrices");
    std::vector<IntMatrix> out;
    for (std::size_t i = 0; i < j.size(); ++i)
        out.push_back(matrix_from_json(j[i], where + "[" + std::to_string(i) + "]"));
    return out;
}

inline Json matrices_to_json(const std::vector<IntMatrix>& ms) {
    Json out = Json::array();
    for (const IntMatrix& m : ms) out.push_back(matrix_to_json(m));
    return out;
}

// --- sequences -------------------------------------------------------------------
//
// {"kind":"eventually_periodic","preperiod":[...],"period":[...]}
// {"kind":"explicit","terms":[...],"tail":"zero"|"error"}
// {"kind":"rule","name":"<builtin rule id>","params":{...}}

inline RationalSeq seq_from_json(const Json& j, const std::string& where) {
    std::string kind = string_from_json(field(j, "kind", where), where + ".kind");
    try {
        if (kind == "eventually_periodic") {
            std::vector<Rat> pre =
                rats_from_json(field(j, "preperiod", where), where + ".preperiod");
            std::vector<Rat> per = rats_from_json(field(j, "period", where), where + ".period");
            return RationalSeq::eventually_periodic(std::move(pre), std::move(per));
        }
        if (kind == "explicit") {
            std::vector<Rat> terms = rats_from_json(field(j, "terms", where), where + ".terms");
            bool zero_tail = true;
            if (const Json* t = opt_field(j, "tail")) {
                std::string tail = string_from_json(*t, where + ".tail");
                if (tail == "zero")
                    zero_tail = true;
                else if (tail == "error")
                    zero_tail = false;
                else
                    fail(where + ".tail", "expected \"zero\" or \"error\"");
            }
            return RationalSeq::explicit_prefix(std::move(terms), zero_tail);
        }
        if (kind == "rule") {
            std::string name = string_from_json(field(j, "name", where), where + ".name");
            std::map<std::string, Rat> params;
            if (const Json* p = opt_field(j, "params")) {
                if (!p->is_object()) fail(where + ".params", "expected an object");
                for (auto it = p->begin(); it != p->end(); ++it)
                    params.emplace(it.key(),
                                   rat_from_json(it.value(), where + ".params." + it.key()));
            }
            return make_rule_seq(name, params);
        }
    } catch (const ParseError&) {
        throw;
    } catch (const Error& e) {
        fail(where, e.what());
    }
    fail(where + ".kind", "unknown sequence kind '" + kind + "'");
}

// --- chain complexes -------------------------------------------------------------
//
// {"kind":"explicit","ranks":[...],"boundaries":[matrix,...]}
// {"kind":"periodic","preperiod":{block},"repeat":{block},
//  "seam_from_preperiod":matrix?,"seam_wrap":matrix?}
// {"kind":"homology_only","hranks":<sequence>,"zero_differentials":bool?}
// {"kind":"builtin","name":...,"params":{...}}

inline std::vector<long> longs_from_json(const Json& j, const std::string& where) {
    if (!j.is_array()) fail(where, "expected an array of integers");
    std::vector<long> out;
    for (std::size_t i = 0; i < j.size(); ++i)
        out.push_back(long_from_json(j[i], where + "[" + std::to_string(i) + "]"));
    return out;
}

inline ExplicitBlock block_from_json(const Json& j, const std::string& where) {
    ExplicitBlock b;
    b.ranks = longs_from_json(field(j, "ranks", where), where + ".ranks");
    if (const Json* m = opt_field(j, "boundaries")) {
        b.boundaries = matrices_from_json(*m, where + ".boundaries");
    } else {
        for (std::size_t i = 0; i + 1 < b.ranks.size(); ++i)
            b.boundaries.emplace_back(b.ranks[i], b.ranks[i + 1]);
    }
    return b;
}

inline Json block_to_json(const ExplicitBlock& b) {
    return Json{{"ranks", b.ranks}, {"boundaries", matrices_to_json(b.boundaries)}};
}

inline ChainComplex complex_from_json(const Json& j, const std::string& where) {
    std::string kind = string_from_json(field(j, "kind", where), where + ".kind");
    try {
        if (kind == "explicit") {
            ExplicitBlock b = block_from_json(j, where);
            ChainComplex c =
                ChainComplex::explicit_complex(std::move(b.ranks), std::move(b.boundaries));
            if (ValidationReport r = validate(c); !r.valid) fail(where, r.detail);
            return c;
        }
        if (kind == "periodic") {
            ExplicitBlock pre;
            if (const Json* p = opt_field(j, "preperiod"))
                pre = block_from_json(*p, where + ".preperiod");
            ExplicitBlock rep = block_from_json(field(j, "repeat", where), where + ".repeat");
            if (rep.ranks.empty()) fail(where + ".repeat.ranks", "repeat block is empty");
            long pre_tail = pre.ranks.empty() ? 0 : pre.ranks.back();
            long rep_head = rep.ranks.front();
            long rep_tail = rep.ranks.back();
            IntMatrix seam_pre(pre_tail, rep_head);
            IntMatrix seam_wrap(rep_tail, rep_head);
            if (const Json* s = opt_field(j, "seam_from_preperiod"))
                seam_pre = matrix_from_json(*s, where + ".seam_from_preperiod");
            if (const Json* s = opt_field(j, "seam_wrap"))
                seam_wrap = matrix_from_json(*s, where + ".seam_wrap");
            ChainComplex c = ChainComplex::periodic(std::move(pre), std::move(rep),
                                                    std::move(seam_pre), std::move(seam_wrap));
            if (ValidationReport r = validate(c); !r.valid) fail(where, r.detail);
            return c;
        }
        if (kind == "homology_only") {
            RationalSeq h = seq_from_json(field(j, "hranks", where), where + ".hranks");
            bool zero_diff = false;
            if (const Json* z = opt_field(j, "zero_differentials"))
                zero_diff = bool_from_json(*z, where + ".zero_differentials");
            ChainComplex c = ChainComplex::homology_only(std::move(h), zero_diff);
            if (ValidationReport r = validate(c); !r.valid) fail(where, r.detail);
            return c;
        }
        if (kind == "builtin") {
            std::string name = string_from_json(field(j, "name", where), where + ".name");
            if (name == "even_z") return one_over_m(1);
            if (name == "one_over_m") {
                const Json& p = field(j, "params", where);
                long m = long_from_json(field(p, "m", where + ".params"), where + ".params.m");
                return one_over_m(m);
            }
            if (name == "wedge_all_spheres" || name == "wedge_odd_spheres" || name == "point")
                return topology_builtin(name);
            fail(where + ".name", "unknown builtin '" + name + "'");
        }
    } catch (const ParseError&) {
        throw;
    } catch (const Error& e) {
        fail(where, e.what());
    }
    fail(where + ".kind", "unknown complex kind '" + kind + "'");
}

// Explicit and periodic complexes serialize losslessly; homology-only
// complexes are backed by opaque term generators and do not.
inline Json complex_to_json(const ChainComplex& c) {
    if (c.is_explicit()) {
        Json out = block_to_json(c.as_explicit().body);
        Json with_kind{{"kind", "explicit"}};
        with_kind.update(out);
        return with_kind;
    }
    if (c.is_periodic()) {
        const auto& p = c.as_periodic();
        return Json{{"kind", "periodic"},
                    {"preperiod", block_to_json(p.preperiod)},
                    {"repeat", block_to_json(p.repeat)},
                    {"seam_from_preperiod", matrix_to_json(p.seam_from_preperiod)},
                    {"seam_wrap", matrix_to_json(p.seam_wrap)}};
    }
    throw PreconditionError("homology-only complexes do not serialize to JSON");
}

// --- exact sequences, chain maps, ledgers ----------------------------------------

inline SesSpec ses_from_json(const Json& j, const std::string& where) {
    return SesSpec{complex_from_json(field(j, "A", where), where + ".A"),
                   complex_from_json(field(j, "B", where), where + ".B"),
                   complex_from_json(field(j, "C", where), where + ".C"),
                   matrices_from_json(field(j, "f", where), where + ".f"),
                   matrices_from_json(field(j, "g", where), where + ".g")};
}

inline ChainMap chain_map_from_json(const Json& j, const std::string& where) {
    return ChainMap{complex_from_json(field(j, "C", where), where + ".C"),
                    complex_from_json(field(j, "D", where), where + ".D"),
                    matrices_from_json(field(j, "f", where), where + ".f")};
}

inline K0Ledger ledger_from_json(const Json& j, const std::string& where) {
    K0Ledger led;
    const Json& gens = field(j, "generators", where);
    if (!gens.is_object()) fail(where + ".generators", "expected an object of named complexes");
    for (auto it = gens.begin(); it != gens.end(); ++it)
        led.add_generator(it.key(),
                          complex_from_json(it.value(), where + ".generators." + it.key()));
    const Json& rels = field(j, "relations", where);
    if (!rels.is_array()) fail(where + ".relations", "expected an array of relations");
    for (std::size_t i = 0; i < rels.size(); ++i) {
        const Json& r = rels[i];
        std::string rw = where + ".relations[" + std::to_string(i) + "]";
        std::string kind = string_from_json(field(r, "kind", rw), rw + ".kind");
        if (kind == "weq") {
            WeqRel w;
            w.lhs = string_from_json(field(r, "lhs", rw), rw + ".lhs");
            w.rhs = string_from_json(field(r, "rhs", rw), rw + ".rhs");
            if (const Json* m = opt_field(r, "map"))
                w.map = matrices_from_json(*m, rw + ".map");
            if (const Json* d = opt_field(r, "equal_ranks_declared"))
                w.equal_ranks_declared = bool_from_json(*d, rw + ".equal_ranks_declared");
            led.add_relation(std::move(w));
        } else if (kind == "cofib") {
            CofibRel c;
            c.sub = string_from_json(field(r, "sub", rw), rw + ".sub");
            c.total = string_from_json(field(r, "total", rw), rw + ".total");
            c.quotient = string_from_json(field(r, "quotient", rw), rw + ".quotient");
            if (const Json* m = opt_field(r, "injection"))
                c.injection = matrices_from_json(*m, rw + ".injection");
            if (const Json* m = opt_field(r, "projection"))
                c.projection = matrices_from_json(*m, rw + ".projection");
            led.add_relation(std::move(c));
        } else {
            fail(rw + ".kind", "expected \"weq\" or \"cofib\"");
        }
    }
    return led;
}

// --- report emission -------------------------------------------------------------

inline Json hlimit_to_json(const HLimitResult& r) {
    Json out{{"status", limit_status_string(r.status)}};
    if (r.value.has_value()) {
        out["value"] = rat_string(*r.value);
        out["value_decimal"] = decimal_string(*r.value);
    }
    out["k_used"] = r.k_used;
    out["n_used"] = r.n_used;
    out["window"] = r.window;
    if (r.oscillation.has_value()) out["oscillation"] = rat_string(*r.oscillation);
    out["notes"] = r.notes;
    return out;
}

inline Json chi_report_to_json(const ChiReport& r) {
    return Json{{"chi", hlimit_to_json(r.chi)},
                {"preadmissible", tri_string(r.preadmissible)},
                {"preadmissible_certificate", limit_status_string(r.preadmissible_certificate)},
                {"admissible", tri_string(r.admissible)},
                {"admissible_certificate", limit_status_string(r.admissible_certificate)},
                {"notes", r.notes}};
}

inline Json validation_to_json(const ValidationReport& r) {
    return Json{{"valid", r.valid}, {"detail", r.detail}};
}

inline Json greedy_state_to_json(const GreedyState& s) {
    return Json{{"target", rat_string(s.target)},
                {"lower", s.lower},
                {"upper", s.upper},
                {"index", s.index},
                {"running_sum", int_to_json(s.running_sum)},
                {"low_phase", s.low_phase},
                {"blocks", s.blocks}};
}

inline Json greedy_check_to_json(const GreedyCheck& c) {
    return Json{{"first_crossing_index", c.first_crossing_index},
                {"crossings", c.crossings},
                {"max_deviation", rat_string(c.max_deviation)},
                {"max_deviation_decimal", decimal_string(c.max_deviation)},
                {"amplitude_bound", rat_string(c.amplitude_bound)},
                {"within_bound", c.within_bound}};
}

inline Json additivity_to_json(const ChiAdditivityReport& r) {
    return Json{{"chi_sub", rat_string(r.chi_a)},
                {"chi_total", rat_string(r.chi_b)},
                {"chi_quotient", rat_string(r.chi_c)},
                {"evidence", limit_status_string(r.evidence)},
                {"holds", r.holds},
                {"detail", r.detail}};
}

inline Json approx_result_to_json(const ApproximationResult& r) {
    Json stages = Json::array();
    for (const FiltrationStage& s : r.stages) {
        Json filt = Json::array();
        for (const Lattice& l : s.filtration) filt.push_back(l.rank());
        stages.push_back(Json{{"degree", s.degree},
                              {"filtration_ranks", std::move(filt)},
                              {"image_rank", s.image_part.rank()},
                              {"cycle_rank", s.cycle_part.rank()},
                              {"lift_rank", s.lift_part.rank()},
                              {"killed_cycles_rank", s.killed_cycles.rank()},
                              {"lifted_generators", s.lifted_generators}});
    }
    return Json{{"sub", complex_to_json(r.sub)},
                {"inclusion", matrices_to_json(r.inclusion.components)},
                {"co_restriction", matrices_to_json(r.co_restriction.components)},
                {"horizon", r.horizon},
                {"stages", std::move(stages)}};
}

inline Json approx_report_to_json(const ApproximationReport& r) {
    Json degrees = Json::array();
    for (const DegreeCheck& d : r.degrees)
        degrees.push_back(Json{{"degree", d.degree},
                               {"closure", d.closure},
                               {"surjection", d.surjection},
                               {"injection", d.injection}});
    return Json{{"passed", r.passed()},
                {"subcomplex", r.subcomplex},
                {"factorization", r.factorization},
                {"quasi_isomorphism", r.quasi_isomorphism},
                {"stage_conditions", r.stage_conditions},
                {"cone_failures", r.cone_failures},
                {"degrees", std::move(degrees)},
                {"failures", r.failures}};
}

inline Json ledger_report_to_json(const LedgerReport& r) {
    Json rels = Json::array();
    for (const RelationCheck& c : r.relations)
        rels.push_back(Json{{"index", c.index},
                            {"kind", c.kind},
                            {"witness_ok", c.witness_ok},
                            {"balanced", c.balanced},
                            {"certificate", limit_status_string(c.certificate)},
                            {"detail", c.detail}});
    return Json{{"all_passed", r.all_passed()}, {"relations", std::move(rels)}};
}

}  // namespace hoelder::io
