#pragma once

// Named axiom systems: partial weak lattices, negations, implication
// properties, rough convenience quasi-orders (RCQO), RCQO aggregation
// implication algebras (RQOAI) and the ER companion model.
//
// Equality conventions, fixed for every suite:
//   - plain "=" between terms that may be undefined is ω*-equality
//     (both undefined, or both defined and equal);
//   - "=" in an antecedent (wl12, wl34, G5) is strong equality;
//   - ≤ and P are vacuously true on an undefined argument;
//   - implication properties use ω-equality throughout.

#include "erc/check.hpp"
#include "erc/formula.hpp"
#include "erc/structure.hpp"

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace erc {

class suite_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// How an axiom that mentions l/u is quantified over the operator families.
enum class IndexPolicy {
    once,  // no l/u inside; evaluated a single time
    every, // must hold at every index i
    some   // the `some` axioms of a suite must all hold at one common index
};

struct Axiom {
    Formula formula;
    IndexPolicy policy = IndexPolicy::once;
    const std::string& name() const { return formula.name; }
};

struct AxiomSuite {
    std::string name;
    std::vector<Axiom> axioms;
    /// Operations bound to an everywhere-undefined table when absent.
    std::set<std::string> optional_ops;

    /// Sub-suite with the named axioms, in suite order.
    AxiomSuite select(const std::vector<std::string>& names) const
    {
        AxiomSuite out{name, {}, optional_ops};
        for (const auto& n : names)
            if (std::none_of(axioms.begin(), axioms.end(), [&](const Axiom& a) { return a.name() == n; }))
                throw suite_error("suite '" + name + "' has no axiom '" + n + "'");
        for (const auto& a : axioms)
            if (std::find(names.begin(), names.end(), a.name()) != names.end())
                out.axioms.push_back(a);
        return out;
    }

    std::vector<Formula> formulas() const
    {
        std::vector<Formula> out;
        for (const auto& a : axioms)
            out.push_back(a.formula);
        return out;
    }
};

namespace detail {

inline bool uses_parthood(const Expr& e)
{
    if (e.kind() == Expr::Kind::atom && e.atom_kind() == AtomKind::part)
        return true;
    return std::any_of(e.children().begin(), e.children().end(), [](const Expr& c) { return uses_parthood(c); });
}

inline void add(AxiomSuite& s, Formula f, IndexPolicy p = IndexPolicy::once)
{
    for (const auto& a : s.axioms)
        if (a.name() == f.name)
            throw suite_error("duplicate axiom '" + f.name + "' in suite '" + s.name + "'");
    if (p == IndexPolicy::once) {
        auto ops = operations_of(f.body);
        if (ops.contains("l") || ops.contains("u"))
            p = IndexPolicy::every;
    }
    s.axioms.push_back({std::move(f), p});
}

} // namespace detail

// ---------------------------------------------------------------------------
// Suite definitions

inline AxiomSuite partial_weak_lattice_suite()
{
    using namespace fol;
    STerm a = var(0), b = var(1), c = var(2);
    auto meet = [](STerm x, STerm y) { return op("wedge", x, y); };
    auto join = [](STerm x, STerm y) { return op("vee", x, y); };
    AxiomSuite s{"pwl", {}, {}};
    detail::add(s, forall("wpl1", {"a", "b", "c"},
                          wseq(meet(a, a), a) && wseq(a, join(a, a)) && weq(meet(meet(a, b), c), meet(a, meet(b, c)))));
    detail::add(s, forall("wpl2", {"a", "b", "c"}, weq(join(join(a, b), c), join(a, join(b, c)))));
    detail::add(s, forall("wpl3", {"a", "b"},
                          weq(join(meet(a, b), a), a) && weq(meet(a, b), meet(b, a)) && weq(join(a, b), join(b, a))));
    return s;
}

inline AxiomSuite negation_suite(bool strong, const std::string& neg = "n")
{
    using namespace fol;
    STerm a = var(0), b = var(1);
    auto n = [&](STerm x) { return op(neg, x); };
    AxiomSuite s{strong ? "strong-negation" : "negation", {}, {}};
    detail::add(s, forall("N1", {}, wseq(n(bot()), top()) && wseq(n(top()), bot())));
    detail::add(s, forall("N2", {"a", "b"}, implies(leq(a, b), leq(n(b), n(a)))));
    if (strong) {
        detail::add(s, forall("N3", {"a"}, wseq(n(n(a)), a)));
        detail::add(s, forall("N4", {"a"},
                              iff(wseq(n(a), bot()) || wseq(n(a), top()), seq(a, bot()) || seq(a, top()))));
    }
    return s;
}

/// The properties FPA … T4 for a binary operation, in this order.
inline const std::vector<std::string>& implication_property_names()
{
    static const std::vector<std::string> names{"FPA", "SPM", "BC1", "BC2", "BC3", "LNP", "EP",
                                                "OP",  "IBL", "CB",  "IP",  "T3",  "T4"};
    return names;
}

inline Formula implication_property(const std::string& property, const std::string& imp,
                                    const std::string& prefix = "")
{
    using namespace fol;
    STerm a = var(0), b = var(1), c = var(2);
    auto i = [&](STerm x, STerm y) { return op(imp, x, y); };
    std::string name = prefix + property;
    if (property == "FPA")
        return forall(name, {"a", "b", "c"}, implies(leq(a, b), leq(i(b, c), i(a, c))));
    if (property == "SPM")
        return forall(name, {"a", "b", "c"}, implies(leq(b, c), leq(i(a, b), i(a, c))));
    if (property == "BC1")
        return forall(name, {}, weq(i(bot(), bot()), top()));
    if (property == "BC2")
        return forall(name, {}, weq(i(top(), top()), top()));
    if (property == "BC3")
        return forall(name, {}, weq(i(top(), bot()), bot()));
    if (property == "LNP")
        return forall(name, {"x"}, weq(i(top(), a), a));
    if (property == "EP")
        return forall(name, {"a", "b", "c"}, weq(i(a, i(b, c)), i(b, i(a, c))));
    if (property == "OP")
        return forall(name, {"a", "b"}, implies(defined(i(a, b)), iff(seq(i(a, b), top()), leq(a, b))));
    if (property == "IBL")
        return forall(name, {"a", "b"}, weq(i(a, i(a, b)), i(a, b)));
    if (property == "CB")
        return forall(name, {"a", "b"}, leq(b, i(a, b)));
    if (property == "IP")
        return forall(name, {"a"}, weq(i(a, a), top()));
    if (property == "T3")
        return forall(name, {"a", "b", "c"}, weq(i(a, i(b, c)), i(i(a, b), i(a, c))));
    if (property == "T4")
        return forall(name, {"a", "b"}, weq(i(i(a, b), b), i(i(b, a), a)));
    throw suite_error("unknown implication property '" + property + "'");
}

inline AxiomSuite implication_suite(const std::string& suite_name, const std::vector<std::string>& properties,
                                    const std::string& imp = "imp", const std::string& prefix = "")
{
    AxiomSuite s{suite_name, {}, {}};
    for (const auto& p : properties)
        detail::add(s, implication_property(p, imp, prefix));
    return s;
}

inline AxiomSuite implication_core_suite(const std::string& imp = "imp")
{
    return implication_suite("implication-core", {"FPA", "SPM", "BC1", "BC2", "BC3"}, imp);
}

inline AxiomSuite implication_extras_suite(const std::string& imp = "imp")
{
    return implication_suite("implication-extras", {"LNP", "EP", "OP", "IBL", "CB", "IP", "T3", "T4"}, imp);
}

/// Axioms of a rough convenience quasi-order, names prefixed by `prefix`.
inline std::vector<Formula> rcqo_axioms(const std::string& prefix = "")
{
    using namespace fol;
    STerm a = var(0), b = var(1), c = var(2);
    auto meet = [](STerm x, STerm y) { return op("wedge", x, y); };
    auto join = [](STerm x, STerm y) { return op("vee", x, y); };
    STerm x = var(0);
    return {
        forall(prefix + "bqo", {"a", "b", "c"},
               leq(a, a) && implies(leq(a, b) && leq(b, c), leq(a, c)) && leq(bot(), a) && leq(a, top())),
        forall(prefix + "wl12", {"a", "b"}, implies(seq(join(a, b), b) || seq(meet(a, b), a), leq(a, b))),
        forall(prefix + "wl34", {"a", "b", "c"}, implies(seq(join(a, b), c) || seq(meet(c, b), a), leq(a, c))),
        forall(prefix + "qlu1", {"x"},
               wseq(lo(lo(x)), lo(x)) && leq(lo(x), x) && leq(x, up(x)) && leq(up(x), up(up(x)))),
        forall(prefix + "qlu-mo", {"a", "b"},
               implies(leq(a, b), leq(lo(a), lo(b))) && implies(leq(a, b), leq(up(a), up(b)))),
        forall(prefix + "qlu23", {"a", "b"},
               weq(join(up(a), up(b)), up(join(a, b))) && weq(lo(meet(a, b)), meet(lo(a), lo(b)))),
        forall(prefix + "topbot", {}, wseq(up(top()), top()) && wseq(lo(bot()), bot()) && wseq(up(bot()), bot())),
    };
}

inline AxiomSuite rcqo_suite()
{
    AxiomSuite s{"rcqo", {}, {"vee", "wedge"}};
    for (auto& f : rcqo_axioms())
        detail::add(s, std::move(f), IndexPolicy::every);
    return s;
}

inline AxiomSuite rqoai_suite()
{
    using namespace fol;
    STerm a = var(0), b = var(1), c = var(2), e = var(2);
    auto ot = [](STerm x, STerm y) { return op("otimes", x, y); };
    auto dot = [](STerm x, STerm y) { return op("cdot", x, y); };
    auto join = [](STerm x, STerm y) { return op("vee", x, y); };
    auto closed = [](STerm x) { return wseq(up(up(x)), up(x)); };

    AxiomSuite s{"rqoai", {}, {"vee", "wedge"}};
    for (auto& f : rcqo_axioms("rcl:"))
        detail::add(s, std::move(f), IndexPolicy::every);
    detail::add(s, forall("wAasso1", {"a", "b", "e"},
                          implies(closed(a) && closed(b) && closed(e), wseq(ot(a, ot(b, e)), ot(ot(a, b), e)))),
                IndexPolicy::every);
    // taken verbatim: e occurs only on the left and c only on the right
    {
        STerm e2 = var(2), c2 = var(3);
        detail::add(s, forall("wAsso2", {"a", "b", "e", "c"},
                              weq(ot(a, ot(join(b, e2), a)), ot(ot(join(a, b), c2), c2))));
    }
    for (const char* p : {"FPA", "SPM", "BC3", "IBL"})
        detail::add(s, implication_property(p, "imp_sim", "imsc:"));
    for (const char* p : {"FPA", "IP", "SPM", "BC1", "BC2", "BC3"})
        detail::add(s, implication_property(p, "imp_neg", "inegc:"));

    detail::add(s, forall("cdot-comm", {"a", "b"}, wseq(dot(a, b), dot(b, a))));
    detail::add(s, forall("cdot-assoc", {"a", "b", "c"}, wseq(dot(a, dot(b, c)), dot(dot(a, b), c))));
    detail::add(s, forall("cdot-order", {"a", "b", "c"}, implies(leq(a, b), leq(dot(a, c), dot(b, c)))));
    detail::add(s, forall("cdot-unit", {"a"}, wseq(dot(a, bot()), a)));
    detail::add(s, forall("otimes-comm", {"a", "b"}, wseq(ot(a, b), ot(b, a))));
    detail::add(s, forall("otimes-order", {"a", "b", "c"}, implies(leq(a, b), leq(ot(a, c), ot(b, c)))));
    detail::add(s, forall("otimes-unit", {"a"}, wseq(ot(a, top()), a)));
    (void)e;
    return s;
}

inline AxiomSuite er_companion_suite()
{
    using namespace fol;
    STerm a = var(0), b = var(1), c = var(2), x = var(0);
    auto meet = [](STerm p, STerm q) { return op("wedge", p, q); };
    auto join = [](STerm p, STerm q) { return op("vee", p, q); };

    AxiomSuite s{"er-companion", {}, {"vee", "wedge"}};
    detail::add(s, forall("PT1", {"x"}, part(x, x)));
    detail::add(s, forall("PT2", {"x", "b"}, implies(part(x, b) && part(b, x), seq(x, b))));
    detail::add(s, forall("G1", {"a", "b"}, weq(join(a, b), join(b, a)) && weq(meet(a, b), meet(b, a))));
    detail::add(s, forall("G2", {"a", "b"}, weq(meet(join(a, b), a), a) && weq(join(meet(a, b), a), a)));
    detail::add(s, forall("G3", {"a", "b", "c"}, weq(join(meet(a, b), c), meet(join(a, c), join(b, c)))));
    detail::add(s, forall("G4", {"a", "b", "c"}, weq(meet(join(a, b), c), join(meet(a, c), meet(b, c)))));
    detail::add(s, forall("G5", {"a", "b"},
                          implies(defined(join(a, b)), iff(leq(a, b), seq(join(a, b), b))) &&
                              implies(defined(meet(a, b)), iff(leq(a, b), seq(meet(a, b), a)))));
    detail::add(s, forall("UL1", {"a"}, part(lo(a), a) && wseq(lo(lo(a)), lo(a)) && part(up(a), up(up(a)))),
                IndexPolicy::some);
    detail::add(s, forall("UL2", {"a", "b"}, implies(part(a, b), part(lo(a), lo(b)) && part(up(a), up(b)))),
                IndexPolicy::some);
    detail::add(s, forall("UL3", {},
                          wseq(lo(bot()), bot()) && wseq(up(bot()), bot()) && part(lo(top()), top()) &&
                              part(up(top()), top())),
                IndexPolicy::some);
    detail::add(s, forall("TB", {"a"}, part(bot(), a) && part(a, top())));
    for (auto& f : rcqo_axioms("rcl:"))
        detail::add(s, std::move(f), IndexPolicy::every);
    return s;
}

/// Registry of every named suite; built once, never modified.
inline const std::map<std::string, AxiomSuite>& suite_registry()
{
    static const std::map<std::string, AxiomSuite> registry = [] {
        std::map<std::string, AxiomSuite> r;
        for (AxiomSuite s : {partial_weak_lattice_suite(), negation_suite(false), negation_suite(true),
                             implication_core_suite(), implication_extras_suite(), rcqo_suite(), rqoai_suite(),
                             er_companion_suite()})
            r.emplace(s.name, std::move(s));
        return r;
    }();
    return registry;
}

inline const AxiomSuite& find_suite(const std::string& name)
{
    const auto& r = suite_registry();
    auto it = r.find(name);
    if (it == r.end())
        throw suite_error("unknown suite '" + name + "'");
    return it->second;
}

// ---------------------------------------------------------------------------
// Checking

struct AxiomResult {
    CheckReport report;
    IndexPolicy policy = IndexPolicy::once;
    friend bool operator==(const AxiomResult&, const AxiomResult&) = default;
};

struct SuiteReport {
    std::string suite;
    bool applicable = true;
    /// Signature pieces the structure lacks (when not applicable).
    std::vector<std::string> missing;
    bool holds = true;
    std::vector<AxiomResult> axioms;
    /// Index at which the `some` group held, if the suite has one.
    std::optional<std::size_t> chosen_index;

    std::vector<std::string> failing() const
    {
        std::vector<std::string> out;
        for (const auto& a : axioms)
            if (!a.report.holds)
                out.push_back(a.report.name);
        return out;
    }
    friend bool operator==(const SuiteReport&, const SuiteReport&) = default;
};

/// Signature pieces a suite needs that `s` lacks.
inline std::vector<std::string> missing_signature(const FiniteStructure& s, const AxiomSuite& suite)
{
    std::set<std::string> ops, consts;
    bool parthood = false;
    for (const auto& a : suite.axioms) {
        ops.merge(operations_of(a.formula.body));
        consts.merge(constants_of(a.formula.body));
        parthood = parthood || detail::uses_parthood(a.formula.body);
    }
    std::vector<std::string> missing;
    for (const auto& o : ops) {
        if (o == "l" || o == "u") {
            if (s.family(o == "l" ? Family::lower : Family::upper).empty())
                missing.push_back(o);
        }
        else if (!s.has_op(o) && !suite.optional_ops.contains(o))
            missing.push_back(o);
    }
    for (const auto& c : consts)
        if (!s.constants.contains(c))
            missing.push_back(c);
    if (parthood && !s.parthood)
        missing.push_back("parthood");
    return missing;
}

inline SuiteReport check_suite(const FiniteStructure& structure, const AxiomSuite& suite, unsigned workers = 1)
{
    SuiteReport out;
    out.suite = suite.name;
    out.missing = missing_signature(structure, suite);
    if (!out.missing.empty()) {
        out.applicable = false;
        out.holds = false;
        return out;
    }

    FiniteStructure s = structure;
    for (const auto& o : suite.optional_ops)
        if (!s.has_op(o))
            s.ops[o] = OpTable(default_arity(o).value_or(2), s.size());

    const std::size_t families = std::max<std::size_t>(1, s.family_count());
    out.axioms.resize(suite.axioms.size());

    for (std::size_t k = 0; k < suite.axioms.size(); ++k) {
        const Axiom& ax = suite.axioms[k];
        out.axioms[k].policy = ax.policy;
        if (ax.policy == IndexPolicy::once) {
            out.axioms[k].report = check_formula(s, ax.formula, {0, workers});
        }
        else if (ax.policy == IndexPolicy::every) {
            CheckReport r;
            for (std::size_t i = 0; i < families; ++i) {
                r = check_formula(s, ax.formula, {i, workers});
                if (!r.holds)
                    break;
            }
            out.axioms[k].report = r;
        }
    }

    std::vector<std::size_t> some;
    for (std::size_t k = 0; k < suite.axioms.size(); ++k)
        if (suite.axioms[k].policy == IndexPolicy::some)
            some.push_back(k);
    if (!some.empty()) {
        std::vector<CheckReport> first;
        for (std::size_t i = 0; i < families && !out.chosen_index; ++i) {
            std::vector<CheckReport> at_i;
            bool all = true;
            for (std::size_t k : some) {
                at_i.push_back(check_formula(s, suite.axioms[k].formula, {i, workers}));
                all = all && at_i.back().holds;
            }
            if (i == 0)
                first = at_i;
            if (all) {
                out.chosen_index = i;
                first = at_i;
            }
        }
        for (std::size_t j = 0; j < some.size(); ++j)
            out.axioms[some[j]].report = first[j];
    }

    out.holds = std::all_of(out.axioms.begin(), out.axioms.end(), [](const AxiomResult& a) { return a.report.holds; });
    return out;
}

inline SuiteReport check_suite(const FiniteStructure& s, const std::string& name, unsigned workers = 1)
{
    return check_suite(s, find_suite(name), workers);
}

enum class Verdict { holds, fails, not_applicable };

inline std::string to_string(Verdict v)
{
    switch (v) {
    case Verdict::holds: return "holds";
    case Verdict::fails: return "fails";
    case Verdict::not_applicable: return "not-applicable";
    }
    return "?";
}

inline Verdict verdict_of(const SuiteReport& r)
{
    if (!r.applicable)
        return Verdict::not_applicable;
    return r.holds ? Verdict::holds : Verdict::fails;
}

/// Runs every registered suite; suites nest, so several may hold at once.
inline std::map<std::string, SuiteReport> classify_structure(const FiniteStructure& s)
{
    std::map<std::string, SuiteReport> out;
    for (const auto& [name, suite] : suite_registry())
        out.emplace(name, check_suite(s, suite));
    return out;
}

/// Verdict of each of FPA … T4 for the binary operation `op`.
inline std::vector<std::pair<std::string, bool>> implication_property_table(const FiniteStructure& s,
                                                                            const std::string& op)
{
    auto it = s.ops.find(op);
    if (it == s.ops.end())
        throw unknown_operation_error(op);
    if (it->second.arity() != 2)
        throw suite_error("'" + op + "' is not a binary operation");
    std::vector<std::pair<std::string, bool>> out;
    for (const auto& p : implication_property_names())
        out.emplace_back(p, check_formula(s, implication_property(p, op)).holds);
    return out;
}

} // namespace erc
