#pragma once

// Exhaustive model checking of universally quantified formulas over a
// finite partial structure. Evaluation is strict: an undefined argument
// makes the application undefined, and a missing table entry is undefined.

#include "erc/formula.hpp"
#include "erc/structure.hpp"

#include <algorithm>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <thread>
#include <utility>
#include <vector>

namespace erc {

class unknown_operation_error : public std::runtime_error {
public:
    explicit unknown_operation_error(const std::string& name)
        : std::runtime_error("unknown operation or constant '" + name + "'"), name_(name)
    {
    }
    const std::string& name() const noexcept { return name_; }

private:
    std::string name_;
};

namespace detail {

struct BoundTerm {
    enum class Kind { variable, constant, table } kind;
    int var = 0;
    Element constant = undefined;
    const OpTable* table = nullptr;
    std::vector<BoundTerm> args;
};

struct BoundExpr {
    Expr::Kind kind;
    AtomKind atom;
    std::vector<BoundTerm> terms;
    std::vector<BoundExpr> children;
};

inline BoundTerm bind(const FiniteStructure& s, const STerm& t, std::size_t family)
{
    BoundTerm b;
    switch (t.kind()) {
    case STerm::Kind::variable:
        b.kind = BoundTerm::Kind::variable;
        b.var = t.variable_index();
        return b;
    case STerm::Kind::constant: {
        auto it = s.constants.find(t.name());
        if (it == s.constants.end())
            throw unknown_operation_error(t.name());
        b.kind = BoundTerm::Kind::constant;
        b.constant = it->second;
        return b;
    }
    case STerm::Kind::lower:
    case STerm::Kind::upper: {
        const auto& fam = s.family(t.kind() == STerm::Kind::lower ? Family::lower : Family::upper);
        if (family >= fam.size())
            throw unknown_operation_error(t.name() + "[" + std::to_string(family + 1) + "]");
        b.kind = BoundTerm::Kind::table;
        b.table = &fam[family];
        break;
    }
    case STerm::Kind::apply: {
        auto it = s.ops.find(t.name());
        if (it == s.ops.end())
            throw unknown_operation_error(t.name());
        if (static_cast<std::size_t>(it->second.arity()) != t.args().size())
            throw formula_error("operation '" + t.name() + "' applied to the wrong number of arguments");
        b.kind = BoundTerm::Kind::table;
        b.table = &it->second;
        break;
    }
    }
    for (const auto& a : t.args())
        b.args.push_back(bind(s, a, family));
    return b;
}

inline BoundExpr bind(const FiniteStructure& s, const Expr& e, std::size_t family)
{
    BoundExpr b{e.kind(), e.atom_kind(), {}, {}};
    for (const auto& t : e.terms())
        b.terms.push_back(bind(s, t, family));
    for (const auto& c : e.children())
        b.children.push_back(bind(s, c, family));
    return b;
}

inline Element eval(const BoundTerm& t, std::span<const Element> asg)
{
    switch (t.kind) {
    case BoundTerm::Kind::variable:
        return asg[static_cast<std::size_t>(t.var)];
    case BoundTerm::Kind::constant:
        return t.constant;
    case BoundTerm::Kind::table:
        break;
    }
    if (t.args.size() == 1) {
        Element a = eval(t.args[0], asg);
        return a == undefined ? undefined : t.table->at(a);
    }
    if (t.args.size() == 2) {
        Element a = eval(t.args[0], asg);
        if (a == undefined)
            return undefined;
        Element b = eval(t.args[1], asg);
        return b == undefined ? undefined : t.table->at(a, b);
    }
    std::vector<Element> vals;
    for (const auto& a : t.args) {
        Element v = eval(a, asg);
        if (v == undefined)
            return undefined;
        vals.push_back(v);
    }
    return t.table->at(vals);
}

inline bool atom_truth(AtomKind k, Element s, Element t, const FiniteStructure& st)
{
    const bool ds = s != undefined, dt = t != undefined;
    switch (k) {
    case AtomKind::omega_eq:
        return !ds || !dt || s == t;
    case AtomKind::omega_star_eq:
        return (!ds && !dt) || (ds && dt && s == t);
    case AtomKind::strong_eq:
        return ds && dt && s == t;
    case AtomKind::leq:
        return !ds || !dt || st.order(s, t);
    case AtomKind::part:
        return !ds || !dt || (st.parthood && (*st.parthood)(s, t));
    case AtomKind::defined:
        return ds;
    }
    return false;
}

inline bool truth(const BoundExpr& e, std::span<const Element> asg, const FiniteStructure& s)
{
    using K = Expr::Kind;
    switch (e.kind) {
    case K::truth:
        return true;
    case K::atom: {
        Element a = eval(e.terms[0], asg);
        Element b = e.terms.size() > 1 ? eval(e.terms[1], asg) : undefined;
        return atom_truth(e.atom, a, b, s);
    }
    case K::negation:
        return !truth(e.children[0], asg, s);
    case K::conjunction:
        return truth(e.children[0], asg, s) && truth(e.children[1], asg, s);
    case K::disjunction:
        return truth(e.children[0], asg, s) || truth(e.children[1], asg, s);
    case K::implication:
        return !truth(e.children[0], asg, s) || truth(e.children[1], asg, s);
    case K::equivalence:
        return truth(e.children[0], asg, s) == truth(e.children[1], asg, s);
    }
    return false;
}

inline void decode_assignment(std::uint64_t index, std::size_t n, std::span<Element> out)
{
    for (std::size_t i = out.size(); i-- > 0;) {
        out[i] = static_cast<Element>(index % n);
        index /= n;
    }
}

} // namespace detail

/// Value of a structure term under an assignment (indices into the carrier,
/// one per quantified variable); nullopt when undefined.
inline std::optional<Element> eval_struct_term(const FiniteStructure& s, const STerm& t,
                                               std::span<const Element> assignment, std::size_t family = 0)
{
    Element v = detail::eval(detail::bind(s, t, family), assignment);
    if (v == undefined)
        return std::nullopt;
    return v;
}

inline bool holds_atom(const FiniteStructure& s, const Expr& atom, std::span<const Element> assignment,
                       std::size_t family = 0)
{
    if (atom.kind() != Expr::Kind::atom)
        throw formula_error("holds_atom expects an atom");
    return detail::truth(detail::bind(s, atom, family), assignment, s);
}

/// Truth of the body of `f` under one assignment.
inline bool evaluate(const FiniteStructure& s, const Formula& f, std::span<const Element> assignment,
                     std::size_t family = 0)
{
    if (assignment.size() != f.vars.size())
        throw formula_error("assignment does not cover the quantified variables of '" + f.name + "'");
    return detail::truth(detail::bind(s, f.body, family), assignment, s);
}

struct CheckReport {
    std::string name;
    std::string formula;
    bool holds = true;
    /// Lexicographically first refuting assignment, as (variable, element).
    std::vector<std::pair<std::string, std::string>> witness;
    std::vector<Element> witness_elements;
    /// Assignments examined in canonical order up to the witness, or all of
    /// them when the formula holds.
    std::uint64_t assignments_checked = 0;
    std::uint64_t assignments_total = 0;
    /// Operator-family index the formula was evaluated at (0-based).
    std::size_t family = 0;

    friend bool operator==(const CheckReport&, const CheckReport&) = default;
};

struct CheckOptions {
    std::size_t family = 0;
    unsigned workers = 1;
};

/// Enumerates every assignment in canonical carrier order (first variable
/// slowest). With several workers the range is split into contiguous blocks
/// and the smallest failing index wins, so the witness does not depend on
/// the worker count.
inline CheckReport check_formula(const FiniteStructure& s, const Formula& f, CheckOptions opt = {})
{
    require_closed(f);
    const detail::BoundExpr body = detail::bind(s, f.body, opt.family);
    const std::size_t n = s.size();
    const std::size_t k = f.vars.size();
    std::uint64_t total = 1;
    for (std::size_t i = 0; i < k; ++i)
        total *= n;

    constexpr std::uint64_t none = std::numeric_limits<std::uint64_t>::max();
    auto first_failure = [&](std::uint64_t from, std::uint64_t to) {
        std::vector<Element> asg(k);
        for (std::uint64_t i = from; i < to; ++i) {
            detail::decode_assignment(i, n, asg);
            if (!detail::truth(body, asg, s))
                return i;
        }
        return none;
    };

    std::uint64_t failing = none;
    unsigned workers = std::max(1u, opt.workers);
    if (workers == 1 || total < 2 * workers) {
        failing = first_failure(0, total);
    }
    else {
        std::vector<std::uint64_t> found(workers, none);
        std::vector<std::thread> pool;
        std::uint64_t chunk = (total + workers - 1) / workers;
        for (unsigned w = 0; w < workers; ++w) {
            std::uint64_t from = std::min<std::uint64_t>(total, w * chunk);
            std::uint64_t to = std::min<std::uint64_t>(total, from + chunk);
            pool.emplace_back([&, w, from, to] { found[w] = first_failure(from, to); });
        }
        for (auto& t : pool)
            t.join();
        failing = *std::min_element(found.begin(), found.end());
    }

    CheckReport r;
    r.name = f.name;
    r.formula = to_string(f);
    r.family = opt.family;
    r.assignments_total = total;
    if (failing == none) {
        r.assignments_checked = total;
        return r;
    }
    r.holds = false;
    r.assignments_checked = failing + 1;
    r.witness_elements.resize(k);
    detail::decode_assignment(failing, n, r.witness_elements);
    for (std::size_t i = 0; i < k; ++i)
        r.witness.emplace_back(f.vars[i], s.name_of(r.witness_elements[i]));
    return r;
}

/// One report per formula, in input order; never stops at the first failure.
inline std::vector<CheckReport> check_axiom_set(const FiniteStructure& s, std::span<const Formula> formulas,
                                                CheckOptions opt = {})
{
    std::vector<CheckReport> out;
    out.reserve(formulas.size());
    for (const auto& f : formulas)
        out.push_back(check_formula(s, f, opt));
    return out;
}

} // namespace erc
