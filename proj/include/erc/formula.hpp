#pragma once

// Universally quantified formulas over a finite partial structure.
//
// Terms are built from quantified variables, named constants (bot, top),
// named operations and the indexed approximation families l and u. The index
// of l/u is not part of the term: it is supplied when the formula is
// evaluated, so one formula serves every operator pair.

#include <memory>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace erc {

class STerm {
public:
    enum class Kind { variable, constant, apply, lower, upper };

    static STerm variable(int index) { return STerm(Kind::variable, index, {}, {}); }
    static STerm constant(std::string name) { return STerm(Kind::constant, -1, std::move(name), {}); }
    static STerm apply(std::string op, std::vector<STerm> args) { return STerm(Kind::apply, -1, std::move(op), std::move(args)); }
    static STerm lower(STerm x) { return STerm(Kind::lower, -1, "l", {std::move(x)}); }
    static STerm upper(STerm x) { return STerm(Kind::upper, -1, "u", {std::move(x)}); }

    Kind kind() const noexcept { return node_->kind; }
    int variable_index() const noexcept { return node_->var; }
    const std::string& name() const noexcept { return node_->name; }
    const std::vector<STerm>& args() const noexcept { return node_->args; }

private:
    struct Node {
        Kind kind;
        int var;
        std::string name;
        std::vector<STerm> args;
    };
    STerm(Kind k, int v, std::string n, std::vector<STerm> a)
        : node_(std::make_shared<const Node>(Node{k, v, std::move(n), std::move(a)}))
    {
    }
    std::shared_ptr<const Node> node_;
};

enum class AtomKind {
    omega_eq,      // s ω= t: if both sides are defined they are equal
    omega_star_eq, // s ω*= t: if either side is defined so is the other, and they are equal
    strong_eq,     // both defined and equal
    leq,           // order; vacuously true when a side is undefined
    part,          // parthood; vacuously true when a side is undefined
    defined
};

class Expr {
public:
    enum class Kind { atom, negation, conjunction, disjunction, implication, equivalence, truth };

    static Expr atom(AtomKind a, std::vector<STerm> terms) { return Expr(Kind::atom, a, std::move(terms), {}); }
    static Expr truth() { return Expr(Kind::truth, AtomKind::defined, {}, {}); }
    static Expr negation(Expr e) { return Expr(Kind::negation, AtomKind::defined, {}, {std::move(e)}); }
    static Expr binary(Kind k, Expr a, Expr b) { return Expr(k, AtomKind::defined, {}, {std::move(a), std::move(b)}); }

    Kind kind() const noexcept { return node_->kind; }
    AtomKind atom_kind() const noexcept { return node_->atom; }
    const std::vector<STerm>& terms() const noexcept { return node_->terms; }
    const std::vector<Expr>& children() const noexcept { return node_->children; }

private:
    struct Node {
        Kind kind;
        AtomKind atom;
        std::vector<STerm> terms;
        std::vector<Expr> children;
    };
    Expr(Kind k, AtomKind a, std::vector<STerm> t, std::vector<Expr> c)
        : node_(std::make_shared<const Node>(Node{k, a, std::move(t), std::move(c)}))
    {
    }
    std::shared_ptr<const Node> node_;
};

/// ∀vars. body
struct Formula {
    std::string name;
    std::vector<std::string> vars;
    Expr body;
};

class formula_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Builders. `using namespace erc::fol;` inside suite definitions.
namespace fol {

inline STerm var(int i) { return STerm::variable(i); }
inline STerm bot() { return STerm::constant("bot"); }
inline STerm top() { return STerm::constant("top"); }
inline STerm op(const std::string& name, STerm a) { return STerm::apply(name, {std::move(a)}); }
inline STerm op(const std::string& name, STerm a, STerm b) { return STerm::apply(name, {std::move(a), std::move(b)}); }
inline STerm lo(STerm x) { return STerm::lower(std::move(x)); }
inline STerm up(STerm x) { return STerm::upper(std::move(x)); }

inline Expr weq(STerm s, STerm t) { return Expr::atom(AtomKind::omega_eq, {std::move(s), std::move(t)}); }
inline Expr wseq(STerm s, STerm t) { return Expr::atom(AtomKind::omega_star_eq, {std::move(s), std::move(t)}); }
inline Expr seq(STerm s, STerm t) { return Expr::atom(AtomKind::strong_eq, {std::move(s), std::move(t)}); }
inline Expr leq(STerm s, STerm t) { return Expr::atom(AtomKind::leq, {std::move(s), std::move(t)}); }
inline Expr part(STerm s, STerm t) { return Expr::atom(AtomKind::part, {std::move(s), std::move(t)}); }
inline Expr defined(STerm s) { return Expr::atom(AtomKind::defined, {std::move(s)}); }

inline Expr operator!(Expr e) { return Expr::negation(std::move(e)); }
inline Expr operator&&(Expr a, Expr b) { return Expr::binary(Expr::Kind::conjunction, std::move(a), std::move(b)); }
inline Expr operator||(Expr a, Expr b) { return Expr::binary(Expr::Kind::disjunction, std::move(a), std::move(b)); }
inline Expr implies(Expr a, Expr b) { return Expr::binary(Expr::Kind::implication, std::move(a), std::move(b)); }
inline Expr iff(Expr a, Expr b) { return Expr::binary(Expr::Kind::equivalence, std::move(a), std::move(b)); }

inline Formula forall(std::string name, std::vector<std::string> vars, Expr body)
{
    return Formula{std::move(name), std::move(vars), std::move(body)};
}

} // namespace fol

namespace detail {

inline void collect_vars(const STerm& t, std::set<int>& out)
{
    if (t.kind() == STerm::Kind::variable)
        out.insert(t.variable_index());
    for (const auto& a : t.args())
        collect_vars(a, out);
}

inline void collect_vars(const Expr& e, std::set<int>& out)
{
    for (const auto& t : e.terms())
        collect_vars(t, out);
    for (const auto& c : e.children())
        collect_vars(c, out);
}

inline void collect_ops(const STerm& t, std::set<std::string>& out)
{
    switch (t.kind()) {
    case STerm::Kind::apply:
        out.insert(t.name());
        break;
    case STerm::Kind::lower:
        out.insert("l");
        break;
    case STerm::Kind::upper:
        out.insert("u");
        break;
    default:
        break;
    }
    for (const auto& a : t.args())
        collect_ops(a, out);
}

inline void collect_ops(const Expr& e, std::set<std::string>& out)
{
    for (const auto& t : e.terms())
        collect_ops(t, out);
    for (const auto& c : e.children())
        collect_ops(c, out);
}

inline void collect_constants(const STerm& t, std::set<std::string>& out)
{
    if (t.kind() == STerm::Kind::constant)
        out.insert(t.name());
    for (const auto& a : t.args())
        collect_constants(a, out);
}

inline void collect_constants(const Expr& e, std::set<std::string>& out)
{
    for (const auto& t : e.terms())
        collect_constants(t, out);
    for (const auto& c : e.children())
        collect_constants(c, out);
}

} // namespace detail

/// Operation names a formula mentions; "l" and "u" stand for the families.
inline std::set<std::string> operations_of(const Expr& e)
{
    std::set<std::string> out;
    detail::collect_ops(e, out);
    return out;
}

inline std::set<std::string> constants_of(const Expr& e)
{
    std::set<std::string> out;
    detail::collect_constants(e, out);
    return out;
}

/// Every variable in the body is quantified.
inline void require_closed(const Formula& f)
{
    std::set<int> used;
    detail::collect_vars(f.body, used);
    for (int v : used)
        if (v < 0 || static_cast<std::size_t>(v) >= f.vars.size())
            throw formula_error("formula '" + f.name + "' has an unquantified variable");
}

/// Splits a top-level conjunction into its conjuncts.
inline void conjuncts(const Expr& e, std::vector<Expr>& out)
{
    if (e.kind() == Expr::Kind::conjunction) {
        conjuncts(e.children()[0], out);
        conjuncts(e.children()[1], out);
    }
    else
        out.push_back(e);
}

namespace detail {

inline std::string op_display(const std::string& op)
{
    static const std::pair<const char*, const char*> names[] = {
        {"vee", "∨"}, {"wedge", "∧"}, {"otimes", "⊗"}, {"cdot", "·"}, {"imp_neg", "⊸¬"}, {"imp_sim", "⊸∼"}, {"imp", "⊸"}};
    for (const auto& [k, v] : names)
        if (op == k)
            return v;
    return op;
}

inline std::string show(const STerm& t, const std::vector<std::string>& vars)
{
    switch (t.kind()) {
    case STerm::Kind::variable:
        return vars.at(static_cast<std::size_t>(t.variable_index()));
    case STerm::Kind::constant:
        return t.name() == "bot" ? "⊥" : t.name() == "top" ? "⊤" : t.name();
    case STerm::Kind::lower:
    case STerm::Kind::upper: {
        const STerm& a = t.args()[0];
        std::string inner = show(a, vars);
        bool simple = a.kind() != STerm::Kind::apply || a.args().size() < 2;
        return (simple ? inner : "(" + inner + ")") + "^" + t.name();
    }
    case STerm::Kind::apply:
        break;
    }
    std::string sym = op_display(t.name());
    if (t.args().size() == 2)
        return "(" + show(t.args()[0], vars) + " " + sym + " " + show(t.args()[1], vars) + ")";
    std::string out = sym + "(";
    for (std::size_t i = 0; i < t.args().size(); ++i)
        out += (i ? ", " : "") + show(t.args()[i], vars);
    return out + ")";
}

} // namespace detail

inline std::string to_string(const Expr& e, const std::vector<std::string>& vars)
{
    using K = Expr::Kind;
    const auto& c = e.children();
    switch (e.kind()) {
    case K::truth:
        return "true";
    case K::negation:
        return "¬" + to_string(c[0], vars);
    case K::conjunction:
        return "(" + to_string(c[0], vars) + " & " + to_string(c[1], vars) + ")";
    case K::disjunction:
        return "(" + to_string(c[0], vars) + " or " + to_string(c[1], vars) + ")";
    case K::implication:
        return "(" + to_string(c[0], vars) + " → " + to_string(c[1], vars) + ")";
    case K::equivalence:
        return "(" + to_string(c[0], vars) + " ↔ " + to_string(c[1], vars) + ")";
    case K::atom:
        break;
    }
    const auto& t = e.terms();
    auto s = [&](std::size_t i) { return detail::show(t[i], vars); };
    switch (e.atom_kind()) {
    case AtomKind::omega_eq: return s(0) + " ω= " + s(1);
    case AtomKind::omega_star_eq: return s(0) + " ω*= " + s(1);
    case AtomKind::strong_eq: return s(0) + " = " + s(1);
    case AtomKind::leq: return s(0) + " ≤ " + s(1);
    case AtomKind::part: return "P(" + s(0) + ", " + s(1) + ")";
    case AtomKind::defined: return "def(" + s(0) + ")";
    }
    return "?";
}

inline std::string to_string(const Formula& f)
{
    std::string q;
    if (!f.vars.empty()) {
        q = "∀";
        for (std::size_t i = 0; i < f.vars.size(); ++i)
            q += (i ? "," : "") + f.vars[i];
        q += ". ";
    }
    return q + to_string(f.body, f.vars);
}

} // namespace erc
