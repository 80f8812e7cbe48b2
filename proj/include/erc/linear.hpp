#pragma once

// Exact evaluation and linear normalisation of terms.

#include "erc/term.hpp"

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>

namespace erc {

using Environment = std::map<char, Rational>;

class unbound_variable_error : public std::runtime_error {
public:
    explicit unbound_variable_error(char name)
        : std::runtime_error(std::string("unbound variable '") + name + "'"), name_(name)
    {
    }
    char name() const noexcept { return name_; }

private:
    char name_;
};

/// Strict evaluation. nullopt is the undefined value: ÷0, √ of a negative
/// or of a rational without a rational root, and anything built on those.
inline std::optional<Rational> eval_term(const Term& t, const Environment& env)
{
    switch (t.kind()) {
    case Term::Kind::constant:
        return t.value();
    case Term::Kind::variable: {
        auto it = env.find(t.name());
        if (it == env.end())
            throw unbound_variable_error(t.name());
        return it->second;
    }
    case Term::Kind::apply:
        break;
    }
    // children are evaluated first so unbound variables are reported even
    // under an undefined sibling
    std::vector<std::optional<Rational>> v;
    for (const Term& a : t.args())
        v.push_back(eval_term(a, env));
    for (const auto& x : v)
        if (!x)
            return std::nullopt;
    switch (t.op()) {
    case Op::add: return *v[0] + *v[1];
    case Op::sub: return *v[0] - *v[1];
    case Op::mul: return *v[0] * *v[1];
    case Op::div:
        if (*v[1] == 0)
            return std::nullopt;
        return *v[0] / *v[1];
    case Op::pos: return *v[0];
    case Op::neg: return -*v[0];
    case Op::sqrt: return exact_sqrt(*v[0]);
    }
    return std::nullopt;
}

inline std::set<char> variables_of(const Term& t)
{
    std::set<char> out;
    auto walk = [&](auto&& self, const Term& s) -> void {
        if (s.is_variable())
            out.insert(s.name());
        for (const Term& a : s.args())
            self(self, a);
    };
    walk(walk, t);
    return out;
}

class linear_error : public std::runtime_error {
public:
    enum class Kind {
        non_linear,     // a product of variables or √ of a variable survives
        multi_variable, // more than one variable after expansion
        undefined,      // a constant subterm is undefined (÷0, √ of a negative)
        irrational      // a constant √ without a rational value
    };
    linear_error(Kind k, const std::string& what) : std::runtime_error(what), kind_(k) {}
    Kind kind() const noexcept { return kind_; }

private:
    Kind kind_;
};

/// Polynomial with rational coefficients; monomials are sorted strings of
/// variable letters ("" is the constant term, "xx" is x²).
class Polynomial {
public:
    Polynomial() = default;
    static Polynomial constant(const Rational& q)
    {
        Polynomial p;
        p.set("", q);
        return p;
    }
    static Polynomial variable(char x)
    {
        Polynomial p;
        p.set(std::string(1, x), 1);
        return p;
    }

    static Polynomial from_term(const Term& t)
    {
        switch (t.kind()) {
        case Term::Kind::constant:
            return constant(t.value());
        case Term::Kind::variable:
            return variable(t.name());
        case Term::Kind::apply:
            break;
        }
        switch (t.op()) {
        case Op::add: return from_term(t.arg(0)) + from_term(t.arg(1));
        case Op::sub: return from_term(t.arg(0)) - from_term(t.arg(1));
        case Op::mul: return from_term(t.arg(0)) * from_term(t.arg(1));
        case Op::pos: return from_term(t.arg(0));
        case Op::neg: return Polynomial() - from_term(t.arg(0));
        case Op::div: {
            Polynomial den = from_term(t.arg(1));
            if (!den.is_constant())
                throw linear_error(linear_error::Kind::non_linear,
                                   "division by a non-constant term: " + print_term(t));
            if (den.constant_term() == 0)
                throw linear_error(linear_error::Kind::undefined, "division by zero: " + print_term(t));
            return from_term(t.arg(0)).scaled(1 / den.constant_term());
        }
        case Op::sqrt: {
            Polynomial rad = from_term(t.arg(0));
            if (!rad.is_constant())
                throw linear_error(linear_error::Kind::non_linear, "root of a variable: " + print_term(t));
            if (rad.constant_term() < 0)
                throw linear_error(linear_error::Kind::undefined, "root of a negative: " + print_term(t));
            auto r = exact_sqrt(rad.constant_term());
            if (!r)
                throw linear_error(linear_error::Kind::irrational, "irrational root: " + print_term(t));
            return constant(*r);
        }
        }
        return {};
    }

    bool is_constant() const { return terms_.empty() || (terms_.size() == 1 && terms_.begin()->first.empty()); }
    Rational constant_term() const { return coefficient(""); }
    Rational coefficient(const std::string& monomial) const
    {
        auto it = terms_.find(monomial);
        return it == terms_.end() ? Rational(0) : it->second;
    }
    const std::map<std::string, Rational>& terms() const { return terms_; }

    Polynomial scaled(const Rational& k) const
    {
        Polynomial p;
        for (const auto& [m, c] : terms_)
            p.set(m, c * k);
        return p;
    }

    friend Polynomial operator+(const Polynomial& a, const Polynomial& b)
    {
        Polynomial p = a;
        for (const auto& [m, c] : b.terms_)
            p.set(m, p.coefficient(m) + c);
        return p;
    }
    friend Polynomial operator-(const Polynomial& a, const Polynomial& b) { return a + b.scaled(-1); }
    friend Polynomial operator*(const Polynomial& a, const Polynomial& b)
    {
        Polynomial p;
        for (const auto& [ma, ca] : a.terms_)
            for (const auto& [mb, cb] : b.terms_) {
                std::string m = ma + mb;
                std::sort(m.begin(), m.end());
                p.set(m, p.coefficient(m) + ca * cb);
            }
        return p;
    }
    friend bool operator==(const Polynomial&, const Polynomial&) = default;

private:
    void set(const std::string& m, const Rational& c)
    {
        if (c == 0)
            terms_.erase(m);
        else
            terms_[m] = c;
    }
    std::map<std::string, Rational> terms_;
};

/// c·x + d = 0 with the leading coefficient made positive. When c = 0 the
/// form is degenerate: d = 0 means every value solves it, d > 0 none does.
struct LinearNormalForm {
    std::optional<char> variable;
    Rational coefficient;
    Rational constant;

    bool degenerate() const { return coefficient == 0; }
    friend bool operator==(const LinearNormalForm&, const LinearNormalForm&) = default;
};

/// Linear form of one side, no sign canonicalisation. Throws linear_error.
inline Polynomial linear_part(const Term& t) { return Polynomial::from_term(t); }

namespace detail {

inline void require_linear(const Polynomial& p)
{
    std::set<char> vars;
    for (const auto& [m, c] : p.terms()) {
        if (m.size() > 1)
            throw linear_error(linear_error::Kind::non_linear, "term of degree " + std::to_string(m.size()));
        if (m.size() == 1)
            vars.insert(m[0]);
    }
    if (vars.size() > 1)
        throw linear_error(linear_error::Kind::multi_variable, "more than one variable");
}

} // namespace detail

inline LinearNormalForm normalize_linear(const Equation& e)
{
    Polynomial p = Polynomial::from_term(e.lhs) - Polynomial::from_term(e.rhs);
    detail::require_linear(p);

    LinearNormalForm nf;
    nf.constant = p.constant_term();
    for (const auto& [m, c] : p.terms())
        if (m.size() == 1) {
            nf.variable = m[0];
            nf.coefficient = c;
        }
    if (!nf.variable) {
        std::set<char> vars = variables_of(e.lhs);
        vars.merge(variables_of(e.rhs));
        if (!vars.empty())
            nf.variable = *vars.begin();
    }
    if (nf.coefficient < 0 || (nf.coefficient == 0 && nf.constant < 0)) {
        nf.coefficient = -nf.coefficient;
        nf.constant = -nf.constant;
    }
    return nf;
}

/// Renders c·x + d = 0 as an equation.
inline Equation to_equation(const LinearNormalForm& nf)
{
    Term zero = Term::constant(0);
    if (nf.degenerate() || !nf.variable)
        return {Term::constant(nf.constant), zero};
    Term x = Term::variable(*nf.variable);
    Term lhs = nf.coefficient == 1 ? x : Term::constant(nf.coefficient) * x;
    if (nf.constant > 0)
        lhs = lhs + Term::constant(nf.constant);
    else if (nf.constant < 0)
        lhs = lhs - Term::constant(-nf.constant);
    return {lhs, zero};
}

struct SolutionSet {
    enum class Kind { empty, single, all } kind = Kind::empty;
    Rational value; // meaningful for single only

    static SolutionSet none() { return {}; }
    static SolutionSet everything() { return {Kind::all, 0}; }
    static SolutionSet just(const Rational& v) { return {Kind::single, v}; }

    friend bool operator==(const SolutionSet& a, const SolutionSet& b)
    {
        return a.kind == b.kind && (a.kind != Kind::single || a.value == b.value);
    }
};

inline std::string to_string(const SolutionSet& s)
{
    switch (s.kind) {
    case SolutionSet::Kind::empty: return "{}";
    case SolutionSet::Kind::all: return "all";
    case SolutionSet::Kind::single: return "{" + to_string(s.value) + "}";
    }
    return "?";
}

inline SolutionSet solution_set(const LinearNormalForm& nf)
{
    if (nf.degenerate())
        return nf.constant == 0 ? SolutionSet::everything() : SolutionSet::none();
    return SolutionSet::just(-nf.constant / nf.coefficient);
}

inline SolutionSet solution_set(const Equation& e) { return solution_set(normalize_linear(e)); }

} // namespace erc
