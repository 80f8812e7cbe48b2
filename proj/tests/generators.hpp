#pragma once

// Random generators shared by the property tests. Fixed seeds keep every
// run reproducible.

#include "erc/term.hpp"
#include "erc/verifier.hpp"

#include <random>

namespace erc::gen {

inline Rational random_rational(std::mt19937& rng, int span = 9, int max_den = 5)
{
    std::uniform_int_distribution<int> num(-span, span);
    std::uniform_int_distribution<int> den(1, max_den);
    return Rational(num(rng), den(rng));
}

inline Rational random_nonneg_rational(std::mt19937& rng)
{
    std::uniform_int_distribution<int> num(0, 12);
    std::uniform_int_distribution<int> den(1, 4);
    return Rational(num(rng), den(rng));
}

/// Any well-formed term over the signature, depth-bounded.
inline Term random_term(std::mt19937& rng, int depth)
{
    std::uniform_int_distribution<int> pick(0, depth <= 0 ? 1 : 9);
    std::uniform_int_distribution<int> letter(0, 3);
    int k = pick(rng);
    switch (k) {
    case 0:
        return Term::constant(random_nonneg_rational(rng));
    case 1:
        return Term::variable("xyzw"[letter(rng)]);
    case 2:
        return random_term(rng, depth - 1) + random_term(rng, depth - 1);
    case 3:
        return random_term(rng, depth - 1) - random_term(rng, depth - 1);
    case 4:
    case 5:
        return random_term(rng, depth - 1) * random_term(rng, depth - 1);
    case 6:
        return random_term(rng, depth - 1) / random_term(rng, depth - 1);
    case 7:
        return -random_term(rng, depth - 1);
    case 8:
        return +random_term(rng, depth - 1);
    default:
        return sqrt(random_term(rng, depth - 1));
    }
}

/// A random linear term in x: sums/differences of c, c·x and scaled groups.
inline Term random_linear_term(std::mt19937& rng, int depth)
{
    std::uniform_int_distribution<int> pick(0, depth <= 0 ? 1 : 5);
    std::uniform_int_distribution<int> small(1, 6);
    Term x = Term::variable('x');
    switch (pick(rng)) {
    case 0:
        return Term::constant(small(rng));
    case 1:
        return Term::constant(small(rng)) * x;
    case 2:
        return random_linear_term(rng, depth - 1) + random_linear_term(rng, depth - 1);
    case 3:
        return random_linear_term(rng, depth - 1) - random_linear_term(rng, depth - 1);
    case 4:
        return Term::constant(small(rng)) * random_linear_term(rng, depth - 1);
    default:
        return -random_linear_term(rng, depth - 1);
    }
}

/// Random equation whose sides are linear terms in x.
inline Equation random_linear_equation(std::mt19937& rng, int depth = 3)
{
    return {random_linear_term(rng, depth), random_linear_term(rng, depth)};
}

/// A rule that applies to `e` and keeps its solution set: nonzero factors,
/// transpose of a term that really occurs.
inline RuleApplication random_valid_rule(std::mt19937& rng, const Equation& e)
{
    std::uniform_int_distribution<int> pick(0, 6);
    std::uniform_int_distribution<int> factor(1, 5);
    auto nonzero = [&] {
        Rational q(factor(rng), factor(rng));
        return std::bernoulli_distribution(0.3)(rng) ? Term::constant(q) * Term::constant(-1) : Term::constant(q);
    };
    switch (pick(rng)) {
    case 0:
        return {Rule::add, random_linear_term(rng, 1)};
    case 1:
        return {Rule::subtract, random_linear_term(rng, 1)};
    case 2:
        return {Rule::multiply, nonzero()};
    case 3:
        return {Rule::divide, nonzero()};
    case 4:
        return {Rule::cancel, nonzero()};
    case 5: {
        auto from = addends(std::bernoulli_distribution(0.5)(rng) ? e.lhs : e.rhs);
        std::uniform_int_distribution<std::size_t> which(0, from.size() - 1);
        return {Rule::transpose, from[which(rng)].term};
    }
    default:
        return {Rule::simplify, std::nullopt};
    }
}

} // namespace erc::gen
