#pragma once

// Exhaustive generation of small models of an axiom suite. Some operation
// tables are fixed by a base structure, the others are free and range over
// every total (or partial) table. Models come out in a canonical order: the
// free tables are read as one digit string (tables in task order, cells in
// carrier order, values in carrier order with UNDEFINED last) and listed
// lexicographically.

#include "erc/check.hpp"
#include "erc/structure.hpp"
#include "erc/suites.hpp"

#include <cstdint>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace erc {

class enumeration_error : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

struct FreeOp {
    /// Operation name; "l" and "u" are the first lower/upper family tables.
    std::string name;
    bool partial = false;
    /// Needed only for names without a known default arity.
    std::optional<int> arity;
};

enum class Strategy { pruned, naive };

struct EnumerationTask {
    std::size_t size = 2;
    std::string suite;
    std::vector<FreeOp> free;
    /// Fixed tables; defaults to the chain of `size` with max/min lattice ops.
    std::optional<FiniteStructure> base;
    bool count_only = false;
    Strategy strategy = Strategy::pruned;
    /// Subset of the suite's axioms to impose; empty means all of them.
    std::vector<std::string> axioms;
};

struct EnumerationResult {
    std::uint64_t count = 0;
    std::vector<FiniteStructure> models;
    /// Complete candidate structures whose full suite check was run.
    std::uint64_t candidates_checked = 0;
};

inline constexpr std::size_t max_size_binary = 3;
inline constexpr std::size_t max_size_unary = 5;

namespace detail {

inline OpTable& free_table(FiniteStructure& s, const std::string& name)
{
    if (name == "l")
        return s.lower.at(0);
    if (name == "u")
        return s.upper.at(0);
    return s.ops.at(name);
}

/// Base structure with an all-UNDEFINED table installed for every free op.
inline FiniteStructure prepare_base(const EnumerationTask& task, std::vector<int>& arities)
{
    if (task.size == 0)
        throw enumeration_error("carrier size must be positive");
    FiniteStructure s = task.base ? *task.base : chain_structure(task.size);
    if (s.size() != task.size)
        throw enumeration_error("base structure has " + std::to_string(s.size()) + " elements, task asks for " +
                                std::to_string(task.size));

    int max_arity = 0;
    arities.clear();
    for (const auto& f : task.free) {
        int a = f.name == "l" || f.name == "u" ? 1 : f.arity.value_or(default_arity(f.name).value_or(-1));
        if (a < 0)
            throw enumeration_error("arity of free operation '" + f.name + "' is unknown");
        if (a < 1 || a > 2)
            throw enumeration_error("free operations must be unary or binary");
        max_arity = std::max(max_arity, a);
        arities.push_back(a);
    }
    for (std::size_t i = 0; i < task.free.size(); ++i)
        for (std::size_t j = 0; j < i; ++j)
            if (task.free[i].name == task.free[j].name)
                throw enumeration_error("free operation '" + task.free[i].name + "' listed twice");
    if (max_arity == 2 && task.size > max_size_binary)
        throw enumeration_error("search over binary tables is limited to carriers of size " +
                                std::to_string(max_size_binary));
    if (task.size > max_size_unary)
        throw enumeration_error("search over unary tables is limited to carriers of size " +
                                std::to_string(max_size_unary));

    bool family = false;
    for (const auto& f : task.free)
        family = family || f.name == "l" || f.name == "u";
    if (family && s.lower.empty()) {
        s.lower = {OpTable(1, s.size())};
        s.upper = {OpTable(1, s.size())};
    }
    for (std::size_t i = 0; i < task.free.size(); ++i) {
        const auto& name = task.free[i].name;
        if (name == "l" || name == "u")
            free_table(s, name) = OpTable(1, s.size());
        else
            s.ops[name] = OpTable(arities[i], s.size());
    }
    return s;
}

struct StagedConjunct {
    Formula formula;
    std::size_t stage; // checkable once free ops [0, stage) are assigned
};

inline std::vector<StagedConjunct> stage_conjuncts(const AxiomSuite& suite, const std::vector<FreeOp>& free)
{
    std::vector<StagedConjunct> out;
    for (const auto& ax : suite.axioms) {
        if (ax.policy == IndexPolicy::some)
            continue; // only meaningful at the leaves
        std::vector<Expr> parts;
        conjuncts(ax.formula.body, parts);
        for (const auto& p : parts) {
            auto ops = operations_of(p);
            std::size_t stage = 0;
            for (std::size_t i = 0; i < free.size(); ++i)
                if (ops.contains(free[i].name))
                    stage = i + 1;
            out.push_back({Formula{ax.name(), ax.formula.vars, p}, stage});
        }
    }
    return out;
}

} // namespace detail

/// Runs the task, calling `emit` for every model in canonical order.
inline EnumerationResult enumerate_models(const EnumerationTask& task,
                                          const std::function<void(const FiniteStructure&)>& emit = {})
{
    const AxiomSuite suite = task.axioms.empty() ? find_suite(task.suite) : find_suite(task.suite).select(task.axioms);
    std::vector<int> arities;
    FiniteStructure s = detail::prepare_base(task, arities);
    if (auto missing = missing_signature(s, suite); !missing.empty()) {
        std::string m;
        for (const auto& x : missing)
            m += (m.empty() ? "" : ", ") + x;
        throw enumeration_error("suite '" + suite.name + "' needs " + m + ", absent from the base structure");
    }

    EnumerationResult result;
    const std::size_t n = s.size();
    const std::size_t families = std::max<std::size_t>(1, s.family_count());
    const bool prune = task.strategy == Strategy::pruned;
    const auto staged = prune ? detail::stage_conjuncts(suite, task.free) : std::vector<detail::StagedConjunct>{};

    auto stage_ok = [&](std::size_t stage) {
        for (const auto& c : staged) {
            if (c.stage != stage)
                continue;
            for (std::size_t i = 0; i < families; ++i)
                if (!check_formula(s, c.formula, {i, 1}).holds)
                    return false;
        }
        return true;
    };

    auto leaf = [&] {
        ++result.candidates_checked;
        if (!check_suite(s, suite).holds)
            return;
        ++result.count;
        if (emit)
            emit(s);
        if (!task.count_only)
            result.models.push_back(s);
    };

    // depth-first over (op, cell); values in carrier order, UNDEFINED last
    std::function<void(std::size_t, std::size_t)> assign = [&](std::size_t op, std::size_t cell) {
        if (op == task.free.size()) {
            leaf();
            return;
        }
        OpTable& t = detail::free_table(s, task.free[op].name);
        if (cell == t.cells().size()) {
            if (!prune || stage_ok(op + 1))
                assign(op + 1, 0);
            return;
        }
        for (std::size_t v = 0; v < n; ++v) {
            t.cells()[cell] = static_cast<Element>(v);
            assign(op, cell + 1);
        }
        if (task.free[op].partial) {
            t.cells()[cell] = undefined;
            assign(op, cell + 1);
        }
        t.cells()[cell] = undefined;
    };

    if (!prune || stage_ok(0))
        assign(0, 0);
    return result;
}

} // namespace erc
