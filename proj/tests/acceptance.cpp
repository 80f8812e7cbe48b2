// Acceptance runner: one PASS/FAIL line per criterion. With no arguments it
// runs them all; otherwise only the listed ids (1..10, 5b). Exit status is 0
// iff every selected criterion passed.

#include "erc/enumerate.hpp"
#include "erc/pawlak.hpp"
#include "erc/rough_space.hpp"
#include "erc/suites.hpp"
#include "erc/verifier.hpp"
#include "generators.hpp"

#include <chrono>
#include <functional>
#include <iostream>
#include <random>
#include <set>

using namespace erc;
using namespace erc::fol;

namespace {

struct Outcome {
    bool pass;
    std::string detail;
};

std::string data(const std::string& rel) { return std::string(ERC_DATA_DIR) + "/" + rel; }

double seconds_since(std::chrono::steady_clock::time_point t0)
{
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string fmt_seconds(double s)
{
    std::ostringstream o;
    o << std::fixed << std::setprecision(3) << s << " s";
    return o.str();
}

std::string join(const std::vector<std::string>& v)
{
    std::string out;
    for (const auto& s : v)
        out += (out.empty() ? "" : ",") + s;
    return "{" + out + "}";
}

Outcome corpus_fidelity()
{
    auto t0 = std::chrono::steady_clock::now();
    // the defective steps of the bundled corpus, with their kind
    const std::set<std::tuple<std::string, std::size_t, Classification>> expected = {
        {"S1", 2, Classification::unsound},
        {"S2", 4, Classification::unsound},
        {"S2", 6, Classification::mislabeled},
    };
    std::set<std::tuple<std::string, std::size_t, Classification>> flagged;
    bool answers = true;
    for (const char* file : {"solution1.sol", "solution2.sol", "solution3.sol", "solution5.sol"}) {
        DefectLedger l = verify_solution(load_solution_file(data(std::string("corpus/") + file)));
        for (const auto& s : l.steps)
            if (s.verdict.classification != Classification::sound)
                flagged.insert({l.id, s.index, s.verdict.classification});
        if (l.id == "S3" || l.id == "S5")
            answers = answers && l.final_answer == SolutionSet::just(Rational(1)) && l.answer_correct();
    }
    double secs = seconds_since(t0);
    bool ok = flagged == expected && answers && secs < 1.0;
    return {ok, std::to_string(flagged.size()) + " flagged steps, S3/S5 answer {1}: " + (answers ? "yes" : "no") +
                    ", " + fmt_seconds(secs)};
}

Outcome approximation_chain()
{
    RoughSpace s = build_space(load_corpus(data("corpus/manifest.json")).entries);
    Element s1 = s.element("S1"), s2 = s.element("S2"), s5 = s.element("S5");
    auto u = [&](Element e, int k) -> std::optional<Element> {
        std::optional<Element> x = e;
        for (int i = 0; i < k && x; ++i)
            x = apply_operator(s, "u_eq", *x);
        return x;
    };
    bool ok = u(s1, 3) == s5 && u(s2, 2) == s5 && u(s5, 1) == s5 && u(s1, 2) != s5 && u(s2, 1) != s5;
    std::string path;
    for (Element e : iterate_operator(s, "u_eq", s1, 3).elements)
        path += (path.empty() ? "" : " -> ") + s.name_of(e);
    return {ok, path};
}

Outcome operator_separation()
{
    RoughSpace s = build_space(load_corpus(data("corpus/manifest.json")).entries);
    Element s6 = s.element("S6");
    auto eq = apply_operator(s, "u_eq", s6);
    auto graph = apply_operator(s, "u_graph", s6);
    return {!eq && graph.has_value(),
            std::string("u_eq(S6) ") + (eq ? "defined" : "UNDEFINED") + ", u_graph(S6) " +
                (graph ? "= " + s.name_of(*graph) : "UNDEFINED")};
}

Outcome pawlak_soundness()
{
    auto t0 = std::chrono::steady_clock::now();
    std::mt19937 rng(4242);
    int passed = 0;
    for (int i = 0; i < 50; ++i) {
        std::size_t n = std::uniform_int_distribution<std::size_t>(1, 4)(rng);
        std::vector<int> universe;
        for (std::size_t k = 1; k <= n; ++k)
            universe.push_back(static_cast<int>(k));
        std::vector<std::vector<int>> blocks;
        for (int x : universe) {
            std::size_t b = std::uniform_int_distribution<std::size_t>(0, blocks.size())(rng);
            if (b == blocks.size())
                blocks.push_back({x});
            else
                blocks[b].push_back(x);
        }
        FiniteStructure s = pawlak_structure(universe, blocks);
        bool idem = true;
        for (const auto* t : {&s.lower[0], &s.upper[0]})
            for (std::size_t a = 0; a < s.size(); ++a)
                idem = idem && t->at(t->at(static_cast<Element>(a))) == t->at(static_cast<Element>(a));
        if (check_suite(s, "rcqo").holds && idem)
            ++passed;
    }
    double secs = seconds_since(t0);
    return {passed == 50 && secs < 10.0, std::to_string(passed) + "/50 partitions, " + fmt_seconds(secs)};
}

Outcome witness_refutation(const std::string& fixture)
{
    FiniteStructure s = load_structure_file(data("structures/" + fixture));
    SuiteReport r = check_suite(s, "rcqo");
    auto failing = r.failing();
    bool refuted = false;
    std::string witness;
    for (const auto& a : r.axioms)
        if (a.report.name == "qlu-mo" && !a.report.holds) {
            Formula f = find_suite("rcqo").select({"qlu-mo"}).formulas().at(0);
            refuted = !evaluate(s, f, a.report.witness_elements, a.report.family);
            for (const auto& [v, e] : a.report.witness)
                witness += (witness.empty() ? "" : ", ") + v + "=" + e;
        }
    bool exact = failing == std::vector<std::string>{"qlu-mo"};
    return {exact && refuted, fixture + " fails " + join(failing) + "; witness (" + witness + ") " +
                                  (refuted ? "refutes" : "does not refute") + " qlu-mo"};
}

Outcome enumeration_oracle()
{
    struct Case {
        std::string label;
        EnumerationTask task;
        std::uint64_t regression;
    };
    std::vector<Case> cases = {
        {"rcqo (l,u) total", {2, "rcqo", {{"l"}, {"u"}}}, 2},
        {"rcqo (l,u) partial", {2, "rcqo", {{"l", true}, {"u", true}}}, 3},
        {"strong-negation n=2", {2, "strong-negation", {{"n"}}}, 1},
        {"strong-negation n=3", {3, "strong-negation", {{"n"}}}, 1},
    };
    bool ok = true;
    std::string detail;
    for (auto& c : cases) {
        c.task.count_only = true;
        auto pruned = enumerate_models(c.task).count;
        c.task.strategy = Strategy::naive;
        auto naive = enumerate_models(c.task).count;
        ok = ok && pruned == naive && pruned == c.regression;
        detail += (detail.empty() ? "" : "; ") + c.label + ": " + std::to_string(pruned) + "/" +
                  std::to_string(naive);
    }
    return {ok, detail + " (pruned/naive)"};
}

Outcome weak_equality()
{
    // truth table: (ω, ω*) on both undefined, one defined, both defined unequal
    FiniteStructure c = chain_structure(2);
    auto row = [&](Element a, Element b) {
        return std::pair{detail::atom_truth(AtomKind::omega_eq, a, b, c),
                         detail::atom_truth(AtomKind::omega_star_eq, a, b, c)};
    };
    bool table = row(undefined, undefined) == std::pair{true, true} && row(0, undefined) == std::pair{true, false} &&
                 row(undefined, 0) == std::pair{true, false} && row(0, 1) == std::pair{false, false} &&
                 row(1, 1) == std::pair{true, true};

    // defining combination, inner equality read as existence equality
    std::mt19937 rng(7);
    std::function<STerm(int)> term = [&](int depth) -> STerm {
        int k = std::uniform_int_distribution<int>(0, depth <= 0 ? 2 : 5)(rng);
        switch (k) {
        case 0: return var(0);
        case 1: return var(1);
        case 2: return std::bernoulli_distribution(0.5)(rng) ? bot() : top();
        case 3: return op("vee", term(depth - 1), term(depth - 1));
        case 4: return op("wedge", term(depth - 1), term(depth - 1));
        default: return op("n", term(depth - 1));
        }
    };
    int agree = 0, vacuous_agree = 0;
    for (int i = 0; i < 1000; ++i) {
        std::size_t n = std::uniform_int_distribution<std::size_t>(2, 4)(rng);
        FiniteStructure s = chain_structure(n);
        s.ops["n"] = OpTable(1, n);
        std::uniform_int_distribution<int> cell(-1, static_cast<int>(n) - 1);
        for (auto& [name, t] : s.ops)
            for (auto& v : t.cells())
                v = cell(rng);
        STerm a = term(2), b = term(2);
        std::uniform_int_distribution<int> element(0, static_cast<int>(n) - 1);
        std::vector<Element> asg = {element(rng), element(rng)};

        bool direct = evaluate(s, forall("w", {"x", "y"}, wseq(a, b)), asg);
        bool combination = evaluate(
            s, forall("c", {"x", "y"}, implies(seq(a, a), seq(a, b)) && implies(seq(b, b), seq(a, b))), asg);
        bool vacuous = evaluate(
            s, forall("v", {"x", "y"}, implies(weq(a, a), weq(a, b)) && implies(weq(b, b), weq(a, b))), asg);
        agree += direct == combination;
        vacuous_agree += direct == vacuous;
    }
    return {table && agree == 1000, std::string("truth table ") + (table ? "matches" : "differs") + "; " +
                                         std::to_string(agree) + "/1000 agree (vacuous inner reading: " +
                                         std::to_string(vacuous_agree) + "/1000)"};
}

Outcome rule_soundness()
{
    std::mt19937 rng(500);
    int chains = 0, broken = 0;
    while (chains < 500) {
        Equation e = gen::random_linear_equation(rng);
        SolutionSet truth;
        try {
            truth = solution_set(e);
        }
        catch (const linear_error&) {
            continue;
        }
        ++chains;
        for (int k = 0; k < 6; ++k) {
            e = apply_rule(e, gen::random_valid_rule(rng, e));
            if (solution_set(e) != truth) {
                ++broken;
                break;
            }
        }
    }
    return {broken == 0, std::to_string(chains - broken) + "/500 chains preserve the solution set"};
}

Outcome induced_bridge()
{
    auto t0 = std::chrono::steady_clock::now();
    RoughSpace s = build_space(load_corpus(data("corpus/manifest.json")).entries);
    FiniteStructure f = induced_structure(s);
    SuiteReport r = check_suite(f, "er-companion");
    double secs = seconds_since(t0);
    return {r.holds && secs < 1.0, std::to_string(f.size()) + " classes, er-companion " +
                                       to_string(verdict_of(r)) + ", " + fmt_seconds(secs)};
}

Outcome parser_round_trip()
{
    std::mt19937 rng(1000);
    int ok = 0;
    for (int i = 0; i < 1000; ++i) {
        Term t = gen::random_term(rng, 5);
        try {
            ok += parse_term(print_term(t)) == t;
        }
        catch (const syntax_error&) {
        }
    }
    return {ok == 1000, std::to_string(ok) + "/1000 terms"};
}

} // namespace

int main(int argc, char** argv)
{
    const std::vector<std::pair<std::string, std::pair<std::string, std::function<Outcome()>>>> criteria = {
        {"1", {"corpus fidelity", corpus_fidelity}},
        {"2", {"approximation chain", approximation_chain}},
        {"3", {"partial-operator separation", operator_separation}},
        {"4", {"pawlak soundness", pawlak_soundness}},
        {"5", {"refutation with witnesses", [] { return witness_refutation("two_chain_broken_mono.json"); }}},
        {"5b", {"refutation with witnesses, 4-chain", [] { return witness_refutation("four_chain_broken_mono.json"); }}},
        {"6", {"oracle-equivalence enumeration", enumeration_oracle}},
        {"7", {"weak-equality semantics", weak_equality}},
        {"8", {"rule-soundness property", rule_soundness}},
        {"9", {"induced-structure bridge", induced_bridge}},
        {"10", {"parser round-trip", parser_round_trip}},
    };
    std::set<std::string> selected(argv + 1, argv + argc);
    bool all = true;
    for (const auto& [id, c] : criteria) {
        if (!selected.empty() && !selected.contains(id))
            continue;
        Outcome o;
        try {
            o = c.second();
        }
        catch (const std::exception& e) {
            o = {false, std::string("error: ") + e.what()};
        }
        std::cout << (o.pass ? "PASS" : "FAIL") << " criterion " << id << " (" << c.first << "): " << o.detail
                  << std::endl;
        all = all && o.pass;
    }
    return all ? 0 : 1;
}
