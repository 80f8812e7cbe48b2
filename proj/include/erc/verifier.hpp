#pragma once

// Checking of step-by-step solutions of one linear equation. Each step
// names the rule that is supposed to produce it; a step is judged by the
// solution set of what the rule really produces, not by its spelling.

#include "erc/linear.hpp"
#include "erc/rational.hpp"
#include "erc/term.hpp"

#include <json.hpp>

#include <algorithm>
#include <fstream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace erc {

enum class Rule { given, add, subtract, multiply, divide, cancel, transpose, simplify, conclude };

inline constexpr Rule all_rules[] = {Rule::given,  Rule::add,       Rule::subtract, Rule::multiply, Rule::divide,
                                     Rule::cancel, Rule::transpose, Rule::simplify, Rule::conclude};

inline std::string to_string(Rule r)
{
    switch (r) {
    case Rule::given: return "given";
    case Rule::add: return "add";
    case Rule::subtract: return "subtract";
    case Rule::multiply: return "multiply";
    case Rule::divide: return "divide";
    case Rule::cancel: return "cancel";
    case Rule::transpose: return "transpose";
    case Rule::simplify: return "simplify";
    case Rule::conclude: return "conclude";
    }
    return "?";
}

inline std::optional<Rule> rule_from_string(std::string_view s)
{
    for (Rule r : all_rules)
        if (to_string(r) == s)
            return r;
    return std::nullopt;
}

enum class ArgumentUse { none, required, optional };

inline ArgumentUse argument_use(Rule r)
{
    switch (r) {
    case Rule::add:
    case Rule::subtract:
    case Rule::multiply:
    case Rule::divide:
    case Rule::cancel:
        return ArgumentUse::required;
    case Rule::transpose:
        return ArgumentUse::optional;
    default:
        return ArgumentUse::none;
    }
}

struct RuleApplication {
    Rule rule = Rule::given;
    std::optional<Term> argument;

    friend bool operator==(const RuleApplication&, const RuleApplication&) = default;
};

inline std::string to_string(const RuleApplication& r)
{
    return r.argument ? to_string(r.rule) + " " + print_term(*r.argument) : to_string(r.rule);
}

class rule_error : public std::runtime_error {
public:
    enum class Kind { divide_by_zero, argument_not_present, bad_argument, not_applicable };
    rule_error(Kind k, const std::string& what) : std::runtime_error(what), kind_(k) {}
    Kind kind() const noexcept { return kind_; }

private:
    Kind kind_;
};

/// Checks that the argument matches the rule; throws rule_error.
inline void validate(const RuleApplication& r)
{
    auto use = argument_use(r.rule);
    if (use == ArgumentUse::required && !r.argument)
        throw rule_error(rule_error::Kind::bad_argument, to_string(r.rule) + " needs an argument");
    if (use == ArgumentUse::none && r.argument)
        throw rule_error(rule_error::Kind::bad_argument, to_string(r.rule) + " takes no argument");
}

// ---------------------------------------------------------------------------
// Top-level addends

struct Addend {
    bool negative = false;
    Term term;
    friend bool operator==(const Addend&, const Addend&) = default;
};

namespace detail {

inline Addend signed_addend(bool negative, const Term& t)
{
    if (t.is_apply() && t.op() == Op::neg)
        return {!negative, t.arg(0)};
    if (t.is_apply() && t.op() == Op::pos)
        return {negative, t.arg(0)};
    return {negative, t};
}

inline void collect_addends(const Term& t, std::vector<Addend>& out)
{
    if (t.is_apply() && (t.op() == Op::add || t.op() == Op::sub)) {
        collect_addends(t.arg(0), out);
        out.push_back(signed_addend(t.op() == Op::sub, t.arg(1)));
        return;
    }
    out.push_back(signed_addend(false, t));
}

/// Renders a polynomial as a sum of monomials, variables first.
inline std::vector<Addend> monomials(const Polynomial& p)
{
    std::vector<Addend> out;
    auto emit = [&](const std::string& m, const Rational& c) {
        Rational a = c < 0 ? Rational(-c) : c;
        std::optional<Term> vars;
        for (char v : m)
            vars = vars ? *vars * Term::variable(v) : Term::variable(v);
        Term t = !vars ? Term::constant(a) : a == 1 ? *vars : Term::constant(a) * *vars;
        out.push_back({c < 0, t});
    };
    for (const auto& [m, c] : p.terms())
        if (!m.empty())
            emit(m, c);
    if (p.constant_term() != 0)
        emit("", p.constant_term());
    return out;
}

} // namespace detail

/// Signed top-level addends of a side: "4x + 1 - (2x + 3)" gives +4x, +1, -(2x + 3).
inline std::vector<Addend> addends(const Term& t)
{
    std::vector<Addend> out;
    detail::collect_addends(t, out);
    return out;
}

/// Inverse of addends(); the empty sum is 0.
inline Term sum_of(const std::vector<Addend>& parts)
{
    if (parts.empty())
        return Term::constant(0);
    Term t = parts[0].negative ? -parts[0].term : parts[0].term;
    for (std::size_t i = 1; i < parts.size(); ++i)
        t = parts[i].negative ? t - parts[i].term : t + parts[i].term;
    return t;
}

// ---------------------------------------------------------------------------
// Rule application

namespace detail {

inline Rational constant_argument(const RuleApplication& r)
{
    Polynomial p;
    try {
        p = linear_part(*r.argument);
    }
    catch (const linear_error& e) {
        throw rule_error(e.kind() == linear_error::Kind::undefined ? rule_error::Kind::divide_by_zero
                                                                  : rule_error::Kind::bad_argument,
                         e.what());
    }
    if (!p.is_constant())
        throw rule_error(rule_error::Kind::bad_argument,
                         to_string(r.rule) + " needs a constant argument, got " + print_term(*r.argument));
    return p.constant_term();
}

inline Term divide_side(const Term& side, const Rational& k)
{
    std::vector<Addend> out;
    for (const auto& a : addends(side)) {
        Polynomial p = linear_part(a.term).scaled(1 / k);
        auto parts = monomials(p);
        if (parts.empty())
            out.push_back({a.negative, Term::constant(0)});
        else if (parts.size() == 1)
            out.push_back({a.negative != parts[0].negative, parts[0].term});
        else
            out.push_back({a.negative, sum_of(parts)});
    }
    return sum_of(out);
}

} // namespace detail

/// The equation `r` genuinely produces from `e`. Throws rule_error.
inline Equation apply_rule(const Equation& e, const RuleApplication& r)
{
    using K = rule_error::Kind;
    validate(r);
    switch (r.rule) {
    case Rule::given:
    case Rule::conclude:
        throw rule_error(K::not_applicable, to_string(r.rule) + " does not transform an equation");
    case Rule::add:
        return {e.lhs + *r.argument, e.rhs + *r.argument};
    case Rule::subtract:
        return {e.lhs - *r.argument, e.rhs - *r.argument};
    case Rule::multiply: {
        if (detail::constant_argument(r) == 0)
            throw rule_error(K::bad_argument, "multiplying both sides by 0 loses the equation");
        return {*r.argument * e.lhs, *r.argument * e.rhs};
    }
    case Rule::divide:
    case Rule::cancel: {
        Rational k = detail::constant_argument(r);
        if (k == 0)
            throw rule_error(K::divide_by_zero, "division by zero");
        return {detail::divide_side(e.lhs, k), detail::divide_side(e.rhs, k)};
    }
    case Rule::transpose: {
        if (!r.argument)
            throw rule_error(K::bad_argument, "transpose needs an argument to be applied");
        Addend t = detail::signed_addend(false, *r.argument);
        if (e.lhs == *r.argument)
            return {Term::constant(0), e.rhs - *r.argument};
        if (e.rhs == *r.argument)
            return {e.lhs - *r.argument, Term::constant(0)};
        for (int side = 0; side < 2; ++side) {
            auto from = addends(side == 0 ? e.lhs : e.rhs);
            for (std::size_t i = 0; i < from.size(); ++i) {
                if (!(from[i].term == t.term || from[i].term == *r.argument))
                    continue;
                Addend moved = from[i];
                from.erase(from.begin() + static_cast<std::ptrdiff_t>(i));
                const Term& other = side == 0 ? e.rhs : e.lhs;
                Term other_new = moved.negative ? other + moved.term : other - moved.term;
                return side == 0 ? Equation{sum_of(from), other_new} : Equation{other_new, sum_of(from)};
            }
        }
        throw rule_error(K::argument_not_present, print_term(*r.argument) + " is not a term of either side");
    }
    case Rule::simplify:
        return to_equation(normalize_linear(e));
    }
    throw rule_error(K::not_applicable, "unknown rule");
}

// ---------------------------------------------------------------------------
// Step verdicts

/// Severity weights. The defaults make a divide-family slip cost one point
/// plus one per addend the student forgot to divide.
struct Rubric {
    int divide_base = 1;
    int per_untouched_addend = 1;
    int other_unsound = 1;

    friend bool operator==(const Rubric&, const Rubric&) = default;
};

class rubric_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

inline Rubric rubric_from_json(const nlohmann::json& j, Rubric base = {})
{
    if (!j.is_object())
        throw rubric_error("rubric must be a JSON object");
    for (const auto& [key, value] : j.items()) {
        if (!value.is_number_integer() || value.get<long long>() < 0)
            throw rubric_error("rubric field '" + key + "' must be a non-negative integer");
        int v = value.get<int>();
        if (key == "divide_base")
            base.divide_base = v;
        else if (key == "per_untouched_addend")
            base.per_untouched_addend = v;
        else if (key == "other_unsound")
            base.other_unsound = v;
        else
            throw rubric_error("unknown rubric field '" + key + "'");
    }
    if (base.divide_base < 1 || base.other_unsound < 1)
        throw rubric_error("unsound steps must weigh at least 1");
    return base;
}

inline Rubric load_rubric_file(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        throw rubric_error("cannot open " + path);
    try {
        return rubric_from_json(nlohmann::json::parse(in));
    }
    catch (const nlohmann::json::parse_error& e) {
        throw rubric_error(path + ": " + e.what());
    }
}

inline nlohmann::ordered_json to_json(const Rubric& r)
{
    return {{"divide_base", r.divide_base},
            {"per_untouched_addend", r.per_untouched_addend},
            {"other_unsound", r.other_unsound}};
}

enum class Classification { sound, mislabeled, unsound };

inline std::string to_string(Classification c)
{
    switch (c) {
    case Classification::sound: return "sound";
    case Classification::mislabeled: return "mislabeled";
    case Classification::unsound: return "unsound";
    }
    return "?";
}

struct StepVerdict {
    Classification classification = Classification::sound;
    int severity = 0;
    std::string diagnosis;
    /// What the declared rule really produces, when it can be applied.
    std::optional<Equation> corrected;

    friend bool operator==(const StepVerdict&, const StepVerdict&) = default;
};

namespace detail {

/// Addends of `before` that reappear unchanged on the same side of `after`.
inline int untouched_addends(const Equation& before, const Equation& after)
{
    int count = 0;
    for (int side = 0; side < 2; ++side) {
        auto was = addends(side == 0 ? before.lhs : before.rhs);
        auto now = addends(side == 0 ? after.lhs : after.rhs);
        for (const auto& a : was) {
            auto it = std::find(now.begin(), now.end(), a);
            if (it != now.end()) {
                now.erase(it);
                ++count;
            }
        }
    }
    return count;
}

/// A transposition without a named term: `claimed` (in some orientation)
/// has the same difference lhs - rhs as `prev`, and what left the left side
/// is a nonzero signed sum of some of prev's top-level addends.
inline bool is_transposition(const Equation& prev, const Equation& claimed)
{
    Polynomial pl = linear_part(prev.lhs), pr = linear_part(prev.rhs);
    std::vector<Polynomial> parts;
    for (const auto* side : {&prev.lhs, &prev.rhs})
        for (const auto& a : addends(*side)) {
            Polynomial p = linear_part(a.term);
            parts.push_back(a.negative ? p.scaled(-1) : p);
        }
    if (parts.size() > 20)
        return false;
    for (const Equation& c : {claimed, claimed.swapped()}) {
        Polynomial cl = linear_part(c.lhs), cr = linear_part(c.rhs);
        if (!(cl - cr == pl - pr))
            continue;
        Polynomial moved = pl - cl;
        if (moved == Polynomial())
            continue;
        for (std::uint32_t mask = 1; mask < (1u << parts.size()); ++mask) {
            Polynomial s;
            for (std::size_t i = 0; i < parts.size(); ++i)
                if (mask >> i & 1u)
                    s = s + parts[i];
            if (s == moved)
                return true;
        }
    }
    return false;
}

inline bool divide_family(Rule r) { return r == Rule::divide || r == Rule::cancel; }

} // namespace detail

/// Classifies one step. Parse errors are the caller's; unsolvable claimed
/// equations are reported as unsound.
inline StepVerdict check_step(const Equation& prev, const Equation& claimed, const RuleApplication& r,
                              const Rubric& rubric = {})
{
    validate(r);
    if (r.rule == Rule::given)
        throw rule_error(rule_error::Kind::not_applicable, "given may only open a solution");

    StepVerdict v;
    SolutionSet before = solution_set(prev);
    SolutionSet after;
    try {
        after = solution_set(claimed);
    }
    catch (const linear_error& e) {
        v.classification = Classification::unsound;
        v.severity = rubric.other_unsound;
        v.diagnosis = std::string("claimed equation cannot be solved: ") + e.what();
        return v;
    }

    bool declared_fits = false;
    std::string why;
    if (r.rule == Rule::simplify || r.rule == Rule::conclude) {
        declared_fits = before == after;
        if (r.rule == Rule::simplify)
            v.corrected = apply_rule(prev, r);
    }
    else if (r.rule == Rule::transpose && !r.argument) {
        declared_fits = before == after && detail::is_transposition(prev, claimed);
        if (!declared_fits)
            why = "no term of the previous equation is moved across";
    }
    else {
        try {
            v.corrected = apply_rule(prev, r);
            declared_fits = solution_set(*v.corrected) == after;
        }
        catch (const rule_error& e) {
            why = e.what();
        }
    }

    if (declared_fits)
        return v;
    if (before == after) {
        v.classification = Classification::mislabeled;
        // simplify reaches every equation with the same solution set
        v.diagnosis = "sound as simplify";
        if (!why.empty())
            v.diagnosis += "; " + why;
        return v;
    }
    v.classification = Classification::unsound;
    if (detail::divide_family(r.rule)) {
        int untouched = detail::untouched_addends(prev, claimed);
        v.severity = rubric.divide_base + rubric.per_untouched_addend * untouched;
        v.diagnosis = "solution set changes from " + to_string(before) + " to " + to_string(after) + "; " +
                      std::to_string(untouched) + (untouched == 1 ? " addend was" : " addends were") +
                      " not divided";
    }
    else {
        v.severity = rubric.other_unsound;
        v.diagnosis = "solution set changes from " + to_string(before) + " to " + to_string(after);
    }
    if (!why.empty())
        v.diagnosis += "; " + why;
    return v;
}

// ---------------------------------------------------------------------------
// Scripts

enum class Subdomain { equational, graphical };

inline std::string to_string(Subdomain s) { return s == Subdomain::equational ? "equational" : "graphical"; }

inline std::optional<Subdomain> subdomain_from_string(std::string_view s)
{
    if (s == "equational")
        return Subdomain::equational;
    if (s == "graphical")
        return Subdomain::graphical;
    return std::nullopt;
}

struct ScriptStep {
    Equation equation;
    RuleApplication rule;
    std::size_t line = 0;
};

struct SolutionScript {
    std::string id;
    Subdomain subdomain = Subdomain::equational;
    /// The first step is always the given equation.
    std::vector<ScriptStep> steps;
    /// Free-text lines of a graphical solution, verbatim.
    std::vector<std::string> notes;
};

class script_error : public std::runtime_error {
public:
    script_error(std::size_t line, const std::string& message)
        : std::runtime_error("line " + std::to_string(line) + ": " + message), line_(line)
    {
    }
    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

namespace detail {

inline std::string trim(std::string_view s)
{
    auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos)
        return {};
    auto e = s.find_last_not_of(" \t\r");
    return std::string(s.substr(b, e - b + 1));
}

inline RuleApplication parse_rule(const std::string& text, std::size_t line)
{
    std::string keyword = text.substr(0, text.find_first_of(" \t"));
    std::string rest = trim(text.substr(keyword.size()));
    auto rule = rule_from_string(keyword);
    if (!rule)
        throw script_error(line, "unknown rule '" + keyword + "'");
    RuleApplication r{*rule, std::nullopt};
    if (!rest.empty()) {
        try {
            r.argument = parse_term(rest);
        }
        catch (const syntax_error& e) {
            throw script_error(line, std::string("rule argument: ") + e.what());
        }
    }
    try {
        validate(r);
    }
    catch (const rule_error& e) {
        throw script_error(line, e.what());
    }
    if (r.rule == Rule::given)
        throw script_error(line, "'given' belongs on its own line");
    return r;
}

inline Equation parse_step_equation(const std::string& text, std::size_t line)
{
    try {
        return parse_equation(text);
    }
    catch (const syntax_error& e) {
        throw script_error(line, e.what());
    }
}

} // namespace detail

/// Line format: optional `id:` and `subdomain:` headers, one `given:` line,
/// then `step: <equation> ; <rule> [<term>]` or, for graphical solutions,
/// `note: <text>`. Blank lines and lines starting with # are skipped.
inline SolutionScript parse_solution(std::string_view text, std::string default_id = "")
{
    SolutionScript s;
    s.id = std::move(default_id);
    std::istringstream in{std::string(text)};
    std::string raw;
    std::size_t line = 0;
    bool seen_given = false, seen_subdomain = false;
    while (std::getline(in, raw)) {
        ++line;
        std::string l = detail::trim(raw);
        if (l.empty() || l[0] == '#')
            continue;
        auto colon = l.find(':');
        if (colon == std::string::npos)
            throw script_error(line, "expected 'key: value'");
        std::string key = detail::trim(l.substr(0, colon));
        std::string value = detail::trim(l.substr(colon + 1));

        if (key == "id") {
            if (seen_given)
                throw script_error(line, "headers must precede the given line");
            s.id = value;
        }
        else if (key == "subdomain") {
            if (seen_given || seen_subdomain)
                throw script_error(line, "subdomain must be declared once, before the given line");
            auto sd = subdomain_from_string(value);
            if (!sd)
                throw script_error(line, "unknown subdomain '" + value + "'");
            s.subdomain = *sd;
            seen_subdomain = true;
        }
        else if (key == "given") {
            if (seen_given)
                throw script_error(line, "second given line");
            s.steps.push_back({detail::parse_step_equation(value, line), {Rule::given, std::nullopt}, line});
            seen_given = true;
        }
        else if (key == "step") {
            if (!seen_given)
                throw script_error(line, "step before the given line");
            if (s.subdomain != Subdomain::equational)
                throw script_error(line, "graphical solutions use note lines");
            auto semi = value.rfind(';');
            if (semi == std::string::npos)
                throw script_error(line, "missing '; <rule>'");
            Equation eq = detail::parse_step_equation(detail::trim(value.substr(0, semi)), line);
            std::string rule = detail::trim(value.substr(semi + 1));
            if (rule.empty())
                throw script_error(line, "missing rule after ';'");
            s.steps.push_back({eq, detail::parse_rule(rule, line), line});
        }
        else if (key == "note") {
            if (!seen_given)
                throw script_error(line, "note before the given line");
            if (s.subdomain != Subdomain::graphical)
                throw script_error(line, "note lines need 'subdomain: graphical'");
            s.notes.push_back(value);
        }
        else
            throw script_error(line, "unknown key '" + key + "'");
    }
    if (!seen_given)
        throw script_error(line, "missing given line");
    return s;
}

inline SolutionScript load_solution_file(const std::string& path, std::string default_id = "")
{
    std::ifstream in(path);
    if (!in)
        throw std::runtime_error("cannot open " + path);
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_solution(buf.str(), std::move(default_id));
}

// ---------------------------------------------------------------------------
// Ledgers

struct StepRecord {
    std::size_t index = 0; // 1-based position in the script
    std::string equation;
    std::string rule;
    StepVerdict verdict;

    friend bool operator==(const StepRecord&, const StepRecord&) = default;
};

struct DefectLedger {
    std::string id;
    Subdomain subdomain = Subdomain::equational;
    bool verifiable = true;
    std::vector<StepRecord> steps;
    int total_severity = 0;
    std::optional<SolutionSet> final_answer;
    std::optional<SolutionSet> true_answer;

    bool answer_correct() const { return final_answer && true_answer && *final_answer == *true_answer; }
    std::vector<int> severities() const
    {
        std::vector<int> out;
        for (const auto& s : steps)
            out.push_back(s.verdict.severity);
        return out;
    }
    friend bool operator==(const DefectLedger&, const DefectLedger&) = default;
};

inline DefectLedger verify_solution(const SolutionScript& s, const Rubric& rubric = {})
{
    DefectLedger ledger;
    ledger.id = s.id;
    ledger.subdomain = s.subdomain;
    if (s.steps.empty())
        throw script_error(0, "solution has no given line");
    ledger.true_answer = solution_set(s.steps[0].equation);
    if (s.subdomain == Subdomain::graphical) {
        ledger.verifiable = false;
        return ledger;
    }
    for (std::size_t i = 0; i < s.steps.size(); ++i) {
        const auto& step = s.steps[i];
        StepRecord rec{i + 1, print_equation(step.equation), to_string(step.rule), {}};
        if (i > 0)
            rec.verdict = check_step(s.steps[i - 1].equation, step.equation, step.rule, rubric);
        ledger.total_severity += rec.verdict.severity;
        ledger.steps.push_back(std::move(rec));
    }
    ledger.final_answer = solution_set(s.steps.back().equation);
    return ledger;
}

// JSON and markdown renderings -----------------------------------------------

namespace detail {

inline nlohmann::ordered_json to_json(const SolutionSet& s)
{
    nlohmann::ordered_json j;
    switch (s.kind) {
    case SolutionSet::Kind::empty: j["kind"] = "empty"; break;
    case SolutionSet::Kind::all: j["kind"] = "all"; break;
    case SolutionSet::Kind::single:
        j["kind"] = "single";
        j["value"] = erc::to_string(s.value);
        break;
    }
    return j;
}

inline SolutionSet solution_set_from_json(const nlohmann::json& j)
{
    std::string kind = j.at("kind").get<std::string>();
    if (kind == "empty")
        return SolutionSet::none();
    if (kind == "all")
        return SolutionSet::everything();
    if (kind == "single")
        return SolutionSet::just(Rational(j.at("value").get<std::string>()));
    throw std::runtime_error("unknown solution-set kind '" + kind + "'");
}

inline Classification classification_from_string(const std::string& s)
{
    for (Classification c : {Classification::sound, Classification::mislabeled, Classification::unsound})
        if (to_string(c) == s)
            return c;
    throw std::runtime_error("unknown classification '" + s + "'");
}

} // namespace detail

inline nlohmann::ordered_json to_json(const DefectLedger& l)
{
    nlohmann::ordered_json j;
    j["id"] = l.id;
    j["subdomain"] = to_string(l.subdomain);
    j["verifiable"] = l.verifiable;
    nlohmann::ordered_json steps = nlohmann::ordered_json::array();
    for (const auto& s : l.steps) {
        nlohmann::ordered_json o;
        o["step"] = s.index;
        o["equation"] = s.equation;
        o["rule"] = s.rule;
        o["verdict"] = to_string(s.verdict.classification);
        o["severity"] = s.verdict.severity;
        o["diagnosis"] = s.verdict.diagnosis;
        o["corrected"] = s.verdict.corrected ? nlohmann::ordered_json(print_equation(*s.verdict.corrected))
                                             : nlohmann::ordered_json(nullptr);
        steps.push_back(o);
    }
    j["steps"] = steps;
    j["total_severity"] = l.total_severity;
    j["final_answer"] = l.final_answer ? detail::to_json(*l.final_answer) : nlohmann::ordered_json(nullptr);
    j["true_answer"] = l.true_answer ? detail::to_json(*l.true_answer) : nlohmann::ordered_json(nullptr);
    j["answer_correct"] = l.answer_correct();
    return j;
}

inline DefectLedger ledger_from_json(const nlohmann::json& j)
{
    DefectLedger l;
    l.id = j.at("id").get<std::string>();
    auto sd = subdomain_from_string(j.at("subdomain").get<std::string>());
    if (!sd)
        throw std::runtime_error("unknown subdomain");
    l.subdomain = *sd;
    l.verifiable = j.at("verifiable").get<bool>();
    for (const auto& o : j.at("steps")) {
        StepRecord s;
        s.index = o.at("step").get<std::size_t>();
        s.equation = o.at("equation").get<std::string>();
        s.rule = o.at("rule").get<std::string>();
        s.verdict.classification = detail::classification_from_string(o.at("verdict").get<std::string>());
        s.verdict.severity = o.at("severity").get<int>();
        s.verdict.diagnosis = o.at("diagnosis").get<std::string>();
        if (!o.at("corrected").is_null())
            s.verdict.corrected = parse_equation(o.at("corrected").get<std::string>());
        l.steps.push_back(std::move(s));
    }
    l.total_severity = j.at("total_severity").get<int>();
    if (!j.at("final_answer").is_null())
        l.final_answer = detail::solution_set_from_json(j.at("final_answer"));
    if (!j.at("true_answer").is_null())
        l.true_answer = detail::solution_set_from_json(j.at("true_answer"));
    return l;
}

inline std::string to_markdown(const DefectLedger& l)
{
    std::ostringstream out;
    out << "### " << (l.id.empty() ? "solution" : l.id) << " (" << to_string(l.subdomain) << ")\n\n";
    if (!l.verifiable) {
        out << "Not verifiable: graphical reasoning is not checked step by step.\n";
        return out.str();
    }
    out << "| step | equation | rule | verdict | severity | diagnosis |\n";
    out << "|---|---|---|---|---|---|\n";
    for (const auto& s : l.steps)
        out << "| " << s.index << " | " << s.equation << " | " << s.rule << " | "
            << to_string(s.verdict.classification) << " | " << s.verdict.severity << " | " << s.verdict.diagnosis
            << " |\n";
    out << "\nTotal severity: " << l.total_severity << "  \n";
    if (l.final_answer && l.true_answer)
        out << "Final answer: " << to_string(*l.final_answer) << " (expected " << to_string(*l.true_answer) << ", "
            << (l.answer_correct() ? "correct" : "incorrect") << ")\n";
    return out.str();
}

} // namespace erc
