#include "erc/verifier.hpp"
#include "generators.hpp"

#include <gtest/gtest.h>

using namespace erc;

namespace {

std::string corpus(const std::string& name) { return std::string(ERC_DATA_DIR) + "/corpus/" + name; }

Equation eq(const char* text) { return parse_equation(text); }
RuleApplication rule(Rule r, const char* arg = nullptr)
{
    return {r, arg ? std::optional<Term>(parse_term(arg)) : std::nullopt};
}

std::vector<Classification> classes(const DefectLedger& l)
{
    std::vector<Classification> out;
    for (const auto& s : l.steps)
        out.push_back(s.verdict.classification);
    return out;
}

} // namespace

TEST(ApplyRule, CancelDividesEveryAddend)
{
    // oracle: each addend of 2x + 3 = 4x + 1 halved by hand
    Term x = Term::variable('x');
    Equation expected{x + Term::constant(Rational(3, 2)), Term::constant(2) * x + Term::constant(Rational(1, 2))};
    Equation got = apply_rule(eq("2x+3 = 4x+1"), rule(Rule::cancel, "2"));
    EXPECT_EQ(got, expected);
    EXPECT_EQ(print_equation(got), "x + 3/2 = 2x + 1/2");
}

TEST(ApplyRule, SubtractFromBothSides)
{
    EXPECT_EQ(apply_rule(eq("x+3 = 2x+1"), rule(Rule::subtract, "3")), eq("x+3-3 = 2x+1-3"));
}

TEST(ApplyRule, TransposeOneTerm)
{
    EXPECT_EQ(apply_rule(eq("2x+3 = 4x+1"), rule(Rule::transpose, "1")), eq("2x+3-1 = 4x"));
    // a subtracted term comes back added
    EXPECT_EQ(apply_rule(eq("0 = 2x-2"), rule(Rule::transpose, "2")), eq("0+2 = 2x"));
}

TEST(ApplyRule, TransposeWholeSide)
{
    EXPECT_EQ(apply_rule(eq("2x+3 = 4x+1"), rule(Rule::transpose, "2x+3")), eq("0 = 4x+1-(2x+3)"));
    EXPECT_EQ(apply_rule(eq("2x+3 = 4x+1"), rule(Rule::transpose, "4x+1")), eq("2x+3-(4x+1) = 0"));
}

TEST(ApplyRule, AddMultiplyDivide)
{
    EXPECT_EQ(apply_rule(eq("x = 2"), rule(Rule::add, "x+1")), eq("x+(x+1) = 2+(x+1)"));
    EXPECT_EQ(apply_rule(eq("x+1 = 2"), rule(Rule::multiply, "3")), eq("3(x+1) = 3×2"));
    EXPECT_EQ(print_equation(apply_rule(eq("4x - 6 = 0 - (2x + 3)"), rule(Rule::divide, "2"))),
              "2x - 3 = 0 - (x + 3/2)");
    EXPECT_EQ(print_equation(apply_rule(eq("2x+3 = 4x+1"), rule(Rule::simplify))), "2x - 2 = 0");
}

TEST(ApplyRule, Errors)
{
    try {
        apply_rule(eq("2x = 4"), rule(Rule::divide, "0"));
        FAIL();
    }
    catch (const rule_error& e) {
        EXPECT_EQ(e.kind(), rule_error::Kind::divide_by_zero);
    }
    try {
        apply_rule(eq("2x+3 = 4x+1"), rule(Rule::transpose, "7"));
        FAIL();
    }
    catch (const rule_error& e) {
        EXPECT_EQ(e.kind(), rule_error::Kind::argument_not_present);
    }
    EXPECT_THROW(apply_rule(eq("2x = 4"), rule(Rule::divide, "x")), rule_error);
    EXPECT_THROW(apply_rule(eq("2x = 4"), rule(Rule::divide, "1/(2-2)")), rule_error);
    EXPECT_THROW(apply_rule(eq("2x = 4"), rule(Rule::multiply, "0")), rule_error);
    EXPECT_THROW(apply_rule(eq("2x = 4"), rule(Rule::add)), rule_error);
    EXPECT_THROW(apply_rule(eq("2x = 4"), rule(Rule::simplify, "2")), rule_error);
    EXPECT_THROW(apply_rule(eq("2x = 4"), rule(Rule::conclude)), rule_error);
    EXPECT_THROW(apply_rule(eq("2x = 4"), rule(Rule::transpose)), rule_error);
}

TEST(CheckStep, CancelOnlyTheXTerms)
{
    StepVerdict v = check_step(eq("2x+3 = 4x+1"), eq("x+3 = 2x+1"), rule(Rule::cancel, "2"));
    EXPECT_EQ(v.classification, Classification::unsound);
    EXPECT_EQ(v.severity, 3);
    ASSERT_TRUE(v.corrected);
    EXPECT_EQ(print_equation(*v.corrected), "x + 3/2 = 2x + 1/2");
}

TEST(CheckStep, CancelTheFactorTwo)
{
    StepVerdict v = check_step(eq("2x+2 = 4x"), eq("x+2 = 2x"), rule(Rule::cancel, "2"));
    EXPECT_EQ(v.classification, Classification::unsound);
    EXPECT_EQ(v.severity, 2);
}

TEST(CheckStep, MislabeledTranspose)
{
    StepVerdict v = check_step(eq("x+2-x = 2x-x"), eq("x = 2"), rule(Rule::transpose));
    EXPECT_EQ(v.classification, Classification::mislabeled);
    EXPECT_EQ(v.severity, 0);
    EXPECT_TRUE(v.diagnosis.starts_with("sound as simplify"));
}

TEST(CheckStep, TransposeWithoutArgumentMovesTerms)
{
    // 0 = 2 - x read right to left: x and -2 cross over
    StepVerdict v = check_step(eq("x-x = 2x-2-x"), eq("0 = 2-x"), rule(Rule::transpose));
    EXPECT_EQ(v.classification, Classification::sound);
    EXPECT_EQ(check_step(eq("x+2 = 5"), eq("x = 5-2"), rule(Rule::transpose)).classification,
              Classification::sound);
}

TEST(CheckStep, SolutionSetNotSpelling)
{
    // the rule yields 0 = x - 2; 0 = 2 - x has the same solutions
    EXPECT_EQ(check_step(eq("x = 2x-2"), eq("0 = 2-x"), rule(Rule::subtract, "x")).classification,
              Classification::sound);
}

TEST(CheckStep, OtherUnsoundRulesWeighOne)
{
    StepVerdict v = check_step(eq("x+3 = 5"), eq("x = 8"), rule(Rule::subtract, "3"));
    EXPECT_EQ(v.classification, Classification::unsound);
    EXPECT_EQ(v.severity, 1);
    StepVerdict bad = check_step(eq("x+3 = 5"), eq("x = 8"), rule(Rule::transpose, "7"));
    EXPECT_EQ(bad.classification, Classification::unsound);
    EXPECT_NE(bad.diagnosis.find("not a term"), std::string::npos);
    StepVerdict nonlinear = check_step(eq("x = 1"), eq("x x = 1"), rule(Rule::multiply, "x"));
    EXPECT_EQ(nonlinear.classification, Classification::unsound);
}

TEST(CheckStep, RubricOverride)
{
    Rubric r = rubric_from_json(nlohmann::json::parse(R"({"per_untouched_addend": 2})"));
    EXPECT_EQ(check_step(eq("2x+3 = 4x+1"), eq("x+3 = 2x+1"), rule(Rule::cancel, "2"), r).severity, 5);
    EXPECT_THROW(rubric_from_json(nlohmann::json::parse(R"({"bogus": 1})")), rubric_error);
    EXPECT_THROW(rubric_from_json(nlohmann::json::parse(R"({"divide_base": 0})")), rubric_error);
    EXPECT_THROW(rubric_from_json(nlohmann::json::parse(R"({"other_unsound": -1})")), rubric_error);
    EXPECT_EQ(rubric_from_json(to_json(r)), r);
}

TEST(VerifySolution, SolutionOne)
{
    DefectLedger l = verify_solution(load_solution_file(corpus("solution1.sol")));
    EXPECT_EQ(l.id, "S1");
    EXPECT_EQ(l.severities(), (std::vector<int>{0, 3, 0, 0, 0, 0}));
    EXPECT_EQ(l.total_severity, 3);
    EXPECT_EQ(l.final_answer, SolutionSet::just(2));
    EXPECT_EQ(l.true_answer, SolutionSet::just(1));
    EXPECT_FALSE(l.answer_correct());
}

TEST(VerifySolution, SolutionTwo)
{
    DefectLedger l = verify_solution(load_solution_file(corpus("solution2.sol")));
    EXPECT_EQ(l.severities(), (std::vector<int>{0, 0, 0, 2, 0, 0}));
    EXPECT_EQ(l.total_severity, 2);
    using C = Classification;
    EXPECT_EQ(classes(l), (std::vector<C>{C::sound, C::sound, C::sound, C::unsound, C::sound, C::mislabeled}));
}

TEST(VerifySolution, SolutionsThreeAndFive)
{
    for (const char* f : {"solution3.sol", "solution5.sol"}) {
        DefectLedger l = verify_solution(load_solution_file(corpus(f)));
        EXPECT_EQ(l.total_severity, 0) << f;
        for (const auto& s : l.steps)
            EXPECT_EQ(s.verdict.classification, Classification::sound) << f << " step " << s.index;
        EXPECT_EQ(l.final_answer, SolutionSet::just(1));
        EXPECT_TRUE(l.answer_correct());
    }
}

TEST(VerifySolution, GraphicalIsNotVerifiable)
{
    SolutionScript s = load_solution_file(corpus("solution6.sol"));
    EXPECT_EQ(s.subdomain, Subdomain::graphical);
    EXPECT_EQ(s.notes.size(), 2u);
    DefectLedger l = verify_solution(s);
    EXPECT_FALSE(l.verifiable);
    EXPECT_TRUE(l.steps.empty());
    EXPECT_EQ(l.total_severity, 0);
}

TEST(VerifySolution, LedgerJsonRoundTrip)
{
    for (const char* f : {"solution1.sol", "solution2.sol", "solution5.sol", "solution9.sol"}) {
        DefectLedger l = verify_solution(load_solution_file(corpus(f)));
        nlohmann::json j = nlohmann::json::parse(to_json(l).dump());
        EXPECT_EQ(ledger_from_json(j), l) << f;
    }
}

TEST(VerifySolution, Markdown)
{
    std::string md = to_markdown(verify_solution(load_solution_file(corpus("solution1.sol"))));
    EXPECT_NE(md.find("| 2 | x + 3 = 2x + 1 | cancel 2 | unsound | 3 |"), std::string::npos) << md;
    EXPECT_NE(md.find("Total severity: 3"), std::string::npos);
}

TEST(ParseSolution, SixLineFixture)
{
    SolutionScript s = load_solution_file(corpus("solution1.sol"));
    ASSERT_EQ(s.steps.size(), 6u);
    EXPECT_EQ(s.steps[0].rule.rule, Rule::given);
    EXPECT_EQ(s.steps[1].rule, rule(Rule::cancel, "2"));
    EXPECT_EQ(s.steps[5].rule, rule(Rule::transpose));
    EXPECT_EQ(s.steps[1].line, 5u);
}

TEST(ParseSolution, GivenOnly)
{
    SolutionScript s = parse_solution("given: 2x+3 = 4x+1\n");
    EXPECT_EQ(s.steps.size(), 1u);
    DefectLedger l = verify_solution(s);
    EXPECT_EQ(l.final_answer, SolutionSet::just(1));
}

TEST(ParseSolution, LineErrors)
{
    auto line_of = [](const char* text) -> std::size_t {
        try {
            parse_solution(text);
        }
        catch (const script_error& e) {
            return e.line();
        }
        return 0;
    };
    EXPECT_EQ(line_of("given: x = 1\nstep: x = 1 ; cancelling 2\n"), 2u);
    EXPECT_EQ(line_of("given: x = 1\n\nstep: x = 1\n"), 3u);
    EXPECT_EQ(line_of("step: x = 1 ; simplify\n"), 1u);
    EXPECT_EQ(line_of("given: x = = 1\n"), 1u);
    EXPECT_EQ(line_of("given: x = 1\nstep: x = 1 ; cancel\n"), 2u);
    EXPECT_EQ(line_of("given: x = 1\nstep: x = 1 ; simplify 3\n"), 2u);
    EXPECT_EQ(line_of("given: x = 1\nnote: hello\n"), 2u);
    EXPECT_EQ(line_of("subdomain: graphical\ngiven: x = 1\nstep: x = 1 ; simplify\n"), 3u);
    EXPECT_EQ(line_of("subdomain: spatial\n"), 1u);
    EXPECT_EQ(line_of("given: x = 1\ngiven: x = 2\n"), 2u);
    EXPECT_EQ(line_of("# nothing\n"), 1u);
    EXPECT_EQ(line_of("given: x = 1\nwhatever\n"), 2u);
}

TEST(Properties, ValidRuleChainsKeepTheSolutionSet)
{
    std::mt19937 rng(99);
    int chains = 0;
    while (chains < 300) {
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
            RuleApplication r = gen::random_valid_rule(rng, e);
            Equation next = apply_rule(e, r);
            ASSERT_EQ(solution_set(next), truth) << print_equation(e) << " ; " << to_string(r);
            EXPECT_EQ(check_step(e, next, r).classification, Classification::sound)
                << print_equation(e) << " ; " << to_string(r);
            e = next;
        }
    }
}

TEST(Properties, DivideThenMultiply)
{
    std::mt19937 rng(5);
    for (int i = 0; i < 200; ++i) {
        Equation e = gen::random_linear_equation(rng);
        Term t = Term::constant(Rational(1 + i % 7, 1 + i % 3));
        Equation back = apply_rule(apply_rule(e, {Rule::divide, t}), {Rule::multiply, t});
        EXPECT_EQ(solution_set(back), solution_set(e));
    }
}

TEST(Properties, SoundIsSymmetricUnderSwap)
{
    std::mt19937 rng(8);
    for (int i = 0; i < 200; ++i) {
        Equation e = gen::random_linear_equation(rng);
        RuleApplication r = gen::random_valid_rule(rng, e);
        Equation claimed = apply_rule(e, r);
        EXPECT_EQ(check_step(e, claimed, r), check_step(e, claimed.swapped(), r)) << print_equation(e);
    }
}

TEST(Properties, MislabeledKeepsSolutionsAndSeverityTracksUnsound)
{
    std::mt19937 rng(21);
    for (int i = 0; i < 300; ++i) {
        Equation prev = gen::random_linear_equation(rng);
        Equation claimed = gen::random_linear_equation(rng, 2);
        RuleApplication r = gen::random_valid_rule(rng, prev);
        StepVerdict v;
        try {
            v = check_step(prev, claimed, r);
        }
        catch (const linear_error&) {
            continue;
        }
        if (v.classification == Classification::mislabeled)
            EXPECT_EQ(solution_set(prev), solution_set(claimed));
        EXPECT_EQ(v.severity == 0, v.classification != Classification::unsound);
    }
}
