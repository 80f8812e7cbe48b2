#include "erc/rough_space.hpp"
#include "erc/suites.hpp"

#include <gtest/gtest.h>

#include <chrono>

using namespace erc;

namespace {

std::string manifest() { return std::string(ERC_DATA_DIR) + "/corpus/manifest.json"; }

const RoughSpace& corpus_space()
{
    static const RoughSpace s = build_space(load_corpus(manifest()).entries);
    return s;
}

CorpusEntry entry(std::string id, std::string target, int severity, Subdomain sd = Subdomain::equational)
{
    CorpusEntry c;
    c.ledger.id = std::move(id);
    c.ledger.subdomain = sd;
    c.ledger.total_severity = severity;
    c.target = std::move(target);
    return c;
}

std::vector<CorpusEntry> equational_corpus()
{
    return {entry("A", "P", 3), entry("B", "P", 1), entry("P", "P", 0), entry("Q", "Q", 0), entry("C", "Q", 2),
            entry("D", "Q", 2)};
}

} // namespace

TEST(Corpus, SeveritiesFromLedgers)
{
    Corpus c = load_corpus(manifest());
    std::map<std::string, int> sev;
    for (const auto& e : c.entries)
        sev[e.ledger.id] = e.ledger.total_severity;
    EXPECT_EQ(sev.at("S1"), 3);
    EXPECT_EQ(sev.at("S2"), 2);
    EXPECT_EQ(sev.at("S3"), 0);
    EXPECT_EQ(sev.at("S5"), 0);
    EXPECT_EQ(sev.at("S6"), 0);
}

TEST(Corpus, RubricOverrideChangesSeverity)
{
    Rubric r;
    r.divide_base = 4;
    Corpus c = load_corpus(manifest(), r);
    for (const auto& e : c.entries)
        if (e.ledger.id == "S1")
            EXPECT_EQ(e.ledger.total_severity, 6); // 4 + 2 untouched addends
}

TEST(Corpus, MissingManifest)
{
    EXPECT_THROW(load_corpus(std::string(ERC_DATA_DIR) + "/corpus/nope.json"), space_error);
}

TEST(BuildSpace, EmptyCorpusIsBotTop)
{
    RoughSpace s = build_space({});
    ASSERT_EQ(s.elements.size(), 2u);
    EXPECT_EQ(s.name_of(s.bottom()), "⊥");
    EXPECT_EQ(s.name_of(s.top()), "⊤");
    EXPECT_TRUE(s.order(0, 1));
    EXPECT_FALSE(s.order(1, 0));
    EXPECT_EQ(apply_operator(s, "u_eq", 0), 0);
    EXPECT_THROW(apply_operator(s, "u_graph", 0), space_error);
}

TEST(BuildSpace, Errors)
{
    EXPECT_THROW(build_space({entry("A", "Z", 1)}), space_error);
    EXPECT_THROW(build_space({entry("A", "B", 1), entry("B", "B", 2)}), space_error);
    EXPECT_THROW(build_space({entry("A", "A", 0), entry("A", "A", 0)}), space_error);
    EXPECT_THROW(build_space({entry("A", "G", 1), entry("G", "G", 0, Subdomain::graphical)}), space_error);
}

TEST(BuildSpace, OrderMatchesDefinition)
{
    // oracle: S ≤ T iff same target and sev(S) ≥ sev(T); ⊥ bottom, ⊤ top
    const RoughSpace& s = corpus_space();
    const auto n = static_cast<Element>(s.elements.size());
    for (Element a = 0; a < n; ++a)
        for (Element b = 0; b < n; ++b) {
            const auto &x = s.elements[a], &y = s.elements[b];
            bool expected = a == s.bottom() || b == s.top() ||
                            (a != s.top() && b != s.bottom() && x.target == y.target && x.severity >= y.severity);
            EXPECT_EQ(s.order(a, b), expected) << x.name << " " << y.name;
        }
}

TEST(BuildSpace, OrderIsBoundedQuasiOrder)
{
    const RoughSpace& s = corpus_space();
    const auto n = static_cast<Element>(s.elements.size());
    for (Element a = 0; a < n; ++a) {
        EXPECT_TRUE(s.order(a, a));
        EXPECT_TRUE(s.order(s.bottom(), a));
        EXPECT_TRUE(s.order(a, s.top()));
        for (Element b = 0; b < n; ++b)
            for (Element c = 0; c < n; ++c)
                if (s.order(a, b) && s.order(b, c))
                    EXPECT_TRUE(s.order(a, c));
    }
}

TEST(ApplyOperator, RepairChain)
{
    const RoughSpace& s = corpus_space();
    Element s1 = s.element("S1"), s2 = s.element("S2"), s5 = s.element("S5");
    EXPECT_EQ(apply_operator(s, "u_eq", s5), s5);

    Trajectory t1 = iterate_operator(s, "u_eq", s1, 3);
    ASSERT_EQ(t1.elements.size(), 4u);
    EXPECT_EQ(t1.elements.front(), s1);
    EXPECT_EQ(t1.elements[1], s2);
    EXPECT_EQ(t1.elements.back(), s5);

    Trajectory t2 = iterate_operator(s, "u_eq", s2, 2);
    ASSERT_EQ(t2.elements.size(), 3u);
    EXPECT_EQ(t2.elements.back(), s5);
    EXPECT_EQ(t1.elements[2], t2.elements[1]);
    EXPECT_EQ(s.name_of(t2.elements[1]), "S5~1");
}

TEST(ApplyOperator, FixpointAtStepZero)
{
    const RoughSpace& s = corpus_space();
    Trajectory t = iterate_operator(s, "u_eq", s.element("S5"), 5);
    EXPECT_EQ(t.elements, std::vector<Element>{s.element("S5")});
    EXPECT_EQ(t.fixpoint_at, 0u);
    EXPECT_FALSE(t.hit_undefined);
}

TEST(ApplyOperator, ZeroSteps)
{
    const RoughSpace& s = corpus_space();
    Trajectory t = iterate_operator(s, "u_eq", s.element("S1"), 0);
    EXPECT_EQ(t.elements, std::vector<Element>{s.element("S1")});
    EXPECT_FALSE(t.fixpoint_at);
}

TEST(ApplyOperator, SubdomainPartiality)
{
    const RoughSpace& s = corpus_space();
    Element s6 = s.element("S6");
    EXPECT_FALSE(apply_operator(s, "u_eq", s6));
    EXPECT_FALSE(apply_operator(s, "l_eq", s6));
    EXPECT_EQ(apply_operator(s, "u_graph", s6), s6);
    EXPECT_EQ(apply_operator(s, "l_graph", s6), s6);
    EXPECT_FALSE(apply_operator(s, "u_graph", s.element("S1")));

    Trajectory t = iterate_operator(s, "u_eq", s6, 3);
    EXPECT_TRUE(t.hit_undefined);
    EXPECT_EQ(t.elements, std::vector<Element>{s6});
}

TEST(ApplyOperator, UnknownOperatorAndElement)
{
    const RoughSpace& s = corpus_space();
    EXPECT_THROW(apply_operator(s, "v_eq", 0), space_error);
    EXPECT_THROW(apply_operator(s, "u_eq", 99), space_error);
}

TEST(ApplyOperator, LowerKeepsOnlyProperSolutions)
{
    const RoughSpace& s = corpus_space();
    EXPECT_EQ(apply_operator(s, "l_eq", s.element("S1")), s.bottom());
    EXPECT_EQ(apply_operator(s, "l_eq", s.element("S3")), s.element("S3"));
    EXPECT_EQ(apply_operator(s, "l_eq", s.top()), s.top());
}

class OperatorProperties : public ::testing::TestWithParam<int> {};

TEST_P(OperatorProperties, MonotoneInflationaryIdempotent)
{
    RoughSpace s = GetParam() == 0 ? corpus_space() : build_space(equational_corpus());
    const auto n = static_cast<Element>(s.elements.size());
    for (const auto& op : s.operators) {
        auto f = [&](Element x) { return op.map[static_cast<std::size_t>(x)]; };
        for (Element a = 0; a < n; ++a) {
            if (f(a) == undefined)
                continue;
            if (op.family == Family::upper)
                EXPECT_TRUE(s.order(a, f(a))) << op.name << " " << s.name_of(a);
            else {
                EXPECT_TRUE(s.order(f(a), a)) << op.name << " " << s.name_of(a);
                EXPECT_EQ(f(f(a)), f(a));
            }
            for (Element b = 0; b < n; ++b)
                if (f(b) != undefined && s.order(a, b))
                    EXPECT_TRUE(s.order(f(a), f(b))) << op.name << " " << s.name_of(a) << " " << s.name_of(b);
        }
    }
}

TEST_P(OperatorProperties, SeverityDecreasesAlongTrajectories)
{
    RoughSpace s = GetParam() == 0 ? corpus_space() : build_space(equational_corpus());
    for (std::size_t i = 0; i < s.elements.size(); ++i) {
        if (s.elements[i].kind != SpaceElement::Kind::solution || s.elements[i].subdomain != Subdomain::equational)
            continue;
        Trajectory t = iterate_operator(s, "u_eq", static_cast<Element>(i), 20);
        ASSERT_TRUE(t.fixpoint_at);
        for (std::size_t k = 1; k < t.elements.size(); ++k)
            EXPECT_EQ(s.elements[t.elements[k]].severity, s.elements[t.elements[k - 1]].severity - 1);
        EXPECT_EQ(s.elements[t.elements.back()].severity, 0);
        EXPECT_EQ(s.elements[t.elements.back()].target, s.elements[i].target);
    }
}

INSTANTIATE_TEST_SUITE_P(Spaces, OperatorProperties, ::testing::Values(0, 1));

TEST(InducedStructure, BundledCorpusPassesCompanion)
{
    auto start = std::chrono::steady_clock::now();
    FiniteStructure f = induced_structure(corpus_space());
    SuiteReport r = check_suite(f, "er-companion");
    auto elapsed = std::chrono::steady_clock::now() - start;
    EXPECT_TRUE(r.applicable);
    EXPECT_TRUE(r.holds) << ::testing::PrintToString(r.failing());
    EXPECT_LT(elapsed, std::chrono::seconds(1));
    EXPECT_EQ(f.lower.size(), 2u);
}

TEST(InducedStructure, QuotientMergesEquivalentSolutions)
{
    RoughSpace s = build_space(equational_corpus());
    FiniteStructure f = induced_structure(s);
    EXPECT_EQ(f.size(), s.elements.size() - 1); // C and D share a class
    EXPECT_TRUE(f.find("C=D"));
    // antisymmetric on the quotient
    for (Element a = 0; a < static_cast<Element>(f.size()); ++a)
        for (Element b = 0; b < static_cast<Element>(f.size()); ++b)
            if (a != b)
                EXPECT_FALSE(f.order(a, b) && f.order(b, a));
    EXPECT_TRUE(check_suite(f, "er-companion").holds);
}

TEST(InducedStructure, BotTopOnlyPassesCompanion)
{
    FiniteStructure f = induced_structure(build_space({}));
    EXPECT_EQ(f.size(), 2u);
    EXPECT_TRUE(check_suite(f, "er-companion").holds);
}

TEST(InducedStructure, InjectedMonotonicityBreakIsCaught)
{
    // hand-built break: u sends B (below P) to ⊤ but sends P itself to ⊥
    RoughSpace s = build_space({entry("B", "P", 1), entry("P", "P", 0)});
    FiniteStructure f = induced_structure(s);
    Element b = f.element("B"), p = f.element("P");
    f.upper[0].cells()[static_cast<std::size_t>(b)] = f.constants.at("top");
    f.upper[0].cells()[static_cast<std::size_t>(p)] = f.constants.at("bot");

    SuiteReport r = check_suite(f, "er-companion");
    EXPECT_FALSE(r.holds);
    auto failing = r.failing();
    EXPECT_NE(std::find(failing.begin(), failing.end(), "UL2"), failing.end());
    for (const auto& a : r.axioms) {
        if (a.report.name != "UL2" || a.report.holds)
            continue;
        Formula ul2 = find_suite("er-companion").select({"UL2"}).formulas().at(0);
        EXPECT_FALSE(evaluate(f, ul2, a.report.witness_elements, a.report.family));
    }
}

TEST(SpaceJson, ListsElementsAndOperators)
{
    auto j = to_json(corpus_space());
    EXPECT_EQ(j["elements"].front()["name"], "⊥");
    EXPECT_EQ(j["operators"]["u_eq"]["S1"], "S2");
    EXPECT_TRUE(j["operators"]["u_eq"]["S6"].is_null());
}
