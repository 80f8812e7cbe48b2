#pragma once

// A quasi-ordered space of solutions with approximation operators. Each
// solution belongs to the class (target, severity): the proper solution it
// aims at and the total weight of its defects. Upper operators repair one
// unit of severity, lower operators keep only defect-free solutions. One
// operator pair per subdomain, each undefined outside its own subdomain.

#include "erc/structure.hpp"
#include "erc/verifier.hpp"

#include <json.hpp>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace erc {

class space_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct CorpusEntry {
    DefectLedger ledger;
    /// Id of the proper solution this one is measured against.
    std::string target;
};

struct Corpus {
    std::vector<CorpusEntry> entries;
    Rubric rubric;
};

struct SpaceElement {
    enum class Kind { bottom, top, solution, intermediate };
    Kind kind = Kind::solution;
    std::string name;
    std::string target;
    int severity = 0;
    Subdomain subdomain = Subdomain::equational;

    friend bool operator==(const SpaceElement&, const SpaceElement&) = default;
};

struct RoughOperator {
    std::string name;
    Family family = Family::upper;
    Subdomain subdomain = Subdomain::equational;
    /// Image of each element; `undefined` outside the subdomain.
    std::vector<Element> map;

    friend bool operator==(const RoughOperator&, const RoughOperator&) = default;
};

struct RoughSpace {
    std::vector<SpaceElement> elements;
    BinaryRelation order;
    /// Operator pairs in family order: lower/upper for equational, then graphical.
    std::vector<RoughOperator> operators;

    Element bottom() const { return 0; }
    Element top() const { return static_cast<Element>(elements.size() - 1); }

    std::optional<Element> find(const std::string& name) const
    {
        for (std::size_t i = 0; i < elements.size(); ++i)
            if (elements[i].name == name)
                return static_cast<Element>(i);
        return std::nullopt;
    }
    Element element(const std::string& name) const
    {
        auto e = find(name);
        if (!e)
            throw space_error("no element '" + name + "' in the space");
        return *e;
    }
    const RoughOperator& op(const std::string& name) const
    {
        for (const auto& o : operators)
            if (o.name == name)
                return o;
        throw space_error("unknown operator '" + name + "'");
    }
    std::string name_of(Element e) const { return e == undefined ? "undefined" : elements.at(e).name; }
};

inline std::string operator_name(Family f, Subdomain s)
{
    return std::string(f == Family::lower ? "l_" : "u_") + (s == Subdomain::equational ? "eq" : "graph");
}

/// Builds the space. Every target must name a defect-free corpus solution
/// of the same subdomain. An empty corpus gives {⊥, ⊤}.
inline RoughSpace build_space(const std::vector<CorpusEntry>& corpus)
{
    using K = SpaceElement::Kind;
    std::map<std::string, const CorpusEntry*> by_id;
    for (const auto& c : corpus) {
        if (c.ledger.id.empty())
            throw space_error("corpus solution without an id");
        if (c.ledger.id == "⊥" || c.ledger.id == "⊤" || c.ledger.id.find(',') != std::string::npos)
            throw space_error("reserved or malformed solution id '" + c.ledger.id + "'");
        if (!by_id.emplace(c.ledger.id, &c).second)
            throw space_error("duplicate solution id '" + c.ledger.id + "'");
    }
    for (const auto& c : corpus) {
        auto it = by_id.find(c.target);
        if (it == by_id.end())
            throw space_error("unknown target '" + c.target + "' for " + c.ledger.id);
        const DefectLedger& t = it->second->ledger;
        if (t.total_severity != 0 || it->second->target != c.target)
            throw space_error("target '" + c.target + "' is not a proper solution");
        if (t.subdomain != c.ledger.subdomain)
            throw space_error(c.ledger.id + " and its target '" + c.target + "' differ in subdomain");
    }

    RoughSpace s;
    s.elements.push_back({K::bottom, "⊥", "", 0, Subdomain::equational});
    std::map<std::pair<std::string, int>, Element> rep; // class → first member
    auto add = [&](SpaceElement e) {
        auto idx = static_cast<Element>(s.elements.size());
        rep.emplace(std::pair{e.target, e.severity}, idx);
        s.elements.push_back(std::move(e));
    };
    for (const auto& c : corpus)
        add({K::solution, c.ledger.id, c.target, c.ledger.total_severity, c.ledger.subdomain});
    // classes an upper operator passes through on the way to the target
    std::map<std::string, int> worst;
    for (const auto& c : corpus)
        worst[c.target] = std::max(worst[c.target], c.ledger.total_severity);
    for (const auto& [target, w] : worst)
        for (int k = w - 1; k >= 1; --k)
            if (!rep.contains({target, k}))
                add({K::intermediate, target + "~" + std::to_string(k), target, k,
                     by_id.at(target)->ledger.subdomain});
    s.elements.push_back({K::top, "⊤", "", 0, Subdomain::equational});

    const std::size_t n = s.elements.size();
    s.order = BinaryRelation(n);
    for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = 0; b < n; ++b) {
            const auto &x = s.elements[a], &y = s.elements[b];
            bool le = x.kind == K::bottom || y.kind == K::top || a == b ||
                      (x.kind != K::top && y.kind != K::bottom && x.target == y.target && x.severity >= y.severity);
            if (le)
                s.order.set(static_cast<Element>(a), static_cast<Element>(b));
        }

    std::set<Subdomain> present{Subdomain::equational};
    for (const auto& c : corpus)
        present.insert(c.ledger.subdomain);
    for (Subdomain sd : present) {
        RoughOperator lo{operator_name(Family::lower, sd), Family::lower, sd, std::vector<Element>(n, undefined)};
        RoughOperator up{operator_name(Family::upper, sd), Family::upper, sd, std::vector<Element>(n, undefined)};
        for (std::size_t i = 0; i < n; ++i) {
            const auto& e = s.elements[i];
            Element self = static_cast<Element>(i);
            if (e.kind == K::bottom || e.kind == K::top) {
                lo.map[i] = up.map[i] = self;
                continue;
            }
            if (e.subdomain != sd)
                continue;
            lo.map[i] = e.severity == 0 ? self : s.bottom();
            up.map[i] = rep.at({e.target, std::max(0, e.severity - 1)});
        }
        s.operators.push_back(std::move(lo));
        s.operators.push_back(std::move(up));
    }
    return s;
}

/// nullopt when the operator is undefined at `e`.
inline std::optional<Element> apply_operator(const RoughSpace& s, const std::string& name, Element e)
{
    if (e < 0 || static_cast<std::size_t>(e) >= s.elements.size())
        throw space_error("element outside the space");
    Element v = s.op(name).map[static_cast<std::size_t>(e)];
    if (v == undefined)
        return std::nullopt;
    return v;
}

struct Trajectory {
    std::vector<Element> elements;
    /// Position of the first element mapped to itself, if reached within k steps.
    std::optional<std::size_t> fixpoint_at;
    /// The operator was undefined at the last element.
    bool hit_undefined = false;

    friend bool operator==(const Trajectory&, const Trajectory&) = default;
};

inline Trajectory iterate_operator(const RoughSpace& s, const std::string& name, Element e, std::size_t k)
{
    Trajectory t;
    t.elements.push_back(e);
    for (std::size_t i = 0; i <= k; ++i) {
        auto next = apply_operator(s, name, t.elements.back());
        if (!next) {
            t.hit_undefined = i < k;
            break;
        }
        if (*next == t.elements.back()) {
            t.fixpoint_at = t.elements.size() - 1;
            break;
        }
        if (i == k)
            break;
        t.elements.push_back(*next);
    }
    return t;
}

/// Index of the class of each element under order-equivalence, and one
/// member per class in first-occurrence order.
inline std::vector<Element> quotient_map(const RoughSpace& s, std::vector<Element>* representatives = nullptr)
{
    const std::size_t n = s.elements.size();
    std::vector<Element> cls(n, undefined);
    std::vector<Element> reps;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t c = 0; c < reps.size() && cls[i] == undefined; ++c) {
            Element r = reps[c];
            if (s.order(static_cast<Element>(i), r) && s.order(r, static_cast<Element>(i)))
                cls[i] = static_cast<Element>(c);
        }
        if (cls[i] == undefined) {
            cls[i] = static_cast<Element>(reps.size());
            reps.push_back(static_cast<Element>(i));
        }
    }
    if (representatives)
        *representatives = reps;
    return cls;
}

/// The quotient of the space as a finite partial structure: P = ≤, ⊥/⊤ as
/// constants, and the operator pairs as the l/u families.
inline FiniteStructure induced_structure(const RoughSpace& s)
{
    std::vector<Element> reps;
    std::vector<Element> cls = quotient_map(s, &reps);
    const std::size_t m = reps.size();

    FiniteStructure f;
    std::vector<std::string> names(m);
    for (std::size_t i = 0; i < s.elements.size(); ++i) {
        auto& nm = names[static_cast<std::size_t>(cls[i])];
        nm += (nm.empty() ? "" : "=") + s.elements[i].name;
    }
    f.carrier = names;
    f.order = BinaryRelation(m);
    for (std::size_t a = 0; a < m; ++a)
        for (std::size_t b = 0; b < m; ++b)
            if (s.order(reps[a], reps[b]))
                f.order.set(static_cast<Element>(a), static_cast<Element>(b));
    f.parthood = f.order;
    f.constants["bot"] = cls[static_cast<std::size_t>(s.bottom())];
    f.constants["top"] = cls[static_cast<std::size_t>(s.top())];
    for (const auto& o : s.operators) {
        OpTable t(1, m);
        for (std::size_t c = 0; c < m; ++c) {
            Element v = o.map[static_cast<std::size_t>(reps[c])];
            t.cells()[c] = v == undefined ? undefined : cls[static_cast<std::size_t>(v)];
        }
        (o.family == Family::lower ? f.lower : f.upper).push_back(t);
    }
    f.validate();
    return f;
}

// ---------------------------------------------------------------------------
// Corpus files

/// Reads a manifest: {"solutions": [{"file", "target", "subdomain"?}], "rubric"?}.
/// File names are relative to the manifest. `rubric_override` wins over the
/// manifest's rubric.
inline Corpus load_corpus(const std::string& manifest_path, const std::optional<Rubric>& rubric_override = {})
{
    namespace fs = std::filesystem;
    std::ifstream in(manifest_path);
    if (!in)
        throw space_error("cannot open " + manifest_path);
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(in);
    }
    catch (const nlohmann::json::parse_error& e) {
        throw space_error(manifest_path + ": " + e.what());
    }
    if (!doc.is_object() || !doc.contains("solutions") || !doc["solutions"].is_array())
        throw space_error(manifest_path + ": expected an object with a 'solutions' array");

    Corpus c;
    if (doc.contains("rubric"))
        c.rubric = rubric_from_json(doc["rubric"]);
    if (rubric_override)
        c.rubric = *rubric_override;

    fs::path dir = fs::path(manifest_path).parent_path();
    for (const auto& item : doc["solutions"]) {
        if (!item.is_object() || !item.contains("file") || !item["file"].is_string())
            throw space_error(manifest_path + ": every solution needs a 'file'");
        std::string file = item["file"].get<std::string>();
        SolutionScript script;
        try {
            script = load_solution_file((dir / file).string(), fs::path(file).stem().string());
        }
        catch (const script_error& e) {
            throw space_error(file + ": " + e.what());
        }
        if (item.contains("subdomain")) {
            auto sd = subdomain_from_string(item["subdomain"].get<std::string>());
            if (!sd || *sd != script.subdomain)
                throw space_error(file + ": manifest subdomain disagrees with the script");
        }
        std::string target = item.value("target", script.id);
        c.entries.push_back({verify_solution(script, c.rubric), target});
    }
    return c;
}

inline nlohmann::ordered_json to_json(const RoughSpace& s)
{
    nlohmann::ordered_json j;
    nlohmann::ordered_json elems = nlohmann::ordered_json::array();
    for (const auto& e : s.elements) {
        nlohmann::ordered_json o;
        o["name"] = e.name;
        switch (e.kind) {
        case SpaceElement::Kind::bottom: o["kind"] = "bottom"; break;
        case SpaceElement::Kind::top: o["kind"] = "top"; break;
        case SpaceElement::Kind::solution: o["kind"] = "solution"; break;
        case SpaceElement::Kind::intermediate: o["kind"] = "intermediate"; break;
        }
        if (e.kind == SpaceElement::Kind::solution || e.kind == SpaceElement::Kind::intermediate) {
            o["target"] = e.target;
            o["severity"] = e.severity;
            o["subdomain"] = to_string(e.subdomain);
        }
        elems.push_back(o);
    }
    j["elements"] = elems;
    nlohmann::ordered_json ops = nlohmann::ordered_json::object();
    for (const auto& o : s.operators) {
        nlohmann::ordered_json m = nlohmann::ordered_json::object();
        for (std::size_t i = 0; i < o.map.size(); ++i)
            m[s.elements[i].name] = o.map[i] == undefined ? nlohmann::ordered_json(nullptr)
                                                          : nlohmann::ordered_json(s.name_of(o.map[i]));
        ops[o.name] = m;
    }
    j["operators"] = ops;
    return j;
}

} // namespace erc
