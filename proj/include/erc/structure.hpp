#pragma once

// Finite partial algebraic systems: a named carrier, the order and parthood
// relations, named constants, partial operation tables and the indexed
// families l₁…lₙ, u₁…uₙ of unary approximation operators.

#include <json.hpp>

#include <algorithm>
#include <cstddef>
#include <fstream>
#include <map>
#include <optional>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace erc {

using Element = int;
inline constexpr Element undefined = -1;

class structure_error : public std::runtime_error {
public:
    enum class Kind { schema, out_of_carrier, arity_mismatch, io };
    structure_error(Kind k, const std::string& what) : std::runtime_error(what), kind_(k) {}
    Kind kind() const noexcept { return kind_; }

private:
    Kind kind_;
};

/// Dense partial table over an n-element carrier; `undefined` marks a miss.
class OpTable {
public:
    OpTable() = default;
    OpTable(int arity, std::size_t carrier_size)
        : arity_(arity), n_(carrier_size), cells_(cell_count(arity, carrier_size), undefined)
    {
    }

    int arity() const noexcept { return arity_; }
    std::size_t carrier_size() const noexcept { return n_; }

    Element at(std::span<const Element> args) const { return cells_[index(args)]; }
    Element at(Element a) const { return cells_[static_cast<std::size_t>(a)]; }
    Element at(Element a, Element b) const { return cells_[static_cast<std::size_t>(a) * n_ + b]; }
    void set(std::span<const Element> args, Element value) { cells_[index(args)] = value; }

    std::vector<Element>& cells() noexcept { return cells_; }
    const std::vector<Element>& cells() const noexcept { return cells_; }

    bool total() const
    {
        return std::none_of(cells_.begin(), cells_.end(), [](Element e) { return e == undefined; });
    }

    friend bool operator==(const OpTable&, const OpTable&) = default;

    static std::size_t cell_count(int arity, std::size_t n)
    {
        std::size_t c = 1;
        for (int i = 0; i < arity; ++i)
            c *= n;
        return c;
    }

    /// Decodes a cell index into its argument tuple (first argument most
    /// significant).
    std::vector<Element> arguments(std::size_t cell) const
    {
        std::vector<Element> args(static_cast<std::size_t>(arity_));
        for (int i = arity_ - 1; i >= 0; --i) {
            args[static_cast<std::size_t>(i)] = static_cast<Element>(cell % n_);
            cell /= n_;
        }
        return args;
    }

private:
    std::size_t index(std::span<const Element> args) const
    {
        std::size_t k = 0;
        for (Element a : args)
            k = k * n_ + static_cast<std::size_t>(a);
        return k;
    }

    int arity_ = 0;
    std::size_t n_ = 0;
    std::vector<Element> cells_;
};

/// Boolean n×n matrix for binary predicates.
class BinaryRelation {
public:
    BinaryRelation() = default;
    explicit BinaryRelation(std::size_t n) : n_(n), bits_(n * n, 0) {}
    bool operator()(Element a, Element b) const { return bits_[static_cast<std::size_t>(a) * n_ + b] != 0; }
    void set(Element a, Element b, bool v = true) { bits_[static_cast<std::size_t>(a) * n_ + b] = v ? 1 : 0; }
    std::size_t size() const noexcept { return n_; }
    friend bool operator==(const BinaryRelation&, const BinaryRelation&) = default;

private:
    std::size_t n_ = 0;
    std::vector<char> bits_;
};

enum class Family { lower, upper };

struct FiniteStructure {
    std::vector<std::string> carrier;
    BinaryRelation order;
    std::optional<BinaryRelation> parthood;
    std::map<std::string, Element> constants;
    std::map<std::string, OpTable> ops;
    std::vector<OpTable> lower;
    std::vector<OpTable> upper;
    /// Extra binary predicates (for example "approx"); carried, never checked.
    std::map<std::string, BinaryRelation> predicates;

    std::size_t size() const noexcept { return carrier.size(); }

    std::optional<Element> find(const std::string& name) const
    {
        auto it = std::find(carrier.begin(), carrier.end(), name);
        if (it == carrier.end())
            return std::nullopt;
        return static_cast<Element>(it - carrier.begin());
    }

    Element element(const std::string& name) const
    {
        auto e = find(name);
        if (!e)
            throw structure_error(structure_error::Kind::out_of_carrier, "'" + name + "' is not in the carrier");
        return *e;
    }

    std::string name_of(Element e) const { return e == undefined ? "undefined" : carrier.at(static_cast<std::size_t>(e)); }

    bool has_op(const std::string& name) const { return ops.contains(name); }
    const std::vector<OpTable>& family(Family f) const { return f == Family::lower ? lower : upper; }
    std::size_t family_count() const { return std::min(lower.size(), upper.size()); }

    /// Throws structure_error when a table does not match the carrier.
    void validate() const
    {
        const std::size_t n = size();
        if (n == 0)
            throw structure_error(structure_error::Kind::schema, "carrier is empty");
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i + 1; j < n; ++j)
                if (carrier[i] == carrier[j])
                    throw structure_error(structure_error::Kind::schema, "duplicate element '" + carrier[i] + "'");
        if (order.size() != n || (parthood && parthood->size() != n))
            throw structure_error(structure_error::Kind::schema, "relation size does not match carrier");
        for (const auto& [name, e] : constants)
            if (e < 0 || static_cast<std::size_t>(e) >= n)
                throw structure_error(structure_error::Kind::out_of_carrier, "constant '" + name + "' outside carrier");
        auto check_table = [&](const std::string& name, const OpTable& t) {
            if (t.carrier_size() != n || t.cells().size() != OpTable::cell_count(t.arity(), n))
                throw structure_error(structure_error::Kind::arity_mismatch, "table '" + name + "' has the wrong shape");
            for (Element e : t.cells())
                if (e != undefined && (e < 0 || static_cast<std::size_t>(e) >= n))
                    throw structure_error(structure_error::Kind::out_of_carrier, "table '" + name + "' leaves the carrier");
        };
        for (const auto& [name, t] : ops)
            check_table(name, t);
        for (const auto& t : lower) {
            check_table("l", t);
            if (t.arity() != 1)
                throw structure_error(structure_error::Kind::arity_mismatch, "l must be unary");
        }
        for (const auto& t : upper) {
            check_table("u", t);
            if (t.arity() != 1)
                throw structure_error(structure_error::Kind::arity_mismatch, "u must be unary");
        }
        if (lower.size() != upper.size())
            throw structure_error(structure_error::Kind::schema, "l and u families differ in length");
    }
};

/// Arity assumed for an empty table with a well-known name.
inline std::optional<int> default_arity(const std::string& op)
{
    static const std::map<std::string, int> known{{"wedge", 2}, {"vee", 2},    {"otimes", 2}, {"cdot", 2},
                                                  {"imp", 2},   {"imp_neg", 2}, {"imp_sim", 2}, {"n", 1},
                                                  {"l", 1},     {"u", 1}};
    auto it = known.find(op);
    if (it == known.end())
        return std::nullopt;
    return it->second;
}

namespace detail {

inline std::vector<std::string> split_key(const std::string& key)
{
    std::vector<std::string> parts;
    std::string cur;
    std::istringstream in(key);
    while (std::getline(in, cur, ',')) {
        auto b = cur.find_first_not_of(' ');
        auto e = cur.find_last_not_of(' ');
        parts.push_back(b == std::string::npos ? std::string() : cur.substr(b, e - b + 1));
    }
    if (!key.empty() && key.back() == ',')
        parts.emplace_back();
    return parts;
}

inline OpTable table_from_json(const FiniteStructure& s, const std::string& name, const nlohmann::json& j)
{
    using K = structure_error::Kind;
    if (!j.is_object())
        throw structure_error(K::schema, "table '" + name + "' must be an object");
    std::optional<int> arity;
    for (const auto& [key, value] : j.items()) {
        int k = static_cast<int>(split_key(key).size());
        if (arity && *arity != k)
            throw structure_error(K::arity_mismatch, "table '" + name + "' mixes arities");
        arity = k;
    }
    if (!arity)
        arity = default_arity(name);
    if (!arity)
        throw structure_error(K::schema, "cannot infer the arity of empty table '" + name + "'");
    if (auto expected = default_arity(name); expected && *expected != *arity)
        throw structure_error(K::arity_mismatch, "table '" + name + "' must have arity " + std::to_string(*expected));

    OpTable t(*arity, s.size());
    for (const auto& [key, value] : j.items()) {
        std::vector<Element> args;
        for (const auto& part : split_key(key)) {
            auto e = s.find(part);
            if (!e)
                throw structure_error(K::out_of_carrier, "table '" + name + "': '" + part + "' is not in the carrier");
            args.push_back(*e);
        }
        if (value.is_null())
            continue;
        if (!value.is_string())
            throw structure_error(K::schema, "table '" + name + "' values must be element names or null");
        auto e = s.find(value.get<std::string>());
        if (!e)
            throw structure_error(K::out_of_carrier,
                                  "table '" + name + "' maps to '" + value.get<std::string>() + "' outside the carrier");
        t.set(args, *e);
    }
    return t;
}

inline BinaryRelation relation_from_json(const FiniteStructure& s, const std::string& name, const nlohmann::json& j)
{
    using K = structure_error::Kind;
    if (!j.is_array())
        throw structure_error(K::schema, "'" + name + "' must be an array of pairs");
    BinaryRelation r(s.size());
    for (const auto& pair : j) {
        if (!pair.is_array() || pair.size() != 2 || !pair[0].is_string() || !pair[1].is_string())
            throw structure_error(K::schema, "'" + name + "' entries must be [a, b] name pairs");
        r.set(s.element(pair[0].get<std::string>()), s.element(pair[1].get<std::string>()));
    }
    return r;
}

inline nlohmann::ordered_json table_to_json(const FiniteStructure& s, const OpTable& t)
{
    nlohmann::ordered_json j = nlohmann::ordered_json::object();
    for (std::size_t cell = 0; cell < t.cells().size(); ++cell) {
        std::string key;
        for (Element a : t.arguments(cell)) {
            if (!key.empty())
                key += ",";
            key += s.carrier[static_cast<std::size_t>(a)];
        }
        Element v = t.cells()[cell];
        if (v == undefined)
            j[key] = nullptr;
        else
            j[key] = s.carrier[static_cast<std::size_t>(v)];
    }
    return j;
}

inline nlohmann::ordered_json relation_to_json(const FiniteStructure& s, const BinaryRelation& r)
{
    nlohmann::ordered_json j = nlohmann::ordered_json::array();
    for (std::size_t a = 0; a < s.size(); ++a)
        for (std::size_t b = 0; b < s.size(); ++b)
            if (r(static_cast<Element>(a), static_cast<Element>(b)))
                j.push_back({s.carrier[a], s.carrier[b]});
    return j;
}

} // namespace detail

inline FiniteStructure load_structure(const nlohmann::json& doc)
{
    using K = structure_error::Kind;
    if (!doc.is_object())
        throw structure_error(K::schema, "structure document must be an object");
    FiniteStructure s;
    if (!doc.contains("carrier") || !doc["carrier"].is_array())
        throw structure_error(K::schema, "missing 'carrier' array");
    for (const auto& e : doc["carrier"]) {
        if (!e.is_string())
            throw structure_error(K::schema, "carrier elements must be strings");
        std::string name = e.get<std::string>();
        if (name.find(',') != std::string::npos || name.empty())
            throw structure_error(K::schema, "element names must be non-empty and comma-free");
        s.carrier.push_back(name);
    }
    if (s.carrier.empty())
        throw structure_error(K::schema, "carrier is empty");

    s.order = doc.contains("order") ? detail::relation_from_json(s, "order", doc["order"]) : BinaryRelation(s.size());
    if (doc.contains("parthood"))
        s.parthood = detail::relation_from_json(s, "parthood", doc["parthood"]);
    if (doc.contains("constants")) {
        if (!doc["constants"].is_object())
            throw structure_error(K::schema, "'constants' must be an object");
        for (const auto& [name, value] : doc["constants"].items()) {
            if (!value.is_string())
                throw structure_error(K::schema, "constant '" + name + "' must name an element");
            s.constants[name] = s.element(value.get<std::string>());
        }
    }
    if (doc.contains("predicates")) {
        if (!doc["predicates"].is_object())
            throw structure_error(K::schema, "'predicates' must be an object");
        for (const auto& [name, value] : doc["predicates"].items())
            s.predicates[name] = detail::relation_from_json(s, name, value);
    }
    if (doc.contains("ops")) {
        if (!doc["ops"].is_object())
            throw structure_error(K::schema, "'ops' must be an object");
        for (const auto& [name, value] : doc["ops"].items()) {
            if (name == "l" || name == "u") {
                auto& fam = name == "l" ? s.lower : s.upper;
                if (value.is_array())
                    for (const auto& t : value)
                        fam.push_back(detail::table_from_json(s, name, t));
                else
                    fam.push_back(detail::table_from_json(s, name, value));
                continue;
            }
            s.ops[name] = detail::table_from_json(s, name, value);
        }
    }
    s.validate();
    return s;
}

inline FiniteStructure load_structure_text(const std::string& text)
{
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(text);
    }
    catch (const nlohmann::json::parse_error& e) {
        throw structure_error(structure_error::Kind::schema, e.what());
    }
    return load_structure(doc);
}

inline FiniteStructure load_structure_file(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        throw structure_error(structure_error::Kind::io, "cannot open " + path);
    std::stringstream buf;
    buf << in.rdbuf();
    return load_structure_text(buf.str());
}

inline nlohmann::ordered_json to_json(const FiniteStructure& s)
{
    nlohmann::ordered_json j;
    j["carrier"] = s.carrier;
    j["order"] = detail::relation_to_json(s, s.order);
    if (s.parthood)
        j["parthood"] = detail::relation_to_json(s, *s.parthood);
    nlohmann::ordered_json consts = nlohmann::ordered_json::object();
    for (const auto& [name, e] : s.constants)
        consts[name] = s.carrier[static_cast<std::size_t>(e)];
    j["constants"] = consts;
    nlohmann::ordered_json ops = nlohmann::ordered_json::object();
    for (const auto& [name, t] : s.ops)
        ops[name] = detail::table_to_json(s, t);
    if (!s.lower.empty() || !s.upper.empty()) {
        nlohmann::ordered_json l = nlohmann::ordered_json::array(), u = nlohmann::ordered_json::array();
        for (const auto& t : s.lower)
            l.push_back(detail::table_to_json(s, t));
        for (const auto& t : s.upper)
            u.push_back(detail::table_to_json(s, t));
        ops["l"] = l;
        ops["u"] = u;
    }
    j["ops"] = ops;
    if (!s.predicates.empty()) {
        nlohmann::ordered_json preds = nlohmann::ordered_json::object();
        for (const auto& [name, r] : s.predicates)
            preds[name] = detail::relation_to_json(s, r);
        j["predicates"] = preds;
    }
    return j;
}

inline bool operator==(const FiniteStructure& a, const FiniteStructure& b)
{
    return a.carrier == b.carrier && a.order == b.order && a.parthood == b.parthood && a.constants == b.constants &&
           a.ops == b.ops && a.lower == b.lower && a.upper == b.upper && a.predicates == b.predicates;
}

/// Chain 0 < 1 < … < n-1 with ⊥, ⊤ at the ends and the total lattice
/// tables vee = max, wedge = min. Element names are "0", "1", ….
inline FiniteStructure chain_structure(std::size_t n, bool with_lattice = true)
{
    FiniteStructure s;
    for (std::size_t i = 0; i < n; ++i)
        s.carrier.push_back(std::to_string(i));
    s.order = BinaryRelation(n);
    for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = a; b < n; ++b)
            s.order.set(static_cast<Element>(a), static_cast<Element>(b));
    s.constants["bot"] = 0;
    s.constants["top"] = static_cast<Element>(n - 1);
    if (with_lattice) {
        OpTable vee(2, n), wedge(2, n);
        for (std::size_t a = 0; a < n; ++a)
            for (std::size_t b = 0; b < n; ++b) {
                Element ea = static_cast<Element>(a), eb = static_cast<Element>(b);
                std::vector<Element> args{ea, eb};
                vee.set(args, std::max(ea, eb));
                wedge.set(args, std::min(ea, eb));
            }
        s.ops["vee"] = vee;
        s.ops["wedge"] = wedge;
    }
    return s;
}

} // namespace erc
