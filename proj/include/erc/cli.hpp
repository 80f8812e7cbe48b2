#pragma once

// Command-line front end. `run` takes the argument vector and two streams so
// tests can drive it without a process. Exit codes: 0 ran clean, 1 a suite
// was refuted, 2 input error.

#include "erc/enumerate.hpp"
#include "erc/rough_space.hpp"
#include "erc/suites.hpp"
#include "erc/term.hpp"
#include "erc/verifier.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace erc {

namespace cli {

inline constexpr int exit_ok = 0;
inline constexpr int exit_refuted = 1;
inline constexpr int exit_input = 2;

enum class Format { json, markdown };

class input_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace cli

// ---------------------------------------------------------------------------
// Report serialization

inline std::string to_string(IndexPolicy p)
{
    switch (p) {
    case IndexPolicy::once: return "once";
    case IndexPolicy::every: return "every";
    case IndexPolicy::some: return "some";
    }
    return "once";
}

inline IndexPolicy index_policy_from_string(const std::string& s)
{
    if (s == "once")
        return IndexPolicy::once;
    if (s == "every")
        return IndexPolicy::every;
    if (s == "some")
        return IndexPolicy::some;
    throw std::invalid_argument("unknown index policy '" + s + "'");
}

inline nlohmann::ordered_json to_json(const CheckReport& r)
{
    nlohmann::ordered_json j;
    j["name"] = r.name;
    j["formula"] = r.formula;
    j["holds"] = r.holds;
    nlohmann::ordered_json w = nlohmann::ordered_json::array();
    for (std::size_t i = 0; i < r.witness.size(); ++i)
        w.push_back({{"variable", r.witness[i].first},
                     {"element", r.witness[i].second},
                     {"index", i < r.witness_elements.size() ? r.witness_elements[i] : undefined}});
    j["witness"] = w;
    j["assignments_checked"] = r.assignments_checked;
    j["assignments_total"] = r.assignments_total;
    j["family"] = r.family;
    return j;
}

inline CheckReport check_report_from_json(const nlohmann::json& j)
{
    CheckReport r;
    r.name = j.at("name").get<std::string>();
    r.formula = j.at("formula").get<std::string>();
    r.holds = j.at("holds").get<bool>();
    for (const auto& w : j.at("witness")) {
        r.witness.emplace_back(w.at("variable").get<std::string>(), w.at("element").get<std::string>());
        r.witness_elements.push_back(w.at("index").get<Element>());
    }
    r.assignments_checked = j.at("assignments_checked").get<std::uint64_t>();
    r.assignments_total = j.at("assignments_total").get<std::uint64_t>();
    r.family = j.at("family").get<std::size_t>();
    return r;
}

inline nlohmann::ordered_json to_json(const SuiteReport& r)
{
    nlohmann::ordered_json j;
    j["suite"] = r.suite;
    j["verdict"] = to_string(verdict_of(r));
    j["applicable"] = r.applicable;
    j["missing"] = r.missing;
    j["holds"] = r.holds;
    j["chosen_index"] = r.chosen_index ? nlohmann::ordered_json(*r.chosen_index) : nlohmann::ordered_json(nullptr);
    nlohmann::ordered_json axioms = nlohmann::ordered_json::array();
    for (const auto& a : r.axioms) {
        auto o = to_json(a.report);
        o["policy"] = to_string(a.policy);
        axioms.push_back(o);
    }
    j["axioms"] = axioms;
    return j;
}

inline SuiteReport suite_report_from_json(const nlohmann::json& j)
{
    SuiteReport r;
    r.suite = j.at("suite").get<std::string>();
    r.applicable = j.at("applicable").get<bool>();
    r.missing = j.at("missing").get<std::vector<std::string>>();
    r.holds = j.at("holds").get<bool>();
    if (!j.at("chosen_index").is_null())
        r.chosen_index = j.at("chosen_index").get<std::size_t>();
    for (const auto& a : j.at("axioms"))
        r.axioms.push_back({check_report_from_json(a), index_policy_from_string(a.at("policy").get<std::string>())});
    return r;
}

inline std::string to_markdown(const SuiteReport& r)
{
    std::ostringstream out;
    out << "## " << r.suite << ": " << to_string(verdict_of(r)) << "\n\n";
    if (!r.applicable) {
        out << "Missing signature:";
        for (const auto& m : r.missing)
            out << " " << m;
        out << "\n";
        return out.str();
    }
    if (r.chosen_index)
        out << "Existential group holds at index " << *r.chosen_index << ".\n\n";
    out << "| axiom | index | result | witness |\n|---|---|---|---|\n";
    for (const auto& a : r.axioms) {
        std::string w;
        for (const auto& [v, e] : a.report.witness)
            w += (w.empty() ? "" : ", ") + v + " = " + e;
        out << "| " << a.report.name << " | " << a.report.family << " | " << (a.report.holds ? "holds" : "FAILS")
            << " | " << w << " |\n";
    }
    return out.str();
}

struct VerifyReport {
    Rubric rubric;
    std::vector<DefectLedger> solutions;
    friend bool operator==(const VerifyReport&, const VerifyReport&) = default;
};

inline nlohmann::ordered_json to_json(const VerifyReport& r)
{
    nlohmann::ordered_json j;
    j["rubric"] = to_json(r.rubric);
    j["solutions"] = nlohmann::ordered_json::array();
    for (const auto& l : r.solutions)
        j["solutions"].push_back(to_json(l));
    return j;
}

inline VerifyReport verify_report_from_json(const nlohmann::json& j)
{
    VerifyReport r;
    r.rubric = rubric_from_json(j.at("rubric"));
    for (const auto& l : j.at("solutions"))
        r.solutions.push_back(ledger_from_json(l));
    return r;
}

struct ApproximationReport {
    std::string op;
    std::string start;
    std::size_t steps = 0;
    std::vector<std::string> trajectory;
    std::optional<std::size_t> fixpoint_at;
    bool hit_undefined = false;
    std::optional<FiniteStructure> induced;
    std::optional<SuiteReport> companion;

    friend bool operator==(const ApproximationReport&, const ApproximationReport&) = default;
};

inline nlohmann::ordered_json to_json(const ApproximationReport& r)
{
    nlohmann::ordered_json j;
    j["operator"] = r.op;
    j["start"] = r.start;
    j["steps"] = r.steps;
    j["trajectory"] = r.trajectory;
    j["fixpoint_at"] = r.fixpoint_at ? nlohmann::ordered_json(*r.fixpoint_at) : nlohmann::ordered_json(nullptr);
    j["undefined"] = r.hit_undefined;
    if (r.induced)
        j["induced"] = to_json(*r.induced);
    if (r.companion)
        j["companion"] = to_json(*r.companion);
    return j;
}

inline ApproximationReport approximation_report_from_json(const nlohmann::json& j)
{
    ApproximationReport r;
    r.op = j.at("operator").get<std::string>();
    r.start = j.at("start").get<std::string>();
    r.steps = j.at("steps").get<std::size_t>();
    r.trajectory = j.at("trajectory").get<std::vector<std::string>>();
    if (!j.at("fixpoint_at").is_null())
        r.fixpoint_at = j.at("fixpoint_at").get<std::size_t>();
    r.hit_undefined = j.at("undefined").get<bool>();
    if (j.contains("induced"))
        r.induced = load_structure(j.at("induced"));
    if (j.contains("companion"))
        r.companion = suite_report_from_json(j.at("companion"));
    return r;
}

inline std::string to_markdown(const ApproximationReport& r)
{
    std::ostringstream out;
    out << "## " << r.op << " from " << r.start << ", " << r.steps << " step(s)\n\n";
    for (std::size_t i = 0; i < r.trajectory.size(); ++i)
        out << (i ? " → " : "") << r.trajectory[i];
    if (r.hit_undefined)
        out << " → UNDEFINED";
    out << "\n\n";
    if (r.fixpoint_at)
        out << "Fixpoint reached at step " << *r.fixpoint_at << ".\n";
    if (r.hit_undefined)
        out << r.op << " is undefined at " << r.trajectory.back() << ".\n";
    if (r.companion)
        out << "\n" << to_markdown(*r.companion);
    return out.str();
}

struct EnumerationReport {
    std::string suite;
    std::size_t size = 0;
    std::vector<std::string> free;
    std::string strategy;
    std::uint64_t count = 0;
    std::uint64_t candidates_checked = 0;
    std::vector<FiniteStructure> models;

    friend bool operator==(const EnumerationReport&, const EnumerationReport&) = default;
};

inline nlohmann::ordered_json to_json(const EnumerationReport& r)
{
    nlohmann::ordered_json j;
    j["suite"] = r.suite;
    j["size"] = r.size;
    j["free"] = r.free;
    j["strategy"] = r.strategy;
    j["count"] = r.count;
    j["candidates_checked"] = r.candidates_checked;
    j["models"] = nlohmann::ordered_json::array();
    for (const auto& m : r.models)
        j["models"].push_back(to_json(m));
    return j;
}

inline EnumerationReport enumeration_report_from_json(const nlohmann::json& j)
{
    EnumerationReport r;
    r.suite = j.at("suite").get<std::string>();
    r.size = j.at("size").get<std::size_t>();
    r.free = j.at("free").get<std::vector<std::string>>();
    r.strategy = j.at("strategy").get<std::string>();
    r.count = j.at("count").get<std::uint64_t>();
    r.candidates_checked = j.at("candidates_checked").get<std::uint64_t>();
    for (const auto& m : j.at("models"))
        r.models.push_back(load_structure(m));
    return r;
}

inline std::string to_markdown(const EnumerationReport& r)
{
    std::ostringstream out;
    out << "## " << r.suite << " models of size " << r.size << "\n\n";
    out << "Free operations:";
    for (const auto& f : r.free)
        out << " " << f;
    out << "  \nStrategy: " << r.strategy << "  \nModels: " << r.count << "  \nCandidates checked: "
        << r.candidates_checked << "\n";
    for (std::size_t i = 0; i < r.models.size(); ++i)
        out << "\n### model " << i + 1 << "\n\n```json\n" << to_json(r.models[i]).dump(2) << "\n```\n";
    return out.str();
}

struct ParseReport {
    std::string kind; // "term", "equation" or "inequation"
    std::string input;
    std::string printed;
    std::string sexpr;

    friend bool operator==(const ParseReport&, const ParseReport&) = default;
};

inline nlohmann::ordered_json to_json(const ParseReport& r)
{
    return {{"kind", r.kind}, {"input", r.input}, {"printed", r.printed}, {"sexpr", r.sexpr}};
}

inline ParseReport parse_report_from_json(const nlohmann::json& j)
{
    return {j.at("kind").get<std::string>(), j.at("input").get<std::string>(), j.at("printed").get<std::string>(),
            j.at("sexpr").get<std::string>()};
}

inline ParseReport parse_report(const std::string& text)
{
    bool relation = text.find('=') != std::string::npos || text.find("≤") != std::string::npos ||
                    text.find("≥") != std::string::npos || text.find('<') != std::string::npos ||
                    text.find('>') != std::string::npos;
    ParseReport r;
    r.input = text;
    if (!relation) {
        Term t = parse_term(text);
        r.kind = "term";
        r.printed = print_term(t);
        r.sexpr = to_sexpr(t);
        return r;
    }
    Relation rel = parse_relation(text);
    bool eq = rel.kind == Relation::Kind::eq;
    r.kind = eq ? "equation" : "inequation";
    r.printed = print_term(rel.lhs) + (eq ? " = " : " ≤ ") + print_term(rel.rhs);
    r.sexpr = std::string("(") + (eq ? "=" : "≤") + " " + to_sexpr(rel.lhs) + " " + to_sexpr(rel.rhs) + ")";
    return r;
}

// ---------------------------------------------------------------------------
// Commands

namespace cli {

namespace detail {

inline std::vector<std::string> split_list(const std::vector<std::string>& items)
{
    std::vector<std::string> out;
    for (const auto& item : items) {
        std::stringstream ss(item);
        std::string part;
        while (std::getline(ss, part, ','))
            if (!part.empty())
                out.push_back(part);
    }
    return out;
}

inline std::vector<std::filesystem::path> solution_files(const std::filesystem::path& dir)
{
    std::vector<std::filesystem::path> files;
    for (const auto& e : std::filesystem::directory_iterator(dir))
        if (e.is_regular_file() && e.path().extension() == ".sol")
            files.push_back(e.path());
    std::sort(files.begin(), files.end());
    return files;
}

inline SolutionScript read_script(const std::filesystem::path& file)
{
    try {
        return load_solution_file(file.string(), file.stem().string());
    }
    catch (const script_error& e) {
        throw input_error(file.string() + ": " + e.what());
    }
}

} // namespace detail

/// A manifest file, a directory holding manifest.json, or a directory of
/// .sol files where each solution is its own target.
inline Corpus load_corpus_path(const std::string& path, const std::optional<Rubric>& rubric)
{
    namespace fs = std::filesystem;
    fs::path p(path);
    if (!fs::exists(p))
        throw input_error("no such file or directory: " + path);
    if (fs::is_directory(p) && fs::exists(p / "manifest.json"))
        p /= "manifest.json";
    if (!fs::is_directory(p)) {
        if (p.extension() == ".sol") {
            Corpus c;
            c.rubric = rubric.value_or(Rubric{});
            auto script = detail::read_script(p);
            c.entries.push_back({verify_solution(script, c.rubric), script.id});
            return c;
        }
        return load_corpus(p.string(), rubric);
    }
    Corpus c;
    c.rubric = rubric.value_or(Rubric{});
    for (const auto& f : detail::solution_files(p)) {
        auto script = detail::read_script(f);
        c.entries.push_back({verify_solution(script, c.rubric), script.id});
    }
    return c;
}

template <class Report>
void emit(std::ostream& out, const Report& r, Format f)
{
    if (f == Format::json)
        out << to_json(r).dump(2) << "\n";
    else
        out << to_markdown(r);
}

inline int cmd_check(const std::string& path, const std::string& suite, unsigned workers, Format f, std::ostream& out)
{
    FiniteStructure s = load_structure_file(path);
    SuiteReport r = check_suite(s, find_suite(suite), workers);
    if (!r.applicable) {
        std::string m;
        for (const auto& x : r.missing)
            m += (m.empty() ? "" : ", ") + x;
        throw input_error("suite '" + suite + "' does not apply: structure lacks " + m);
    }
    emit(out, r, f);
    return r.holds ? exit_ok : exit_refuted;
}

inline int cmd_verify(const std::vector<std::string>& paths, const std::optional<Rubric>& rubric, Format f,
                      std::ostream& out)
{
    VerifyReport report;
    report.rubric = rubric.value_or(Rubric{});
    bool manifest_rubric = false;
    for (const auto& path : paths) {
        Corpus c = load_corpus_path(path, rubric);
        if (!manifest_rubric && !rubric) {
            report.rubric = c.rubric;
            manifest_rubric = true;
        }
        for (auto& e : c.entries)
            report.solutions.push_back(std::move(e.ledger));
    }
    if (f == Format::json)
        out << to_json(report).dump(2) << "\n";
    else {
        out << "## Solutions verified: " << report.solutions.size() << "\n";
        for (const auto& l : report.solutions)
            out << "\n" << to_markdown(l);
    }
    return exit_ok;
}

inline int cmd_approximate(const std::string& path, const std::string& op, const std::string& start,
                           std::size_t steps, bool induce, const std::optional<Rubric>& rubric, Format f,
                           std::ostream& out)
{
    RoughSpace s = build_space(load_corpus_path(path, rubric).entries);
    ApproximationReport r;
    r.op = op;
    r.start = start;
    r.steps = steps;
    Trajectory t = iterate_operator(s, op, s.element(start), steps);
    for (Element e : t.elements)
        r.trajectory.push_back(s.name_of(e));
    r.fixpoint_at = t.fixpoint_at;
    r.hit_undefined = t.hit_undefined;
    if (induce) {
        r.induced = induced_structure(s);
        r.companion = check_suite(*r.induced, "er-companion");
    }
    emit(out, r, f);
    if (f == Format::markdown && r.induced)
        out << "\n### induced structure\n\n```json\n" << to_json(*r.induced).dump(2) << "\n```\n";
    return r.companion && !r.companion->holds ? exit_refuted : exit_ok;
}

struct EnumerateOptions {
    std::size_t size = 2;
    std::string suite;
    std::vector<std::string> free;
    bool partial = false;
    bool naive = false;
    bool count_only = false;
    std::vector<std::string> axioms;
    std::string base;
    std::string emit_dir;
};

inline int cmd_enumerate(const EnumerateOptions& o, Format f, std::ostream& out)
{
    EnumerationTask task;
    task.size = o.size;
    task.suite = o.suite;
    for (const auto& name : o.free)
        task.free.push_back({name, o.partial, std::nullopt});
    if (!o.base.empty())
        task.base = load_structure_file(o.base);
    task.count_only = o.count_only && o.emit_dir.empty();
    task.strategy = o.naive ? Strategy::naive : Strategy::pruned;
    task.axioms = o.axioms;

    EnumerationResult res = enumerate_models(task);
    EnumerationReport r{o.suite, o.size, o.free, o.naive ? "naive" : "pruned", res.count, res.candidates_checked, {}};
    if (!o.emit_dir.empty()) {
        namespace fs = std::filesystem;
        fs::create_directories(o.emit_dir);
        for (std::size_t i = 0; i < res.models.size(); ++i) {
            std::ostringstream name;
            name << "model_" << std::setw(4) << std::setfill('0') << i + 1 << ".json";
            std::ofstream file(fs::path(o.emit_dir) / name.str());
            if (!file)
                throw input_error("cannot write to " + o.emit_dir);
            file << to_json(res.models[i]).dump(2) << "\n";
        }
    }
    if (!o.count_only)
        r.models = std::move(res.models);
    emit(out, r, f);
    return exit_ok;
}

inline int cmd_parse(const std::string& text, Format f, std::ostream& out)
{
    ParseReport r = parse_report(text);
    if (f == Format::json)
        out << to_json(r).dump(2) << "\n";
    else
        out << r.kind << ": " << r.printed << "\n" << r.sexpr << "\n";
    return exit_ok;
}

/// Parses `args` (without the program name) and dispatches.
inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err)
{
    CLI::App app{"Equational reasoning companion: partial algebras, axiom suites, step verification and rough "
                 "approximation of solutions."};
    app.name("erc");
    app.require_subcommand(1);
    app.fallthrough();

    std::string format = "markdown";
    std::string rubric_path;
    app.add_option("--format", format, "Output format")->check(CLI::IsMember({"json", "markdown"}));
    app.add_option("--rubric", rubric_path, "Severity rubric override (JSON)")->check(CLI::ExistingFile);

    auto* check = app.add_subcommand("check", "Check a structure against an axiom suite");
    std::string structure, suite;
    unsigned workers = 1;
    check->add_option("structure", structure, "Structure JSON file")->required()->check(CLI::ExistingFile);
    check->add_option("--suite,-s", suite, "Suite name")->required();
    check->add_option("--workers,-j", workers, "Worker threads")->check(CLI::Range(1u, 256u));

    auto* verify = app.add_subcommand("verify", "Verify solution scripts and print defect ledgers");
    std::vector<std::string> corpus_paths;
    verify->add_option("corpus", corpus_paths, "Corpus directory, manifest or .sol files")
        ->required()
        ->check(CLI::ExistingPath);

    auto* enumerate = app.add_subcommand("enumerate", "Enumerate small models of a suite");
    EnumerateOptions eo;
    std::vector<std::string> free_raw, axioms_raw;
    enumerate->add_option("--size,-n", eo.size, "Carrier size")->required();
    enumerate->add_option("--suite,-s", eo.suite, "Suite name")->required();
    enumerate->add_option("--free", free_raw, "Free operations, comma separated")->required();
    enumerate->add_option("--axioms", axioms_raw, "Impose only these axioms, comma separated");
    enumerate->add_option("--base", eo.base, "Structure fixing the other tables")->check(CLI::ExistingFile);
    enumerate->add_flag("--partial", eo.partial, "Let free tables leave cells undefined");
    enumerate->add_flag("--naive", eo.naive, "Check complete candidates only");
    enumerate->add_flag("--count-only", eo.count_only, "Print the count without the models");
    enumerate->add_option("--emit", eo.emit_dir, "Write each model to a file in this directory");

    auto* approximate = app.add_subcommand("approximate", "Iterate an approximation operator over a corpus");
    std::string corpus, op = "u_eq", start;
    std::size_t steps = 1;
    bool induce = false;
    approximate->add_option("corpus", corpus, "Corpus directory or manifest")->required()->check(CLI::ExistingPath);
    approximate->add_option("--op", op, "Operator name");
    approximate->add_option("--element,-e", start, "Starting solution")->required();
    approximate->add_option("--steps,-k", steps, "Number of applications");
    approximate->add_flag("--induce", induce, "Also export the induced structure and check er-companion");

    auto* parse = app.add_subcommand("parse", "Parse a term or equation and dump its syntax tree");
    std::string text;
    parse->add_option("text", text, "Term or equation")->required();

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    }
    catch (const CLI::ParseError& e) {
        int code = app.exit(e, out, err);
        return code == 0 ? exit_ok : exit_input;
    }

    const Format f = format == "json" ? Format::json : Format::markdown;
    try {
        std::optional<Rubric> rubric;
        if (!rubric_path.empty())
            rubric = load_rubric_file(rubric_path);
        if (*check)
            return cmd_check(structure, suite, workers, f, out);
        if (*verify)
            return cmd_verify(corpus_paths, rubric, f, out);
        if (*enumerate) {
            eo.free = detail::split_list(free_raw);
            eo.axioms = detail::split_list(axioms_raw);
            return cmd_enumerate(eo, f, out);
        }
        if (*approximate)
            return cmd_approximate(corpus, op, start, steps, induce, rubric, f, out);
        if (*parse)
            return cmd_parse(text, f, out);
    }
    catch (const std::exception& e) {
        err << "erc: " << e.what() << "\n";
        return exit_input;
    }
    return exit_input;
}

inline int run(int argc, char** argv, std::ostream& out = std::cout, std::ostream& err = std::cerr)
{
    std::vector<std::string> args(argv + 1, argv + argc);
    return run(args, out, err);
}

} // namespace cli
} // namespace erc
