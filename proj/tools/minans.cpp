#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "minans/compile.hpp"
#include "minans/core.hpp"
#include "minans/covers.hpp"
#include "minans/engine.hpp"
#include "minans/oracle.hpp"
#include "minans/transform.hpp"
#include "minans/trees.hpp"

using namespace minans;

namespace {

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot read '" + path + "'");
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

std::size_t oracle_bound() {
    if (const char* env = std::getenv("MINANS_ORACLE_BOUND")) {
        char* end = nullptr;
        unsigned long v = std::strtoul(env, &end, 10);
        if (end && *end == '\0' && v > 0) return static_cast<std::size_t>(v);
        throw SemanticError("bad MINANS_ORACLE_BOUND value");
    }
    return oracle::kDefaultBound;
}

bool reserved_atom(const Language& lang, AtomId a) { return is_reserved_name(lang.name(a)); }

Bits strip_reserved(const Bits& b, const Language& lang) {
    Bits out = b;
    b.for_each([&](AtomId a) {
        if (reserved_atom(lang, a)) out.reset(a);
    });
    return out;
}

LiteralSet strip_reserved(const LiteralSet& ls, const Language& lang) {
    return LiteralSet(strip_reserved(ls.pos, lang), strip_reserved(ls.neg, lang));
}

std::vector<std::string> atom_names(const Bits& b, const Language& lang) {
    std::vector<std::string> v;
    b.for_each([&](AtomId a) { v.push_back(lang.name(a)); });
    std::sort(v.begin(), v.end());
    return v;
}

// atoms ordered by name, each tagged with its sign
std::vector<std::pair<std::string, bool>> literal_names(const LiteralSet& ls,
                                                        const Language& lang) {
    std::vector<std::pair<std::string, bool>> v;
    ls.pos.for_each([&](AtomId a) { v.emplace_back(lang.name(a), false); });
    ls.neg.for_each([&](AtomId a) { v.emplace_back(lang.name(a), true); });
    std::sort(v.begin(), v.end());
    return v;
}

void print_answers(const std::vector<Bits>& raw, const Language& lang, bool json,
                   bool complete = true) {
    std::vector<std::vector<std::string>> answers;
    for (const Bits& a : raw) {
        Bits s = strip_reserved(a, lang);
        if (s.none()) continue;
        auto names = atom_names(s, lang);
        if (std::find(answers.begin(), answers.end(), names) == answers.end())
            answers.push_back(std::move(names));
    }
    std::sort(answers.begin(), answers.end());
    if (json) {
        nlohmann::json j;
        j["answers"] = answers;
        j["complete"] = complete;
        std::cout << j.dump() << "\n";
        return;
    }
    for (const auto& a : answers) {
        for (std::size_t i = 0; i < a.size(); ++i) std::cout << (i ? " | " : "") << a[i];
        std::cout << "\n";
    }
}

void print_models(const std::vector<Bits>& models, const Language& lang, bool json) {
    std::vector<std::vector<std::string>> rows;
    for (const Bits& m : models) rows.push_back(atom_names(strip_reserved(m, lang), lang));
    std::sort(rows.begin(), rows.end());
    rows.erase(std::unique(rows.begin(), rows.end()), rows.end());
    if (json) {
        nlohmann::json j;
        j["models"] = rows;
        std::cout << j.dump() << "\n";
        return;
    }
    for (const auto& m : rows) {
        for (std::size_t i = 0; i < m.size(); ++i) std::cout << (i ? " " : "") << m[i];
        std::cout << "\n";
    }
}

void print_covers(const std::vector<LiteralSet>& covers, const Language& lang, bool json) {
    std::vector<std::vector<std::pair<std::string, bool>>> rows;
    for (const LiteralSet& c : covers) {
        auto row = literal_names(strip_reserved(c, lang), lang);
        if (std::find(rows.begin(), rows.end(), row) == rows.end()) rows.push_back(std::move(row));
    }
    std::sort(rows.begin(), rows.end());
    if (json) {
        nlohmann::json j;
        j["covers"] = nlohmann::json::array();
        for (const auto& row : rows) {
            nlohmann::json jc;
            std::vector<std::string> pos, neg;
            for (const auto& [name, negated] : row) (negated ? neg : pos).push_back(name);
            jc["pos"] = pos;
            jc["neg"] = neg;
            j["covers"].push_back(jc);
        }
        std::cout << j.dump() << "\n";
        return;
    }
    for (const auto& row : rows) {
        for (std::size_t i = 0; i < row.size(); ++i)
            std::cout << (i ? " " : "") << (row[i].second ? "-" : "+") << row[i].first;
        std::cout << "\n";
    }
}

engine::AnswerStream run_minimal_answers(const Database& db, const std::string& mode,
                                         const std::string& comp_path, bool allow_total,
                                         bool strict, const std::string& query,
                                         std::size_t limit, unsigned jobs) {
    engine::Options opts;
    opts.limit = limit;
    opts.jobs = jobs;
    if (!query.empty()) opts.query = parse_literals(query, db.lang).pos;

    if (mode == "compiled") {
        comp::CompiledBase base;
        if (!comp_path.empty()) {
            base = comp::load_compiled(comp_path);
            if (comp::is_stale(base, db)) {
                if (strict) throw StaleCompilation("compiled file is stale for this database");
                std::cerr << "warning: stale compiled base, recompiling\n";
                base = comp::compile(db);
            }
        } else {
            base = comp::compile(db);
        }
        return engine::minimal_answers(db, engine::Mode::compiled, opts, &base);
    }
    engine::Mode m = allow_total ? engine::Mode::direct_total : engine::Mode::direct;
    return engine::minimal_answers(db, m, opts);
}

int dispatch(int argc, char** argv) {
    CLI::App app{"minimal-answer engine for disjunctive deductive databases"};
    app.require_subcommand(1);
    bool json = false;
    app.add_flag("--json", json, "JSON output");

    std::string file, comp_file, out_file, goal, atom, query, mode = "direct";
    bool partial = false, total = false, int_total = false, minimal_only = false;
    bool allow_total = false, strict = false;
    std::size_t limit = static_cast<std::size_t>(-1);
    unsigned jobs = 1;

    auto* check = app.add_subcommand("check", "parse, stratification and partition report");
    check->add_option("file", file)->required();

    auto* sm = app.add_subcommand("stable-models", "stable models via total covers");
    sm->add_option("file", file)->required();

    auto* ma = app.add_subcommand("minimal-answers", "enumerate minimal answers");
    ma->add_option("file", file)->required();
    ma->add_option("--mode", mode, "direct|compiled")->check(CLI::IsMember({"direct", "compiled"}));
    ma->add_option("--comp", comp_file, "compiled base file");
    ma->add_option("--query", query, "restrict answers to these atoms");
    ma->add_flag("--allow-total", allow_total, "use total covers on unstratified input");
    ma->add_option("--limit", limit, "answer cap");
    ma->add_option("--jobs", jobs, "parallel seed workers");
    ma->add_flag("--strict", strict, "fail on stale compiled bases");

    auto* co = app.add_subcommand("compile", "pre-process the intension");
    co->add_option("file", file)->required();
    co->add_option("-o,--output", out_file, "output .comp file")->required();

    auto* cv = app.add_subcommand("covers", "constructible cover search");
    cv->add_option("file", file)->required();
    cv->add_option("--goal", goal, "seed literals, e.g. \"q2,~r1\"")->required();
    cv->add_flag("--total", total);
    cv->add_flag("--int-total", int_total);
    cv->add_flag("--minimal-only", minimal_only);
    cv->add_option("--limit", limit);

    auto* tr = app.add_subcommand("trees", "tree summaries for one atom");
    tr->add_option("file", file)->required();
    tr->add_option("--atom", atom)->required();
    tr->add_flag("--partial", partial, "partial trees (partitioned input)");

    auto* tf = app.add_subcommand("transform", "positive reformulation");
    tf->add_option("file", file)->required();
    tf->add_option("-o,--output", out_file);

    auto* orc = app.add_subcommand("oracle", "brute-force reference semantics");
    orc->require_subcommand(1);
    std::string ofile;
    auto add_oracle_sub = [&](const char* name, const char* desc) {
        auto* s = orc->add_subcommand(name, desc);
        s->add_option("file", ofile)->required();
        return s;
    };
    auto* o_models = add_oracle_sub("models", "all models");
    auto* o_min = add_oracle_sub("minimal-models", "minimal models");
    auto* o_stable = add_oracle_sub("stable-models", "stable models");
    auto* o_perfect = add_oracle_sub("perfect-models", "perfect models");
    auto* o_ans = add_oracle_sub("minimal-answers", "minimal answers by enumeration");

    // let --json (declared on the app) apply after any subcommand
    for (CLI::App* sub : {check, sm, ma, co, cv, tr, tf, orc, o_models, o_min, o_stable,
                          o_perfect, o_ans})
        sub->fallthrough();

    CLI11_PARSE(app, argc, argv);

    if (check->parsed()) {
        Database db = parse_database(slurp(file));
        std::size_t ext = db.lang.partitioned ? db.lang.ext.count() : 0;
        std::cout << "atoms: " << db.lang.size();
        if (db.lang.partitioned)
            std::cout << " (ext: " << ext << ", int: " << db.lang.size() - ext << ")";
        std::cout << "\nrules: " << db.rules.size() << "\n";
        std::cout << "partitioned: " << (db.lang.partitioned ? "yes" : "no") << "\n";
        if (db.strat.is_stratified)
            std::cout << "stratified: yes\n";
        else
            std::cout << "not stratified; direct mode requires --allow-total\n";
        if (db.lang.aux) std::cout << "normalized: marker atom added\n";
        return 0;
    }
    if (sm->parsed()) {
        Database db = parse_database(slurp(file));
        print_models(engine::stable_models_via_covers(db), db.lang, json);
        return 0;
    }
    if (ma->parsed()) {
        Database db = parse_database(slurp(file));
        engine::AnswerStream res =
            run_minimal_answers(db, mode, comp_file, allow_total, strict, query, limit, jobs);
        print_answers(res.answers, db.lang, json, res.exhausted);
        return 0;
    }
    if (co->parsed()) {
        Database db = parse_database(slurp(file));
        comp::CompiledBase base = comp::compile(db);
        comp::save_compiled(base, out_file);
        std::cout << "covers: " << base.covers.size() << "\nfingerprint: " << base.int_fingerprint
                  << "\n";
        return 0;
    }
    if (cv->parsed()) {
        Database db = parse_database(slurp(file));
        if (total && int_total) throw SemanticError("--total and --int-total are exclusive");
        trees::TreeCache cache(db);
        covers::CoverGoal g;
        g.seed = parse_literals(goal, db.lang);
        g.mode = total ? covers::CoverMode::total
                       : int_total ? covers::CoverMode::int_total : covers::CoverMode::plain;
        g.graft = g.seed.neg.to_vector();
        g.minimal_only = minimal_only;
        g.check_seed = false;
        std::vector<LiteralSet> out = covers::collect_extensions(g, db, cache, limit);
        print_covers(out, db.lang, json);
        return 0;
    }
    if (tr->parsed()) {
        Database db = parse_database(slurp(file));
        auto id = db.lang.find(atom);
        if (!id) throw SemanticError("unknown atom '" + atom + "'");
        std::vector<LiteralSet> out;
        auto take = [&](const trees::TreeSummary& t, const trees::TreeNode*) {
            out.push_back(t.s());
            return true;
        };
        if (partial)
            trees::partial_cyclic_trees(*id, db, take);
        else
            trees::cyclic_trees(*id, db, LiteralSet(db.lang.size()), take);
        std::sort(out.begin(), out.end(),
                  [](const LiteralSet& a, const LiteralSet& b) { return a.compare(b) < 0; });
        print_covers(out, db.lang, json);
        return 0;
    }
    if (tf->parsed()) {
        Database db = parse_database(slurp(file));
        transform::TransformResult res = transform::to_positive(db);
        std::ostringstream os;
        for (AtomId p = 0; p < res.source_atoms; ++p)
            for (std::size_t k = 0; k < res.tree_atoms[p].size(); ++k)
                os << "% " << res.tstar.lang.name(res.tree_atoms[p][k]) << ": tree " << k
                   << " for " << db.lang.name(p) << "\n";
        os << print_rules(res.tstar);
        if (out_file.empty()) {
            std::cout << os.str();
        } else {
            std::ofstream f(out_file, std::ios::binary);
            if (!f) throw IoError("cannot write '" + out_file + "'");
            f << os.str();
        }
        return 0;
    }
    if (orc->parsed()) {
        Database db = parse_database(slurp(ofile));
        std::size_t bound = oracle_bound();
        if (o_models->parsed())
            print_models(oracle::models(db, bound).models, db.lang, json);
        else if (o_min->parsed())
            print_models(oracle::minimal_models(db, bound).models, db.lang, json);
        else if (o_stable->parsed())
            print_models(oracle::stable_models(db, bound).models, db.lang, json);
        else if (o_perfect->parsed())
            print_models(oracle::perfect_models(db, bound).models, db.lang, json);
        else if (o_ans->parsed())
            print_answers(oracle::minimal_answers_bf(db, bound), db.lang, json);
        return 0;
    }
    return 1;
}

} // namespace

int main(int argc, char** argv) {
    try {
        return dispatch(argc, argv);
    } catch (const ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const TooLarge& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 4;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
}
