#include "minans/compile.hpp"

#include <algorithm>
#include <fstream>
#include <unordered_set>

#include <json.hpp>

#include "sha256.hpp"

namespace minans::comp {

bool ext_entails(const Database& extdb, const Bits& f) {
    for (const Rule& r : extdb.rules) {
        if (!r.body_free())
            throw SemanticError("extensional database must be body-free");
        if (r.conseq.subset_of(f)) return true;
    }
    return false;
}

Database ext_part(const Database& db) {
    if (!db.lang.partitioned) throw PartitionRequired("database has no #ext declaration");
    Database out;
    out.lang = db.lang;
    for (const Rule& r : db.rules)
        if (r.conseq.intersects(db.lang.ext)) out.rules.push_back(r);
    out.finalize();
    return out;
}

Database int_part(const Database& db) {
    if (!db.lang.partitioned) throw PartitionRequired("database has no #ext declaration");
    Database out;
    out.lang = db.lang;
    for (const Rule& r : db.rules)
        if (!r.conseq.intersects(db.lang.ext)) out.rules.push_back(r);
    out.finalize();
    return out;
}

std::string int_fingerprint(const Database& db) {
    detail::Sha256 h;
    for (const auto& name : db.lang.names()) {
        h.update(name);
        h.update(db.lang.is_ext(*db.lang.find(name)) ? "\x01" : "\x02", 1);
    }
    h.update("\x03", 1);
    for (const Rule& r : db.rules) {
        if (r.conseq.intersects(db.lang.ext)) continue; // extensional rules excluded
        auto emit = [&](const Bits& b, const char* tag) {
            h.update(tag, 1);
            b.for_each([&](AtomId a) {
                std::uint32_t v = a;
                h.update(&v, sizeof v);
            });
        };
        emit(r.antec, "a");
        emit(r.negbody, "n");
        emit(r.conseq, "c");
        h.update("\x04", 1);
    }
    return h.hex_digest();
}

namespace {

std::vector<LiteralSet> antichain(std::vector<LiteralSet> v) {
    std::vector<LiteralSet> out;
    for (const LiteralSet& a : v) {
        bool minimal = true;
        for (const LiteralSet& b : v)
            if (b != a && a.contains(b)) {
                minimal = false;
                break;
            }
        if (minimal && std::find(out.begin(), out.end(), a) == out.end()) out.push_back(a);
    }
    std::sort(out.begin(), out.end(),
              [](const LiteralSet& a, const LiteralSet& b) { return a.compare(b) < 0; });
    return out;
}

} // namespace

CompiledBase compile(const Database& db) {
    if (!db.lang.partitioned) throw PartitionRequired("compilation needs a partitioned database");

    Database intdb = int_part(db);
    Database treedb = trees::with_ext_unit_facts(db);
    trees::TreeCache cache(treedb);

    covers::SearchSpec spec;
    spec.rules_db = &intdb;
    spec.cache = &cache;
    spec.denial_scope = db.lang.int_mask();

    std::vector<LiteralSet> found;
    covers::search_covers(spec, LiteralSet(db.lang.size()), {}, [&](const LiteralSet& c) {
        found.push_back(c);
        return true;
    });

    CompiledBase base;
    base.lang = db.lang;
    base.covers = antichain(std::move(found));
    base.int_fingerprint = int_fingerprint(db);
    return base;
}

bool completions(const LiteralSet& c, const Database& extdb, const covers::CoverVisitor& visit) {
    Bits pending = c.neg & extdb.lang.ext_mask();
    std::vector<AtomId> atoms = pending.to_vector();
    std::unordered_set<LiteralSet, LiteralSetHash> seen;

    std::function<bool(std::size_t, LiteralSet)> rec = [&](std::size_t i, LiteralSet acc) {
        if (i == atoms.size()) {
            if (!seen.insert(acc).second) return true;
            return visit(acc);
        }
        AtomId p = atoms[i];
        for (const Rule& r : extdb.rules) {
            if (!r.body_free())
                throw SemanticError("extensional database must be body-free");
            if (!r.conseq.test(p)) continue;
            Bits rest = r.conseq;
            rest.reset(p);
            if (rest.intersects(pending) || rest.intersects(c.neg)) continue;
            LiteralSet next = acc;
            next.pos |= rest;
            if (!rec(i + 1, std::move(next))) return false;
        }
        return true;
    };
    return rec(0, c);
}

QuerySession::QuerySession(const CompiledBase& base, const Database& db)
    : base_(&base), db_(&db), ext_(ext_part(db)) {
    if (!base.lang.same_atoms(db.lang))
        throw StaleCompilation("compiled base was built over a different language");
    if (base.int_fingerprint != int_fingerprint(db))
        throw StaleCompilation("intensional rules changed since compilation");
}

const std::vector<LiteralSet>& QuerySession::comp_query(const LiteralSet& q) {
    if (!q.consistent()) throw SemanticError("inconsistent query literals");
    auto it = cache_.find(q);
    if (it != cache_.end()) return it->second;

    Bits ext_mask = db_->lang.ext_mask();
    LiteralSet q_int = q.restricted_to(ext_mask.complement());
    LiteralSet q_ext = q.restricted_to(ext_mask);

    std::vector<LiteralSet> out;
    std::unordered_set<LiteralSet, LiteralSetHash> seen;
    for (const LiteralSet& c : base_->covers) {
        if (!c.contains(q_int)) continue;
        if (!c.consistent_with(q_ext)) continue;
        completions(c | q_ext, ext_, [&](const LiteralSet& d) {
            if (!ext_entails(ext_, d.pos & ext_mask) && seen.insert(d).second)
                out.push_back(d);
            return true;
        });
    }
    std::sort(out.begin(), out.end(),
              [](const LiteralSet& a, const LiteralSet& b) { return a.compare(b) < 0; });
    return cache_.emplace(q, std::move(out)).first->second;
}

// --- persistence ---------------------------------------------------------

void save_compiled(const CompiledBase& base, const std::string& path) {
    nlohmann::json j;
    j["version"] = 1;
    j["fingerprint"] = base.int_fingerprint;
    j["language"] = base.lang.names();
    std::vector<std::string> ext;
    base.lang.ext.for_each([&](AtomId a) { ext.push_back(base.lang.name(a)); });
    j["ext"] = ext;
    nlohmann::json covers = nlohmann::json::array();
    for (const LiteralSet& c : base.covers) {
        nlohmann::json jc;
        std::vector<std::string> pos, neg;
        c.pos.for_each([&](AtomId a) { pos.push_back(base.lang.name(a)); });
        c.neg.for_each([&](AtomId a) { neg.push_back(base.lang.name(a)); });
        jc["pos"] = pos;
        jc["neg"] = neg;
        covers.push_back(jc);
    }
    j["covers"] = covers;

    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write '" + path + "'");
    out << j.dump(2) << "\n";
    if (!out) throw IoError("write failed for '" + path + "'");
}

CompiledBase load_compiled(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot read '" + path + "'");
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw FormatError(std::string("bad compiled file: ") + e.what());
    }
    try {
        if (j.at("version").get<int>() != 1) throw FormatError("unsupported compiled-file version");
        CompiledBase base;
        for (const auto& name : j.at("language")) base.lang.intern(name.get<std::string>());
        base.lang.partitioned = true;
        base.lang.ext = Bits(base.lang.size());
        for (const auto& name : j.at("ext")) {
            auto id = base.lang.find(name.get<std::string>());
            if (!id) throw FormatError("ext atom not in language");
            base.lang.ext.set(*id);
        }
        if (auto aux = base.lang.find("__t")) base.lang.aux = *aux;
        for (const auto& jc : j.at("covers")) {
            LiteralSet c(base.lang.size());
            for (const auto& name : jc.at("pos")) {
                auto id = base.lang.find(name.get<std::string>());
                if (!id) throw FormatError("cover atom not in language");
                c.pos.set(*id);
            }
            for (const auto& name : jc.at("neg")) {
                auto id = base.lang.find(name.get<std::string>());
                if (!id) throw FormatError("cover atom not in language");
                c.neg.set(*id);
            }
            if (!c.consistent()) throw FormatError("inconsistent cover in compiled file");
            base.covers.push_back(std::move(c));
        }
        base.int_fingerprint = j.at("fingerprint").get<std::string>();
        return base;
    } catch (const nlohmann::json::exception& e) {
        throw FormatError(std::string("bad compiled file: ") + e.what());
    }
}

bool is_stale(const CompiledBase& base, const Database& db) {
    return !base.lang.same_atoms(db.lang) || base.int_fingerprint != int_fingerprint(db);
}

} // namespace minans::comp
