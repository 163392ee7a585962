#include "minans/transform.hpp"

#include <algorithm>
#include <unordered_map>
#include <unordered_set>

#include "minans/covers.hpp"
#include "minans/trees.hpp"

namespace minans::transform {

TransformResult to_positive(const Database& db) {
    bool has_fact = std::any_of(db.rules.begin(), db.rules.end(),
                                [](const Rule& r) { return r.body_free(); });
    if (!has_fact)
        throw TrivialDatabase("no body-free rule: the unique stable model is empty");

    std::size_t n = db.lang.size();
    std::vector<std::vector<trees::TreeSummary>> fam(n);
    for (AtomId p = 0; p < n; ++p) fam[p] = trees::collect(p, db);

    TransformResult tr;
    tr.source_atoms = n;
    Language star;
    for (AtomId a = 0; a < n; ++a) star.intern(db.lang.name(a));
    tr.tree_atoms.resize(n);
    for (AtomId p = 0; p < n; ++p)
        for (std::size_t k = 0; k < fam[p].size(); ++k)
            tr.tree_atoms[p].push_back(
                star.intern("__t_" + db.lang.name(p) + "_" + std::to_string(k)));
    tr.false_atom = star.intern("__false");
    star.false_atom = tr.false_atom;
    std::size_t m = star.size();

    tr.phi.assign(n, Bits(m));
    for (AtomId p = 0; p < n; ++p)
        for (AtomId q : tr.tree_atoms[p]) tr.phi[p].set(q);

    auto lift = [&](const Bits& b) { return b.resized(m); };
    Database& ts = tr.tstar;
    ts.lang = star;

    // source rules: negative subgoals replaced by their tree conjunctions,
    // goal atom appended to every head
    for (const Rule& r : db.rules) {
        Rule s;
        s.antec = lift(r.antec);
        s.negbody = Bits(m);
        s.conseq = lift(r.conseq);
        r.negbody.for_each([&](AtomId b) { s.antec |= tr.phi[b]; });
        s.conseq.set(tr.false_atom);
        ts.rules.push_back(std::move(s));
    }
    // pair rules: each source atom or one of its tree atoms
    for (AtomId p = 0; p < n; ++p)
        for (AtomId q : tr.tree_atoms[p]) {
            Rule s;
            s.antec = Bits(m);
            s.negbody = Bits(m);
            s.conseq = Bits(m);
            s.conseq.set(p);
            s.conseq.set(q);
            ts.rules.push_back(std::move(s));
        }
    // definite theory: denial per source atom, plus the tree kill switches
    Database& tp = tr.tprime;
    tp.lang = star;
    auto add_definite = [&](Rule s) {
        tp.rules.push_back(s);
        ts.rules.push_back(std::move(s));
    };
    for (AtomId p = 0; p < n; ++p) {
        Rule s;
        s.antec = Bits(m);
        s.negbody = Bits(m);
        s.conseq = Bits(m);
        s.antec.set(p);
        s.antec |= tr.phi[p];
        s.conseq.set(tr.false_atom);
        add_definite(std::move(s));
    }
    for (AtomId p = 0; p < n; ++p)
        for (std::size_t k = 0; k < fam[p].size(); ++k) {
            Bits trig = fam[p][k].out | fam[p][k].negs;
            AtomId q = tr.tree_atoms[p][k];
            trig.for_each([&](AtomId rr) {
                Rule s;
                s.antec = Bits(m);
                s.negbody = Bits(m);
                s.conseq = Bits(m);
                s.antec.set(rr);
                s.conseq.set(q);
                add_definite(std::move(s));
            });
        }
    ts.finalize();
    tp.finalize();
    return tr;
}

Bits definite_closure(const Bits& n, const Database& tprime) {
    Bits m = n;
    bool changed = true;
    while (changed) {
        changed = false;
        for (const Rule& r : tprime.rules) {
            if (!r.antec.subset_of(m)) continue;
            AtomId head = r.conseq.first();
            if (!m.test(head)) {
                m.set(head);
                changed = true;
            }
        }
    }
    return m;
}

// --- minimal answers through the positive reformulation -----------------
//
// All seeds and covers here are purely positive literal sets; the pair rules
// of the transformed database play the role negative literals play in the
// source, so plain strong-cover search suffices and no trees are built in
// the transformed database.

namespace {

struct PositiveDriver {
    const TransformResult& tr;
    trees::TreeCache cache;
    Bits source;
    std::unordered_map<Bits, std::vector<LiteralSet>, BitsHash> memo;

    struct State {
        std::vector<std::pair<AtomId, LiteralSet>> pairs;
        bool operator==(const State& o) const { return pairs == o.pairs; }
    };
    struct StateHash {
        std::size_t operator()(const State& s) const {
            std::size_t h = 0x2545f4914f6cdd1dull;
            for (const auto& [a, c] : s.pairs) h = h * 1000003 + a * 2654435761u + c.hash();
            return h;
        }
    };
    std::unordered_set<State, StateHash> visited;
    std::vector<Bits> answers;

    explicit PositiveDriver(const TransformResult& t)
        : tr(t), cache(t.tstar), source(t.source_mask()) {}

    const std::vector<LiteralSet>& covers_of(const Bits& pos_seed) {
        auto it = memo.find(pos_seed);
        if (it != memo.end()) return it->second;
        covers::CoverGoal goal;
        goal.seed = LiteralSet(pos_seed, Bits(pos_seed.universe()));
        goal.check_seed = false;
        std::vector<LiteralSet> out = covers::collect_extensions(goal, tr.tstar, cache);
        return memo.emplace(pos_seed, std::move(out)).first->second;
    }

    Bits atoms_of(const State& s) const {
        Bits b(tr.tstar.lang.size());
        for (const auto& [a, c] : s.pairs) b.set(a);
        return b;
    }
    Bits pos_intersection(const State& s) const {
        Bits b = s.pairs.front().second.pos;
        for (std::size_t i = 1; i < s.pairs.size(); ++i) b &= s.pairs[i].second.pos;
        return b;
    }

    void emit(const Bits& a) {
        if (std::find(answers.begin(), answers.end(), a) == answers.end()) answers.push_back(a);
    }

    std::vector<AtomId> ordered(const Bits& cand, const Bits& preferred) const {
        std::vector<AtomId> out;
        (cand & preferred).for_each([&](AtomId a) { out.push_back(a); });
        (cand - preferred).for_each([&](AtomId a) { out.push_back(a); });
        return out;
    }

    void dfs(const State& s) {
        if (!visited.insert(s).second) return;
        Bits atoms = atoms_of(s);
        Bits inter = pos_intersection(s);

        Bits vbits = atoms | (source & inter);
        vbits.set(tr.false_atom);
        static const std::vector<LiteralSet> kEmpty;
        const std::vector<LiteralSet>& witnesses =
            s.pairs.size() == 1 ? kEmpty : covers_of(vbits);

        if (!witnesses.empty()) {
            for (const LiteralSet& w : witnesses) {
                Bits cand = source - w.pos;
                for (AtomId a : ordered(cand, inter)) {
                    std::vector<std::vector<LiteralSet>> lists(s.pairs.size());
                    bool ok = true;
                    for (std::size_t i = 0; i < s.pairs.size(); ++i) {
                        Bits seed = s.pairs[i].second.pos;
                        seed.set(a);
                        lists[i] = covers_of(seed);
                        if (lists[i].empty()) {
                            ok = false;
                            break;
                        }
                    }
                    if (!ok) continue;
                    walk_product(s, a, lists, nullptr);
                }
            }
            return;
        }

        Bits base_seed = atoms;
        base_seed.set(tr.false_atom);
        const std::vector<LiteralSet>& base = covers_of(base_seed);
        if (base.empty()) {
            emit(atoms & source);
            return;
        }
        for (const LiteralSet& c : base) {
            Bits cand = source - c.pos;
            for (AtomId a : ordered(cand, inter)) {
                // a cover through some tree of the new atom
                std::vector<LiteralSet> new_covers;
                for (AtomId q : tr.tree_atoms[a]) {
                    Bits seed = c.pos;
                    seed.set(q);
                    for (const LiteralSet& d : covers_of(seed))
                        if (std::find(new_covers.begin(), new_covers.end(), d) ==
                            new_covers.end())
                            new_covers.push_back(d);
                }
                if (new_covers.empty()) continue;
                std::vector<std::vector<LiteralSet>> lists(s.pairs.size());
                bool ok = true;
                for (std::size_t i = 0; i < s.pairs.size(); ++i) {
                    Bits seed = s.pairs[i].second.pos;
                    seed.set(a);
                    lists[i] = covers_of(seed);
                    if (lists[i].empty()) {
                        ok = false;
                        break;
                    }
                }
                if (!ok) continue;
                lists.push_back(std::move(new_covers));
                walk_product(s, a, lists, &a);
            }
        }
    }

    // lists holds one choice list per existing pair, plus (optionally) one
    // for a new trailing pair labelled `a`.
    void walk_product(const State& s, AtomId a, const std::vector<std::vector<LiteralSet>>& lists,
                      const AtomId* appended) {
        std::vector<std::size_t> idx(lists.size(), 0);
        while (true) {
            State next;
            for (std::size_t i = 0; i < s.pairs.size(); ++i)
                next.pairs.emplace_back(s.pairs[i].first, lists[i][idx[i]]);
            if (appended) next.pairs.emplace_back(a, lists.back()[idx.back()]);
            if (!(next == s)) dfs(next);
            std::size_t k = 0;
            while (k < idx.size()) {
                if (++idx[k] < lists[k].size()) break;
                idx[k] = 0;
                ++k;
            }
            if (k == idx.size()) break;
        }
    }

    std::vector<Bits> run() {
        for (AtomId a = 0; a < tr.source_atoms; ++a) {
            for (AtomId q : tr.tree_atoms[a]) {
                Bits seed(tr.tstar.lang.size());
                seed.set(q);
                seed.set(tr.false_atom);
                for (const LiteralSet& c : covers_of(seed)) {
                    State s;
                    s.pairs.emplace_back(a, c);
                    dfs(s);
                }
            }
        }
        std::sort(answers.begin(), answers.end(),
                  [](const Bits& x, const Bits& y) { return x.compare(y) < 0; });
        return answers;
    }
};

} // namespace

std::vector<Bits> answers_via_transform(const Database& db) {
    TransformResult tr = to_positive(db);

    // goal atom entailed means no stable model in the source
    trees::TreeCache cache(tr.tstar);
    covers::CoverGoal gate;
    gate.seed = LiteralSet(tr.tstar.lang.size());
    gate.seed.pos.set(tr.false_atom);
    gate.check_seed = false;
    bool satisfiable = false;
    covers::constructible_extensions(gate, tr.tstar, cache, [&](const LiteralSet&) {
        satisfiable = true;
        return false;
    });
    if (!satisfiable) throw Inconsistent("database has no stable model");

    PositiveDriver drv(tr);
    std::vector<Bits> full = drv.run();
    // project to source atoms (they already are; resize to the source language)
    std::vector<Bits> out;
    for (const Bits& a : full) {
        Bits b(db.lang.size());
        a.for_each([&](AtomId x) {
            if (x < db.lang.size()) b.set(x);
        });
        if (std::find(out.begin(), out.end(), b) == out.end()) out.push_back(b);
    }
    std::sort(out.begin(), out.end(),
              [](const Bits& x, const Bits& y) { return x.compare(y) < 0; });
    return out;
}

} // namespace minans::transform
