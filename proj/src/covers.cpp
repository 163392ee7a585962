#include "minans/covers.hpp"

#include <unordered_set>

namespace minans::covers {

bool is_strong_cover(const LiteralSet& c, const Database& db) {
    if (!c.consistent()) return false;
    for (const Rule& r : db.rules) {
        if (!r.conseq.subset_of(c.pos)) continue;
        if (!r.antec.intersects(c.pos) && !r.negbody.intersects(c.neg)) return false;
    }
    return true;
}

bool is_cyclic(const LiteralSet& c, const Database& db) {
    bool ok = true;
    trees::EnumOptions opts;
    opts.within = &c;
    c.neg.for_each([&](AtomId p) {
        if (!ok) return;
        bool found = false;
        trees::enumerate(p, db, opts, [&](const trees::TreeSummary&, const trees::TreeNode*) {
            found = true;
            return false; // one witness suffices
        });
        if (!found) ok = false;
    });
    return ok;
}

bool is_cyclic(const LiteralSet& c, trees::TreeCache& cache) {
    bool ok = true;
    c.neg.for_each([&](AtomId p) {
        if (!ok) return;
        bool found = false;
        for (const trees::TreeSummary& t : cache.family(p))
            if (t.pred.subset_of(c.neg) && (t.out | t.negs).subset_of(c.pos)) {
                found = true;
                break;
            }
        if (!found) ok = false;
    });
    return ok;
}

namespace {

class Search {
public:
    Search(const SearchSpec& spec, const CoverVisitor& visit) : spec_(spec), visit_(visit) {}

    bool run(const LiteralSet& seed, const std::vector<AtomId>& graft) {
        if (!seed.consistent()) return true;
        return graft_phase(seed, graft, 0);
    }

private:
    // Justify pending seed negatives by grafting one tree each.
    bool graft_phase(const LiteralSet& q, const std::vector<AtomId>& graft, std::size_t i) {
        if (i == graft.size()) return main_phase(q);
        AtomId a = graft[i];
        if (q.pos.test(a)) return true; // inconsistent seed, nothing to emit
        for (const trees::TreeSummary& t : spec_.cache->family(a)) {
            LiteralSet s = t.s();
            if (!s.consistent_with(q)) continue;
            if (!graft_phase(q | s, graft, i + 1)) return false;
        }
        return true;
    }

    bool main_phase(const LiteralSet& q) {
        if (!visited_.insert(q).second) return true;

        // lowest violated rule first
        for (const Rule& r : spec_.rules_db->rules) {
            if (!r.conseq.subset_of(q.pos)) continue;
            if (r.antec.intersects(q.pos) || r.negbody.intersects(q.neg)) continue;
            return branch(q, r.antec, r.negbody);
        }
        // virtual denial rules: force unvalued scope atoms
        Bits open = spec_.denial_scope - q.valued();
        AtomId p = open.first();
        if (p < open.universe()) {
            Bits one(q.pos.universe());
            one.set(p);
            return branch(q, one, one);
        }
        return emit(q);
    }

    bool branch(const LiteralSet& q, const Bits& add_candidates, const Bits& tree_candidates) {
        bool keep_going = true;
        add_candidates.for_each([&](AtomId a) {
            if (!keep_going || q.neg.test(a)) return;
            LiteralSet next = q;
            next.pos.set(a);
            keep_going = main_phase(next);
        });
        if (!keep_going) return false;
        tree_candidates.for_each([&](AtomId b) {
            if (!keep_going) return;
            for (const trees::TreeSummary& t : spec_.cache->family(b)) {
                LiteralSet s = t.s();
                if (!s.consistent_with(q)) continue;
                if (!main_phase(q | s)) {
                    keep_going = false;
                    break;
                }
            }
        });
        return keep_going;
    }

    bool emit(const LiteralSet& q) {
        if (spec_.minimal_only) {
            for (const LiteralSet& e : emitted_)
                if (q.contains(e)) return true;
            emitted_.push_back(q);
        }
        return visit_(q);
    }

    const SearchSpec& spec_;
    const CoverVisitor& visit_;
    std::unordered_set<LiteralSet, LiteralSetHash> visited_;
    std::vector<LiteralSet> emitted_;
};

} // namespace

bool search_covers(const SearchSpec& spec, const LiteralSet& seed,
                   const std::vector<AtomId>& graft, const CoverVisitor& visit) {
    return Search(spec, visit).run(seed, graft);
}

bool constructible_extensions(const CoverGoal& goal, const Database& db,
                              trees::TreeCache& cache, const CoverVisitor& visit) {
    if (!goal.seed.consistent()) throw SemanticError("inconsistent cover seed");
    if (goal.mode == CoverMode::int_total && !db.lang.partitioned)
        throw PartitionRequired("int-total covers need a partitioned database");

    if (goal.check_seed) {
        LiteralSet assumed = goal.seed;
        for (AtomId a : goal.graft) assumed.neg.reset(a);
        if (!is_cyclic(assumed, cache))
            throw NotCyclicSeed("cover seed is not cyclic");
    }

    SearchSpec spec;
    spec.rules_db = &db;
    spec.cache = &cache;
    spec.denial_scope = Bits(db.lang.size());
    if (goal.mode == CoverMode::total) spec.denial_scope = db.lang.full_set();
    if (goal.mode == CoverMode::int_total) spec.denial_scope = db.lang.int_mask();
    spec.minimal_only = goal.minimal_only;
    return search_covers(spec, goal.seed, goal.graft, visit);
}

std::vector<LiteralSet> collect_extensions(const CoverGoal& goal, const Database& db,
                                           trees::TreeCache& cache, std::size_t limit) {
    std::vector<LiteralSet> out;
    constructible_extensions(goal, db, cache, [&](const LiteralSet& c) {
        out.push_back(c);
        return out.size() < limit;
    });
    return out;
}

bool has_total_cover(const LiteralSet& q, const Database& db, trees::TreeCache& cache) {
    CoverGoal goal;
    goal.seed = q;
    goal.graft = q.neg.to_vector();
    goal.check_seed = false;
    if (db.strat.is_stratified)
        goal.mode = CoverMode::plain;
    else if (db.lang.partitioned)
        goal.mode = CoverMode::int_total;
    else
        goal.mode = CoverMode::total;
    bool found = false;
    constructible_extensions(goal, db, cache, [&](const LiteralSet&) {
        found = true;
        return false;
    });
    return found;
}

bool extend_over_reduct(AtomId k_atom, bool k_negated, const LiteralSet& d,
                        const Database& db, const CoverVisitor& visit) {
    if (!is_strong_cover(d, db)) throw NotStrongCover("base cover is not a strong cover");
    if (!is_cyclic(d, db)) throw NotCyclic("base cover is not cyclic");
    if (d.valued().test(k_atom))
        throw SemanticError("literal already valued by the base cover");

    Database td = reduce_db(db, d);
    trees::TreeCache cache(td);
    CoverGoal goal;
    goal.seed = LiteralSet(td.lang.size());
    (k_negated ? goal.seed.neg : goal.seed.pos).set(k_atom);
    if (k_negated) goal.graft.push_back(k_atom);
    goal.check_seed = false;
    return constructible_extensions(goal, td, cache, [&](const LiteralSet& g) {
        return visit(d | g);
    });
}

} // namespace minans::covers
