#include "minans/engine.hpp"

#include <algorithm>
#include <mutex>
#include <thread>

namespace minans::engine {

Bits CyclicState::atoms(std::size_t n) const {
    Bits b(n);
    for (const auto& [a, c] : pairs) b.set(a);
    return b;
}

Bits CyclicState::pos_intersection(std::size_t n) const {
    if (pairs.empty()) return Bits(n);
    Bits b = pairs.front().second.pos;
    for (std::size_t i = 1; i < pairs.size(); ++i) b &= pairs[i].second.pos;
    return b;
}

Bits CyclicState::neg_union(std::size_t n) const {
    Bits b(n);
    for (const auto& [a, c] : pairs) b |= c.neg;
    return b;
}

std::size_t CyclicState::hash() const {
    std::size_t h = 0x9e3779b97f4a7c15ull;
    for (const auto& [a, c] : pairs) h = h * 1000003 + a * 2654435761u + c.hash();
    return h;
}

CyclicState truncate(const CyclicState& s) {
    if (s.pairs.empty()) throw EmptyState("cannot truncate the empty state");
    CyclicState t = s;
    t.pairs.pop_back();
    return t;
}

// --- session ---------------------------------------------------------------

Session::Session(const Database& db, Mode mode) : db_(&db), mode_(mode), cache_(db) {
    if (mode == Mode::compiled)
        throw SemanticError("compiled mode needs a CompiledBase");
    if (mode == Mode::direct && !db.strat.is_stratified)
        throw NotStratified("direct mode needs a stratified database (or total covers)");
}

Session::Session(const Database& db, const comp::CompiledBase& base)
    : db_(&db), mode_(Mode::compiled), base_(&base), cache_(db) {
    comp_.emplace(base, db); // validates the fingerprint
    ext_ = comp::ext_part(db);
}

const std::vector<LiteralSet>& Session::covers_of(const LiteralSet& seed,
                                                  const std::vector<AtomId>& graft) {
    if (mode_ == Mode::compiled) return comp_->comp_query(seed);
    Key key{seed, graft};
    auto it = cover_memo_.find(key);
    if (it != cover_memo_.end()) return it->second;

    covers::CoverGoal goal;
    goal.seed = seed;
    goal.graft = graft;
    goal.mode = mode_ == Mode::direct_total ? covers::CoverMode::total : covers::CoverMode::plain;
    goal.check_seed = false;
    std::vector<LiteralSet> out = covers::collect_extensions(goal, *db_, cache_);
    return cover_memo_.emplace(std::move(key), std::move(out)).first->second;
}

const std::vector<LiteralSet>& Session::witness_covers(const CyclicState& s) {
    std::size_t n = db_->lang.size();
    Bits scope = query_ ? *query_ : db_->lang.full_set();
    LiteralSet v(n);
    v.pos = s.atoms(n) | (scope & s.pos_intersection(n));
    return covers_of(v, {});
}

bool Session::is_verified(const CyclicState& s) {
    if (s.length() == 1 && !query_) return true;
    return witness_covers(s).empty();
}

Bits Session::candidate_atoms(const LiteralSet& base_cover, const CyclicState& s) const {
    std::size_t n = db_->lang.size();
    Bits cand = query_ ? *query_ : db_->lang.full_set();
    cand -= base_cover.pos;
    cand -= s.neg_union(n);
    return cand;
}

std::vector<AtomId> Session::ordered_candidates(const Bits& cand, const CyclicState& s) const {
    std::size_t n = db_->lang.size();
    Bits inter = s.pos_intersection(n);
    std::vector<AtomId> out;
    (cand & inter).for_each([&](AtomId a) { out.push_back(a); });
    (cand - inter).for_each([&](AtomId a) { out.push_back(a); });
    return out;
}

void Session::stash(const std::vector<LiteralSet>& covers) {
    for (const LiteralSet& c : covers) {
        if (c.neg.none()) continue;
        if (std::find(pool_.begin(), pool_.end(), c) == pool_.end()) pool_.push_back(c);
    }
}

void Session::consistency_gate() {
    std::size_t n = db_->lang.size();
    if (mode_ == Mode::direct_total) {
        if (!covers::has_total_cover(LiteralSet(n), *db_, cache_))
            throw Inconsistent("database has no stable model");
    } else if (mode_ == Mode::compiled) {
        if (comp_->comp_query(LiteralSet(n)).empty())
            throw Inconsistent("database has no stable model");
    }
    // direct mode runs on stratified databases only; those always have one
}

namespace {

// Walks the cross product of per-position cover choices.
template <typename F>
void cross_product(const std::vector<std::vector<LiteralSet>>& lists, F&& use) {
    std::vector<std::size_t> idx(lists.size(), 0);
    while (true) {
        use(idx);
        std::size_t k = 0;
        while (k < idx.size()) {
            if (++idx[k] < lists[k].size()) break;
            idx[k] = 0;
            ++k;
        }
        if (k == idx.size()) break;
        if (lists.empty()) break;
    }
}

void push_unique(std::vector<CyclicState>& out, CyclicState s) {
    if (std::find(out.begin(), out.end(), s) == out.end()) out.push_back(std::move(s));
}

} // namespace

void Session::extend_unverified_into(const CyclicState& s, std::vector<CyclicState>& out) {
    std::size_t n = db_->lang.size();
    const std::vector<LiteralSet>& wits = witness_covers(s);
    std::size_t r = s.length();

    if (mode_ == Mode::compiled) {
        Bits extmask = db_->lang.ext_mask();
        for (const LiteralSet& d : wits) {
            for (const Rule& e : ext_.rules) {
                Bits ed = e.conseq - d.pos;
                bool ok = true;
                for (const auto& [a, ci] : s.pairs) {
                    (void)a;
                    if (ed.intersects(ci.neg) || !e.conseq.intersects(d.pos - ci.pos) ||
                        comp::ext_entails(ext_, ed | (ci.pos & extmask))) {
                        ok = false;
                        break;
                    }
                }
                if (!ok) continue;
                CyclicState next = s;
                for (auto& [a, ci] : next.pairs) {
                    (void)a;
                    ci.pos |= ed;
                }
                push_unique(out, std::move(next));
            }
        }
        return;
    }

    for (const LiteralSet& w : wits) {
        Bits cand = candidate_atoms(w, s);
        for (AtomId a : ordered_candidates(cand, s)) {
            std::vector<std::vector<LiteralSet>> lists(r);
            bool ok = true;
            for (std::size_t i = 0; i < r; ++i) {
                LiteralSet seed = s.pairs[i].second;
                seed.pos.set(a);
                lists[i] = covers_of(seed, {});
                if (lists[i].empty()) {
                    ok = false;
                    break;
                }
            }
            if (!ok) continue;
            cross_product(lists, [&](const std::vector<std::size_t>& idx) {
                CyclicState next;
                next.pairs.reserve(r);
                for (std::size_t i = 0; i < r; ++i)
                    next.pairs.emplace_back(s.pairs[i].first, lists[i][idx[i]]);
                if (!(next == s)) push_unique(out, std::move(next));
            });
        }
    }
    (void)n;
}

void Session::extend_verified_into(const CyclicState& s, std::vector<CyclicState>& out,
                                   bool* complete) {
    std::size_t n = db_->lang.size();
    LiteralSet atoms_seed(n);
    atoms_seed.pos = s.atoms(n);
    const std::vector<LiteralSet>& base = covers_of(atoms_seed, {});
    if (base.empty()) {
        *complete = true;
        return;
    }
    *complete = false;
    std::size_t r = s.length();
    Bits scope = query_ ? *query_ : db_->lang.full_set();

    if (mode_ == Mode::compiled) {
        Bits extmask = db_->lang.ext_mask();
        Bits intmask = db_->lang.int_mask();
        for (const LiteralSet& c : base) {
            // intensional candidates: already negated in c and positive in
            // every cover of the state
            Bits canda = intmask & c.neg & s.pos_intersection(n) & scope;
            canda.for_each([&](AtomId a) {
                CyclicState next = s;
                next.pairs.emplace_back(a, c);
                push_unique(out, std::move(next));
            });
            // extensional candidates
            Bits candb = (extmask & scope) - c.pos;
            candb -= s.neg_union(n);
            candb.for_each([&](AtomId a) {
                for (const auto& [ai, ci] : s.pairs) {
                    (void)ai;
                    Bits f = ci.pos & extmask;
                    f.set(a);
                    if (comp::ext_entails(ext_, f)) return;
                }
                for (const Rule& e : ext_.rules) {
                    if (!e.conseq.test(a)) continue;
                    Bits rest = e.conseq;
                    rest.reset(a);
                    if (rest.intersects(c.neg & extmask)) continue;
                    if (comp::ext_entails(ext_, rest | (c.pos & extmask))) continue;
                    LiteralSet newcov = c;
                    newcov.pos |= rest;
                    newcov.neg.set(a);
                    CyclicState next = s;
                    for (auto& [ai, ci] : next.pairs) {
                        (void)ai;
                        ci.pos.set(a);
                    }
                    next.pairs.emplace_back(a, std::move(newcov));
                    push_unique(out, std::move(next));
                }
            });
        }
        return;
    }

    for (const LiteralSet& c : base) {
        Bits cand = candidate_atoms(c, s);
        for (AtomId a : ordered_candidates(cand, s)) {
            // cover for the new pair
            LiteralSet seed_new = c;
            std::vector<AtomId> graft;
            if (!seed_new.neg.test(a)) {
                seed_new.neg.set(a);
                graft.push_back(a);
            }
            const std::vector<LiteralSet>& new_covers = covers_of(seed_new, graft);
            if (new_covers.empty()) continue;
            // extended covers for the existing pairs
            std::vector<std::vector<LiteralSet>> lists(r);
            bool ok = true;
            for (std::size_t i = 0; i < r; ++i) {
                LiteralSet seed = s.pairs[i].second;
                seed.pos.set(a);
                lists[i] = covers_of(seed, {});
                if (lists[i].empty()) {
                    ok = false;
                    break;
                }
            }
            if (!ok) {
                stash(new_covers);
                continue;
            }
            lists.push_back(new_covers);
            cross_product(lists, [&](const std::vector<std::size_t>& idx) {
                CyclicState next;
                next.pairs.reserve(r + 1);
                for (std::size_t i = 0; i < r; ++i)
                    next.pairs.emplace_back(s.pairs[i].first, lists[i][idx[i]]);
                next.pairs.emplace_back(a, lists[r][idx[r]]);
                push_unique(out, std::move(next));
            });
        }
    }
}

std::vector<CyclicState> Session::extend_unverified(const CyclicState& s) {
    if (is_verified(s)) throw StateVerified("state is verified; no unverified extension");
    std::vector<CyclicState> out;
    extend_unverified_into(s, out);
    return out;
}

std::vector<CyclicState> Session::extend_verified(const CyclicState& s) {
    std::vector<CyclicState> out;
    bool complete = false;
    extend_verified_into(s, out, &complete);
    if (complete) throw StateComplete("state atoms form a minimal answer");
    return out;
}

// --- driver ---------------------------------------------------------------

struct Driver {
    Session& ses;
    std::size_t limit;
    bool instrument;
    std::vector<Bits> answers;
    std::unordered_set<CyclicState, CyclicStateHash> visited;
    bool aborted = false;

    void emit(const Bits& answer) {
        if (std::find(answers.begin(), answers.end(), answer) != answers.end()) return;
        answers.push_back(answer);
        if (answers.size() >= limit) aborted = true;
    }

    void check_prefix_invariant(const CyclicState& s) {
        for (std::size_t j = 1; j < s.length(); ++j) {
            CyclicState prefix;
            prefix.pairs.assign(s.pairs.begin(), s.pairs.begin() + static_cast<long>(j));
            if (!ses.is_verified(prefix))
                throw Error("internal: prefix of a cyclic state is not verified");
        }
    }

    void dfs(const CyclicState& s) {
        if (aborted) return;
        if (!visited.insert(s).second) {
            ++ses.instr_.states_retired;
            return;
        }
        ++ses.instr_.states_processed;

        if (!ses.is_verified(s)) {
            std::vector<CyclicState> out;
            ses.extend_unverified_into(s, out);
            for (const CyclicState& t : out) {
                dfs(t);
                if (aborted) return;
            }
            return; // no extension: dead end, backtrack
        }

        if (instrument) {
            ses.instr_.verified_atom_sets.push_back(s.atoms(ses.db().lang.size()));
            check_prefix_invariant(s);
        }

        bool complete = false;
        std::vector<CyclicState> out;
        ses.extend_verified_into(s, out, &complete);
        if (complete) {
            emit(s.atoms(ses.db().lang.size()));
            return;
        }
        for (const CyclicState& t : out) {
            dfs(t);
            if (aborted) return;
        }
    }

    void run(const std::vector<AtomId>& seed_atoms) {
        std::size_t n = ses.db().lang.size();
        for (AtomId a : seed_atoms) {
            if (aborted) return;
            // salvage pool first, then the canonical seed covers
            std::vector<LiteralSet> seeds;
            for (const LiteralSet& c : ses.pool_)
                if (c.neg.test(a)) seeds.push_back(c);
            LiteralSet seed(n);
            seed.neg.set(a);
            std::vector<AtomId> graft{a};
            for (const LiteralSet& c :
                 ses.covers_of(seed, ses.mode() == Mode::compiled ? std::vector<AtomId>{} : graft))
                seeds.push_back(c);
            for (const LiteralSet& c : seeds) {
                CyclicState s;
                s.pairs.emplace_back(a, c);
                dfs(s);
                if (aborted) return;
            }
        }
    }
};

AnswerStream Session::minimal_answers(const Options& opts) {
    query_ = opts.query;
    std::size_t n = db_->lang.size();
    consistency_gate();

    std::vector<AtomId> seed_atoms;
    if (query_)
        seed_atoms = query_->to_vector();
    else
        for (AtomId a = 0; a < n; ++a) seed_atoms.push_back(a);

    Driver d{*this, opts.limit, opts.instrument, {}, {}, false};
    d.run(seed_atoms);

    AnswerStream res;
    res.answers = std::move(d.answers);
    std::sort(res.answers.begin(), res.answers.end(),
              [](const Bits& a, const Bits& b) { return a.compare(b) < 0; });
    res.exhausted = !d.aborted;
    return res;
}

AnswerStream minimal_answers(const Database& db, Mode mode, const Options& opts,
                             const comp::CompiledBase* base, Instrumentation* instr_out) {
    auto make_session = [&]() {
        if (mode == Mode::compiled) {
            if (!base) throw SemanticError("compiled mode needs a compiled base");
            return Session(db, *base);
        }
        return Session(db, mode);
    };

    if (opts.jobs <= 1) {
        Session ses = make_session();
        AnswerStream res = ses.minimal_answers(opts);
        if (instr_out) *instr_out = ses.instrumentation();
        return res;
    }

    // fan seed atoms out over independent sessions; answers merge as a set
    {
        Session gate = make_session();
        gate.query_ = opts.query;
        gate.consistency_gate();
    }
    std::size_t n = db.lang.size();
    std::vector<AtomId> seed_atoms;
    if (opts.query)
        seed_atoms = opts.query->to_vector();
    else
        for (AtomId a = 0; a < n; ++a) seed_atoms.push_back(a);

    unsigned jobs = std::min<unsigned>(opts.jobs, std::max<std::size_t>(1, seed_atoms.size()));
    std::vector<std::vector<AtomId>> chunk(jobs);
    for (std::size_t i = 0; i < seed_atoms.size(); ++i) chunk[i % jobs].push_back(seed_atoms[i]);

    std::mutex mu;
    std::vector<Bits> merged;
    bool exhausted = true;
    Instrumentation instr;
    std::vector<std::thread> threads;
    std::exception_ptr failure;
    for (unsigned j = 0; j < jobs; ++j) {
        threads.emplace_back([&, j] {
            try {
                Session ses = make_session();
                ses.query_ = opts.query;
                Driver d{ses, opts.limit, opts.instrument, {}, {}, false};
                d.run(chunk[j]);
                std::lock_guard<std::mutex> lk(mu);
                for (const Bits& a : d.answers)
                    if (std::find(merged.begin(), merged.end(), a) == merged.end())
                        merged.push_back(a);
                if (d.aborted) exhausted = false;
                const Instrumentation& si = ses.instrumentation();
                instr.states_processed += si.states_processed;
                instr.states_retired += si.states_retired;
                instr.verified_atom_sets.insert(instr.verified_atom_sets.end(),
                                                si.verified_atom_sets.begin(),
                                                si.verified_atom_sets.end());
            } catch (...) {
                std::lock_guard<std::mutex> lk(mu);
                if (!failure) failure = std::current_exception();
            }
        });
    }
    for (auto& t : threads) t.join();
    if (failure) std::rethrow_exception(failure);

    AnswerStream res;
    res.answers = std::move(merged);
    if (res.answers.size() > opts.limit) res.answers.resize(opts.limit);
    std::sort(res.answers.begin(), res.answers.end(),
              [](const Bits& a, const Bits& b) { return a.compare(b) < 0; });
    res.exhausted = exhausted;
    if (instr_out) *instr_out = instr;
    return res;
}

std::vector<Bits> stable_models_via_covers(const Database& db) {
    trees::TreeCache cache(db);
    covers::CoverGoal goal;
    goal.seed = LiteralSet(db.lang.size());
    goal.mode = covers::CoverMode::total;
    goal.check_seed = false;
    std::vector<Bits> models;
    covers::constructible_extensions(goal, db, cache, [&](const LiteralSet& c) {
        if (std::find(models.begin(), models.end(), c.neg) == models.end())
            models.push_back(c.neg);
        return true;
    });
    std::sort(models.begin(), models.end(),
              [](const Bits& a, const Bits& b) { return a.compare(b) < 0; });
    return models;
}

} // namespace minans::engine
