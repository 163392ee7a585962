#include "minans/oracle.hpp"

#include <algorithm>

namespace minans::oracle {

namespace {

void guard(const Database& db, std::size_t bound) {
    if (db.lang.size() > bound)
        throw TooLarge("language has " + std::to_string(db.lang.size()) +
                       " atoms, oracle bound is " + std::to_string(bound));
}

Bits from_mask(std::uint64_t mask, std::size_t n) {
    Bits b(n);
    for (std::size_t i = 0; i < n; ++i)
        if (mask & (std::uint64_t(1) << i)) b.set(static_cast<AtomId>(i));
    return b;
}

template <typename F>
void for_each_subset(std::size_t n, F&& f) {
    for (std::uint64_t mask = 0; mask < (std::uint64_t(1) << n); ++mask)
        f(from_mask(mask, n));
}

// Enumerate subsets of the given atom set.
template <typename F>
void for_each_subset_of(const Bits& atoms, F&& f) {
    std::vector<AtomId> v = atoms.to_vector();
    std::size_t k = v.size();
    for (std::uint64_t mask = 0; mask < (std::uint64_t(1) << k); ++mask) {
        Bits b(atoms.universe());
        for (std::size_t i = 0; i < k; ++i)
            if (mask & (std::uint64_t(1) << i)) b.set(v[i]);
        f(b);
    }
}

void sort_canonical(std::vector<Bits>& v) {
    std::sort(v.begin(), v.end(), [](const Bits& a, const Bits& b) { return a.compare(b) < 0; });
    v.erase(std::unique(v.begin(), v.end()), v.end());
}

std::vector<Bits> keep_minimal(std::vector<Bits> v) {
    std::vector<Bits> out;
    for (const Bits& a : v) {
        bool minimal = true;
        for (const Bits& b : v)
            if (b != a && b.subset_of(a)) {
                minimal = false;
                break;
            }
        if (minimal) out.push_back(a);
    }
    sort_canonical(out);
    return out;
}

bool is_minimal_model(const Bits& m, const Database& db) {
    if (!is_model(m, db)) return false;
    bool smaller = false;
    for_each_subset_of(m, [&](const Bits& s) {
        if (!smaller && s != m && is_model(s, db)) smaller = true;
    });
    return !smaller;
}

} // namespace

ModelSet models(const Database& db, std::size_t bound) {
    guard(db, bound);
    ModelSet out;
    for_each_subset(db.lang.size(), [&](const Bits& m) {
        if (is_model(m, db)) out.models.push_back(m);
    });
    sort_canonical(out.models);
    return out;
}

ModelSet minimal_models(const Database& db, std::size_t bound) {
    guard(db, bound);
    ModelSet out;
    out.models = keep_minimal(models(db, bound).models);
    return out;
}

bool is_stable_model(const Bits& m, const Database& db) {
    return is_minimal_model(m, gl_reduct(db, m));
}

ModelSet stable_models(const Database& db, std::size_t bound) {
    guard(db, bound);
    ModelSet out;
    for_each_subset(db.lang.size(), [&](const Bits& m) {
        if (is_stable_model(m, db)) out.models.push_back(m);
    });
    sort_canonical(out.models);
    return out;
}

ModelSet perfect_models(const Database& db, std::size_t bound) {
    guard(db, bound);
    if (!db.strat.is_stratified) throw NotStratified("database is not stratified");
    const auto& level = db.strat.level;
    std::uint32_t max_level = 0;
    for (auto l : level) max_level = std::max(max_level, l);

    auto rule_level = [&](const Rule& r) { return level[r.conseq.first()]; };

    auto is_perfect = [&](const Bits& m) {
        if (!is_model(m, db)) return false;
        std::size_t n = db.lang.size();
        for (std::uint32_t alpha = 0; alpha <= max_level; ++alpha) {
            Bits below(n), at(n);
            for (AtomId a = 0; a < n; ++a) {
                if (!m.test(a)) continue;
                if (level[a] < alpha) below.set(a);
                if (level[a] == alpha) at.set(a);
            }
            std::vector<const Rule*> stratum;
            for (const Rule& r : db.rules)
                if (rule_level(r) == alpha) stratum.push_back(&r);
            bool shrinkable = false;
            for_each_subset_of(at, [&](const Bits& sub) {
                if (shrinkable || sub == at) return;
                Bits cand = below | sub;
                bool ok = true;
                for (const Rule* r : stratum)
                    if (!satisfies(cand, *r)) {
                        ok = false;
                        break;
                    }
                if (ok) shrinkable = true;
            });
            if (shrinkable) return false;
        }
        return true;
    };

    ModelSet out;
    for_each_subset(db.lang.size(), [&](const Bits& m) {
        if (is_perfect(m)) out.models.push_back(m);
    });
    sort_canonical(out.models);
    return out;
}

bool entails(const Database& db, const Bits& a, std::size_t bound) {
    guard(db, bound);
    bool ok = true;
    for_each_subset(db.lang.size(), [&](const Bits& m) {
        if (ok && is_stable_model(m, db) && !m.intersects(a)) ok = false;
    });
    return ok;
}

bool entails_clause(const Database& db, const LiteralSet& q, std::size_t bound) {
    guard(db, bound);
    bool ok = true;
    for_each_subset(db.lang.size(), [&](const Bits& m) {
        if (!ok || !is_stable_model(m, db)) return;
        if (!m.intersects(q.pos) && q.neg.subset_of(m)) ok = false;
    });
    return ok;
}

std::vector<Bits> minimal_answers_bf(const Database& db, std::size_t bound) {
    guard(db, bound);
    ModelSet sm = stable_models(db, bound);
    if (sm.models.empty()) throw Inconsistent("database has no stable model");

    // Minimal answers are the minimal hitting sets of the stable models,
    // so candidates live inside the union of the stable models.
    Bits support(db.lang.size());
    for (const Bits& m : sm.models) support |= m;

    std::vector<Bits> hits;
    for_each_subset_of(support, [&](const Bits& a) {
        if (a.none()) return;
        for (const Bits& m : sm.models)
            if (!m.intersects(a)) return;
        hits.push_back(a);
    });
    return keep_minimal(std::move(hits));
}

bool is_cyclic_bf(const LiteralSet& c, const Database& db, std::size_t bound) {
    guard(db, bound);
    Database part = restrict_db(db, c);
    Database sat;
    sat.lang = part.lang;
    for (const Rule& r : part.rules)
        if (satisfies(c.neg, r)) sat.rules.push_back(r);
    sat.finalize();
    return is_stable_model(c.neg, sat);
}

} // namespace minans::oracle
