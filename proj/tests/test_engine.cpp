#include <doctest.h>

#include "minans/engine.hpp"
#include "minans/oracle.hpp"
#include "support/testutil.hpp"

using namespace minans;
using namespace testutil;

namespace {

engine::CyclicState mk_state(const Database& db,
                             std::initializer_list<std::pair<const char*, const char*>> pairs) {
    engine::CyclicState s;
    for (const auto& [atom, cover] : pairs)
        s.pairs.emplace_back(*db.lang.find(atom), lits(db, cover));
    return s;
}

std::vector<Bits> engine_answers(const Database& db, engine::Mode mode,
                                 engine::Options opts = {}) {
    if (mode == engine::Mode::compiled) {
        comp::CompiledBase base = comp::compile(db);
        return engine::minimal_answers(db, mode, opts, &base).answers;
    }
    return engine::minimal_answers(db, mode, opts).answers;
}

} // namespace

TEST_CASE("length-1 states are verified") {
    Database note4 = load_fixture("note4.dl");
    engine::Session ses(note4, engine::Mode::direct);
    CHECK(ses.is_verified(mk_state(note4, {{"c", "~c,~a,b"}})));
}

TEST_CASE("the A.2 state is unverified and extends through the ext rule") {
    Database a3 = load_fixture("a3.dl");
    comp::CompiledBase base = comp::compile(a3);
    engine::Session ses(a3, base);

    const char* f1 = "q1,q4,q2,~q3,~s2,s1,r3,s3,r1";
    const char* f2 = "q1,q4,~q2,~r1,r2,q3,s2";
    engine::CyclicState s1 = mk_state(a3, {{"q3", f1}, {"q2", f2}});
    CHECK_FALSE(ses.is_verified(s1));

    auto out = ses.extend_unverified(s1);
    REQUIRE(!out.empty());
    engine::CyclicState expected = mk_state(
        a3, {{"q3", "q1,q4,q2,~q3,~s2,s1,r3,s3,r1"}, {"q2", "q1,q4,~q2,~r1,r2,q3,s2,r3"}});
    CHECK(std::find(out.begin(), out.end(), expected) != out.end());

    // a verified state refuses the unverified extension path
    engine::CyclicState s2 = mk_state(a3, {{"q3", f1}, {"r3", "q1,q4,q2,q3,s3,s1,r1,~r3,s2"}});
    CHECK_THROWS_AS(ses.extend_unverified(s2), StateVerified);
}

TEST_CASE("the A.3 state is verified and extends by s1") {
    Database a3 = load_fixture("a3.dl");
    comp::CompiledBase base = comp::compile(a3);
    engine::Session ses(a3, base);

    const char* f1 = "q1,q4,q2,~q3,~s2,s1,r3,s3,r1";
    const char* g1 = "q1,q4,q2,q3,s3,s1,r1,~r3,s2";
    engine::CyclicState s2 = mk_state(a3, {{"q3", f1}, {"r3", g1}});
    CHECK(ses.is_verified(s2));

    auto out = ses.extend_verified(s2);
    REQUIRE(!out.empty());
    engine::CyclicState expected =
        mk_state(a3, {{"q3", "q1,q4,q2,~q3,~s2,s1,r3,s3,r1"},
                      {"r3", "q1,q4,q2,q3,s3,s1,r1,~r3,s2"},
                      {"s1", "q1,q4,~q2,~s1,s2,r3,q3"}});
    CHECK(std::find(out.begin(), out.end(), expected) != out.end());
}

TEST_CASE("A.1: both verified extensions of the singleton state") {
    Database a1 = load_fixture("a1.dl");
    comp::CompiledBase base = comp::compile(a1);
    engine::Session ses(a1, base);

    const char* d1 = "q1,~q4,~s3,r1,q2,q3,s1,s2";
    const char* d2 = "q1,q4,~q2,~r1,s3,q3,s2";
    engine::CyclicState s = mk_state(a1, {{"q2", d2}});
    CHECK(ses.is_verified(s));

    auto out = ses.extend_verified(s);
    // intensional case: (q4, D1)
    engine::CyclicState via_int = mk_state(a1, {{"q2", d2}, {"q4", d1}});
    CHECK(std::find(out.begin(), out.end(), via_int) != out.end());
    // extensional case: s3 joins every cover, new pair (s3, D1)
    engine::CyclicState via_ext = mk_state(a1, {{"q2", d2}, {"s3", d1}});
    CHECK(std::find(out.begin(), out.end(), via_ext) != out.end());

    // both answers are complete states
    engine::CyclicState done = mk_state(a1, {{"q2", d2}, {"q4", d1}});
    CHECK(ses.is_verified(done));
    CHECK_THROWS_AS(ses.extend_verified(done), StateComplete);
}

TEST_CASE("truncate") {
    Database a1 = load_fixture("a1.dl");
    engine::CyclicState s = mk_state(a1, {{"q2", "q1,q4,~q2,~r1,s3,q3,s2"},
                                          {"q4", "q1,~q4,~s3,r1,q2,q3,s1,s2"}});
    engine::CyclicState t = engine::truncate(s);
    REQUIRE(t.length() == 1);
    CHECK(t.pairs[0].first == *a1.lang.find("q2"));
    engine::CyclicState empty = engine::truncate(t);
    CHECK(empty.length() == 0);
    CHECK_THROWS_AS(engine::truncate(empty), EmptyState);
}

TEST_CASE("minimal answers on the intro database") {
    Database intro = load_fixture("intro.dl");
    auto expected = sorted(std::vector<Bits>{atoms(intro, "d"), atoms(intro, "a,b"),
                                             atoms(intro, "b,c")});
    CHECK(engine_answers(intro, engine::Mode::direct) == expected);
    CHECK(engine_answers(intro, engine::Mode::direct_total) == expected);
}

TEST_CASE("minimal answers on the appendix databases") {
    Database a1 = load_fixture("a1.dl");
    auto direct = engine_answers(a1, engine::Mode::direct);
    auto compiled = engine_answers(a1, engine::Mode::compiled);
    CHECK(direct == compiled);
    CHECK(direct == sorted(oracle::minimal_answers_bf(a1)));
    auto has = [&](const std::vector<Bits>& v, const Bits& b) {
        return std::find(v.begin(), v.end(), b) != v.end();
    };
    CHECK(has(direct, atoms(a1, "q2,q4")));
    CHECK(has(direct, atoms(a1, "q2,s3")));
    for (const Bits& a : direct) {
        CHECK_FALSE(a.test(*a1.lang.find("q1")));
        CHECK_FALSE(a.test(*a1.lang.find("q3")));
    }

    Database a3 = load_fixture("a3.dl");
    auto a3ans = engine_answers(a3, engine::Mode::compiled);
    CHECK(has(a3ans, atoms(a3, "q3,r3,s1")));
    CHECK(a3ans == sorted(oracle::minimal_answers_bf(a3, 16)));
    CHECK(a3ans == engine_answers(a3, engine::Mode::direct));
}

TEST_CASE("query restriction") {
    Database intro = load_fixture("intro.dl");
    engine::Options opts;
    opts.query = atoms(intro, "c,d");
    auto ans = engine_answers(intro, engine::Mode::direct, opts);
    CHECK(ans == std::vector<Bits>{atoms(intro, "d")});

    // oracle view of the same thing: minimal entailed subsets of the query
    auto full = oracle::minimal_answers_bf(intro);
    std::vector<Bits> filtered;
    for (const Bits& a : full)
        if (a.subset_of(*opts.query)) filtered.push_back(a);
    CHECK(ans == sorted(filtered));
}

TEST_CASE("unstratified input needs total covers") {
    Database five = load_fixture("sec9_item5.dl");
    CHECK_THROWS_AS(engine::minimal_answers(five, engine::Mode::direct), NotStratified);
    CHECK_THROWS_AS(engine::minimal_answers(five, engine::Mode::direct_total), Inconsistent);
}

TEST_CASE("limit caps the stream") {
    Database a1 = load_fixture("a1.dl");
    engine::Options opts;
    opts.limit = 1;
    auto res = engine::minimal_answers(a1, engine::Mode::direct, opts);
    CHECK(res.answers.size() == 1);
    CHECK_FALSE(res.exhausted);
}

TEST_CASE("parallel seed fan-out matches the sequential stream") {
    Database a1 = load_fixture("a1.dl");
    engine::Options seq, par;
    par.jobs = 4;
    CHECK(engine::minimal_answers(a1, engine::Mode::direct, seq).answers ==
          engine::minimal_answers(a1, engine::Mode::direct, par).answers);
}

TEST_CASE("engine matches the oracle on random databases") {
    std::mt19937_64 rng(181);
    int checked = 0;
    for (int i = 0; i < 120 && checked < 80; ++i) {
        GenOptions g;
        g.max_atoms = 6;
        g.max_rules = 7;
        Database db = random_db(rng, g);
        if (db.lang.size() > 7) continue;
        bool strat = db.strat.is_stratified;
        std::vector<Bits> expected;
        bool inconsistent = false;
        try {
            expected = sorted(oracle::minimal_answers_bf(db));
        } catch (const Inconsistent&) {
            inconsistent = true;
        }
        engine::Mode mode = strat ? engine::Mode::direct : engine::Mode::direct_total;
        if (inconsistent) {
            CHECK_THROWS_AS(engine::minimal_answers(db, mode), Inconsistent);
            continue;
        }
        ++checked;
        engine::Options opts;
        opts.instrument = true;
        engine::Instrumentation instr;
        auto got = engine::minimal_answers(db, mode, opts, nullptr, &instr).answers;
        CHECK(got == expected);
        // no redundancy: every verified state's atoms sit inside some answer
        for (const Bits& v : instr.verified_atom_sets) {
            bool inside = false;
            for (const Bits& a : got) inside |= v.subset_of(a);
            CHECK(inside);
        }
    }
    CHECK(checked > 30);
}

TEST_CASE("compiled mode matches the oracle on unstratified partitioned databases") {
    std::mt19937_64 rng(241);
    int checked = 0;
    for (int i = 0; i < 200 && checked < 40; ++i) {
        GenOptions g;
        g.partitioned = true;
        g.max_atoms = 6;
        g.max_rules = 7;
        g.want_stratified = false;
        Database db = random_db(rng, g);
        if (db.lang.size() > 8) continue;
        std::vector<Bits> expected;
        bool inconsistent = false;
        try {
            expected = sorted(oracle::minimal_answers_bf(db));
        } catch (const Inconsistent&) {
            inconsistent = true;
        }
        comp::CompiledBase base = comp::compile(db);
        engine::Options opts;
        if (inconsistent) {
            CHECK_THROWS_AS(engine::minimal_answers(db, engine::Mode::compiled, opts, &base),
                            Inconsistent);
            continue;
        }
        ++checked;
        CHECK(engine::minimal_answers(db, engine::Mode::compiled, opts, &base).answers ==
              expected);
    }
    CHECK(checked > 10);
}

TEST_CASE("query mode matches the filtered oracle on random databases") {
    std::mt19937_64 rng(251);
    int checked = 0;
    for (int i = 0; i < 120 && checked < 50; ++i) {
        GenOptions g;
        g.max_atoms = 6;
        g.max_rules = 6;
        Database db = random_db(rng, g);
        if (db.lang.size() > 7) continue;
        std::vector<Bits> full;
        try {
            full = oracle::minimal_answers_bf(db);
        } catch (const Inconsistent&) {
            continue;
        }
        Bits h(db.lang.size());
        for (AtomId a = 0; a < db.lang.size(); ++a)
            if (rng() & 1) h.set(a);
        std::vector<Bits> expected;
        for (const Bits& a : full)
            if (a.subset_of(h)) expected.push_back(a);
        engine::Options opts;
        opts.query = h;
        engine::Mode mode =
            db.strat.is_stratified ? engine::Mode::direct : engine::Mode::direct_total;
        auto got = engine::minimal_answers(db, mode, opts).answers;
        ++checked;
        CHECK(got == sorted(expected));
    }
    CHECK(checked > 20);
}

TEST_CASE("compiled and direct agree on partitioned stratified databases") {
    std::mt19937_64 rng(191);
    int checked = 0;
    for (int i = 0; i < 100 && checked < 40; ++i) {
        GenOptions g;
        g.partitioned = true;
        g.max_atoms = 6;
        g.max_rules = 6;
        g.want_stratified = true;
        Database db = random_db(rng, g);
        if (db.lang.size() > 8) continue;
        ++checked;
        CHECK(engine_answers(db, engine::Mode::direct) ==
              engine_answers(db, engine::Mode::compiled));
    }
    CHECK(checked > 20);
}

TEST_CASE("verified states always extend unless complete") {
    std::mt19937_64 rng(201);
    int checked = 0;
    for (int i = 0; i < 60 && checked < 30; ++i) {
        GenOptions g;
        g.max_atoms = 5;
        g.max_rules = 5;
        g.want_stratified = true;
        Database db = random_db(rng, g);
        if (db.lang.size() > 6) continue;
        engine::Session ses(db, engine::Mode::direct);
        trees::TreeCache cache(db);
        // build singleton states from every seed cover
        for (AtomId a = 0; a < db.lang.size(); ++a) {
            covers::CoverGoal goal;
            goal.seed = LiteralSet(db.lang.size());
            goal.seed.neg.set(a);
            goal.graft = {a};
            goal.check_seed = false;
            for (const LiteralSet& c : covers::collect_extensions(goal, db, cache)) {
                engine::CyclicState s;
                s.pairs.emplace_back(a, c);
                ++checked;
                try {
                    auto out = ses.extend_verified(s);
                    CHECK(!out.empty());
                } catch (const StateComplete&) {
                    // the singleton atom is itself a minimal answer
                    CHECK(oracle::entails(db, s.atoms(db.lang.size())));
                }
            }
        }
    }
    CHECK(checked > 0);
}

TEST_CASE("retirement never reprocesses a state") {
    Database a1 = load_fixture("a1.dl");
    engine::Options opts;
    opts.instrument = true;
    engine::Instrumentation first, second;
    engine::minimal_answers(a1, engine::Mode::direct, opts, nullptr, &first);
    engine::minimal_answers(a1, engine::Mode::direct, opts, nullptr, &second);
    CHECK(first.states_processed > 0);
    // deterministic: the same choice tree, with re-encounters cut, both runs
    CHECK(first.states_processed == second.states_processed);
    CHECK(first.states_retired == second.states_retired);
}
