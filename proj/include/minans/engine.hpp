#pragma once

#include <optional>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "minans/compile.hpp"
#include "minans/core.hpp"
#include "minans/covers.hpp"

namespace minans::engine {

enum class Mode {
    direct,       // stratified databases, plain covers
    direct_total, // any database, total covers
    compiled,     // partitioned databases, int-total covers via COMP
};

// Partial-answer witness: atoms paired with covers justifying membership.
struct CyclicState {
    std::vector<std::pair<AtomId, LiteralSet>> pairs;

    std::size_t length() const { return pairs.size(); }
    Bits atoms(std::size_t n) const;
    Bits pos_intersection(std::size_t n) const; // over the covers
    Bits neg_union(std::size_t n) const;

    bool operator==(const CyclicState& o) const { return pairs == o.pairs; }
    std::size_t hash() const;
};

struct CyclicStateHash {
    std::size_t operator()(const CyclicState& s) const { return s.hash(); }
};

CyclicState truncate(const CyclicState& s); // throws EmptyState at length 0

struct AnswerStream {
    std::vector<Bits> answers; // canonical order, deduplicated
    bool exhausted = true;     // false when a limit stopped the enumeration
};

struct Instrumentation {
    std::vector<Bits> verified_atom_sets;
    std::size_t states_processed = 0;
    std::size_t states_retired = 0; // re-encounters skipped by retirement
};

struct Options {
    std::optional<Bits> query;              // restrict answers to this atom set
    std::size_t limit = static_cast<std::size_t>(-1);
    bool instrument = false;
    unsigned jobs = 1;
};

class Session {
public:
    // Direct modes; throws NotStratified for Mode::direct on an
    // unstratified database.
    Session(const Database& db, Mode mode);
    // Compiled mode; throws StaleCompilation on a fingerprint mismatch.
    Session(const Database& db, const comp::CompiledBase& base);

    bool is_verified(const CyclicState& s);
    // Same-length proper extensions; throws StateVerified when s is verified.
    std::vector<CyclicState> extend_unverified(const CyclicState& s);
    // Length r+1 extensions; throws StateComplete when the state's atoms
    // admit no qualifying cover (the atoms form a minimal answer).
    std::vector<CyclicState> extend_verified(const CyclicState& s);

    AnswerStream minimal_answers(const Options& opts = {});

    const Instrumentation& instrumentation() const { return instr_; }
    void set_query(std::optional<Bits> q) { query_ = std::move(q); }

    const Database& db() const { return *db_; }
    Mode mode() const { return mode_; }

private:
    friend struct Driver;
    friend AnswerStream minimal_answers(const Database&, Mode, const Options&,
                                        const comp::CompiledBase*, Instrumentation*);

    const std::vector<LiteralSet>& covers_of(const LiteralSet& seed,
                                             const std::vector<AtomId>& graft);
    const std::vector<LiteralSet>& witness_covers(const CyclicState& s);
    Bits candidate_atoms(const LiteralSet& base_cover, const CyclicState& s) const;
    std::vector<AtomId> ordered_candidates(const Bits& cand, const CyclicState& s) const;
    void extend_verified_into(const CyclicState& s, std::vector<CyclicState>& out,
                              bool* complete);
    void extend_unverified_into(const CyclicState& s, std::vector<CyclicState>& out);
    void consistency_gate();
    void stash(const std::vector<LiteralSet>& covers);

    const Database* db_;
    Mode mode_;
    const comp::CompiledBase* base_ = nullptr;
    std::optional<comp::QuerySession> comp_;
    Database ext_;
    trees::TreeCache cache_;
    std::optional<Bits> query_;

    struct Key {
        LiteralSet seed;
        std::vector<AtomId> graft;
        bool operator==(const Key& o) const { return seed == o.seed && graft == o.graft; }
    };
    struct KeyHash {
        std::size_t operator()(const Key& k) const {
            std::size_t h = k.seed.hash();
            for (AtomId a : k.graft) h = h * 31 + a;
            return h;
        }
    };
    std::unordered_map<Key, std::vector<LiteralSet>, KeyHash> cover_memo_;
    std::vector<LiteralSet> pool_; // covers salvaged from failed extensions
    Instrumentation instr_;
};

// Enumerates every minimal answer (restricted to subsets of opts.query when
// given). Throws Inconsistent when the database has no stable model and
// NotStratified when Mode::direct is asked of an unstratified database.
AnswerStream minimal_answers(const Database& db, Mode mode, const Options& opts = {},
                             const comp::CompiledBase* base = nullptr,
                             Instrumentation* instr_out = nullptr);

// Stable models via total covers.
std::vector<Bits> stable_models_via_covers(const Database& db);

} // namespace minans::engine
