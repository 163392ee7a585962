#pragma once

#include <functional>
#include <vector>

#include "minans/core.hpp"
#include "minans/trees.hpp"

namespace minans::covers {

enum class CoverMode {
    plain,     // strong covers as-is
    total,     // every atom must end up valued
    int_total, // every intensional atom must end up valued
};

struct CoverGoal {
    LiteralSet seed;
    CoverMode mode = CoverMode::plain;
    // Atoms of seed.neg whose justification is built by grafting a tree
    // during the search; the rest of the seed is assumed cyclic.
    std::vector<AtomId> graft;
    bool minimal_only = false;
    // Verify the assumed-cyclic part of the seed up front (NotCyclicSeed).
    bool check_seed = true;
};

// Return false to stop the stream.
using CoverVisitor = std::function<bool(const LiteralSet&)>;

bool is_strong_cover(const LiteralSet& c, const Database& db);

// True iff every negated atom of c is justified by some tree inside c.
bool is_cyclic(const LiteralSet& c, const Database& db);
bool is_cyclic(const LiteralSet& c, trees::TreeCache& cache);

// Streams cyclic strong covers extending the seed. Exhaustive in the
// containment sense: every cyclic strong cover of the seed contains some
// emitted cover. In total / int_total mode every emitted cover is total /
// int-total. Returns false when the visitor stopped the stream.
bool constructible_extensions(const CoverGoal& goal, const Database& db,
                              trees::TreeCache& cache, const CoverVisitor& visit);

std::vector<LiteralSet> collect_extensions(const CoverGoal& goal, const Database& db,
                                           trees::TreeCache& cache,
                                           std::size_t limit = static_cast<std::size_t>(-1));

// True iff some total cyclic strong cover of q exists. Decided by the
// cheapest sound route: plain-mode emptiness on stratified databases,
// int-total emptiness on partitioned ones, full total search otherwise.
bool has_total_cover(const LiteralSet& q, const Database& db, trees::TreeCache& cache);

// Covers of {k} ∪ d computed inside the reduced database: each emitted set
// is d joined with a cover of {k} in the reduction of db by d.
bool extend_over_reduct(AtomId k_atom, bool k_negated, const LiteralSet& d,
                        const Database& db, const CoverVisitor& visit);

// Internal search core, reused by the compilation pass: rule violations are
// checked against `rules_db` while tree grafts come from `cache` (which may
// be bound to a different view of the database).
struct SearchSpec {
    const Database* rules_db;
    trees::TreeCache* cache;
    Bits denial_scope; // atoms forced to be valued; empty for plain mode
    bool minimal_only = false;
};

bool search_covers(const SearchSpec& spec, const LiteralSet& seed,
                   const std::vector<AtomId>& graft, const CoverVisitor& visit);

} // namespace minans::covers
