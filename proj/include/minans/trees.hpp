#pragma once

#include <functional>
#include <memory>
#include <unordered_map>
#include <vector>

#include "minans/core.hpp"

namespace minans::trees {

// Summary of one cyclic tree: the predicates forced in (pred), the head
// atoms forced out (out) and the negated body atoms (negs).
struct TreeSummary {
    Bits pred, out, negs;

    // neg side lists pred, pos side lists out and negs
    LiteralSet s() const { return LiteralSet(out | negs, pred); }
};

// Full node structure, materialized only on request (debug / inspection).
struct TreeNode {
    bool is_rule = false;
    AtomId label = 0;       // predicate nodes
    std::size_t rule = 0;   // rule nodes: index into Database::rules
    Bits cyc;               // predicate nodes: cycle above, incl. own label
    Bits out;               // rule nodes: head atoms outside the cycle
    std::vector<TreeNode> children;
};

struct EnumOptions {
    // Skip trees whose summary is inconsistent with this literal set.
    const LiteralSet* consistent_with = nullptr;
    // Emit only trees whose summary is contained in this literal set.
    const LiteralSet* within = nullptr;
    bool keep_nodes = false;
};

// Return false from the visitor to stop the enumeration.
using TreeVisitor = std::function<bool(const TreeSummary&, const TreeNode*)>;

// Hard guard on branch length during construction.
std::size_t tree_count_bound(const Language& lang);

// Enumerates the cyclic trees for p, deduplicated by summary. Exhaustive:
// every cyclic tree for p in db has its summary emitted (modulo options).
bool enumerate(AtomId p, const Database& db, const EnumOptions& opts, const TreeVisitor& visit);

// Spec surface: trees inconsistent with `forbid` are skipped.
bool cyclic_trees(AtomId p, const Database& db, const LiteralSet& forbid,
                  const TreeVisitor& visit);

// Intensional rules plus one unit fact per extensional atom; trees built in
// this view are exactly the partial trees of the partitioned database.
Database with_ext_unit_facts(const Database& db);

// Partial trees: built within the intensional rules, leaves at extensional
// atoms. Requires a partitioned database and an intensional p.
bool partial_cyclic_trees(AtomId p, const Database& db, const TreeVisitor& visit);

std::vector<TreeSummary> collect(AtomId p, const Database& db, const EnumOptions& opts = {});

// Lazily computed full family per atom, shared across a search session.
class TreeCache {
public:
    explicit TreeCache(const Database& db) : db_(&db) {}

    const std::vector<TreeSummary>& family(AtomId p);
    const Database& db() const { return *db_; }

private:
    const Database* db_;
    std::unordered_map<AtomId, std::vector<TreeSummary>> fam_;
};

} // namespace minans::trees
