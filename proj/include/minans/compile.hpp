#pragma once

#include <string>
#include <unordered_map>
#include <vector>

#include "minans/core.hpp"
#include "minans/covers.hpp"

namespace minans::comp {

// Pre-processed intension: a generating antichain of int-total weakly cyclic
// covers, valid for any extensional database over the same language.
struct CompiledBase {
    Language lang;                  // snapshot of the language and partition
    std::vector<LiteralSet> covers; // canonical order, subset-minimal
    std::string int_fingerprint;    // hex digest of the intension + language
};

// True iff some extensional rule's head is contained in f.
bool ext_entails(const Database& extdb, const Bits& f);

// The body-free / intensional rule views, sharing the language.
Database ext_part(const Database& db);
Database int_part(const Database& db);

std::string int_fingerprint(const Database& db);

CompiledBase compile(const Database& db);

// Streams completions of cover c: for every negated extensional atom a
// choice of a disjunction through it, its remaining atoms added positively.
// Empty stream when some negated extensional atom has no eligible rule.
bool completions(const LiteralSet& c, const Database& extdb, const covers::CoverVisitor& visit);

void save_compiled(const CompiledBase& base, const std::string& path);
CompiledBase load_compiled(const std::string& path);
bool is_stale(const CompiledBase& base, const Database& db);

// Run-time cover queries against the compiled intension; memoized.
class QuerySession {
public:
    // Throws StaleCompilation when base does not match db's intension.
    QuerySession(const CompiledBase& base, const Database& db);

    // Every emitted set is an int-total cyclic strong cover of q, and every
    // int-total cyclic strong cover of q contains an emitted one.
    const std::vector<LiteralSet>& comp_query(const LiteralSet& q);

    const Database& ext_view() const { return ext_; }

private:
    const CompiledBase* base_;
    const Database* db_;
    Database ext_;
    std::unordered_map<LiteralSet, std::vector<LiteralSet>, LiteralSetHash> cache_;
};

} // namespace minans::comp
