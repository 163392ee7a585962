#pragma once

#include <vector>

#include "minans/core.hpp"

namespace minans::oracle {

// Exhaustive reference semantics. Exponential in |L|; guarded by `bound`.
// Intended for small instances and cross-checking the main pipeline.

inline constexpr std::size_t kDefaultBound = 20;

struct ModelSet {
    std::vector<Bits> models; // canonical order, no duplicates
};

ModelSet models(const Database& db, std::size_t bound = kDefaultBound);
ModelSet minimal_models(const Database& db, std::size_t bound = kDefaultBound);
ModelSet stable_models(const Database& db, std::size_t bound = kDefaultBound);
ModelSet perfect_models(const Database& db, std::size_t bound = kDefaultBound);

bool is_stable_model(const Bits& m, const Database& db);

// True iff every stable model meets `a` (vacuously true with no stable model).
bool entails(const Database& db, const Bits& a, std::size_t bound = kDefaultBound);

// Disjunction of literals: satisfied by m when some positive literal is in m
// or some negated atom is absent from m.
bool entails_clause(const Database& db, const LiteralSet& q,
                    std::size_t bound = kDefaultBound);

// All subset-minimal entailed atom sets. Throws Inconsistent when the
// database has no stable model.
std::vector<Bits> minimal_answers_bf(const Database& db, std::size_t bound = kDefaultBound);

// Reference cyclicness test: c is cyclic iff c.neg is a stable model of the
// sub-database of rules valued by c and satisfied by c.neg.
bool is_cyclic_bf(const LiteralSet& c, const Database& db, std::size_t bound = kDefaultBound);

} // namespace minans::oracle
