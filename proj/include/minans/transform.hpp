#pragma once

#include <vector>

#include "minans/core.hpp"

namespace minans::transform {

// Positive reformulation of a database over an extended language: one fresh
// atom per (deduplicated) tree, a goal atom, and a definite closure theory
// that makes minimal models of the result mirror the stable models of the
// source.
struct TransformResult {
    Database tstar;  // positive database over the extended language
    Database tprime; // the definite sub-theory (single-atom heads)
    // per source atom: the fresh atoms of its trees, in canonical tree order
    std::vector<std::vector<AtomId>> tree_atoms;
    // per source atom: the same set as a mask over the extended language
    std::vector<Bits> phi;
    AtomId false_atom = 0;
    std::size_t source_atoms = 0;

    Bits source_mask() const {
        Bits b(tstar.lang.size());
        for (AtomId a = 0; a < source_atoms; ++a) b.set(a);
        return b;
    }
};

// Throws TrivialDatabase when the source has no body-free rule (its unique
// stable model is empty and there is nothing to answer).
TransformResult to_positive(const Database& db);

// Least model of the definite theory containing n.
Bits definite_closure(const Bits& n, const Database& tprime);

// Minimal answers of db computed inside the transformed positive database,
// using plain strong covers only. Throws Inconsistent when db has no stable
// model.
std::vector<Bits> answers_via_transform(const Database& db);

} // namespace minans::transform
