#pragma once

#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "minans/bits.hpp"
#include "minans/errors.hpp"

namespace minans {

// Names beginning "__" are reserved for machinery (the truth-marker atom
// "__t" introduced by normalization and the goal atom "__false").
inline bool is_reserved_name(const std::string& s) {
    return s.size() >= 2 && s[0] == '_' && s[1] == '_';
}

class Language {
public:
    AtomId intern(const std::string& name) {
        auto it = index_.find(name);
        if (it != index_.end()) return it->second;
        AtomId id = static_cast<AtomId>(names_.size());
        names_.push_back(name);
        index_.emplace(name, id);
        return id;
    }
    std::optional<AtomId> find(const std::string& name) const {
        auto it = index_.find(name);
        if (it == index_.end()) return std::nullopt;
        return it->second;
    }
    const std::string& name(AtomId a) const { return names_[a]; }
    std::size_t size() const { return names_.size(); }

    Bits empty_set() const { return Bits(size()); }
    Bits full_set() const { return Bits(size()).complement(); }

    bool partitioned = false;      // true once a #ext declaration is seen
    Bits ext;                      // EXT(L); meaningful when partitioned
    std::optional<AtomId> aux;     // the "__t" truth marker, when present
    std::optional<AtomId> false_atom; // goal marker in transformed databases

    Bits ext_mask() const { return partitioned ? ext : empty_set(); }
    Bits int_mask() const { return partitioned ? ext.complement() : full_set(); }
    bool is_ext(AtomId a) const { return partitioned && ext.test(a); }

    bool same_atoms(const Language& o) const {
        return names_ == o.names_ && partitioned == o.partitioned &&
               (!partitioned || ext == o.ext);
    }

    const std::vector<std::string>& names() const { return names_; }

private:
    std::vector<std::string> names_;
    std::unordered_map<std::string, AtomId> index_;
};

// Consistent set of signed atoms: pos and neg never intersect.
struct LiteralSet {
    Bits pos, neg;

    LiteralSet() = default;
    explicit LiteralSet(std::size_t n) : pos(n), neg(n) {}
    LiteralSet(Bits p, Bits ng) : pos(std::move(p)), neg(std::move(ng)) {}

    bool consistent() const { return !pos.intersects(neg); }
    bool consistent_with(const LiteralSet& o) const {
        return !pos.intersects(o.neg) && !neg.intersects(o.pos);
    }
    bool total_over(const Bits& scope) const { return scope.subset_of(pos | neg); }
    bool contains(const LiteralSet& o) const {
        return o.pos.subset_of(pos) && o.neg.subset_of(neg);
    }
    Bits valued() const { return pos | neg; }
    bool empty() const { return pos.none() && neg.none(); }

    LiteralSet& operator|=(const LiteralSet& o) {
        pos |= o.pos;
        neg |= o.neg;
        return *this;
    }
    friend LiteralSet operator|(LiteralSet a, const LiteralSet& b) { return a |= b; }

    // Literals of *this whose atoms are not valued by o.
    LiteralSet minus(const LiteralSet& o) const {
        LiteralSet r = *this;
        Bits v = o.valued();
        r.pos -= v;
        r.neg -= v;
        return r;
    }
    LiteralSet restricted_to(const Bits& atoms) const {
        return LiteralSet(pos & atoms, neg & atoms);
    }
    // Sign flip.
    LiteralSet bar() const { return LiteralSet(neg, pos); }

    bool operator==(const LiteralSet& o) const { return pos == o.pos && neg == o.neg; }
    bool operator!=(const LiteralSet& o) const { return !(*this == o); }

    // Canonical order: by atom id, sign-aware (positive before negative).
    int compare(const LiteralSet& o) const {
        AtomId n = static_cast<AtomId>(pos.universe());
        for (AtomId a = 0; a < n; ++a) {
            int x = pos.test(a) ? 1 : neg.test(a) ? 2 : 0;
            int y = o.pos.test(a) ? 1 : o.neg.test(a) ? 2 : 0;
            if (x != y) {
                // absent sorts after present so that prefixes come first
                if (x == 0) return 1;
                if (y == 0) return -1;
                return x < y ? -1 : 1;
            }
        }
        return 0;
    }

    std::size_t hash() const { return pos.hash() * 1315423911u ^ neg.hash(); }
};

struct LiteralSetHash {
    std::size_t operator()(const LiteralSet& s) const { return s.hash(); }
};

struct Rule {
    Bits antec;   // positive body
    Bits negbody; // negated body atoms
    Bits conseq;  // head, nonempty
    int line = 0; // source line for diagnostics; ignored by equality

    bool positive() const { return negbody.none(); }
    bool body_free() const { return antec.none() && negbody.none(); }
    Bits atoms() const { return antec | negbody | conseq; }

    bool operator==(const Rule& o) const {
        return antec == o.antec && negbody == o.negbody && conseq == o.conseq;
    }
};

struct StratificationInfo {
    std::vector<std::uint32_t> level;
    bool is_stratified = false;
};

struct Database {
    Language lang;
    std::vector<Rule> rules;
    StratificationInfo strat; // computed eagerly by finalize()

    std::size_t num_atoms() const { return lang.size(); }
    void finalize();

    bool operator==(const Database& o) const {
        return lang.same_atoms(o.lang) && rules == o.rules && lang.aux == o.lang.aux;
    }
};

// --- parsing / printing ------------------------------------------------

struct ParseOptions {
    bool allow_reserved = false; // accept "__" names (machine-emitted files)
};

Database parse_database(const std::string& text, const ParseOptions& opts = {});
std::string print_database(const Database& db);

// Display form: one rule per line, no attempt to reproduce atom ids.
std::string print_rules(const Database& db);

// Shape checks plus the body-normalization pass (adds the "__t" marker where
// a rule would otherwise have a negative body with no positive part, or, in
// partitioned mode, an intensional head with an empty body).
void normalize_database(Database& db);

// Parses one literal set written as comma-separated literals ("a,~b,c").
LiteralSet parse_literals(const std::string& text, const Language& lang);

std::string to_string(const LiteralSet& ls, const Language& lang);
std::string to_string(const Bits& atoms, const Language& lang);

// --- elementary transformations ----------------------------------------

// Drops the negative body.
Rule pos_of(const Rule& r);

// Gelfond-Lifschitz reduct with respect to the atom set n.
Database gl_reduct(const Database& db, const Bits& n);

// Rules all of whose atoms are valued by c.
Database restrict_db(const Database& db, const LiteralSet& c);

// Evaluates the literals of a strong cover d out of the database: heads lose
// d-positive atoms, positive bodies lose d-negative atoms, negative bodies
// lose d-positive atoms; rules made true vanish. Throws NotStrongCover when
// d is not a strong cover in db.
Database reduce_db(const Database& db, const LiteralSet& d);

bool is_model(const Bits& m, const Database& db);
bool satisfies(const Bits& m, const Rule& r);

StratificationInfo stratify(const Database& db);

} // namespace minans
