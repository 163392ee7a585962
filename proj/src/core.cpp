#include "minans/core.hpp"

#include <algorithm>
#include <cassert>
#include <sstream>

namespace minans {

// --- lexer ---------------------------------------------------------------

namespace {

enum class Tok { Atom, Ext, Arrow, Amp, Pipe, Tilde, Comma, Dot, End };

struct Token {
    Tok kind;
    std::string text;
    int line, col;
};

class Lexer {
public:
    explicit Lexer(const std::string& s) : s_(s) {}

    Token next() {
        skip_ws();
        int line = line_, col = col_;
        if (i_ >= s_.size()) return {Tok::End, "", line, col};
        char c = s_[i_];
        if (c == '-' && i_ + 1 < s_.size() && s_[i_ + 1] == '>') {
            advance(2);
            return {Tok::Arrow, "->", line, col};
        }
        switch (c) {
            case '&': advance(1); return {Tok::Amp, "&", line, col};
            case '|': advance(1); return {Tok::Pipe, "|", line, col};
            case '~': advance(1); return {Tok::Tilde, "~", line, col};
            case ',': advance(1); return {Tok::Comma, ",", line, col};
            case '.': advance(1); return {Tok::Dot, ".", line, col};
            case '#': {
                std::size_t j = i_ + 1;
                std::string word;
                while (j < s_.size() && std::isalpha(static_cast<unsigned char>(s_[j])))
                    word += s_[j++];
                if (word != "ext")
                    throw ParseError(line, col, "unknown directive '#" + word + "'");
                advance(j - i_);
                return {Tok::Ext, "#ext", line, col};
            }
            default: break;
        }
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            std::string id;
            while (i_ < s_.size()) {
                char d = s_[i_];
                if (std::isalnum(static_cast<unsigned char>(d)) || d == '_' || d == '\'') {
                    id += d;
                    advance(1);
                } else {
                    break;
                }
            }
            return {Tok::Atom, id, line, col};
        }
        throw ParseError(line, col, std::string("unexpected character '") + c + "'");
    }

private:
    void skip_ws() {
        while (i_ < s_.size()) {
            char c = s_[i_];
            if (c == '%') {
                while (i_ < s_.size() && s_[i_] != '\n') advance(1);
            } else if (std::isspace(static_cast<unsigned char>(c))) {
                advance(1);
            } else {
                break;
            }
        }
    }
    void advance(std::size_t k) {
        for (std::size_t j = 0; j < k; ++j) {
            if (s_[i_] == '\n') {
                ++line_;
                col_ = 1;
            } else {
                ++col_;
            }
            ++i_;
        }
    }

    const std::string& s_;
    std::size_t i_ = 0;
    int line_ = 1, col_ = 1;
};

struct RawLit {
    bool neg;
    std::string atom;
    int line, col;
};

struct RawStatement {
    bool is_decl = false;
    std::vector<RawLit> body; // rule only
    std::vector<RawLit> head; // rule: head atoms; decl: declared atoms
    int line = 0;
};

} // namespace

// --- parser ----------------------------------------------------------------

Database parse_database(const std::string& text, const ParseOptions& opts) {
    Lexer lex(text);
    Token t = lex.next();

    auto expect_atom = [&](const Token& tok) -> RawLit {
        if (tok.kind != Tok::Atom)
            throw ParseError(tok.line, tok.col, "expected atom, got '" + tok.text + "'");
        if (!opts.allow_reserved && is_reserved_name(tok.text))
            throw SemanticError("name '" + tok.text + "' is reserved (line " +
                                std::to_string(tok.line) + ")");
        return {false, tok.text, tok.line, tok.col};
    };

    std::vector<RawStatement> stmts;
    while (t.kind != Tok::End) {
        RawStatement st;
        st.line = t.line;
        if (t.kind == Tok::Ext) {
            st.is_decl = true;
            t = lex.next();
            st.head.push_back(expect_atom(t));
            t = lex.next();
            while (t.kind == Tok::Comma) {
                t = lex.next();
                st.head.push_back(expect_atom(t));
                t = lex.next();
            }
        } else {
            if (t.kind == Tok::Arrow || t.kind == Tok::Dot)
                throw ParseError(t.line, t.col, "empty rule head");
            // First literal list; may turn out to be the body or the head.
            std::vector<RawLit> lits;
            bool saw_tilde = false, saw_amp = false, saw_pipe = false;
            auto read_lit = [&]() {
                bool neg = false;
                if (t.kind == Tok::Tilde) {
                    neg = true;
                    saw_tilde = true;
                    t = lex.next();
                }
                RawLit l = expect_atom(t);
                l.neg = neg;
                lits.push_back(l);
                t = lex.next();
            };
            read_lit();
            while (t.kind == Tok::Amp || t.kind == Tok::Pipe) {
                (t.kind == Tok::Amp ? saw_amp : saw_pipe) = true;
                if (saw_amp && saw_pipe)
                    throw ParseError(t.line, t.col, "cannot mix '&' and '|' in one list");
                t = lex.next();
                read_lit();
            }
            if (t.kind == Tok::Arrow) {
                if (saw_pipe)
                    throw ParseError(t.line, t.col, "'|' not allowed in a rule body");
                st.body = lits;
                t = lex.next();
                if (t.kind == Tok::Dot)
                    throw ParseError(t.line, t.col, "empty rule head");
                // head atoms
                st.head.push_back(expect_atom(t));
                t = lex.next();
                while (t.kind == Tok::Pipe) {
                    t = lex.next();
                    st.head.push_back(expect_atom(t));
                    t = lex.next();
                }
            } else {
                if (saw_amp)
                    throw ParseError(t.line, t.col, "'&' not allowed in a rule head");
                if (saw_tilde)
                    throw ParseError(st.line, 1, "'~' not allowed in a rule head");
                st.head = lits;
            }
        }
        if (t.kind != Tok::Dot)
            throw ParseError(t.line, t.col, "expected '.', got '" + t.text + "'");
        t = lex.next();
        stmts.push_back(std::move(st));
    }

    // Intern atoms in first-occurrence order, then materialize rules.
    Database db;
    std::vector<std::string> ext_names;
    for (const auto& st : stmts) {
        for (const auto& l : st.body) db.lang.intern(l.atom);
        for (const auto& l : st.head) db.lang.intern(l.atom);
        if (st.is_decl) {
            db.lang.partitioned = true;
            for (const auto& l : st.head) ext_names.push_back(l.atom);
        }
    }
    std::size_t n = db.lang.size();
    db.lang.ext = Bits(n);
    for (const auto& name : ext_names) db.lang.ext.set(*db.lang.find(name));

    for (const auto& st : stmts) {
        if (st.is_decl) continue;
        Rule r;
        r.antec = Bits(n);
        r.negbody = Bits(n);
        r.conseq = Bits(n);
        r.line = st.line;
        for (const auto& l : st.body)
            (l.neg ? r.negbody : r.antec).set(*db.lang.find(l.atom));
        for (const auto& l : st.head) r.conseq.set(*db.lang.find(l.atom));
        if (r.conseq.none()) throw SemanticError("empty rule head");
        db.rules.push_back(std::move(r));
    }

    normalize_database(db);
    db.finalize();
    return db;
}

void normalize_database(Database& db) {
    std::size_t n = db.lang.size();
    if (db.lang.partitioned) {
        const Bits& ext = db.lang.ext;
        for (const Rule& r : db.rules) {
            bool head_ext = r.conseq.intersects(ext);
            bool head_int = !r.conseq.subset_of(ext);
            if (head_ext && head_int)
                throw SemanticError("rule head mixes extensional and intensional atoms (line " +
                                    std::to_string(r.line) + ")");
            if (head_ext && !r.body_free())
                throw SemanticError("extensional rule must have an empty body (line " +
                                    std::to_string(r.line) + ")");
        }
    }

    auto needs_marker = [&](const Rule& r) {
        if (!r.antec.none()) return false;
        if (!r.negbody.none()) return true;
        return db.lang.partitioned && !r.conseq.intersects(db.lang.ext);
    };
    bool need = std::any_of(db.rules.begin(), db.rules.end(), needs_marker);
    if (!need || db.lang.aux) return;

    AtomId aux = db.lang.intern("__t");
    db.lang.aux = aux;
    std::size_t m = db.lang.size();
    db.lang.ext = db.lang.ext.resized(m);
    if (db.lang.partitioned) db.lang.ext.set(aux);
    for (Rule& r : db.rules) {
        bool mark = needs_marker(r);
        r.antec = r.antec.resized(m);
        r.negbody = r.negbody.resized(m);
        r.conseq = r.conseq.resized(m);
        if (mark) r.antec.set(aux);
    }
    Rule fact;
    fact.antec = Bits(m);
    fact.negbody = Bits(m);
    fact.conseq = Bits(m);
    fact.conseq.set(aux);
    db.rules.push_back(std::move(fact));
    (void)n;
}

// --- printing ----------------------------------------------------------

namespace {

std::string rule_text(const Rule& r, const Language& lang, std::optional<AtomId> skip) {
    std::ostringstream os;
    bool first = true;
    AtomId n = static_cast<AtomId>(lang.size());
    for (AtomId a = 0; a < n; ++a) {
        if (skip && *skip == a) continue;
        bool in_antec = r.antec.test(a), in_neg = r.negbody.test(a);
        if (!in_antec && !in_neg) continue;
        if (in_antec) {
            os << (first ? "" : " & ") << lang.name(a);
            first = false;
        }
        if (in_neg) {
            os << (first ? "~" : " & ~") << lang.name(a);
            first = false;
        }
    }
    if (!first) os << " -> ";
    bool firsth = true;
    r.conseq.for_each([&](AtomId a) {
        os << (firsth ? "" : " | ") << lang.name(a);
        firsth = false;
    });
    os << ".";
    return os.str();
}

} // namespace

std::string print_database(const Database& db) {
    const Language& lang = db.lang;
    std::size_t n = lang.size();
    std::optional<AtomId> aux = lang.aux;

    // Which rule is the marker fact introduced by normalization?
    std::size_t aux_fact = db.rules.size();
    if (aux) {
        Bits only_aux(n);
        only_aux.set(*aux);
        for (std::size_t i = 0; i < db.rules.size(); ++i)
            if (db.rules[i].body_free() && db.rules[i].conseq == only_aux) {
                aux_fact = i;
                break;
            }
    }

    // Statements must realize atom ids in increasing order on re-parse: a
    // declaration realizes one extensional atom, a rule realizes its new
    // atoms as one consecutive block.
    std::ostringstream os;
    std::size_t pos = 0; // atoms realized so far, in id order
    Bits declared(n);
    auto emit_decl = [&]() {
        if (aux && *aux == pos) {
            ++pos;
            return;
        }
        if (!lang.partitioned || !lang.ext.test(static_cast<AtomId>(pos)))
            throw FormatError("atom order not expressible in the text format: " +
                              lang.name(static_cast<AtomId>(pos)));
        os << "#ext " << lang.name(static_cast<AtomId>(pos)) << ".\n";
        declared.set(static_cast<AtomId>(pos));
        ++pos;
    };

    for (std::size_t i = 0; i < db.rules.size(); ++i) {
        if (i == aux_fact) continue;
        const Rule& r = db.rules[i];
        Bits fresh = r.atoms();
        if (aux) fresh.reset(*aux);
        while (true) {
            std::vector<AtomId> s;
            fresh.for_each([&](AtomId a) {
                if (a >= pos) s.push_back(a);
            });
            if (s.empty()) break;
            bool consecutive = true;
            for (std::size_t k = 0; k < s.size(); ++k) consecutive &= (s[k] == pos + k);
            if (consecutive) {
                pos += s.size();
                break;
            }
            emit_decl(); // peel one declarable atom off the front and retry
        }
        os << rule_text(r, lang, aux) << "\n";
    }
    while (pos < n) emit_decl();
    // extensional atoms realized by rules still need their declaration
    if (lang.partitioned) {
        Bits missing = lang.ext - declared;
        if (aux) missing.reset(*aux);
        missing.for_each([&](AtomId a) { os << "#ext " << lang.name(a) << ".\n"; });
    }
    return os.str();
}

std::string print_rules(const Database& db) {
    std::ostringstream os;
    for (const Rule& r : db.rules) os << rule_text(r, db.lang, std::nullopt) << "\n";
    return os.str();
}

LiteralSet parse_literals(const std::string& text, const Language& lang) {
    LiteralSet ls(lang.size());
    std::size_t i = 0;
    auto skip = [&] { while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i; };
    while (true) {
        skip();
        if (i >= text.size()) break;
        bool neg = false;
        if (text[i] == '~' || text[i] == '-') {
            neg = true;
            ++i;
        } else if (text[i] == '+') {
            ++i;
        }
        skip();
        std::string name;
        while (i < text.size() && (std::isalnum(static_cast<unsigned char>(text[i])) ||
                                   text[i] == '_' || text[i] == '\''))
            name += text[i++];
        auto id = lang.find(name);
        if (!id) throw SemanticError("unknown atom '" + name + "'");
        (neg ? ls.neg : ls.pos).set(*id);
        skip();
        if (i < text.size()) {
            if (text[i] != ',') throw SemanticError("expected ',' in literal list");
            ++i;
        }
    }
    if (!ls.consistent()) throw SemanticError("inconsistent literal list");
    return ls;
}

std::string to_string(const LiteralSet& ls, const Language& lang) {
    std::ostringstream os;
    bool first = true;
    AtomId n = static_cast<AtomId>(lang.size());
    for (AtomId a = 0; a < n; ++a) {
        if (ls.pos.test(a)) {
            os << (first ? "+" : " +") << lang.name(a);
            first = false;
        } else if (ls.neg.test(a)) {
            os << (first ? "-" : " -") << lang.name(a);
            first = false;
        }
    }
    return os.str();
}

std::string to_string(const Bits& atoms, const Language& lang) {
    std::ostringstream os;
    bool first = true;
    atoms.for_each([&](AtomId a) {
        os << (first ? "" : " ") << lang.name(a);
        first = false;
    });
    return os.str();
}

// --- elementary transformations -----------------------------------------

Rule pos_of(const Rule& r) {
    Rule p = r;
    p.negbody = Bits(p.negbody.universe());
    return p;
}

Database gl_reduct(const Database& db, const Bits& n) {
    Database out;
    out.lang = db.lang;
    for (const Rule& r : db.rules)
        if (!r.negbody.intersects(n)) out.rules.push_back(pos_of(r));
    out.finalize();
    return out;
}

Database restrict_db(const Database& db, const LiteralSet& c) {
    Bits valued = c.valued();
    Database out;
    out.lang = db.lang;
    for (const Rule& r : db.rules)
        if (r.atoms().subset_of(valued)) out.rules.push_back(r);
    out.finalize();
    return out;
}

Database reduce_db(const Database& db, const LiteralSet& d) {
    for (const Rule& r : db.rules) {
        if (r.conseq.subset_of(d.pos) && !r.antec.intersects(d.pos) &&
            !r.negbody.intersects(d.neg))
            throw NotStrongCover("literal set is not a strong cover");
    }
    Database out;
    out.lang = db.lang;
    for (const Rule& r : db.rules) {
        if (r.conseq.intersects(d.neg) || r.antec.intersects(d.pos) ||
            r.negbody.intersects(d.neg))
            continue; // rule became true
        Rule s;
        s.conseq = r.conseq - d.pos;
        s.antec = r.antec - d.neg;
        s.negbody = r.negbody - d.pos;
        s.line = r.line;
        out.rules.push_back(std::move(s));
    }
    out.finalize();
    return out;
}

bool satisfies(const Bits& m, const Rule& r) {
    if (!r.antec.subset_of(m) || r.negbody.intersects(m)) return true;
    return r.conseq.intersects(m);
}

bool is_model(const Bits& m, const Database& db) {
    for (const Rule& r : db.rules)
        if (!satisfies(m, r)) return false;
    return true;
}

// --- stratification -------------------------------------------------------

namespace {

struct Edge {
    AtomId from, to;
    std::uint32_t w; // 0: level(from) <= level(to); 1: strict
};

// Iterative Tarjan SCC; returns component index per node.
std::vector<int> scc_of(std::size_t n, const std::vector<std::vector<AtomId>>& adj, int& count) {
    std::vector<int> index(n, -1), low(n, 0), comp(n, -1);
    std::vector<bool> on_stack(n, false);
    std::vector<AtomId> stack;
    int next_index = 0;
    count = 0;

    struct Frame {
        AtomId v;
        std::size_t child;
    };
    for (AtomId root = 0; root < n; ++root) {
        if (index[root] != -1) continue;
        std::vector<Frame> frames{{root, 0}};
        index[root] = low[root] = next_index++;
        stack.push_back(root);
        on_stack[root] = true;
        while (!frames.empty()) {
            Frame& f = frames.back();
            if (f.child < adj[f.v].size()) {
                AtomId w = adj[f.v][f.child++];
                if (index[w] == -1) {
                    index[w] = low[w] = next_index++;
                    stack.push_back(w);
                    on_stack[w] = true;
                    frames.push_back({w, 0});
                } else if (on_stack[w]) {
                    low[f.v] = std::min(low[f.v], index[w]);
                }
            } else {
                if (low[f.v] == index[f.v]) {
                    while (true) {
                        AtomId w = stack.back();
                        stack.pop_back();
                        on_stack[w] = false;
                        comp[w] = count;
                        if (w == f.v) break;
                    }
                    ++count;
                }
                AtomId v = f.v;
                frames.pop_back();
                if (!frames.empty()) low[frames.back().v] = std::min(low[frames.back().v], low[v]);
            }
        }
    }
    return comp;
}

} // namespace

StratificationInfo stratify(const Database& db) {
    std::size_t n = db.lang.size();
    StratificationInfo info;
    info.level.assign(n, 0);

    std::vector<Edge> edges;
    std::vector<std::vector<AtomId>> adj(n);
    auto add = [&](AtomId a, AtomId b, std::uint32_t w) {
        edges.push_back({a, b, w});
        adj[a].push_back(b);
    };
    for (const Rule& r : db.rules) {
        std::vector<AtomId> head = r.conseq.to_vector();
        for (std::size_t i = 0; i + 1 < head.size(); ++i) {
            add(head[i], head[i + 1], 0);
            add(head[i + 1], head[i], 0);
        }
        AtomId h0 = head.front();
        r.antec.for_each([&](AtomId a) { add(a, h0, 0); });
        r.negbody.for_each([&](AtomId a) { add(a, h0, 1); });
    }

    int ncomp = 0;
    std::vector<int> comp = scc_of(n, adj, ncomp);
    for (const Edge& e : edges)
        if (e.w == 1 && comp[e.from] == comp[e.to]) {
            info.is_stratified = false;
            return info;
        }

    // Longest strict-edge path over the condensation; minimal valid levels.
    std::vector<std::uint32_t> clevel(ncomp, 0);
    for (int pass = 0; pass <= ncomp; ++pass) {
        bool changed = false;
        for (const Edge& e : edges) {
            std::uint32_t want = clevel[comp[e.from]] + e.w;
            if (clevel[comp[e.to]] < want) {
                clevel[comp[e.to]] = want;
                changed = true;
            }
        }
        if (!changed) break;
    }
    for (AtomId a = 0; a < n; ++a) info.level[a] = clevel[comp[a]];
    info.is_stratified = true;
    return info;
}

void Database::finalize() { strat = stratify(*this); }

} // namespace minans
