#pragma once

#include <algorithm>
#include <array>
#include <fstream>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "minans/core.hpp"

namespace testutil {

using namespace minans;

inline std::string fixture_path(const std::string& name) {
    return std::string(FIXTURE_DIR) + "/" + name;
}

inline Database load_fixture(const std::string& name) {
    std::ifstream in(fixture_path(name), std::ios::binary);
    if (!in) throw std::runtime_error("missing fixture " + name);
    std::ostringstream os;
    os << in.rdbuf();
    return parse_database(os.str());
}

inline LiteralSet lits(const Database& db, const std::string& s) {
    return parse_literals(s, db.lang);
}

inline Bits atoms(const Database& db, const std::string& s) {
    return parse_literals(s, db.lang).pos;
}

inline std::vector<Bits> sorted(std::vector<Bits> v) {
    std::sort(v.begin(), v.end(), [](const Bits& a, const Bits& b) { return a.compare(b) < 0; });
    v.erase(std::unique(v.begin(), v.end()), v.end());
    return v;
}

inline std::vector<LiteralSet> sorted(std::vector<LiteralSet> v) {
    std::sort(v.begin(), v.end(),
              [](const LiteralSet& a, const LiteralSet& b) { return a.compare(b) < 0; });
    v.erase(std::unique(v.begin(), v.end()), v.end());
    return v;
}

// Builds a database directly, bypassing parse-time normalization. Each rule
// is (antec, negbody, head) as comma-separated atom names; atoms are
// interned in the order given.
inline Database build_db(const std::vector<std::string>& names,
                         const std::vector<std::array<std::string, 3>>& rules) {
    Database db;
    for (const auto& s : names) db.lang.intern(s);
    std::size_t n = db.lang.size();
    db.lang.ext = Bits(n);
    auto set_from = [&](Bits& b, const std::string& csv) {
        std::istringstream is(csv);
        std::string tok;
        while (std::getline(is, tok, ',')) {
            if (tok.empty()) continue;
            b.set(*db.lang.find(tok));
        }
    };
    for (const auto& [antec, negbody, head] : rules) {
        Rule r;
        r.antec = Bits(n);
        r.negbody = Bits(n);
        r.conseq = Bits(n);
        set_from(r.antec, antec);
        set_from(r.negbody, negbody);
        set_from(r.conseq, head);
        db.rules.push_back(std::move(r));
    }
    db.finalize();
    return db;
}

struct GenOptions {
    int min_atoms = 2;
    int max_atoms = 7;
    int max_rules = 8;
    bool partitioned = false;
    std::optional<bool> want_stratified;
    bool allow_negation = true;
};

inline Database random_db(std::mt19937_64& rng, const GenOptions& opt = {}) {
    auto pick = [&](int lo, int hi) {
        return std::uniform_int_distribution<int>(lo, hi)(rng);
    };
    auto name = [](int i) { return "p" + std::to_string(i); };
    for (int attempt = 0; attempt < 2000; ++attempt) {
        int n = pick(opt.min_atoms, opt.max_atoms);
        int num_ext = opt.partitioned ? pick(1, std::max(1, n / 2)) : 0;
        std::ostringstream text;
        if (opt.partitioned) {
            text << "#ext " << name(0);
            for (int i = 1; i < num_ext; ++i) text << ", " << name(i);
            text << ".\n";
        }
        int num_rules = pick(1, opt.max_rules);
        int emitted = 0;
        for (int i = 0; i < num_rules; ++i) {
            if (opt.partitioned && pick(0, 2) == 0) {
                // extensional disjunction
                int k = pick(1, std::min(3, num_ext));
                std::vector<int> head;
                for (int j = 0; j < k; ++j) head.push_back(pick(0, num_ext - 1));
                std::sort(head.begin(), head.end());
                head.erase(std::unique(head.begin(), head.end()), head.end());
                for (std::size_t j = 0; j < head.size(); ++j)
                    text << (j ? " | " : "") << name(head[j]);
                text << ".\n";
                ++emitted;
                continue;
            }
            int head_lo = opt.partitioned ? num_ext : 0;
            if (head_lo >= n) continue;
            std::vector<int> head, antec, negb;
            int hk = pick(1, 2), na = pick(0, 2), nn = opt.allow_negation ? pick(0, 2) : 0;
            for (int j = 0; j < hk; ++j) head.push_back(pick(head_lo, n - 1));
            for (int j = 0; j < na; ++j) antec.push_back(pick(0, n - 1));
            for (int j = 0; j < nn; ++j) {
                int a = pick(0, n - 1);
                if (std::find(antec.begin(), antec.end(), a) == antec.end()) negb.push_back(a);
            }
            auto dedup = [](std::vector<int>& v) {
                std::sort(v.begin(), v.end());
                v.erase(std::unique(v.begin(), v.end()), v.end());
            };
            dedup(head);
            dedup(antec);
            dedup(negb);
            bool first = true;
            for (int a : antec) {
                text << (first ? "" : " & ") << name(a);
                first = false;
            }
            for (int a : negb) {
                text << (first ? "~" : " & ~") << name(a);
                first = false;
            }
            if (!first) text << " -> ";
            for (std::size_t j = 0; j < head.size(); ++j)
                text << (j ? " | " : "") << name(head[j]);
            text << ".\n";
            ++emitted;
        }
        if (emitted == 0) continue;
        Database db = parse_database(text.str());
        if (opt.want_stratified && db.strat.is_stratified != *opt.want_stratified) continue;
        return db;
    }
    throw std::runtime_error("random_db could not satisfy the constraints");
}

} // namespace testutil
