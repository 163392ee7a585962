#include "minans/trees.hpp"

#include <algorithm>
#include <unordered_set>

namespace minans::trees {

std::size_t tree_count_bound(const Language& lang) {
    std::size_t n = lang.size();
    return n * (n + 1) / 2;
}

namespace {

struct PNode {
    AtomId label;
    std::vector<AtomId> chain; // labels from this node up to the root, inclusive
    int parent_rule;           // index into rnodes, -1 for the root
};

struct RNode {
    std::size_t rule;
    std::size_t parent_node;
    Bits out;
};

class Enumerator {
public:
    Enumerator(AtomId p, const Database& db, const EnumOptions& opts, const TreeVisitor& visit)
        : db_(db), opts_(opts), visit_(visit), bound_(tree_count_bound(db.lang)),
          pred_(db.lang.size()), out_(db.lang.size()), negs_(db.lang.size()) {
        pred_.set(p);
        nodes_.push_back({p, {p}, -1});
    }

    bool run() {
        if (!admissible()) return true;
        return expand(0);
    }

private:
    bool admissible() const {
        Bits posside = out_ | negs_;
        if (opts_.consistent_with &&
            (pred_.intersects(opts_.consistent_with->pos) ||
             posside.intersects(opts_.consistent_with->neg)))
            return false;
        if (opts_.within && (!pred_.subset_of(opts_.within->neg) ||
                             !posside.subset_of(opts_.within->pos)))
            return false;
        return true;
    }

    Bits cycle_above(const PNode& n) const {
        std::size_t top = 0;
        for (std::size_t j = 0; j < n.chain.size(); ++j)
            if (n.chain[j] == n.label) top = j;
        Bits cyc(db_.lang.size());
        for (std::size_t j = 0; j <= top; ++j) cyc.set(n.chain[j]);
        return cyc;
    }

    bool expand(std::size_t widx) {
        if (widx == nodes_.size()) return emit();

        Bits cyc = cycle_above(nodes_[widx]);
        std::size_t chain_len = nodes_[widx].chain.size();

        for (std::size_t ri = 0; ri < db_.rules.size(); ++ri) {
            const Rule& r = db_.rules[ri];
            if (!r.conseq.intersects(cyc)) continue;
            if (r.antec.intersects(cyc)) continue;
            if (r.antec.any() && chain_len + 1 > bound_) continue;

            Bits o = r.conseq - cyc;
            Bits gained_pos = o | r.negbody;
            if (gained_pos.intersects(pred_) || gained_pos.intersects(r.antec)) continue;
            if ((out_ | negs_).intersects(r.antec)) continue;

            // apply
            Bits save_pred = pred_, save_out = out_, save_negs = negs_;
            std::size_t save_nodes = nodes_.size(), save_rnodes = rnodes_.size();
            out_ |= o;
            negs_ |= r.negbody;
            pred_ |= r.antec;
            rnodes_.push_back({ri, widx, o});
            std::vector<AtomId> child_chain;
            r.antec.for_each([&](AtomId a) {
                child_chain = nodes_[widx].chain;
                child_chain.insert(child_chain.begin(), a);
                nodes_.push_back({a, std::move(child_chain), static_cast<int>(rnodes_.size() - 1)});
            });

            bool keep_going = !admissible() || expand(widx + 1);

            pred_ = std::move(save_pred);
            out_ = std::move(save_out);
            negs_ = std::move(save_negs);
            nodes_.resize(save_nodes);
            rnodes_.resize(save_rnodes);
            if (!keep_going) return false;
        }
        return true;
    }

    bool emit() {
        TreeSummary s{pred_, out_, negs_};
        if (!seen_.insert(s.s()).second) return true;
        if (!opts_.keep_nodes) return visit_(s, nullptr);
        TreeNode root = build_node(0);
        return visit_(s, &root);
    }

    TreeNode build_node(std::size_t idx) {
        TreeNode n;
        n.label = nodes_[idx].label;
        n.cyc = cycle_above(nodes_[idx]);
        for (std::size_t ri = 0; ri < rnodes_.size(); ++ri) {
            if (rnodes_[ri].parent_node != idx) continue;
            TreeNode rn;
            rn.is_rule = true;
            rn.rule = rnodes_[ri].rule;
            rn.out = rnodes_[ri].out;
            for (std::size_t ci = 0; ci < nodes_.size(); ++ci)
                if (nodes_[ci].parent_rule == static_cast<int>(ri))
                    rn.children.push_back(build_node(ci));
            n.children.push_back(std::move(rn));
        }
        return n;
    }

    const Database& db_;
    const EnumOptions& opts_;
    const TreeVisitor& visit_;
    std::size_t bound_;
    Bits pred_, out_, negs_;
    std::vector<PNode> nodes_;
    std::vector<RNode> rnodes_;
    std::unordered_set<LiteralSet, LiteralSetHash> seen_;
};

} // namespace

bool enumerate(AtomId p, const Database& db, const EnumOptions& opts, const TreeVisitor& visit) {
    return Enumerator(p, db, opts, visit).run();
}

bool cyclic_trees(AtomId p, const Database& db, const LiteralSet& forbid,
                  const TreeVisitor& visit) {
    EnumOptions opts;
    opts.consistent_with = &forbid;
    return enumerate(p, db, opts, visit);
}

Database with_ext_unit_facts(const Database& db) {
    if (!db.lang.partitioned) throw PartitionRequired("database has no #ext declaration");
    Database out;
    out.lang = db.lang;
    for (const Rule& r : db.rules)
        if (!r.conseq.intersects(db.lang.ext)) out.rules.push_back(r);
    db.lang.ext.for_each([&](AtomId e) {
        Rule unit;
        unit.antec = Bits(db.lang.size());
        unit.negbody = Bits(db.lang.size());
        unit.conseq = Bits(db.lang.size());
        unit.conseq.set(e);
        out.rules.push_back(std::move(unit));
    });
    out.finalize();
    return out;
}

bool partial_cyclic_trees(AtomId p, const Database& db, const TreeVisitor& visit) {
    if (!db.lang.partitioned) throw PartitionRequired("database has no #ext declaration");
    if (db.lang.is_ext(p))
        throw SemanticError("partial trees are rooted at intensional atoms");
    Database view = with_ext_unit_facts(db);
    return enumerate(p, view, {}, visit);
}

std::vector<TreeSummary> collect(AtomId p, const Database& db, const EnumOptions& opts) {
    std::vector<TreeSummary> v;
    enumerate(p, db, opts, [&](const TreeSummary& s, const TreeNode*) {
        v.push_back(s);
        return true;
    });
    std::sort(v.begin(), v.end(), [](const TreeSummary& a, const TreeSummary& b) {
        return a.s().compare(b.s()) < 0;
    });
    return v;
}

const std::vector<TreeSummary>& TreeCache::family(AtomId p) {
    auto it = fam_.find(p);
    if (it != fam_.end()) return it->second;
    return fam_.emplace(p, collect(p, *db_)).first->second;
}

} // namespace minans::trees
