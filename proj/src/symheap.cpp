#include "indescent/symheap.hpp"

#include <algorithm>

namespace indescent {

void SymbolicHeap::normalize() {
    for (auto& l : pure)
        if (l.rhs < l.lhs) std::swap(l.lhs, l.rhs);
    std::sort(pure.begin(), pure.end());
    pure.erase(std::unique(pure.begin(), pure.end()), pure.end());
    std::sort(spatial.begin(), spatial.end());
}

std::set<std::string> SymbolicHeap::vars() const {
    std::set<std::string> out;
    for (const auto& l : pure) {
        out.insert(l.lhs);
        out.insert(l.rhs);
    }
    for (const auto& a : spatial) {
        out.insert(a.src);
        for (const auto& t : a.targets) out.insert(t);
    }
    return out;
}

SymbolicHeap SymbolicHeap::renamed(const std::map<std::string, std::string>& theta) const {
    auto ren = [&](const std::string& v) {
        auto it = theta.find(v);
        return it == theta.end() ? v : it->second;
    };
    SymbolicHeap out;
    for (const auto& l : pure) out.pure.push_back(PureLit{l.positive, ren(l.lhs), ren(l.rhs)});
    for (const auto& a : spatial) {
        PtoAtom atom;
        atom.src = ren(a.src);
        for (const auto& t : a.targets) atom.targets.push_back(ren(t));
        out.spatial.push_back(std::move(atom));
    }
    out.normalize();
    return out;
}

SymbolicHeap SymbolicHeap::conjoined_pure(const SymbolicHeap& other) const {
    SymbolicHeap out = *this;
    out.pure.insert(out.pure.end(), other.pure.begin(), other.pure.end());
    out.normalize();
    return out;
}

SymbolicHeap SymbolicHeap::star(const SymbolicHeap& other) const {
    SymbolicHeap out = *this;
    out.pure.insert(out.pure.end(), other.pure.begin(), other.pure.end());
    out.spatial.insert(out.spatial.end(), other.spatial.begin(), other.spatial.end());
    out.normalize();
    return out;
}

std::string SymbolicHeap::str() const {
    std::string s;
    for (size_t i = 0; i < pure.size(); ++i) {
        if (i) s += " & ";
        s += pure[i].lhs + (pure[i].positive ? " = " : " != ") + pure[i].rhs;
    }
    if (!pure.empty() && !spatial.empty()) s += " & ";
    if (spatial.empty()) {
        if (pure.empty()) s = "emp";
        else s += " & emp";
    } else {
        for (size_t i = 0; i < spatial.size(); ++i) {
            if (i) s += " * ";
            s += spatial[i].src + " -> (";
            for (size_t j = 0; j < spatial[i].targets.size(); ++j) {
                if (j) s += ",";
                s += spatial[i].targets[j];
            }
            s += ")";
        }
    }
    return s;
}

bool Heap::disjoint(const Heap& o) const {
    for (const auto& [l, _] : cells)
        if (o.cells.count(l)) return false;
    return true;
}

Heap Heap::unite(const Heap& o) const {
    Heap h = *this;
    h.cells.insert(o.cells.begin(), o.cells.end());
    return h;
}

std::set<int> Heap::dom() const {
    std::set<int> out;
    for (const auto& [l, _] : cells) out.insert(l);
    return out;
}

std::set<int> Heap::img() const {
    std::set<int> out;
    for (const auto& [_, ts] : cells) out.insert(ts.begin(), ts.end());
    return out;
}

std::string Heap::str() const {
    std::string s = "{";
    bool first = true;
    for (const auto& [l, ts] : cells) {
        if (!first) s += ", ";
        first = false;
        s += std::to_string(l) + "->(";
        for (size_t i = 0; i < ts.size(); ++i) {
            if (i) s += ",";
            s += std::to_string(ts[i]);
        }
        s += ")";
    }
    return s + "}";
}

int UnfoldTree::node_count() const {
    int n = 1;
    for (const auto& c : children) n += c->node_count();
    return n;
}

Heap UnfoldTree::total() const {
    Heap h = chunk;
    for (const auto& c : children) h = h.unite(c->total());
    return h;
}

std::string UnfoldTree::str() const {
    std::string s = chunk.str();
    if (!children.empty()) {
        s += "[";
        for (size_t i = 0; i < children.size(); ++i) {
            if (i) s += " ";
            s += children[i]->str();
        }
        s += "]";
    }
    return s;
}

bool unfold_tree_equal(const UnfoldTreePtr& a, const UnfoldTreePtr& b) {
    if (a == b) return true;
    if (!a || !b) return false;
    if (!(a->chunk == b->chunk)) return false;
    if (a->children.size() != b->children.size()) return false;
    for (size_t i = 0; i < a->children.size(); ++i)
        if (!unfold_tree_equal(a->children[i], b->children[i])) return false;
    return true;
}

bool unfold_tree_less(const UnfoldTreePtr& a, const UnfoldTreePtr& b) {
    if (a == b) return false;
    if (!a) return b != nullptr;
    if (!b) return false;
    if (!(a->chunk == b->chunk)) return a->chunk < b->chunk;
    if (a->children.size() != b->children.size()) return a->children.size() < b->children.size();
    for (size_t i = 0; i < a->children.size(); ++i) {
        if (unfold_tree_less(a->children[i], b->children[i])) return true;
        if (unfold_tree_less(b->children[i], a->children[i])) return false;
    }
    return false;
}

bool SlModel::operator<(const SlModel& o) const {
    if (tuple != o.tuple) return tuple < o.tuple;
    if (!(heap == o.heap)) return heap < o.heap;
    return unfold_tree_less(tree, o.tree);
}

bool SlModel::operator==(const SlModel& o) const {
    return tuple == o.tuple && heap == o.heap && unfold_tree_equal(tree, o.tree);
}

namespace {

struct Renamer {
    std::map<int, int> map;
    int next = 0;
    int get(int l) {
        auto it = map.find(l);
        if (it != map.end()) return it->second;
        map[l] = next;
        return next++;
    }
};

UnfoldTreePtr rename_tree(const UnfoldTreePtr& t, Renamer& r) {
    if (!t) return nullptr;
    auto out = std::make_shared<UnfoldTree>();
    for (const auto& [l, ts] : t->chunk.cells) {
        std::vector<int> nts;
        int nl = r.get(l);
        for (int x : ts) nts.push_back(r.get(x));
        out->chunk.cells[nl] = std::move(nts);
    }
    for (const auto& c : t->children) out->children.push_back(rename_tree(c, r));
    return out;
}

} // namespace

SlModel canonicalize_model(const SlModel& m) {
    Renamer r;
    SlModel out;
    for (int l : m.tuple) out.tuple.push_back(r.get(l));
    // visit cells in a location order derived from already-renamed ids first,
    // then remaining sources in ascending original order
    std::set<int> done;
    bool progress = true;
    while (done.size() < m.heap.cells.size()) {
        progress = false;
        // prefer sources already renamed, in renamed order
        std::vector<std::pair<int, int>> renamed_sources; // (new id, old id)
        for (const auto& [l, _] : m.heap.cells)
            if (!done.count(l) && r.map.count(l)) renamed_sources.emplace_back(r.map[l], l);
        std::sort(renamed_sources.begin(), renamed_sources.end());
        int pick = -1;
        if (!renamed_sources.empty()) {
            pick = renamed_sources.front().second;
        } else {
            for (const auto& [l, _] : m.heap.cells)
                if (!done.count(l)) { pick = l; break; }
        }
        if (pick < 0) break;
        const auto& ts = m.heap.cells.at(pick);
        int nl = r.get(pick);
        std::vector<int> nts;
        for (int x : ts) nts.push_back(r.get(x));
        out.heap.cells[nl] = std::move(nts);
        done.insert(pick);
        progress = true;
        if (!progress) break;
    }
    out.tree = rename_tree(m.tree, r);
    return out;
}

std::string AbstractPair::str() const {
    std::string s = "A={";
    bool first = true;
    for (int i : allocated) {
        if (!first) s += ",";
        first = false;
        s += std::to_string(i + 1);
    }
    s += "} E={";
    first = true;
    for (const auto& [i, j] : eq) {
        if (i >= j) continue;
        if (!first) s += ",";
        first = false;
        s += "(" + std::to_string(i + 1) + "," + std::to_string(j + 1) + ")";
    }
    return s + "}";
}

} // namespace indescent
