#pragma once

#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "indescent/term.hpp"

namespace indescent {

// Symbolic-heap fragment of separation logic: pure (dis)equalities over
// location variables plus a separating conjunction of points-to atoms with a
// fixed record width k. The only sort is Loc, so terms are variables.

inline const SortName kLocSort = "Loc";

struct PureLit {
    bool positive = true;
    std::string lhs, rhs; // variable names

    bool operator==(const PureLit& o) const {
        return positive == o.positive && lhs == o.lhs && rhs == o.rhs;
    }
    bool operator<(const PureLit& o) const {
        if (positive != o.positive) return positive && !o.positive;
        if (lhs != o.lhs) return lhs < o.lhs;
        return rhs < o.rhs;
    }
};

struct PtoAtom {
    std::string src;
    std::vector<std::string> targets; // exactly k entries

    bool operator==(const PtoAtom& o) const { return src == o.src && targets == o.targets; }
    bool operator<(const PtoAtom& o) const {
        if (src != o.src) return src < o.src;
        return targets < o.targets;
    }
};

class SymbolicHeap {
public:
    std::vector<PureLit> pure;
    std::vector<PtoAtom> spatial;

    void normalize();
    std::set<std::string> vars() const;
    bool empty_formula() const { return pure.empty() && spatial.empty(); }

    SymbolicHeap renamed(const std::map<std::string, std::string>& theta) const;
    SymbolicHeap conjoined_pure(const SymbolicHeap& other) const; // pure parts merged, spatial of *this kept
    SymbolicHeap star(const SymbolicHeap& other) const;           // pure merged, spatial concatenated

    bool operator==(const SymbolicHeap& o) const { return pure == o.pure && spatial == o.spatial; }
    bool operator<(const SymbolicHeap& o) const {
        if (!(pure == o.pure)) return pure < o.pure;
        return spatial < o.spatial;
    }

    std::string str() const;
};

// Finite partial map from locations to k-tuples of locations.
struct Heap {
    std::map<int, std::vector<int>> cells;

    bool disjoint(const Heap& o) const;
    Heap unite(const Heap& o) const; // precondition: disjoint
    std::set<int> dom() const;
    std::set<int> img() const;
    size_t size() const { return cells.size(); }

    bool operator==(const Heap& o) const { return cells == o.cells; }
    bool operator<(const Heap& o) const { return cells < o.cells; }

    std::string str() const;
};

// Node-labelled record of which rule application produced which sub-heap;
// node heaps are pairwise disjoint and union to the modelled heap.
struct UnfoldTree {
    Heap chunk;
    std::vector<std::shared_ptr<const UnfoldTree>> children;

    int node_count() const;
    Heap total() const;
    std::string str() const;
};

using UnfoldTreePtr = std::shared_ptr<const UnfoldTree>;

bool unfold_tree_equal(const UnfoldTreePtr& a, const UnfoldTreePtr& b);
bool unfold_tree_less(const UnfoldTreePtr& a, const UnfoldTreePtr& b);

// Relabels locations of (tuple, heap, tree) into 0..m-1 in first-occurrence
// order so model sets are finite and comparable.
struct SlModel {
    std::vector<int> tuple;
    Heap heap;
    UnfoldTreePtr tree; // may be null when trees are not tracked

    bool operator<(const SlModel& o) const;
    bool operator==(const SlModel& o) const;
};

SlModel canonicalize_model(const SlModel& m);

// Allocated argument positions plus the exact equality relation on argument
// positions, the abstract domain of the SL non-filtering check.
struct AbstractPair {
    std::set<int> allocated;            // 0-based positions
    std::set<std::pair<int, int>> eq;   // reflexive-symmetric-transitive on positions

    bool operator<(const AbstractPair& o) const {
        if (allocated != o.allocated) return allocated < o.allocated;
        return eq < o.eq;
    }
    bool operator==(const AbstractPair& o) const { return allocated == o.allocated && eq == o.eq; }
    std::string str() const;
};

} // namespace indescent
