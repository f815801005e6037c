#pragma once

#include <map>
#include <vector>

#include "conduche/category.hpp"

namespace conduche {

/// Degree vector in N^k.
using Degree = std::vector<int>;

std::string degree_id(const Degree& d);          // "(m1,...,mk)"
Degree parse_degree(const std::string& id, int k);

/**
 * The additive monoid N^k as a one-object category.  Morphism ids are
 * "(m1,...,mk)"; composition is vector addition and the level of a vector is
 * the sum of its entries.
 */
class NkCategory : public Category {
public:
    explicit NkCategory(int k);

    std::string backend() const override { return "nk"; }
    bool finite() const override { return false; }
    std::vector<ObjectId> objects() const override { return {obj_}; }
    bool has_morphism(const MorphismId& m) const override;
    ObjectId source(const MorphismId&) const override { return obj_; }
    ObjectId target(const MorphismId&) const override { return obj_; }
    MorphismId identity(const ObjectId& x) const override;
    std::optional<MorphismId> try_compose(const MorphismId& after,
                                          const MorphismId& before) const override;
    int level(const MorphismId& m) const override;
    bool additive_levels() const override { return true; }
    std::vector<MorphismId> morphisms_into(const ObjectId& x, int lvl) const override;
    std::vector<MorphismId> complements(const MorphismId& prefix,
                                        const MorphismId& whole) const override;
    // Join completion: p = (m v n) - m, q = (m v n) - n.
    std::optional<std::pair<MorphismId, MorphismId>> complete_cospan(const MorphismId& m,
                                                                     const MorphismId& n,
                                                                     int budget) const override;
    std::optional<std::pair<MorphismId, MorphismId>> complete_cospan_pair(
        const MorphismId& m1, const MorphismId& n1, const MorphismId& m2, const MorphismId& n2,
        int budget) const override;

    int k() const { return k_; }
    Degree degree(const MorphismId& m) const { return parse_degree(m, k_); }

private:
    int k_;
    ObjectId obj_ = "*";
};

struct ColoredEdge {
    std::string id;
    ObjectId src;
    ObjectId tgt;
    int color = 0;
};

/// A commuting square e.f == f2.e2, where (e, f) is the color-ascending pair.
struct FactorizationSquare {
    std::string e, f, f2, e2;
};

struct KGraphSkeleton {
    std::vector<ObjectId> vertices;
    std::vector<ColoredEdge> edges;
    std::vector<FactorizationSquare> squares;
};

/**
 * Path category of a k-colored graph with factorization squares.
 *
 * A morphism is the color-sorted normal form of a path: a word of edge ids
 * (joined with '.') whose colors are non-decreasing from the target end
 * toward the source end.  Identity morphisms reuse the vertex id.
 * Composition concatenates and then bubble-sorts out-of-order adjacent pairs
 * through the square bijection; with consistent squares every morphism has
 * exactly one normal form.  The builder in builders.hpp validates square
 * bijectivity and consistency; this class evaluates whatever data it is
 * given so that the dCf checker can exhibit counterexamples for corrupt
 * squares.
 */
class KGraphCategory : public Category {
public:
    explicit KGraphCategory(KGraphSkeleton skeleton);

    std::string backend() const override { return "kgraph"; }
    bool finite() const override { return false; }
    std::vector<ObjectId> objects() const override;
    bool has_morphism(const MorphismId& m) const override;
    ObjectId source(const MorphismId& m) const override;
    ObjectId target(const MorphismId& m) const override;
    MorphismId identity(const ObjectId& x) const override;
    std::optional<MorphismId> try_compose(const MorphismId& after,
                                          const MorphismId& before) const override;
    int level(const MorphismId& m) const override;
    bool additive_levels() const override { return true; }
    std::vector<MorphismId> morphisms_into(const ObjectId& x, int lvl) const override;

    int k() const { return k_; }
    const KGraphSkeleton& skeleton() const { return skel_; }
    Degree degree(const MorphismId& m) const;
    std::vector<std::string> word(const MorphismId& m) const;  // empty for identities
    const ColoredEdge& edge(const std::string& id) const;
    /// Edges with the given target, sorted by id; all colors when color < 0.
    std::vector<std::string> edges_into(const ObjectId& x, int color) const;

private:
    std::optional<std::vector<std::string>> normalize(std::vector<std::string> w) const;

    KGraphSkeleton skel_;
    int k_ = 1;
    std::map<std::string, ColoredEdge> edge_by_id_;
    std::map<ObjectId, std::vector<std::string>> edges_into_;
    // Descending adjacent pair (f2, e2) -> ascending (e, f) with e.f == f2.e2.
    std::map<std::pair<std::string, std::string>, std::pair<std::string, std::string>> to_sorted_;
    // Ascending pair (e, f) -> descending (f2, e2).
    std::map<std::pair<std::string, std::string>, std::pair<std::string, std::string>> to_swapped_;
};

}  // namespace conduche
