#pragma once

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "conduche/errors.hpp"

namespace conduche {

using ObjectId = std::string;
using MorphismId = std::string;

struct MorphismRecord {
    MorphismId id;
    ObjectId src;
    ObjectId tgt;
};

// Synthetic ids (slice morphisms, product tuples) are '|'-joined with
// backslash escaping so user ids may contain any character.
std::string encode_parts(const std::vector<std::string>& parts);
std::vector<std::string> decode_parts(const std::string& encoded);
std::string encode_pair(const std::string& a, const std::string& b);
std::pair<std::string, std::string> decode_pair(const std::string& encoded);

/**
 * A small category, either explicit (finite tables) or graded (lazy oracle
 * with finitely many morphisms per level into each object).
 *
 * Composition follows the anti-diagrammatic convention: compose(a, b) is the
 * composite "a after b", defined when source(a) == target(b); the composite
 * has the target of a and the source of b.  Identities sit at level 0.
 *
 * Instances are immutable after construction; all queries are const and safe
 * for concurrent use.
 */
class Category {
public:
    virtual ~Category() = default;

    virtual std::string backend() const = 0;
    virtual bool finite() const = 0;  // finitely many morphisms in total

    virtual bool finite_objects() const { return true; }
    virtual std::vector<ObjectId> objects() const = 0;  // sorted, finite
    /// Objects carrying a grading (slice categories); level 0 holds all
    /// objects for ordinary categories.
    virtual std::vector<ObjectId> objects_at(int lvl) const;
    std::vector<ObjectId> objects_up_to(int max_level) const;

    virtual bool has_object(const ObjectId& x) const;
    virtual bool has_morphism(const MorphismId& m) const = 0;
    virtual ObjectId source(const MorphismId& m) const = 0;
    virtual ObjectId target(const MorphismId& m) const = 0;
    virtual MorphismId identity(const ObjectId& x) const = 0;
    bool is_identity(const MorphismId& m) const;

    /// nullopt when the pair is not composable (or, for lazily generated
    /// backends, when the composite cannot be formed from corrupt data).
    virtual std::optional<MorphismId> try_compose(const MorphismId& after,
                                                  const MorphismId& before) const = 0;
    MorphismId compose(const MorphismId& after, const MorphismId& before) const;
    MorphismId compose_chain(const std::vector<MorphismId>& factors) const;

    /// Grading. Identities are level 0; explicit categories place every
    /// non-identity at level 1.
    virtual int level(const MorphismId& m) const = 0;
    virtual bool additive_levels() const = 0;  // level(ab) == level(a)+level(b)

    /// All morphisms with target x at exactly this level, sorted and
    /// duplicate-free; the order is stable across calls.
    virtual std::vector<MorphismId> morphisms_into(const ObjectId& x, int lvl) const = 0;
    std::vector<MorphismId> morphisms_into_up_to(const ObjectId& x, int max_level) const;
    std::vector<MorphismId> morphisms_up_to(int max_level) const;

    /// Every v with prefix . v == whole (may be several in non-cancellative
    /// categories).  Sorted.
    virtual std::vector<MorphismId> complements(const MorphismId& prefix,
                                                const MorphismId& whole) const;

    /// Canonical completion (p, q) of the cospan (m, n): m.p == n.q.
    /// Backends with structure (joins, inverses, meets) override with their
    /// canonical choice; the fallback is a deterministic bounded search.
    virtual std::optional<std::pair<MorphismId, MorphismId>> complete_cospan(
        const MorphismId& m, const MorphismId& n, int budget) const;

    /// Simultaneous completion: (a, b) with m1.a == n1.b and m2.a == n2.b.
    /// Requires source(m1) == source(m2) and source(n1) == source(n2).
    virtual std::optional<std::pair<MorphismId, MorphismId>> complete_cospan_pair(
        const MorphismId& m1, const MorphismId& n1, const MorphismId& m2, const MorphismId& n2,
        int budget) const;

protected:
    std::optional<std::pair<MorphismId, MorphismId>> search_cospan_completion(
        const MorphismId& m, const MorphismId& n, int budget,
        const MorphismId* m2 = nullptr, const MorphismId* n2 = nullptr) const;
};

using CategoryPtr = std::shared_ptr<const Category>;

/// Finite category backed by explicit tables (built from JSON documents or
/// by the group/poset/sections builders).
class ExplicitCategory : public Category {
public:
    struct Data {
        std::vector<ObjectId> objects;
        std::vector<MorphismRecord> morphisms;  // identities included
        std::map<ObjectId, MorphismId> identities;
        std::map<std::pair<MorphismId, MorphismId>, MorphismId> composition;  // (after, before)
    };

    explicit ExplicitCategory(Data data, std::string tag = "explicit");

    std::string backend() const override { return tag_; }
    bool finite() const override { return true; }
    std::vector<ObjectId> objects() const override { return data_.objects; }
    bool has_morphism(const MorphismId& m) const override { return by_id_.count(m) != 0; }
    ObjectId source(const MorphismId& m) const override { return record(m).src; }
    ObjectId target(const MorphismId& m) const override { return record(m).tgt; }
    MorphismId identity(const ObjectId& x) const override;
    std::optional<MorphismId> try_compose(const MorphismId& after,
                                          const MorphismId& before) const override;
    int level(const MorphismId& m) const override;
    bool additive_levels() const override { return false; }
    std::vector<MorphismId> morphisms_into(const ObjectId& x, int lvl) const override;

    const Data& data() const { return data_; }
    std::vector<MorphismId> all_morphisms() const;

protected:
    const MorphismRecord& record(const MorphismId& m) const;

    Data data_;
    std::string tag_;
    std::map<MorphismId, MorphismRecord> by_id_;
    std::map<ObjectId, std::vector<MorphismId>> into_;  // non-identities, sorted
};

/// One-object category of a finite group; morphisms are the group elements.
class GroupCategory : public ExplicitCategory {
public:
    GroupCategory(Data data, ObjectId obj, std::map<MorphismId, MorphismId> inverses);

    const MorphismId& inverse(const MorphismId& g) const;
    // Canonical completion of (m, n) is (m^-1 n, e).
    std::optional<std::pair<MorphismId, MorphismId>> complete_cospan(const MorphismId& m,
                                                                     const MorphismId& n,
                                                                     int budget) const override;
    std::optional<std::pair<MorphismId, MorphismId>> complete_cospan_pair(
        const MorphismId& m1, const MorphismId& n1, const MorphismId& m2, const MorphismId& n2,
        int budget) const override;

private:
    ObjectId obj_;
    std::map<MorphismId, MorphismId> inv_;
};

/// Category of a finite poset: morphisms are pairs p <= q encoded as
/// encode_pair(p, q), targeted at q.
class PosetCategory : public ExplicitCategory {
public:
    PosetCategory(Data data, std::vector<std::pair<ObjectId, ObjectId>> leq);

    bool leq(const ObjectId& p, const ObjectId& q) const;
    std::vector<std::pair<ObjectId, ObjectId>> leq_pairs() const;  // reflexive pairs included
    static MorphismId arrow(const ObjectId& p, const ObjectId& q) { return encode_pair(p, q); }

    // Canonical completion via the meet of the two sources when the set of
    // lower bounds has a unique maximum.
    std::optional<std::pair<MorphismId, MorphismId>> complete_cospan(const MorphismId& m,
                                                                     const MorphismId& n,
                                                                     int budget) const override;
    std::optional<std::pair<MorphismId, MorphismId>> complete_cospan_pair(
        const MorphismId& m1, const MorphismId& n1, const MorphismId& m2, const MorphismId& n2,
        int budget) const override;

private:
    std::optional<ObjectId> meet(const ObjectId& p, const ObjectId& q) const;
    std::map<ObjectId, std::vector<ObjectId>> below_;  // q -> sorted {p : p <= q}
};

/// Componentwise product of categories; ids are '|'-joined component ids and
/// the level of a tuple is the max of the component levels.
class ProductCategory : public Category {
public:
    explicit ProductCategory(std::vector<CategoryPtr> factors);

    std::string backend() const override { return "product"; }
    bool finite() const override;
    std::vector<ObjectId> objects() const override;
    bool has_morphism(const MorphismId& m) const override;
    ObjectId source(const MorphismId& m) const override;
    ObjectId target(const MorphismId& m) const override;
    MorphismId identity(const ObjectId& x) const override;
    std::optional<MorphismId> try_compose(const MorphismId& after,
                                          const MorphismId& before) const override;
    int level(const MorphismId& m) const override;
    bool additive_levels() const override { return false; }
    std::vector<MorphismId> morphisms_into(const ObjectId& x, int lvl) const override;
    std::vector<MorphismId> complements(const MorphismId& prefix,
                                        const MorphismId& whole) const override;
    std::optional<std::pair<MorphismId, MorphismId>> complete_cospan(const MorphismId& m,
                                                                     const MorphismId& n,
                                                                     int budget) const override;
    std::optional<std::pair<MorphismId, MorphismId>> complete_cospan_pair(
        const MorphismId& m1, const MorphismId& n1, const MorphismId& m2, const MorphismId& n2,
        int budget) const override;

    const std::vector<CategoryPtr>& factors() const { return factors_; }

private:
    std::vector<std::string> split(const MorphismId& m) const;
    std::vector<CategoryPtr> factors_;
};

/**
 * Slice category C/X: objects are morphisms of C with target X (object ids
 * coincide with the underlying morphism ids), and a morphism from b to a is a
 * pair (a, g) with a.g == b, encoded as encode_pair(a, g).  The pair (a, g)
 * has target a and source a.g; composition is (a, g)(a.g, d) == (a, g.d).
 */
class SliceCategory : public Category {
public:
    SliceCategory(CategoryPtr base, ObjectId apex);

    std::string backend() const override { return "slice"; }
    bool finite() const override { return base_->finite(); }
    bool finite_objects() const override { return base_->finite(); }
    std::vector<ObjectId> objects() const override;
    std::vector<ObjectId> objects_at(int lvl) const override;
    bool has_object(const ObjectId& x) const override;
    bool has_morphism(const MorphismId& m) const override;
    ObjectId source(const MorphismId& m) const override;
    ObjectId target(const MorphismId& m) const override;
    MorphismId identity(const ObjectId& x) const override;
    std::optional<MorphismId> try_compose(const MorphismId& after,
                                          const MorphismId& before) const override;
    int level(const MorphismId& m) const override;
    bool additive_levels() const override { return base_->additive_levels(); }
    std::vector<MorphismId> morphisms_into(const ObjectId& x, int lvl) const override;
    std::vector<MorphismId> complements(const MorphismId& prefix,
                                        const MorphismId& whole) const override;

    const Category& base() const { return *base_; }
    const ObjectId& apex() const { return apex_; }

    static MorphismId make(const MorphismId& range, const MorphismId& extension) {
        return encode_pair(range, extension);
    }
    /// First projection: the range object of the triangle.
    MorphismId proj1(const MorphismId& m) const { return decode_pair(m).first; }
    /// Second projection: the underlying morphism of the base category.
    MorphismId proj2(const MorphismId& m) const { return decode_pair(m).second; }

private:
    CategoryPtr base_;
    ObjectId apex_;
};

struct CheckResult {
    std::string name;
    bool pass = true;
    int depth = 0;
    std::string detail;
};

struct ValidationReport {
    std::vector<CheckResult> checks;

    bool pass() const;
    void add(std::string name, bool ok, int depth, std::string detail = "");
    const CheckResult* find(const std::string& name) const;
};

/// Checks composability closure, associativity and the identity laws; for
/// graded backends all triples up to `depth` are covered.
ValidationReport validate_category(const Category& cat, int depth);

MorphismId compose(const Category& cat, const MorphismId& after, const MorphismId& before);

std::shared_ptr<const SliceCategory> slice(CategoryPtr cat, const ObjectId& x);

CategoryPtr product(const std::vector<CategoryPtr>& factors);

}  // namespace conduche
