#pragma once

#include <any>
#include <functional>
#include <mutex>
#include <optional>

#include "conduche/category.hpp"

namespace conduche {

/// Shared, internally synchronized store of established properties.  Each
/// entry remembers the depth at which it was certified (-1 means exact, i.e.
/// exhaustive over a finite category).
class Flags {
public:
    std::optional<bool> get(const std::string& key) const;
    int depth_of(const std::string& key) const;
    void set(const std::string& key, bool value, int depth) const;

private:
    mutable std::mutex mx_;
    mutable std::map<std::string, std::pair<bool, int>> vals_;
};

inline constexpr const char* kFlagFunctorValid = "functor_valid";
inline constexpr const char* kFlagDcf = "dcf";
inline constexpr const char* kFlagRowFinite = "row_finite";
inline constexpr const char* kFlagStronglySurjective = "strongly_surjective";
inline constexpr const char* kFlagRightOreBase = "right_ore_base";
inline constexpr const char* kFlagStronglyRightOreBase = "strongly_right_ore_base";
inline constexpr const char* kFlagLeftCancellativeBase = "left_cancellative_base";
inline constexpr const char* kFlagRightCancellativeBase = "right_cancellative_base";
inline constexpr const char* kFlagLocallySplit = "locally_split";

/**
 * A functor F : E -> B given by object and morphism maps.  Builders tag the
 * kind ("kgraph", "identity", "sections", "explicit") and may attach a
 * constructive splitting witness used by canonical_splitting.
 *
 * Validation results are cached in a Flags store shared between copies; the
 * cache is invisible to callers (pure memoization).
 */
class Fibration {
public:
    using ObjectMap = std::function<ObjectId(const ObjectId&)>;
    using MorphismMap = std::function<MorphismId(const MorphismId&)>;

    Fibration(CategoryPtr domain, CategoryPtr codomain, ObjectMap omap, MorphismMap mmap,
              std::string kind = "explicit");

    const Category& domain() const { return *domain_; }
    const Category& codomain() const { return *codomain_; }
    CategoryPtr domain_ptr() const { return domain_; }
    CategoryPtr codomain_ptr() const { return codomain_; }

    ObjectId map_object(const ObjectId& x) const { return omap_(x); }
    MorphismId map_morphism(const MorphismId& m) const { return mmap_(m); }

    const std::string& kind() const { return kind_; }
    const std::string& name() const { return name_; }
    void set_name(std::string n) { name_ = std::move(n); }

    /// True when level_E(m) == level_B(F(m)) for every morphism; lets fiber
    /// enumeration over graded bases look at a single level.
    bool level_preserving() const { return level_preserving_; }
    void set_level_preserving(bool v) { level_preserving_ = v; }

    Flags& flags() const { return *flags_; }

    /// Builder-attached splitting witness; see paths.hpp.
    const std::any& splitting_hook() const { return splitting_hook_; }
    void set_splitting_hook(std::any hook) { splitting_hook_ = std::move(hook); }

private:
    CategoryPtr domain_;
    CategoryPtr codomain_;
    ObjectMap omap_;
    MorphismMap mmap_;
    std::string kind_;
    std::string name_;
    bool level_preserving_ = false;
    std::shared_ptr<Flags> flags_;
    std::any splitting_hook_;
};

Fibration make_identity_fibration(CategoryPtr cat);

/// Functor laws: endpoints, identities and composites respected up to depth.
ValidationReport validate_functor(const Fibration& f, int depth);

struct DcfCounterexample {
    MorphismId phi;
    MorphismId left;   // range-end factor of F(phi)
    MorphismId right;  // source-end factor
    int lifts = 0;
};

struct DcfResult {
    bool pass = true;
    int depth = 0;
    std::optional<DcfCounterexample> counterexample;
};

/// Unique factorization lifting: every 2-factorization of F(phi), for phi up
/// to depth, lifts to exactly one factorization of phi.
DcfResult check_dcf(const Fibration& f, int depth);

/// The unique lift of a factorization F(phi) = parts[0] ... parts[n-1];
/// throws NoLift / MultipleLifts when the count differs from one and
/// BadFactorization when the parts do not compose to F(phi).
std::vector<MorphismId> lift_factorization(const Fibration& f, const MorphismId& phi,
                                           const std::vector<MorphismId>& parts);

/// All morphisms with target X mapping to b; requires target(b) == F(X).
std::vector<MorphismId> enumerate_fiber(const Fibration& f, const ObjectId& X,
                                        const MorphismId& b, int budget = 100000);

ValidationReport check_row_finite(const Fibration& f, int depth, int budget = 100000);
ValidationReport check_strong_surjectivity(const Fibration& f, int depth);

struct MorphismProperties {
    bool monic = true;
    bool epi = true;
};

struct CancellationReport {
    bool left_cancellative = true;   // all morphisms monic
    bool right_cancellative = true;  // all morphisms epi
    int depth = 0;
    std::map<MorphismId, MorphismProperties> per_morphism;
};

CancellationReport morphism_properties(const Category& cat, int depth);

/// Canonical completion of the cospan (m, n); throws NotACospan when the
/// targets differ and NoCompletion when the bounded search is exhausted.
std::pair<MorphismId, MorphismId> ore_complete(const Category& cat, const MorphismId& m,
                                               const MorphismId& n, int budget = 10000);

struct OreReport {
    bool right_ore = true;
    bool strongly_right_ore = true;
    std::string method;  // "pullbacks" | "left_cancellative" | "exhaustive"
    int depth = 0;
    std::string counterexample;
};

/// Right Ore / strongly right Ore decision up to depth, trying the two fast
/// paths (pullbacks; left cancellative + right Ore) before exhaustive search.
OreReport check_ore(const Category& cat, int depth, int budget = 10000);

/// Same decision with the fast paths disabled; used to cross-check them.
OreReport check_ore_exhaustive(const Category& cat, int depth, int budget = 10000);

/// With (a, b) the canonical completion of (F(beta), F(sigma)): all pairs
/// (eta, lambda) with eta in the fiber of a at source(beta), lambda in the
/// fiber of b at source(sigma), and beta.eta == sigma.lambda.
std::vector<std::pair<MorphismId, MorphismId>> ore_match(const Fibration& f,
                                                         const MorphismId& beta,
                                                         const MorphismId& sigma,
                                                         int budget = 10000);

/// Corestriction onto the image subcategory; the result is strongly
/// surjective and inherits the certified flags.
Fibration restrict_to_image(const Fibration& f);

}  // namespace conduche
