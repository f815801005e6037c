#pragma once

#include "conduche/fibration.hpp"

namespace conduche {

/**
 * An infinite path to an object X: a lazy section of the induced functor on
 * slice categories, evaluated on base objects (morphisms of B with target
 * F(X)).  Morphism values are derived through unique factorization, so the
 * evaluator only ever supplies object values.
 *
 * Every evaluation is validated as a section (F(x(b)) == b, r(x(b)) == r(x))
 * and cross-checked for prefix coherence against all memoized comparable
 * points; violations raise IncoherentOracle naming the offending pair.  The
 * memo behaves as a pure cache and is safe for concurrent evaluation.
 */
class PathOracle {
public:
    using Evaluator = std::function<MorphismId(const MorphismId&)>;

    PathOracle(Fibration fib, ObjectId target, Evaluator eval, std::string label,
               int certified_depth = 0);

    const Fibration& fibration() const { return fib_; }
    const ObjectId& target() const { return target_; }  // r(x), an object of E
    const std::string& label() const { return label_; }
    int certified_depth() const { return certified_depth_; }

    /// Value on a base object b (a morphism of B with target F(r(x))).
    MorphismId eval(const MorphismId& base_object) const;

    /// Value on the slice morphism (a, b): the pair (x(a), x2(a, b)) with
    /// x(a) . x2(a, b) == x(ab) and F(x2(a, b)) == b.
    std::pair<MorphismId, MorphismId> eval_morphism(const MorphismId& a,
                                                    const MorphismId& b) const;

    std::map<MorphismId, MorphismId> memoized() const;

private:
    struct State;

    Fibration fib_;
    ObjectId target_;
    std::string label_;
    int certified_depth_ = 0;
    Evaluator eval_;
    std::shared_ptr<State> state_;
};

/// The set Z(alpha) of infinite paths ending in alpha; Z(X) is Z(Id_X).
struct CylinderSet {
    MorphismId alpha;
};

CylinderSet cylinder(const MorphismId& alpha);
CylinderSet cylinder_of_object(const Fibration& f, const ObjectId& x);
bool cylinder_contains(const CylinderSet& z, const PathOracle& x);

/// Strips mu from the front: res_mu(x)(a) == x2(F(mu), a).  The membership
/// x in Z(mu) is checked lazily on each evaluation.
PathOracle res(const MorphismId& mu, const PathOracle& x);

/// Prepends mu: the value at d is the unique degree-d prefix of mu . x(c)
/// for an Ore completion F(mu) . c == d . e.  Requires r(x) == s(mu).
PathOracle ind(const MorphismId& mu, const PathOracle& x);

/// ind with a caller-supplied completion of the cospan (F(mu), d); the
/// result must agree with the canonical one (strong right Ore), which the
/// property tests force.
using CompletionChooser =
    std::function<std::pair<MorphismId, MorphismId>(const MorphismId& fmu, const MorphismId& d)>;
PathOracle ind_with_completion(const MorphismId& mu, const PathOracle& x,
                               CompletionChooser chooser);

/// Builder-aware splitting: kgraph fibrations get the min-lex cyclic-color
/// chooser, identity and sections fibrations their unique lifts, finite
/// explicit fibrations a backtracking search.  The result is certified
/// coherent on all base objects up to depth.
PathOracle canonical_splitting(const Fibration& f, const ObjectId& X, int depth);

using SplittingFactory = std::function<PathOracle(const Fibration&, const ObjectId&)>;

PathOracle make_table_oracle(const Fibration& f, const ObjectId& X,
                             std::map<MorphismId, MorphismId> table, std::string label);

/// Infinite-word oracle over a k-graph: the chooser picks, for each step of
/// the color cycle 0,1,...,k-1,0,..., an edge of the required color into the
/// current vertex; values at arbitrary degrees are reconciled through unique
/// factorization of a long enough word prefix.
PathOracle make_edge_word_oracle(
    const Fibration& f, const ObjectId& X,
    std::function<std::string(int step, const ObjectId& at, int color)> chooser,
    std::string label);

/// Oracle specs: "minlex", "unique", "constant:e", "periodic:e1,e2,...",
/// "fib:e0,e1" (the Fibonacci substitution word, aperiodic).
PathOracle make_oracle_from_spec(const Fibration& f, const ObjectId& X, const std::string& spec);

std::vector<CylinderSet> partition_by_lifts(const Fibration& f, const ObjectId& X,
                                            const MorphismId& b);

/// The index set I with Z(alpha) n Z(beta) == disjoint union of Z(mu) over
/// mu in I, computed at the canonical completion of (F(alpha), F(beta)).
std::vector<MorphismId> cylinder_intersection(const Fibration& f, const MorphismId& alpha,
                                              const MorphismId& beta, int budget = 10000);

struct PathComparison {
    bool equal = true;
    bool exhaustive = false;            // base finite: the comparison is exact
    MorphismId distinguished_at;        // first disagreement point when !equal
};

PathComparison path_equal(const PathOracle& x, const PathOracle& y, int depth);

struct AperiodicityResult {
    bool witness_found = false;
    MorphismId alpha, beta;  // res_alpha(x) == res_beta(x) to verify_depth
    int depth = 0;
    int verify_depth = 0;
};

/// Searches pairs alpha != beta with x in Z(alpha) n Z(beta) whose
/// restrictions agree; candidate witnesses are verified to a deeper bound
/// (2*depth + 2) so truncation cannot alias distinct tails.
AperiodicityResult aperiodicity_scan(const Fibration& f, const PathOracle& x, int depth);

/// All sections at X for a finite fibration (throws PathSpaceNotFinite
/// otherwise); the backbone of the finite path-space representations.
std::vector<PathOracle> enumerate_paths(const Fibration& f, const ObjectId& X);
std::vector<PathOracle> all_paths(const Fibration& f);

}  // namespace conduche
