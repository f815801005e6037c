#pragma once

#include "conduche/matrix.hpp"
#include "conduche/paths.hpp"

namespace conduche {

enum class Trilean { yes, no, unknown };

/// The basic open set Z(mu, nu) of the germ groupoid: germs of the local
/// homeomorphism ind_mu . res_nu, for a span s(mu) == s(nu).
struct GermBasisSet {
    MorphismId mu;
    MorphismId nu;

    friend bool operator==(const GermBasisSet&, const GermBasisSet&) = default;
    friend auto operator<=>(const GermBasisSet&, const GermBasisSet&) = default;
};

GermBasisSet make_span(const Fibration& f, const MorphismId& mu, const MorphismId& nu);

/// Z(mu, nu)^-1 == Z(nu, mu); involutive.
GermBasisSet invert_basis(const GermBasisSet& z);

enum class InclusionResult { subset, disjoint, unknown };

/// Decides Z(inner) against Z(outer) by the division criterion: an `a` with
/// F(outer) . a == F(inner) componentwise, lifted through the fiber.
InclusionResult basis_inclusion(const Fibration& f, const GermBasisSet& inner,
                                const GermBasisSet& outer, int budget = 10000);

/// The disjoint refinement of Z(a) n Z(b) at a simultaneous completion of
/// the two spans; empty when no completion (or no matching pair) exists
/// within the searched budget.
std::vector<GermBasisSet> intersect_basis(const Fibration& f, const GermBasisSet& a,
                                          const GermBasisSet& b, int budget = 10000);

/// Cell decomposition of the set product Z(a) . Z(b): one cell per
/// ore-matched pair, pairwise disjoint.
std::vector<GermBasisSet> product_basis(const Fibration& f, const GermBasisSet& a,
                                        const GermBasisSet& b, int budget = 10000);

/**
 * A finitely supported function on the germ groupoid with exact complex
 * coefficients, stored on pairwise-disjoint basis cells.  Overlapping cells
 * are refined to a common base image on insertion, which keeps addition and
 * equality exact.
 */
class GroupoidFunction {
public:
    explicit GroupoidFunction(Fibration f, int budget = 10000);

    const Fibration& fibration() const { return fib_; }
    const std::map<GermBasisSet, Scalar>& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }

    void add(const GermBasisSet& cell, const Scalar& coeff);
    GroupoidFunction& operator+=(const GroupoidFunction& o);
    GroupoidFunction operator-() const;

    /// Involution: inversion on cells plus complex conjugation.
    GroupoidFunction star() const;

    static GroupoidFunction indicator(const Fibration& f, const GermBasisSet& cell);

    friend bool operator==(const GroupoidFunction& a, const GroupoidFunction& b);

private:
    void normalize();

    Fibration fib_;
    int budget_;
    std::map<GermBasisSet, Scalar> terms_;
};

/// Convolution f * g: the bilinear extension of product_basis.
GroupoidFunction convolve(const GroupoidFunction& f, const GroupoidFunction& g);

/// A germ [mu, nu, x] with x in Z(nu).
struct GermElement {
    MorphismId mu;
    MorphismId nu;
    PathOracle x;
};

/// The three-condition germ relation: path identity, local-map agreement on
/// a refinement cell, and a simultaneous base completion.  Exact on finite
/// bases; depth-certified otherwise.
Trilean equal_germ(const GermElement& a, const GermElement& b, int depth = 4);

/**
 * The full germ groupoid of a fibration with finite path space: canonical
 * germ representatives, units, inverses and the composition table.
 */
class GermTable {
public:
    explicit GermTable(const Fibration& f);

    const std::vector<PathOracle>& units() const { return paths_; }
    const std::vector<GermElement>& germs() const { return germs_; }

    int source_of(int germ) const { return src_[(size_t)germ]; }   // unit index
    int range_of(int germ) const { return rng_[(size_t)germ]; }    // unit index
    int inverse_of(int germ) const { return inv_[(size_t)germ]; }
    int unit_germ(int path) const { return unit_germ_[(size_t)path]; }

    /// Composition g1 . g2 (g1 after g2); -1 when not composable.
    int compose(int g1, int g2) const;

    /// Index of the canonical germ equal to [mu, nu, x]; -1 when x is not
    /// in Z(nu).
    int find(const MorphismId& mu, const MorphismId& nu, const PathOracle& x) const;
    int find_path(const PathOracle& x) const;

    /// Membership of a germ in a basis cell.
    bool in_cell(int germ, const GermBasisSet& cell) const;

private:
    Fibration fib_;
    std::vector<PathOracle> paths_;
    std::vector<GermElement> germs_;
    std::vector<int> src_, rng_, inv_, unit_germ_;
    std::vector<std::vector<int>> table_;  // -1 where undefined
};

GermTable enumerate_germs(const Fibration& f);

/**
 * The representation L^u on the orbit of the unit u: matrices of the basis
 * indicator functions acting by left translation on germs with source u.
 */
class RegularRepresentation {
public:
    RegularRepresentation(const Fibration& f, const PathOracle& u, int budget = 1 << 12);

    const GermTable& table() const { return table_; }
    const std::vector<int>& orbit() const { return orbit_; }  // germ indices
    ScalarMatrix matrix_of(const GermBasisSet& cell) const;

private:
    GermTable table_;
    std::vector<int> orbit_;
    std::map<int, size_t> position_;
};

}  // namespace conduche
