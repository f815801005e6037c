#pragma once

#include "conduche/groupoid.hpp"

namespace conduche {

/// A spanning word s_alpha s_beta^* with s(alpha) == s(beta).
struct SpanningWord {
    MorphismId alpha;
    MorphismId beta;

    friend bool operator==(const SpanningWord&, const SpanningWord&) = default;
    friend auto operator<=>(const SpanningWord&, const SpanningWord&) = default;
};

/**
 * An element of the dense *-algebra spanned by the words s_alpha s_beta^*,
 * with exact complex-rational coefficients.  Projections are p_X ==
 * (Id_X, Id_X) and generators s_alpha == (alpha, Id_{s(alpha)}).
 *
 * Expressions are kept as written; equality is decided by refining both
 * sides to a common base image (relation 6) and comparing coefficients.
 */
class AlgebraElement {
public:
    explicit AlgebraElement(Fibration f);

    static AlgebraElement zero(const Fibration& f) { return AlgebraElement(f); }
    static AlgebraElement generator(const Fibration& f, const MorphismId& alpha);       // s_alpha
    static AlgebraElement generator_star(const Fibration& f, const MorphismId& alpha);  // s_alpha^*
    static AlgebraElement projection(const Fibration& f, const ObjectId& x);            // p_X
    static AlgebraElement word(const Fibration& f, const MorphismId& alpha,
                               const MorphismId& beta, Scalar coeff = Scalar(1));

    const Fibration& fibration() const { return fib_; }
    const std::map<SpanningWord, Scalar>& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }

    void add_term(const SpanningWord& w, const Scalar& coeff);
    AlgebraElement& operator+=(const AlgebraElement& o);
    AlgebraElement operator-() const;
    friend AlgebraElement operator+(AlgebraElement a, const AlgebraElement& b) { return a += b; }
    AlgebraElement scaled(const Scalar& c) const;

private:
    Fibration fib_;
    std::map<SpanningWord, Scalar> terms_;
};

/// Bilinear product; each cross term expands through ore_match (the
/// generator-level product rule derived from relations 4-6).
AlgebraElement multiply(const AlgebraElement& a, const AlgebraElement& b, int budget = 10000);

/// The involution: (alpha, beta) -> (beta, alpha) with conjugated
/// coefficients.
AlgebraElement involute(const AlgebraElement& a);

/// Rewrites every word through relation 6 along the base morphism c:
/// s_alpha s_beta^* == sum over the fiber of c of s_{alpha g} s_{beta g}^*.
AlgebraElement refine(const AlgebraElement& a, const MorphismId& c, int budget = 10000);

/// Equality through common refinement: exact for the structured bases
/// (degree monoids, groups, posets); `unknown` only when the bounded
/// completion search could not merge comparable words.
Trilean equal(const AlgebraElement& a, const AlgebraElement& b, int budget = 10000);

/// The generator-level homomorphism onto the groupoid convolution algebra:
/// s_alpha s_beta^* -> the indicator of Z(alpha, beta).
GroupoidFunction upsilon(const AlgebraElement& a);

/// A concrete operator assignment on a finite-dimensional space.
struct RepAssignment {
    std::map<ObjectId, ScalarMatrix> projections;
    std::map<MorphismId, ScalarMatrix> isometries;
    double tolerance = 1e-9;
    bool exact = false;        // require exact matrix equality (tolerance 0)
    bool approximate = false;  // a truncation: only relations 1-3 are asserted
};

/// Verifies the six relations against the assignment; relation 6 is checked
/// once per listed base morphism.  Every check reports its max deviation.
ValidationReport check_ck_relations(const Fibration& f, const RepAssignment& rep,
                                    const std::vector<MorphismId>& base_degrees);

/// The representation on the (finite) path space: T_mu acts by ind_mu on
/// Z(s(mu)) and Q_X projects onto Z(X); all six relations hold exactly.
RepAssignment path_representation(const Fibration& f);

/// Finite stand-in for an infinite path space over N^k: basis vectors are
/// the morphisms of box degree (d,...,d), T_mu prepends and re-truncates
/// through unique factorization.  The output is labeled approximate: the
/// truncation represents relations 1-3 exactly while 4-6 fail at the
/// boundary, so only the former are asserted.
RepAssignment truncated_path_representation(const Fibration& f, int depth);

/// Probes alpha -> s_alpha for injectivity on the given pairs.  With a
/// certified right-cancellative base all distinct pairs must separate;
/// otherwise the report carries any collapse witness a with
/// F(alpha) a == F(beta) a.
ValidationReport injectivity_probe(const Fibration& f,
                                   const std::vector<std::pair<MorphismId, MorphismId>>& pairs,
                                   int budget = 10000);

/// Parses a product of factors "s(m)", "s(m)*", "p(X)" into an element;
/// used by the CLI.
AlgebraElement parse_word_product(const Fibration& f, const std::string& text);

}  // namespace conduche
