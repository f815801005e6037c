#pragma once

// Internal: common-refinement normalization shared by the groupoid function
// support and the spanning-word algebra.  Spans in one merge class are
// refined (relation-6 style) to a single base-image pair, after which equal
// keys are literally equal and distinct keys index disjoint cells /
// independent words.

#include <map>
#include <vector>

#include "conduche/fibration.hpp"
#include "conduche/rational.hpp"

namespace conduche::detail {

using Span = std::pair<MorphismId, MorphismId>;

/// (a, b) with F(s1.first) a == F(s2.first) b and F(s1.second) a ==
/// F(s2.second) b, via the canonical simultaneous completion of the base.
std::optional<std::pair<MorphismId, MorphismId>> span_completion(const Fibration& f,
                                                                 const Span& s1, const Span& s2,
                                                                 int budget);

/// Expand (alpha, beta) along the base morphism c into the fiber cells
/// (alpha g, beta g), F(g) == c.
std::vector<Span> refine_span(const Fibration& f, const Span& s, const MorphismId& c, int budget);

/// When `complete` is non-null it is cleared if some merge class could not
/// be folded or refined within the budget (the result is then only an upper
/// approximation of the reduced form).
std::map<Span, Scalar> normalize_spans(const Fibration& f, const std::map<Span, Scalar>& terms,
                                       int budget, bool* complete = nullptr);

}  // namespace conduche::detail
