#include "conduche/ckalgebra.hpp"

#include <algorithm>
#include <sstream>

#include "conduche/graded.hpp"
#include "span_normalize.hpp"

namespace conduche {

namespace {

void require_word(const Fibration& f, const MorphismId& alpha, const MorphismId& beta) {
    const Category& E = f.domain();
    if (!E.has_morphism(alpha)) fail(Errc::unknown_morphism, "'" + alpha + "'");
    if (!E.has_morphism(beta)) fail(Errc::unknown_morphism, "'" + beta + "'");
    if (E.source(alpha) != E.source(beta))
        fail(Errc::bad_input,
             "s(" + alpha + ") != s(" + beta + "): not a spanning word");
}

}  // namespace

AlgebraElement::AlgebraElement(Fibration f) : fib_(std::move(f)) {}

AlgebraElement AlgebraElement::generator(const Fibration& f, const MorphismId& alpha) {
    return word(f, alpha, f.domain().identity(f.domain().source(alpha)));
}

AlgebraElement AlgebraElement::generator_star(const Fibration& f, const MorphismId& alpha) {
    return word(f, f.domain().identity(f.domain().source(alpha)), alpha);
}

AlgebraElement AlgebraElement::projection(const Fibration& f, const ObjectId& x) {
    return word(f, f.domain().identity(x), f.domain().identity(x));
}

AlgebraElement AlgebraElement::word(const Fibration& f, const MorphismId& alpha,
                                    const MorphismId& beta, Scalar coeff) {
    AlgebraElement out(f);
    out.add_term({alpha, beta}, coeff);
    return out;
}

void AlgebraElement::add_term(const SpanningWord& w, const Scalar& coeff) {
    if (coeff.is_zero()) return;
    require_word(fib_, w.alpha, w.beta);
    auto it = terms_.find(w);
    if (it == terms_.end()) {
        terms_.emplace(w, coeff);
    } else {
        it->second += coeff;
        if (it->second.is_zero()) terms_.erase(it);
    }
}

AlgebraElement& AlgebraElement::operator+=(const AlgebraElement& o) {
    for (const auto& [w, c] : o.terms_) add_term(w, c);
    return *this;
}

AlgebraElement AlgebraElement::operator-() const {
    AlgebraElement out(fib_);
    for (const auto& [w, c] : terms_) out.terms_.emplace(w, -c);
    return out;
}

AlgebraElement AlgebraElement::scaled(const Scalar& c) const {
    AlgebraElement out(fib_);
    if (c.is_zero()) return out;
    for (const auto& [w, k] : terms_) out.terms_.emplace(w, k * c);
    return out;
}

AlgebraElement multiply(const AlgebraElement& a, const AlgebraElement& b, int budget) {
    const Fibration& f = a.fibration();
    const Category& E = f.domain();
    AlgebraElement out(f);
    for (const auto& [wa, ca] : a.terms()) {
        for (const auto& [wb, cb] : b.terms()) {
            // s_beta^* s_mu == 0 unless the two words share their range.
            if (E.target(wa.beta) != E.target(wb.alpha)) continue;
            for (const auto& [eta, lam] : ore_match(f, wa.beta, wb.alpha, budget)) {
                auto left = E.try_compose(wa.alpha, eta);
                auto right = E.try_compose(wb.beta, lam);
                if (left && right) out.add_term({*left, *right}, ca * cb);
            }
        }
    }
    return out;
}

AlgebraElement involute(const AlgebraElement& a) {
    AlgebraElement out(a.fibration());
    for (const auto& [w, c] : a.terms()) out.add_term({w.beta, w.alpha}, c.conj());
    return out;
}

AlgebraElement refine(const AlgebraElement& a, const MorphismId& c, int budget) {
    const Fibration& f = a.fibration();
    const Category& B = f.codomain();
    if (!B.has_morphism(c)) fail(Errc::unknown_morphism, "'" + c + "'");
    AlgebraElement out(f);
    for (const auto& [w, k] : a.terms()) {
        if (B.target(c) != f.map_object(f.domain().source(w.alpha)))
            fail(Errc::bad_input, "refinement morphism '" + c +
                                      "' is not composable with the source of (" + w.alpha +
                                      ", " + w.beta + ")");
        for (const auto& [alpha, beta] : detail::refine_span(f, {w.alpha, w.beta}, c, budget))
            out.add_term({alpha, beta}, k);
    }
    return out;
}

Trilean equal(const AlgebraElement& a, const AlgebraElement& b, int budget) {
    std::map<detail::Span, Scalar> diff;
    for (const auto& [w, c] : a.terms()) diff[{w.alpha, w.beta}] += c;
    for (const auto& [w, c] : b.terms()) {
        auto& slot = diff[{w.alpha, w.beta}];
        slot -= c;
        if (slot.is_zero()) diff.erase({w.alpha, w.beta});
    }
    bool complete = true;
    auto reduced = detail::normalize_spans(a.fibration(), diff, budget, &complete);
    if (reduced.empty()) return Trilean::yes;
    return complete ? Trilean::no : Trilean::unknown;
}

GroupoidFunction upsilon(const AlgebraElement& a) {
    GroupoidFunction out(a.fibration());
    for (const auto& [w, c] : a.terms()) out.add({w.alpha, w.beta}, c);
    return out;
}

// ---------------------------------------------------------------------------
// Representation checking

namespace {

const ScalarMatrix& proj_of(const RepAssignment& rep, const ObjectId& x) {
    auto it = rep.projections.find(x);
    if (it == rep.projections.end())
        fail(Errc::bad_input, "no projection matrix for object '" + x + "'");
    return it->second;
}

const ScalarMatrix& iso_of(const RepAssignment& rep, const MorphismId& m) {
    auto it = rep.isometries.find(m);
    if (it == rep.isometries.end())
        fail(Errc::bad_input, "no matrix for morphism '" + m + "'");
    return it->second;
}

}  // namespace

ValidationReport check_ck_relations(const Fibration& f, const RepAssignment& rep,
                                    const std::vector<MorphismId>& base_degrees) {
    const Category& E = f.domain();
    ValidationReport report;

    size_t dim = 0;
    bool first = true;
    auto check_dim = [&](const ScalarMatrix& m, const std::string& what) {
        if (m.rows() != m.cols()) fail(Errc::dimension_mismatch, what + " is not square");
        if (first) {
            dim = m.rows();
            first = false;
        } else if (m.rows() != dim) {
            fail(Errc::dimension_mismatch, what + " has dimension " + std::to_string(m.rows()) +
                                               ", expected " + std::to_string(dim));
        }
    };
    for (const auto& [x, m] : rep.projections) check_dim(m, "P_" + x);
    for (const auto& [a, m] : rep.isometries) check_dim(m, "S_" + a);

    double worst = 0;
    auto matches = [&](const ScalarMatrix& l, const ScalarMatrix& r) {
        double dev = max_abs_deviation(l, r);
        worst = std::max(worst, dev);
        return rep.exact ? l == r : dev <= rep.tolerance;
    };
    auto finish = [&](const std::string& name, bool ok, const std::string& detail) {
        std::ostringstream os;
        os << detail << (detail.empty() ? "" : "; ") << "max deviation " << worst;
        report.add(name, ok, 1, os.str());
        worst = 0;
    };

    std::vector<MorphismId> provided;
    for (const auto& [m, mat] : rep.isometries) provided.push_back(m);

    {  // (1) orthogonal projections
        bool ok = true;
        std::string detail;
        ScalarMatrix zero(dim, dim);
        for (const auto& [x, px] : rep.projections) {
            if (!matches(px * px, px) || !matches(px.adjoint(), px)) {
                ok = false;
                detail = "P_" + x + " is not a projection";
                break;
            }
            for (const auto& [y, py] : rep.projections) {
                if (x >= y) continue;
                if (!matches(px * py, zero)) {
                    ok = false;
                    detail = "P_" + x + " and P_" + y + " are not orthogonal";
                    break;
                }
            }
            if (!ok) break;
        }
        finish("relation1_orthogonal_projections", ok, detail);
    }

    {  // (2) multiplicativity on provided composable pairs
        bool ok = true;
        std::string detail;
        for (const auto& a : provided) {
            for (const auto& b : provided) {
                if (E.source(a) != E.target(b)) continue;
                auto ab = E.try_compose(a, b);
                if (!ab || !rep.isometries.count(*ab)) continue;
                if (!matches(iso_of(rep, *ab), iso_of(rep, a) * iso_of(rep, b))) {
                    ok = false;
                    detail = "S_" + *ab + " != S_" + a + " S_" + b;
                    break;
                }
            }
            if (!ok) break;
        }
        finish("relation2_multiplicative", ok, detail);
    }

    {  // (3) identities give the projections
        bool ok = true;
        std::string detail;
        for (const auto& [x, px] : rep.projections) {
            const auto& se = iso_of(rep, E.identity(x));
            if (!matches(se, px) || !matches(se.adjoint(), px)) {
                ok = false;
                detail = "S_Id(" + x + ") != P_" + x;
                break;
            }
        }
        finish("relation3_identities", ok, detail);
    }

    {  // (4) S*_a S_a == P_{s(a)}
        bool ok = true;
        std::string detail;
        for (const auto& a : provided) {
            const auto& sa = iso_of(rep, a);
            if (!matches(sa.adjoint() * sa, proj_of(rep, E.source(a)))) {
                ok = false;
                detail = "S*_" + a + " S_" + a + " != P_" + E.source(a);
                break;
            }
        }
        finish("relation4_partial_isometries", ok, detail);
    }

    {  // (5) distinct lifts of one base morphism are orthogonal
        bool ok = true;
        std::string detail;
        ScalarMatrix zero(dim, dim);
        for (const auto& a : provided) {
            for (const auto& b : provided) {
                if (a == b || f.map_morphism(a) != f.map_morphism(b)) continue;
                if (E.target(a) != E.target(b)) continue;
                if (!matches(iso_of(rep, b).adjoint() * iso_of(rep, a), zero)) {
                    ok = false;
                    detail = "S*_" + b + " S_" + a + " != 0";
                    break;
                }
            }
            if (!ok) break;
        }
        finish("relation5_orthogonal_lifts", ok, detail);
    }

    {  // (6) fiber sums per listed base morphism
        bool ok = true;
        std::string detail;
        for (const auto& b : base_degrees) {
            for (const auto& [x, px] : rep.projections) {
                if (f.codomain().target(b) != f.map_object(x)) continue;
                ScalarMatrix sum(dim, dim);
                for (const auto& alpha : enumerate_fiber(f, x, b)) {
                    const auto& sa = iso_of(rep, alpha);
                    sum = sum + sa * sa.adjoint();
                }
                if (!matches(sum, px)) {
                    ok = false;
                    detail = "sum over the fiber of '" + b + "' at '" + x + "' != P_" + x;
                    break;
                }
            }
            if (!ok) break;
        }
        finish("relation6_fiber_sums", ok, detail);
    }

    return report;
}

RepAssignment path_representation(const Fibration& f) {
    const Category& E = f.domain();
    auto paths = all_paths(f);
    const size_t n = paths.size();

    auto index_of = [&](const PathOracle& y) -> size_t {
        for (size_t i = 0; i < n; ++i) {
            if (paths[i].target() != y.target()) continue;
            if (path_equal(paths[i], y, 1).equal) return i;
        }
        fail(Errc::bad_input, "path image outside the enumerated path space");
    };

    RepAssignment rep;
    rep.exact = true;
    rep.tolerance = 0;
    for (const auto& x : E.objects()) {
        ScalarMatrix q(n, n);
        for (size_t i = 0; i < n; ++i)
            if (paths[i].target() == x) q.at(i, i) = Scalar(1);
        rep.projections[x] = q;
    }
    for (const auto& mu : E.morphisms_up_to(1)) {
        ScalarMatrix t(n, n);
        for (size_t j = 0; j < n; ++j) {
            if (paths[j].target() != E.source(mu)) continue;
            t.at(index_of(ind(mu, paths[j])), j) = Scalar(1);
        }
        rep.isometries[mu] = t;
    }
    return rep;
}

RepAssignment truncated_path_representation(const Fibration& f, int depth) {
    const auto* nk = dynamic_cast<const NkCategory*>(&f.codomain());
    if (!nk || !f.level_preserving())
        fail(Errc::path_space_not_finite,
             "truncated representations need a level-preserving fibration over N^k");
    if (depth < 1) fail(Errc::bad_input, "truncation depth must be positive");
    const Category& E = f.domain();

    const MorphismId box = degree_id(Degree((size_t)nk->k(), depth));
    std::vector<MorphismId> basis;
    for (const auto& x : E.objects())
        for (const auto& w : enumerate_fiber(f, x, box)) basis.push_back(w);
    std::sort(basis.begin(), basis.end());
    std::map<MorphismId, size_t> index;
    for (size_t i = 0; i < basis.size(); ++i) index[basis[i]] = i;
    const size_t n = basis.size();

    RepAssignment rep;
    rep.exact = true;
    rep.tolerance = 0;
    rep.approximate = true;
    for (const auto& x : E.objects()) {
        ScalarMatrix q(n, n);
        for (size_t i = 0; i < n; ++i)
            if (E.target(basis[i]) == x) q.at(i, i) = Scalar(1);
        rep.projections[x] = q;
    }
    for (const auto& mu : E.morphisms_up_to(depth)) {
        ScalarMatrix t(n, n);
        for (size_t j = 0; j < n; ++j) {
            if (E.target(basis[j]) != E.source(mu)) continue;
            MorphismId whole = E.compose(mu, basis[j]);
            MorphismId rest = nk->complements(box, f.map_morphism(whole)).at(0);
            MorphismId prefix = lift_factorization(f, whole, {box, rest})[0];
            t.at(index.at(prefix), j) = Scalar(1);
        }
        rep.isometries[mu] = t;
    }
    return rep;
}

ValidationReport injectivity_probe(const Fibration& f,
                                   const std::vector<std::pair<MorphismId, MorphismId>>& pairs,
                                   int budget) {
    auto lc = f.flags().get(kFlagLeftCancellativeBase);
    if (!lc || !*lc)
        fail(Errc::bad_input,
             "injectivity_probe needs the left_cancellative_base flag established");
    auto rc = f.flags().get(kFlagRightCancellativeBase);
    const Category& B = f.codomain();

    ValidationReport report;
    for (const auto& [alpha, beta] : pairs) {
        std::string name = "s(" + alpha + ") vs s(" + beta + ")";
        if (alpha == beta) {
            report.add(name, true, 0, "identical morphisms");
            continue;
        }
        Trilean eq = equal(AlgebraElement::generator(f, alpha),
                           AlgebraElement::generator(f, beta), budget);
        if (rc && *rc) {
            // Right cancellative base: distinct morphisms must separate.
            report.add(name, eq == Trilean::no, 0,
                       eq == Trilean::no ? "separated" : "collapse under a cancellative base");
            continue;
        }
        // Look for a collapse witness a with F(alpha) a == F(beta) a.
        std::string witness;
        const MorphismId fa = f.map_morphism(alpha);
        const MorphismId fb = f.map_morphism(beta);
        if (B.source(fa) == B.source(fb)) {
            for (int lv = 0; lv <= (B.finite() ? 1 : 4) && witness.empty(); ++lv)
                for (const auto& a : B.morphisms_up_to(lv)) {
                    if (B.target(a) != B.source(fa)) continue;
                    auto l = B.try_compose(fa, a);
                    auto r = B.try_compose(fb, a);
                    if (l && r && *l == *r) {
                        witness = a;
                        break;
                    }
                }
        }
        if (!witness.empty())
            report.add(name, eq != Trilean::yes, 0, "collapse witness '" + witness + "'");
        else
            report.add(name, eq != Trilean::yes, 0,
                       eq == Trilean::no ? "separated" : "no collapse witness found");
    }
    return report;
}

AlgebraElement parse_word_product(const Fibration& f, const std::string& text) {
    std::vector<AlgebraElement> factors;
    size_t i = 0;
    auto skip_ws = [&] {
        while (i < text.size() && std::isspace((unsigned char)text[i])) ++i;
    };
    skip_ws();
    while (i < text.size()) {
        char kind = text[i];
        if (kind != 's' && kind != 'p')
            fail(Errc::bad_input, "expected 's(...)' or 'p(...)' at position " +
                                      std::to_string(i) + " in '" + text + "'");
        ++i;
        if (i >= text.size() || text[i] != '(')
            fail(Errc::bad_input, "expected '(' after '" + std::string(1, kind) + "'");
        int depth = 1;
        size_t start = ++i;
        while (i < text.size() && depth > 0) {
            if (text[i] == '(') ++depth;
            if (text[i] == ')') --depth;
            ++i;
        }
        if (depth != 0) fail(Errc::bad_input, "unbalanced parentheses in '" + text + "'");
        std::string id = text.substr(start, i - start - 1);
        bool star = false;
        if (i < text.size() && text[i] == '*') {
            star = true;
            ++i;
        }
        if (kind == 'p') {
            if (star) fail(Errc::bad_input, "projections are self-adjoint; drop the '*'");
            factors.push_back(AlgebraElement::projection(f, id));
        } else {
            factors.push_back(star ? AlgebraElement::generator_star(f, id)
                                   : AlgebraElement::generator(f, id));
        }
        skip_ws();
    }
    if (factors.empty()) fail(Errc::bad_input, "empty word");
    AlgebraElement out = factors[0];
    for (size_t k = 1; k < factors.size(); ++k) out = multiply(out, factors[k]);
    return out;
}

}  // namespace conduche
