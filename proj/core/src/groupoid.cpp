#include "conduche/groupoid.hpp"

#include <algorithm>

#include "span_normalize.hpp"

namespace conduche {

namespace {

void require_span(const Fibration& f, const MorphismId& mu, const MorphismId& nu) {
    const Category& E = f.domain();
    if (!E.has_morphism(mu)) fail(Errc::unknown_morphism, "'" + mu + "'");
    if (!E.has_morphism(nu)) fail(Errc::unknown_morphism, "'" + nu + "'");
    if (E.source(mu) != E.source(nu))
        fail(Errc::bad_input, "(" + mu + ", " + nu + ") is not a span: sources differ");
}

// x2(F(nu), ext): the part of x(F(nu) ext) after the prefix nu.
MorphismId strip_prefix(const Fibration& f, const PathOracle& x, const MorphismId& nu,
                        const MorphismId& ext) {
    const MorphismId base = f.codomain().compose(f.map_morphism(nu), ext);
    const MorphismId whole = x.eval(base);
    auto lifts = lift_factorization(f, whole, {f.map_morphism(nu), ext});
    if (lifts[0] != nu)
        fail(Errc::path_not_in_cylinder, "'" + x.label() + "' does not end in '" + nu + "'");
    return lifts[1];
}

}  // namespace

GermBasisSet make_span(const Fibration& f, const MorphismId& mu, const MorphismId& nu) {
    require_span(f, mu, nu);
    return {mu, nu};
}

GermBasisSet invert_basis(const GermBasisSet& z) { return {z.nu, z.mu}; }

InclusionResult basis_inclusion(const Fibration& f, const GermBasisSet& inner,
                                const GermBasisSet& outer, int budget) {
    const Category& E = f.domain();
    const Category& B = f.codomain();
    require_span(f, inner.mu, inner.nu);
    require_span(f, outer.mu, outer.nu);
    if (E.target(inner.mu) != E.target(outer.mu) || E.target(inner.nu) != E.target(outer.nu))
        return InclusionResult::disjoint;

    // Candidates a with F(outer.mu) a == F(inner.mu) and F(outer.nu) a ==
    // F(inner.nu).
    std::vector<MorphismId> candidates;
    for (const auto& a : B.complements(f.map_morphism(outer.mu), f.map_morphism(inner.mu))) {
        auto nu_a = B.try_compose(f.map_morphism(outer.nu), a);
        if (nu_a && *nu_a == f.map_morphism(inner.nu)) candidates.push_back(a);
    }
    if (candidates.empty()) return InclusionResult::unknown;

    for (const auto& a : candidates) {
        for (const auto& g : enumerate_fiber(f, E.source(outer.mu), a, budget)) {
            auto m = E.try_compose(outer.mu, g);
            auto n = E.try_compose(outer.nu, g);
            if (m && n && *m == inner.mu && *n == inner.nu) return InclusionResult::subset;
        }
    }
    return InclusionResult::disjoint;
}

std::vector<GermBasisSet> intersect_basis(const Fibration& f, const GermBasisSet& a,
                                          const GermBasisSet& b, int budget) {
    const Category& E = f.domain();
    require_span(f, a.mu, a.nu);
    require_span(f, b.mu, b.nu);
    if (E.target(a.mu) != E.target(b.mu) || E.target(a.nu) != E.target(b.nu)) return {};

    auto comp = detail::span_completion(f, {a.mu, a.nu}, {b.mu, b.nu}, budget);
    if (!comp) return {};
    auto cells_a = detail::refine_span(f, {a.mu, a.nu}, comp->first, budget);
    auto cells_b = detail::refine_span(f, {b.mu, b.nu}, comp->second, budget);
    std::sort(cells_a.begin(), cells_a.end());
    std::sort(cells_b.begin(), cells_b.end());
    std::vector<detail::Span> common;
    std::set_intersection(cells_a.begin(), cells_a.end(), cells_b.begin(), cells_b.end(),
                          std::back_inserter(common));
    std::vector<GermBasisSet> out;
    for (const auto& [mu, nu] : common) out.push_back({mu, nu});
    return out;
}

std::vector<GermBasisSet> product_basis(const Fibration& f, const GermBasisSet& a,
                                        const GermBasisSet& b, int budget) {
    const Category& E = f.domain();
    require_span(f, a.mu, a.nu);
    require_span(f, b.mu, b.nu);
    if (E.target(a.nu) != E.target(b.mu)) return {};  // ranges cannot meet

    std::vector<GermBasisSet> out;
    for (const auto& [eta, lam] : ore_match(f, a.nu, b.mu, budget)) {
        auto left = E.try_compose(a.mu, eta);
        auto right = E.try_compose(b.nu, lam);
        if (left && right) out.push_back({*left, *right});
    }
    std::sort(out.begin(), out.end());
    return out;
}

// ---------------------------------------------------------------------------
// GroupoidFunction

GroupoidFunction::GroupoidFunction(Fibration f, int budget)
    : fib_(std::move(f)), budget_(budget) {}

void GroupoidFunction::add(const GermBasisSet& cell, const Scalar& coeff) {
    if (coeff.is_zero()) return;
    require_span(fib_, cell.mu, cell.nu);
    auto it = terms_.find(cell);
    if (it == terms_.end())
        terms_.emplace(cell, coeff);
    else
        it->second += coeff;
    normalize();
}

void GroupoidFunction::normalize() {
    std::map<detail::Span, Scalar> spans;
    for (const auto& [cell, c] : terms_) spans[{cell.mu, cell.nu}] = c;
    auto reduced = detail::normalize_spans(fib_, spans, budget_);
    terms_.clear();
    for (const auto& [s, c] : reduced) terms_[{s.first, s.second}] = c;
}

GroupoidFunction& GroupoidFunction::operator+=(const GroupoidFunction& o) {
    for (const auto& [cell, c] : o.terms_) {
        auto it = terms_.find(cell);
        if (it == terms_.end())
            terms_.emplace(cell, c);
        else
            it->second += c;
    }
    normalize();
    return *this;
}

GroupoidFunction GroupoidFunction::operator-() const {
    GroupoidFunction out(fib_, budget_);
    for (const auto& [cell, c] : terms_) out.terms_.emplace(cell, -c);
    return out;
}

GroupoidFunction GroupoidFunction::star() const {
    GroupoidFunction out(fib_, budget_);
    for (const auto& [cell, c] : terms_) out.terms_[invert_basis(cell)] = c.conj();
    out.normalize();
    return out;
}

GroupoidFunction GroupoidFunction::indicator(const Fibration& f, const GermBasisSet& cell) {
    GroupoidFunction out(f);
    out.add(cell, Scalar(1));
    return out;
}

bool operator==(const GroupoidFunction& a, const GroupoidFunction& b) {
    GroupoidFunction diff = a;
    diff += -b;
    return diff.is_zero();
}

GroupoidFunction convolve(const GroupoidFunction& f, const GroupoidFunction& g) {
    GroupoidFunction out(f.fibration());
    for (const auto& [c1, s1] : f.terms())
        for (const auto& [c2, s2] : g.terms())
            for (const auto& cell : product_basis(f.fibration(), c1, c2)) out.add(cell, s1 * s2);
    return out;
}

// ---------------------------------------------------------------------------
// Pointwise germs

Trilean equal_germ(const GermElement& a, const GermElement& b, int depth) {
    const Fibration& f = a.x.fibration();
    const Category& E = f.domain();
    const Category& B = f.codomain();
    require_span(f, a.mu, a.nu);
    require_span(f, b.mu, b.nu);

    if (a.x.target() != b.x.target()) return Trilean::no;
    if (a.x.eval(f.map_morphism(a.nu)) != a.nu || b.x.eval(f.map_morphism(b.nu)) != b.nu)
        fail(Errc::path_not_in_cylinder, "germ triple has x outside Z(nu)");

    // (1) the underlying paths agree.
    auto cmp = path_equal(a.x, b.x, depth);
    if (!cmp.equal) return Trilean::no;

    if (E.target(a.mu) != E.target(b.mu)) return Trilean::no;

    // (3) a simultaneous completion of the base images.
    auto comp = B.complete_cospan_pair(f.map_morphism(a.mu), f.map_morphism(b.mu),
                                       f.map_morphism(a.nu), f.map_morphism(b.nu), 10000);
    if (!comp) return B.finite() ? Trilean::no : Trilean::unknown;

    // (2) the local maps agree on a refinement cell: search extensions c of
    // the completion for mu gamma == mu' gamma'.
    const ObjectId ext_at = B.source(B.compose(f.map_morphism(a.nu), comp->first));
    for (int lv = 0; lv <= (B.finite() ? 1 : depth); ++lv) {
        for (const auto& c : B.morphisms_into(ext_at, lv)) {
            MorphismId ea = B.compose(comp->first, c);
            MorphismId eb = B.compose(comp->second, c);
            MorphismId gamma_a, gamma_b;
            try {
                gamma_a = strip_prefix(f, a.x, a.nu, ea);
                gamma_b = strip_prefix(f, b.x, b.nu, eb);
            } catch (const Error&) {
                continue;
            }
            auto left = E.try_compose(a.mu, gamma_a);
            auto right = E.try_compose(b.mu, gamma_b);
            if (left && right && *left == *right) return Trilean::yes;
        }
    }
    return B.finite() ? Trilean::no : Trilean::unknown;
}

GermTable::GermTable(const Fibration& f) : fib_(f) {
    const Category& E = f.domain();
    paths_ = all_paths(f);

    auto path_index = [&](const PathOracle& x) -> int {
        for (size_t i = 0; i < paths_.size(); ++i) {
            if (paths_[i].target() != x.target()) continue;
            if (path_equal(paths_[i], x, 1).equal) return (int)i;
        }
        return -1;
    };

    // Enumerate triples and keep canonical representatives.
    std::vector<int> germ_path;  // source path per germ
    for (size_t p = 0; p < paths_.size(); ++p) {
        const PathOracle& x = paths_[p];
        for (const auto& nu : E.morphisms_up_to(1)) {
            if (E.target(nu) != x.target()) continue;
            if (x.eval(f.map_morphism(nu)) != nu) continue;
            for (const auto& mu : E.morphisms_up_to(1)) {
                if (E.source(mu) != E.source(nu)) continue;
                GermElement g{mu, nu, x};
                bool fresh = true;
                for (const auto& rep : germs_)
                    if (equal_germ(rep, g, 1) == Trilean::yes) {
                        fresh = false;
                        break;
                    }
                if (fresh) {
                    germs_.push_back(g);
                    germ_path.push_back((int)p);
                }
            }
        }
    }

    src_.resize(germs_.size());
    rng_.resize(germs_.size());
    inv_.resize(germs_.size(), -1);
    for (size_t i = 0; i < germs_.size(); ++i) {
        src_[i] = germ_path[i];
        PathOracle image = ind(germs_[i].mu, res(germs_[i].nu, germs_[i].x));
        rng_[i] = path_index(image);
        if (rng_[i] < 0) fail(Errc::bad_input, "germ image path not found");
    }
    for (size_t i = 0; i < germs_.size(); ++i) {
        inv_[i] = find(germs_[i].nu, germs_[i].mu, paths_[(size_t)rng_[i]]);
        if (inv_[i] < 0) fail(Errc::bad_input, "germ inverse not found");
    }
    unit_germ_.resize(paths_.size());
    for (size_t p = 0; p < paths_.size(); ++p) {
        const MorphismId e = E.identity(paths_[p].target());
        unit_germ_[p] = find(e, e, paths_[p]);
        if (unit_germ_[p] < 0) fail(Errc::bad_input, "unit germ not found");
    }

    // Composition table: [mu,nu,x][sigma,tau,y] == [mu g, tau h, y] where
    // nu g == sigma h comes from a completion evaluated along x.
    table_.assign(germs_.size(), std::vector<int>(germs_.size(), -1));
    for (size_t i = 0; i < germs_.size(); ++i) {
        for (size_t j = 0; j < germs_.size(); ++j) {
            if (src_[i] != rng_[j]) continue;
            const GermElement& gi = germs_[i];
            const GermElement& gj = germs_[j];
            const PathOracle& x = paths_[(size_t)src_[i]];
            auto [aa, bb] = ore_complete(fib_.codomain(), fib_.map_morphism(gi.nu),
                                         fib_.map_morphism(gj.mu));
            MorphismId gamma = strip_prefix(fib_, x, gi.nu, aa);
            MorphismId eta = strip_prefix(fib_, x, gj.mu, bb);
            MorphismId left = E.compose(gi.mu, gamma);
            MorphismId right = E.compose(gj.nu, eta);
            int k = find(left, right, paths_[(size_t)src_[j]]);
            if (k < 0) fail(Errc::bad_input, "composite germ not found");
            table_[i][j] = k;
        }
    }
}

int GermTable::compose(int g1, int g2) const {
    if (g1 < 0 || g2 < 0) return -1;
    return table_[(size_t)g1][(size_t)g2];
}

int GermTable::find(const MorphismId& mu, const MorphismId& nu, const PathOracle& x) const {
    const Fibration& f = fib_;
    if (f.domain().target(nu) != x.target()) return -1;
    if (x.eval(f.map_morphism(nu)) != nu) return -1;
    GermElement probe{mu, nu, x};
    for (size_t i = 0; i < germs_.size(); ++i)
        if (equal_germ(germs_[i], probe, 1) == Trilean::yes) return (int)i;
    return -1;
}

int GermTable::find_path(const PathOracle& x) const {
    for (size_t i = 0; i < paths_.size(); ++i) {
        if (paths_[i].target() != x.target()) continue;
        if (path_equal(paths_[i], x, 1).equal) return (int)i;
    }
    return -1;
}

bool GermTable::in_cell(int germ, const GermBasisSet& cell) const {
    if (germ < 0) return false;
    const PathOracle& y = paths_[(size_t)src_[(size_t)germ]];
    return find(cell.mu, cell.nu, y) == germ;
}

GermTable enumerate_germs(const Fibration& f) { return GermTable(f); }

// ---------------------------------------------------------------------------
// Left regular representation on an orbit

RegularRepresentation::RegularRepresentation(const Fibration& f, const PathOracle& u, int budget)
    : table_(f) {
    int pu = table_.find_path(u);
    if (pu < 0) fail(Errc::bad_input, "the unit path is not in the finite path space");
    for (size_t i = 0; i < table_.germs().size(); ++i)
        if (table_.source_of((int)i) == pu) orbit_.push_back((int)i);
    if ((int)orbit_.size() > budget)
        fail(Errc::orbit_budget_exceeded, "orbit has " + std::to_string(orbit_.size()) +
                                              " germs, budget " + std::to_string(budget));
    for (size_t j = 0; j < orbit_.size(); ++j) position_[orbit_[j]] = j;
}

ScalarMatrix RegularRepresentation::matrix_of(const GermBasisSet& cell) const {
    const size_t n = orbit_.size();
    ScalarMatrix m(n, n);
    for (size_t j = 0; j < n; ++j) {
        int xi = orbit_[j];
        for (size_t h = 0; h < table_.germs().size(); ++h) {
            if (!table_.in_cell((int)h, cell)) continue;
            if (table_.source_of((int)h) != table_.range_of(xi)) continue;
            int k = table_.compose((int)h, xi);
            if (k < 0) continue;
            auto it = position_.find(k);
            if (it == position_.end())
                fail(Errc::bad_input, "translation left the orbit");
            m.at(it->second, j) += Scalar(1);
        }
    }
    return m;
}

}  // namespace conduche
