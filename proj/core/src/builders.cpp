#include "conduche/builders.hpp"

#include <algorithm>
#include <set>

namespace conduche {

std::shared_ptr<const GroupCategory> build_group_category(const GroupTable& table,
                                                          const ObjectId& object_name) {
    const auto& els = table.elements;
    const size_t n = els.size();
    if (n == 0) fail(Errc::not_a_group, "empty element list");
    std::map<std::string, size_t> index;
    for (size_t i = 0; i < n; ++i)
        if (!index.emplace(els[i], i).second)
            fail(Errc::not_a_group, "duplicate element '" + els[i] + "'");
    if (table.products.size() != n) fail(Errc::not_a_group, "product table has wrong shape");
    for (const auto& row : table.products) {
        if (row.size() != n) fail(Errc::not_a_group, "product table has wrong shape");
        for (const auto& v : row)
            if (!index.count(v)) fail(Errc::not_a_group, "product '" + v + "' is not an element");
    }
    auto mul = [&](size_t i, size_t j) { return index.at(table.products[i][j]); };

    for (size_t i = 0; i < n; ++i)
        for (size_t j = 0; j < n; ++j)
            for (size_t k = 0; k < n; ++k)
                if (mul(mul(i, j), k) != mul(i, mul(j, k)))
                    fail(Errc::not_a_group, "associativity fails on (" + els[i] + ", " + els[j] +
                                                ", " + els[k] + ")");

    size_t e = n;
    for (size_t i = 0; i < n; ++i) {
        bool unit = true;
        for (size_t j = 0; j < n; ++j)
            if (mul(i, j) != j || mul(j, i) != j) {
                unit = false;
                break;
            }
        if (unit) {
            e = i;
            break;
        }
    }
    if (e == n) fail(Errc::not_a_group, "no two-sided identity");

    std::map<MorphismId, MorphismId> inverses;
    for (size_t i = 0; i < n; ++i) {
        bool found = false;
        for (size_t j = 0; j < n; ++j)
            if (mul(i, j) == e && mul(j, i) == e) {
                inverses[els[i]] = els[j];
                found = true;
                break;
            }
        if (!found) fail(Errc::not_a_group, "'" + els[i] + "' has no inverse");
    }

    ExplicitCategory::Data d;
    d.objects = {object_name};
    for (const auto& g : els) d.morphisms.push_back({g, object_name, object_name});
    d.identities[object_name] = els[e];
    for (size_t i = 0; i < n; ++i)
        for (size_t j = 0; j < n; ++j)
            d.composition[{els[i], els[j]}] = table.products[i][j];
    return std::make_shared<GroupCategory>(std::move(d), object_name, std::move(inverses));
}

std::shared_ptr<const PosetCategory> build_poset_category(
    const std::vector<ObjectId>& elements, const std::vector<std::pair<ObjectId, ObjectId>>& leq) {
    std::set<ObjectId> els(elements.begin(), elements.end());
    for (const auto& [p, q] : leq) {
        els.insert(p);
        els.insert(q);
    }
    std::set<std::pair<ObjectId, ObjectId>> rel(leq.begin(), leq.end());
    for (const auto& x : els) rel.insert({x, x});

    for (const auto& [p, q] : rel)
        if (p != q && rel.count({q, p}))
            fail(Errc::not_a_poset, "antisymmetry fails on {" + p + ", " + q + "}");
    for (const auto& [p, q] : rel)
        for (const auto& [q2, r] : rel)
            if (q == q2 && !rel.count({p, r}))
                fail(Errc::not_a_poset,
                     "transitivity fails: " + p + " <= " + q + " <= " + r + " but not " + p +
                         " <= " + r);

    ExplicitCategory::Data d;
    d.objects.assign(els.begin(), els.end());
    for (const auto& [p, q] : rel) d.morphisms.push_back({PosetCategory::arrow(p, q), p, q});
    for (const auto& x : els) d.identities[x] = PosetCategory::arrow(x, x);
    for (const auto& [p, q] : rel)
        for (const auto& [q2, r] : rel)
            if (q == q2)
                d.composition[{PosetCategory::arrow(q, r), PosetCategory::arrow(p, q)}] =
                    PosetCategory::arrow(p, r);
    return std::make_shared<PosetCategory>(std::move(d),
                                           std::vector<std::pair<ObjectId, ObjectId>>(rel.begin(),
                                                                                      rel.end()));
}

// ---------------------------------------------------------------------------
// k-graphs

namespace {

void validate_squares(const KGraphCategory& cat) {
    const auto& skel = cat.skeleton();
    const int k = cat.k();

    // Endpoint consistency of each square e.f == f2.e2.
    for (const auto& sq : skel.squares) {
        const auto& e = cat.edge(sq.e);
        const auto& f = cat.edge(sq.f);
        const auto& f2 = cat.edge(sq.f2);
        const auto& e2 = cat.edge(sq.e2);
        if (e.src != f.tgt || f2.src != e2.tgt || e.tgt != f2.tgt || f.src != e2.src)
            fail(Errc::inconsistent_squares, "square (" + sq.e + "," + sq.f + "," + sq.f2 + "," +
                                                 sq.e2 + ") does not commute on endpoints");
    }

    // The squares must biject ascending with descending two-color paths for
    // every color pair.
    for (int lo = 0; lo < k; ++lo) {
        for (int hi = lo + 1; hi < k; ++hi) {
            std::set<std::pair<std::string, std::string>> ascending, descending;
            for (const auto& ed : skel.edges) {
                for (const auto& fd : skel.edges) {
                    if (ed.color == lo && fd.color == hi && ed.src == fd.tgt)
                        ascending.insert({ed.id, fd.id});
                    if (ed.color == lo && fd.color == hi && fd.src == ed.tgt)
                        descending.insert({fd.id, ed.id});
                }
            }
            std::set<std::pair<std::string, std::string>> dom, img;
            for (const auto& sq : skel.squares) {
                if (cat.edge(sq.e).color != lo || cat.edge(sq.f).color != hi) continue;
                if (!dom.insert({sq.e, sq.f}).second)
                    fail(Errc::inconsistent_squares,
                         "two squares share the ascending path (" + sq.e + ", " + sq.f + ")");
                if (!img.insert({sq.f2, sq.e2}).second)
                    fail(Errc::inconsistent_squares,
                         "two squares share the descending path (" + sq.f2 + ", " + sq.e2 + ")");
            }
            if (dom != ascending || img != descending)
                fail(Errc::inconsistent_squares,
                     "squares for colors (" + std::to_string(lo) + "," + std::to_string(hi) +
                         ") are not a bijection between two-color paths");
        }
    }
}

}  // namespace

CategoryWithFibration build_kgraph(const KGraphSkeleton& skeleton, bool validate) {
    auto cat = std::make_shared<KGraphCategory>(skeleton);
    if (validate) validate_squares(*cat);

    const int k = cat->k();
    auto base = std::make_shared<NkCategory>(k);
    auto catp = cat;  // keep the concrete type for the maps
    Fibration fib(
        cat, base, [base](const ObjectId&) { return ObjectId("*"); },
        [catp](const MorphismId& m) { return degree_id(catp->degree(m)); }, "kgraph");
    fib.set_level_preserving(true);

    if (validate) {
        // For k >= 3 this is the coherence test for triple rewrites; for
        // k <= 2 it cross-checks the square data end to end.
        auto res = check_dcf(fib, std::max(2, k));
        if (!res.pass) {
            const auto& ce = *res.counterexample;
            fail(Errc::inconsistent_squares,
                 "unique factorization fails: '" + ce.phi + "' over (" + ce.left + ", " +
                     ce.right + ") has " + std::to_string(ce.lifts) + " lifts");
        }
        bool source_free = true;
        for (const auto& v : cat->objects())
            for (int c = 0; c < k; ++c)
                if (cat->edges_into(v, c).empty()) source_free = false;
        fib.flags().set(kFlagRowFinite, true, -1);
        fib.flags().set(kFlagRightOreBase, true, -1);
        fib.flags().set(kFlagStronglyRightOreBase, true, -1);
        fib.flags().set(kFlagLeftCancellativeBase, true, -1);
        fib.flags().set(kFlagRightCancellativeBase, true, -1);
        fib.flags().set(kFlagStronglySurjective, source_free, -1);
        fib.flags().set(kFlagLocallySplit, source_free, -1);
    }
    return {cat, std::move(fib)};
}

// ---------------------------------------------------------------------------
// Presheaves of sections over a right Ore poset

CategoryWithFibration build_presheaf_sections(std::shared_ptr<const PosetCategory> base,
                                              const PresheafData& data) {
    auto ore = check_ore(*base, 1);
    if (!ore.right_ore) fail(Errc::base_not_ore, ore.counterexample);

    auto stalk = [&](const ObjectId& u) -> const std::vector<std::string>& {
        auto it = data.stalks.find(u);
        if (it == data.stalks.end())
            fail(Errc::non_functorial_restriction, "no stalk given for '" + u + "'");
        return it->second;
    };
    auto restrict = [&](const ObjectId& u, const ObjectId& v,
                        const std::string& a) -> std::string {
        if (u == v) {
            auto it = data.restrictions.find({u, v});
            if (it != data.restrictions.end() && it->second.at(a) != a)
                fail(Errc::non_functorial_restriction,
                     "restriction along " + u + " <= " + u + " is not the identity");
            return a;
        }
        auto it = data.restrictions.find({u, v});
        if (it == data.restrictions.end())
            fail(Errc::non_functorial_restriction,
                 "no restriction map for " + v + " <= " + u);
        auto jt = it->second.find(a);
        if (jt == it->second.end())
            fail(Errc::non_functorial_restriction,
                 "restriction " + v + " <= " + u + " undefined on '" + a + "'");
        return jt->second;
    };

    const auto objs = base->objects();
    // Contravariant functoriality: restricting along W <= V <= U in stages
    // agrees with the direct map.
    for (const auto& u : objs)
        for (const auto& v : objs)
            for (const auto& w : objs) {
                if (!(base->leq(w, v) && base->leq(v, u))) continue;
                for (const auto& a : stalk(u))
                    if (restrict(v, w, restrict(u, v, a)) != restrict(u, w, a))
                        fail(Errc::non_functorial_restriction,
                             "restrictions along " + w + " <= " + v + " <= " + u +
                                 " do not compose on '" + a + "'");
            }

    std::vector<ObjectId> elements;
    std::vector<std::pair<ObjectId, ObjectId>> leq;
    for (const auto& u : objs)
        for (const auto& a : stalk(u)) elements.push_back(section_object(u, a));
    for (const auto& u : objs)
        for (const auto& a : stalk(u))
            for (const auto& v : objs)
                if (base->leq(v, u))
                    leq.push_back({section_object(v, restrict(u, v, a)), section_object(u, a)});
    auto total = build_poset_category(elements, leq);

    auto basep = base;
    Fibration fib(
        total, base,
        [](const ObjectId& x) { return decode_pair(x).first; },
        [](const MorphismId& m) {
            auto [from, to] = decode_pair(m);
            return PosetCategory::arrow(decode_pair(from).first, decode_pair(to).first);
        },
        "sections");
    fib.set_level_preserving(true);

    auto dcf = check_dcf(fib, 1);
    if (!dcf.pass)
        fail(Errc::non_functorial_restriction, "section data violates unique factorization");
    check_row_finite(fib, 1);
    check_strong_surjectivity(fib, 1);
    fib.flags().set(kFlagRightOreBase, ore.right_ore, ore.depth);
    fib.flags().set(kFlagStronglyRightOreBase, ore.strongly_right_ore, ore.depth);
    // Splitting (V, U) -> ((V, a|V), (U, a)) exists for every section object.
    fib.flags().set(kFlagLocallySplit, true, -1);
    return {total, std::move(fib)};
}

}  // namespace conduche
