#include "conduche/fibration.hpp"

#include <algorithm>
#include <set>

namespace conduche {

std::optional<bool> Flags::get(const std::string& key) const {
    std::lock_guard<std::mutex> lock(mx_);
    auto it = vals_.find(key);
    if (it == vals_.end()) return std::nullopt;
    return it->second.first;
}

int Flags::depth_of(const std::string& key) const {
    std::lock_guard<std::mutex> lock(mx_);
    auto it = vals_.find(key);
    return it == vals_.end() ? 0 : it->second.second;
}

void Flags::set(const std::string& key, bool value, int depth) const {
    std::lock_guard<std::mutex> lock(mx_);
    vals_[key] = {value, depth};
}

Fibration::Fibration(CategoryPtr domain, CategoryPtr codomain, ObjectMap omap, MorphismMap mmap,
                     std::string kind)
    : domain_(std::move(domain)),
      codomain_(std::move(codomain)),
      omap_(std::move(omap)),
      mmap_(std::move(mmap)),
      kind_(std::move(kind)),
      flags_(std::make_shared<Flags>()) {
    if (domain_->finite() && codomain_->finite()) {
        level_preserving_ = true;
        for (const auto& x : domain_->objects())
            for (const auto& m : domain_->morphisms_into_up_to(x, 1))
                if (codomain_->level(mmap_(m)) != domain_->level(m)) {
                    level_preserving_ = false;
                    break;
                }
    }
}

Fibration make_identity_fibration(CategoryPtr cat) {
    CategoryPtr c = cat;
    Fibration f(c, c, [](const ObjectId& x) { return x; },
                [](const MorphismId& m) { return m; }, "identity");
    f.set_level_preserving(true);
    return f;
}

// ---------------------------------------------------------------------------
// Functor validation

ValidationReport validate_functor(const Fibration& f, int depth) {
    ValidationReport rep;
    const Category& E = f.domain();
    const Category& B = f.codomain();
    const int d = E.finite() ? 1 : depth;

    {
        bool ok = true;
        std::string detail;
        for (const auto& x : E.objects()) {
            ObjectId fx;
            try {
                fx = f.map_object(x);
            } catch (const Error& e) {
                ok = false;
                detail = std::string("object map fails on '") + x + "': " + e.what();
                break;
            }
            if (!B.has_object(fx)) {
                ok = false;
                detail = "F(" + x + ") = '" + fx + "' is not an object of the codomain";
                break;
            }
            if (f.map_morphism(E.identity(x)) != B.identity(fx)) {
                ok = false;
                detail = "F does not preserve the identity of '" + x + "'";
                break;
            }
        }
        rep.add("objects_and_identities", ok, d, detail);
    }

    auto all = E.morphisms_up_to(d);
    {
        bool ok = true;
        std::string detail;
        for (const auto& m : all) {
            MorphismId fm;
            try {
                fm = f.map_morphism(m);
            } catch (const Error& e) {
                ok = false;
                detail = std::string("morphism map fails on '") + m + "': " + e.what();
                break;
            }
            if (!B.has_morphism(fm)) {
                ok = false;
                detail = "F(" + m + ") = '" + fm + "' is not a morphism of the codomain";
                break;
            }
            if (B.source(fm) != f.map_object(E.source(m)) ||
                B.target(fm) != f.map_object(E.target(m))) {
                ok = false;
                detail = "F(" + m + ") has wrong endpoints";
                break;
            }
        }
        rep.add("endpoints", ok, d, detail);
    }

    {
        bool ok = true;
        std::string detail;
        for (const auto& a : all) {
            for (const auto& b : all) {
                if (E.source(a) != E.target(b)) continue;
                auto ab = E.try_compose(a, b);
                if (!ab) continue;
                auto fab = B.try_compose(f.map_morphism(a), f.map_morphism(b));
                if (!fab || *fab != f.map_morphism(*ab)) {
                    ok = false;
                    detail = "F(" + a + " . " + b + ") != F(" + a + ") . F(" + b + ")";
                    break;
                }
            }
            if (!ok) break;
        }
        rep.add("composition", ok, d, detail);
    }

    bool ok = rep.pass();
    f.flags().set(kFlagFunctorValid, ok, d);
    return rep;
}

// ---------------------------------------------------------------------------
// Discrete Conduche condition

namespace {

// All splittings m = u . v in c, with u at the target end.
std::vector<std::pair<MorphismId, MorphismId>> two_factorizations(const Category& c,
                                                                  const MorphismId& m) {
    std::vector<std::pair<MorphismId, MorphismId>> out;
    int cap = c.additive_levels() ? c.level(m) : (c.finite() ? 1 : c.level(m) + 1);
    for (int lu = 0; lu <= cap; ++lu)
        for (const auto& u : c.morphisms_into(c.target(m), lu))
            for (const auto& v : c.complements(u, m)) out.emplace_back(u, v);
    return out;
}

}  // namespace

std::vector<MorphismId> enumerate_fiber(const Fibration& f, const ObjectId& X,
                                        const MorphismId& b, int budget) {
    const Category& E = f.domain();
    const Category& B = f.codomain();
    if (!E.has_object(X)) fail(Errc::unknown_object, "'" + X + "'");
    if (!B.has_morphism(b)) fail(Errc::unknown_morphism, "'" + b + "'");
    if (B.target(b) != f.map_object(X))
        fail(Errc::bad_input, "fiber of '" + b + "' at '" + X + "': target(b) != F(X)");

    std::vector<int> levels;
    if (E.finite()) {
        levels = {0, 1};
    } else if (f.level_preserving()) {
        levels = {B.level(b)};
    } else {
        fail(Errc::fiber_infinite,
             "cannot bound the fiber search: graded domain without a level-preserving functor");
    }

    std::vector<MorphismId> out;
    long long seen = 0;
    for (int lv : levels) {
        for (const auto& m : E.morphisms_into(X, lv)) {
            if (++seen > budget)
                fail(Errc::fiber_infinite, "fiber enumeration exceeded budget of " +
                                               std::to_string(budget));
            if (f.map_morphism(m) == b) out.push_back(m);
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

DcfResult check_dcf(const Fibration& f, int depth) {
    const Category& E = f.domain();
    const Category& B = f.codomain();
    DcfResult res;
    res.depth = E.finite() ? 1 : depth;

    for (const auto& phi : E.morphisms_up_to(res.depth)) {
        const MorphismId fphi = f.map_morphism(phi);
        const ObjectId tgt = E.target(phi);
        for (const auto& [u, v] : two_factorizations(B, fphi)) {
            int lifts = 0;
            int cap = E.additive_levels() ? E.level(phi) : 1;
            for (int lu = 0; lu <= cap && lifts < 2; ++lu) {
                for (const auto& p : E.morphisms_into(tgt, lu)) {
                    if (f.map_morphism(p) != u) continue;
                    for (const auto& q : E.complements(p, phi))
                        if (f.map_morphism(q) == v) ++lifts;
                    if (lifts >= 2) break;
                }
            }
            if (lifts != 1) {
                res.pass = false;
                res.counterexample = DcfCounterexample{phi, u, v, lifts};
                f.flags().set(kFlagDcf, false, res.depth);
                return res;
            }
        }
    }
    f.flags().set(kFlagDcf, true, res.depth);
    return res;
}

std::vector<MorphismId> lift_factorization(const Fibration& f, const MorphismId& phi,
                                           const std::vector<MorphismId>& parts) {
    const Category& E = f.domain();
    const Category& B = f.codomain();
    if (parts.empty()) fail(Errc::bad_factorization, "no parts given");
    if (B.compose_chain(parts) != f.map_morphism(phi))
        fail(Errc::bad_factorization, "parts do not compose to F(" + phi + ")");

    std::vector<MorphismId> lifts;
    MorphismId current = phi;
    for (size_t i = 0; i + 1 < parts.size(); ++i) {
        // Remaining base factor after parts[i].
        MorphismId rest = B.compose_chain(
            std::vector<MorphismId>(parts.begin() + (long)i + 1, parts.end()));
        std::vector<std::pair<MorphismId, MorphismId>> found;
        const ObjectId tgt = E.target(current);
        int cap = E.additive_levels() ? E.level(current) : 1;
        for (int lu = 0; lu <= cap; ++lu) {
            for (const auto& p : E.morphisms_into(tgt, lu)) {
                if (f.map_morphism(p) != parts[i]) continue;
                for (const auto& q : E.complements(p, current))
                    if (f.map_morphism(q) == rest) found.emplace_back(p, q);
            }
        }
        if (found.empty())
            fail(Errc::no_lift, "factorization of F(" + phi + ") at part " + std::to_string(i) +
                                    " has no lift");
        if (found.size() > 1)
            fail(Errc::multiple_lifts, "factorization of F(" + phi + ") at part " +
                                           std::to_string(i) + " has " +
                                           std::to_string(found.size()) + " lifts");
        lifts.push_back(found[0].first);
        current = found[0].second;
    }
    lifts.push_back(current);
    return lifts;
}

ValidationReport check_row_finite(const Fibration& f, int depth, int budget) {
    const Category& B = f.codomain();
    ValidationReport rep;
    const int d = B.finite() ? 1 : depth;
    bool ok = true;
    std::string detail;
    for (const auto& X : f.domain().objects()) {
        const ObjectId fx = f.map_object(X);
        for (int lv = 0; lv <= d && ok; ++lv) {
            for (const auto& b : B.morphisms_into(fx, lv)) {
                try {
                    enumerate_fiber(f, X, b, budget);
                } catch (const Error& e) {
                    ok = false;
                    detail = std::string("fiber of '") + b + "' at '" + X + "': " + e.what();
                    break;
                }
            }
        }
        if (!ok) break;
    }
    rep.add("row_finite", ok, d, detail);
    f.flags().set(kFlagRowFinite, ok, d);
    return rep;
}

ValidationReport check_strong_surjectivity(const Fibration& f, int depth) {
    const Category& B = f.codomain();
    ValidationReport rep;
    const int d = B.finite() ? 1 : depth;

    bool obj_ok = true;
    std::string detail;
    std::set<ObjectId> image;
    for (const auto& x : f.domain().objects()) image.insert(f.map_object(x));
    for (const auto& y : B.objects())
        if (!image.count(y)) {
            obj_ok = false;
            detail = "object '" + y + "' has no preimage";
            break;
        }
    rep.add("object_surjectivity", obj_ok, d, detail);

    bool fib_ok = true;
    detail.clear();
    for (const auto& X : f.domain().objects()) {
        const ObjectId fx = f.map_object(X);
        for (int lv = 0; lv <= d && fib_ok; ++lv)
            for (const auto& b : B.morphisms_into(fx, lv))
                if (enumerate_fiber(f, X, b).empty()) {
                    fib_ok = false;
                    detail = "no morphism into '" + X + "' over '" + b + "'";
                    break;
                }
        if (!fib_ok) break;
    }
    rep.add("incoming_morphism_surjectivity", fib_ok, d, detail);

    f.flags().set(kFlagStronglySurjective, obj_ok && fib_ok, d);
    return rep;
}

CancellationReport morphism_properties(const Category& cat, int depth) {
    CancellationReport rep;
    rep.depth = cat.finite() ? 1 : depth;
    auto all = cat.morphisms_up_to(rep.depth);

    for (const auto& a : all) {
        MorphismProperties props;
        // monic: a.b == a.g forces b == g
        for (size_t i = 0; i < all.size() && props.monic; ++i) {
            const auto& b = all[i];
            if (cat.target(b) != cat.source(a)) continue;
            auto ab = cat.try_compose(a, b);
            if (!ab) continue;
            for (size_t j = i + 1; j < all.size(); ++j) {
                const auto& g = all[j];
                if (cat.target(g) != cat.source(a) || cat.source(g) != cat.source(b)) continue;
                auto ag = cat.try_compose(a, g);
                if (ag && *ag == *ab) {
                    props.monic = false;
                    break;
                }
            }
        }
        // epi: b.a == g.a forces b == g
        for (size_t i = 0; i < all.size() && props.epi; ++i) {
            const auto& b = all[i];
            if (cat.source(b) != cat.target(a)) continue;
            auto ba = cat.try_compose(b, a);
            if (!ba) continue;
            for (size_t j = i + 1; j < all.size(); ++j) {
                const auto& g = all[j];
                if (cat.source(g) != cat.target(a) || cat.target(g) != cat.target(b)) continue;
                auto ga = cat.try_compose(g, a);
                if (ga && *ga == *ba) {
                    props.epi = false;
                    break;
                }
            }
        }
        rep.left_cancellative = rep.left_cancellative && props.monic;
        rep.right_cancellative = rep.right_cancellative && props.epi;
        rep.per_morphism[a] = props;
    }
    return rep;
}

// ---------------------------------------------------------------------------
// Ore machinery

std::pair<MorphismId, MorphismId> ore_complete(const Category& cat, const MorphismId& m,
                                               const MorphismId& n, int budget) {
    if (!cat.has_morphism(m)) fail(Errc::unknown_morphism, "'" + m + "'");
    if (!cat.has_morphism(n)) fail(Errc::unknown_morphism, "'" + n + "'");
    if (cat.target(m) != cat.target(n))
        fail(Errc::not_a_cospan, "targets of '" + m + "' and '" + n + "' differ");
    auto c = cat.complete_cospan(m, n, budget);
    if (!c)
        fail(Errc::no_completion,
             "no completion of (" + m + ", " + n + ") within budget " + std::to_string(budget));
    return *c;
}

namespace {

// All completions (p, q) of the cospan (m, n) with legs up to max_level.
std::vector<std::pair<MorphismId, MorphismId>> all_completions(const Category& cat,
                                                               const MorphismId& m,
                                                               const MorphismId& n, int max_level,
                                                               int budget) {
    std::vector<std::pair<MorphismId, MorphismId>> out;
    long long tried = 0;
    auto ps = cat.morphisms_into_up_to(cat.source(m), max_level);
    auto qs = cat.morphisms_into_up_to(cat.source(n), max_level);
    for (const auto& p : ps) {
        auto mp = cat.try_compose(m, p);
        if (!mp) continue;
        for (const auto& q : qs) {
            if (++tried > budget) return out;
            auto nq = cat.try_compose(n, q);
            if (nq && *nq == *mp) out.emplace_back(p, q);
        }
    }
    return out;
}

OreReport check_ore_impl(const Category& cat, int depth, int budget, bool allow_fast_paths) {
    OreReport rep;
    rep.depth = cat.finite() ? 1 : depth;
    rep.method = "exhaustive";
    auto all = cat.morphisms_up_to(rep.depth);

    // Right Ore first: every cospan completes.
    for (size_t i = 0; i < all.size() && rep.right_ore; ++i)
        for (size_t j = i; j < all.size(); ++j) {
            const auto& m = all[i];
            const auto& n = all[j];
            if (cat.target(m) != cat.target(n)) continue;
            if (!cat.complete_cospan(m, n, budget)) {
                rep.right_ore = false;
                rep.strongly_right_ore = false;
                rep.counterexample = "cospan (" + m + ", " + n + ") has no completion";
                break;
            }
        }
    if (!rep.right_ore) return rep;

    if (allow_fast_paths && cat.finite()) {
        // Pullbacks: a completion through which every other completion
        // factors uniquely.
        bool has_pullbacks = true;
        for (size_t i = 0; i < all.size() && has_pullbacks; ++i)
            for (size_t j = i; j < all.size(); ++j) {
                const auto& m = all[i];
                const auto& n = all[j];
                if (cat.target(m) != cat.target(n)) continue;
                auto comps = all_completions(cat, m, n, 1, budget);
                bool found = false;
                for (const auto& [t, w] : comps) {
                    bool universal = true;
                    for (const auto& [p, q] : comps) {
                        int mediating = 0;
                        for (const auto& u : cat.morphisms_into_up_to(cat.source(t), 1)) {
                            if (cat.source(u) != cat.source(p)) continue;
                            if (cat.try_compose(t, u) == p && cat.try_compose(w, u) == q)
                                ++mediating;
                        }
                        if (mediating != 1) {
                            universal = false;
                            break;
                        }
                    }
                    if (universal) {
                        found = true;
                        break;
                    }
                }
                if (!found) {
                    has_pullbacks = false;
                    break;
                }
            }
        if (has_pullbacks) {
            rep.method = "pullbacks";
            return rep;
        }
    }

    if (allow_fast_paths) {
        auto cancel = morphism_properties(cat, rep.depth);
        if (cancel.left_cancellative) {
            rep.method = "left_cancellative";
            return rep;
        }
    }

    // Exhaustive strong condition: any two completions of a cospan are
    // jointly completable.
    rep.method = "exhaustive";
    for (size_t i = 0; i < all.size() && rep.strongly_right_ore; ++i)
        for (size_t j = i; j < all.size(); ++j) {
            const auto& m = all[i];
            const auto& n = all[j];
            if (cat.target(m) != cat.target(n)) continue;
            auto comps = all_completions(cat, m, n, rep.depth, budget);
            for (size_t s = 0; s < comps.size() && rep.strongly_right_ore; ++s)
                for (size_t t = s; t < comps.size(); ++t) {
                    const auto& [p1, q1] = comps[s];
                    const auto& [p2, q2] = comps[t];
                    if (!cat.complete_cospan_pair(p1, p2, q1, q2, budget)) {
                        rep.strongly_right_ore = false;
                        rep.counterexample = "completions (" + p1 + "," + q1 + ") and (" + p2 +
                                             "," + q2 + ") of (" + m + "," + n +
                                             ") are not jointly completable";
                        break;
                    }
                }
            if (!rep.strongly_right_ore) break;
        }
    return rep;
}

}  // namespace

OreReport check_ore(const Category& cat, int depth, int budget) {
    return check_ore_impl(cat, depth, budget, true);
}

OreReport check_ore_exhaustive(const Category& cat, int depth, int budget) {
    return check_ore_impl(cat, depth, budget, false);
}

std::vector<std::pair<MorphismId, MorphismId>> ore_match(const Fibration& f,
                                                         const MorphismId& beta,
                                                         const MorphismId& sigma, int budget) {
    const Category& E = f.domain();
    if (E.target(beta) != E.target(sigma))
        fail(Errc::not_a_cospan, "r(" + beta + ") != r(" + sigma + ")");
    // Order the legs canonically so that swapping the arguments swaps the
    // matched pairs even when the completion rule is not symmetric.
    if (sigma < beta) {
        auto rev = ore_match(f, sigma, beta, budget);
        std::vector<std::pair<MorphismId, MorphismId>> out;
        out.reserve(rev.size());
        for (const auto& [eta, lam] : rev) out.emplace_back(lam, eta);
        return out;
    }
    auto [a, b] = ore_complete(f.codomain(), f.map_morphism(beta), f.map_morphism(sigma), budget);
    std::vector<std::pair<MorphismId, MorphismId>> out;
    auto etas = enumerate_fiber(f, E.source(beta), a, budget);
    auto lambdas = enumerate_fiber(f, E.source(sigma), b, budget);
    for (const auto& eta : etas) {
        auto be = E.try_compose(beta, eta);
        if (!be) continue;
        for (const auto& lam : lambdas) {
            auto sl = E.try_compose(sigma, lam);
            if (sl && *sl == *be) out.emplace_back(eta, lam);
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// Image corestriction

namespace {

class ImageCategory : public Category {
public:
    ImageCategory(CategoryPtr domain, CategoryPtr codomain, Fibration::ObjectMap omap,
                  Fibration::MorphismMap mmap, bool level_preserving)
        : dom_(std::move(domain)),
          cod_(std::move(codomain)),
          omap_(std::move(omap)),
          mmap_(std::move(mmap)),
          level_preserving_(level_preserving) {
        std::set<ObjectId> objs;
        for (const auto& x : dom_->objects()) objs.insert(omap_(x));
        objects_.assign(objs.begin(), objs.end());
    }

    std::string backend() const override { return "image(" + cod_->backend() + ")"; }
    bool finite() const override { return dom_->finite() || cod_->finite(); }
    std::vector<ObjectId> objects() const override { return objects_; }
    bool has_morphism(const MorphismId& m) const override {
        if (!cod_->has_morphism(m)) return false;
        auto ms = morphisms_into(cod_->target(m), cod_->level(m));
        return std::binary_search(ms.begin(), ms.end(), m);
    }
    ObjectId source(const MorphismId& m) const override { return cod_->source(m); }
    ObjectId target(const MorphismId& m) const override { return cod_->target(m); }
    MorphismId identity(const ObjectId& x) const override { return cod_->identity(x); }
    std::optional<MorphismId> try_compose(const MorphismId& a,
                                          const MorphismId& b) const override {
        return cod_->try_compose(a, b);  // images are closed under composition
    }
    int level(const MorphismId& m) const override { return cod_->level(m); }
    bool additive_levels() const override { return cod_->additive_levels(); }

    std::vector<MorphismId> morphisms_into(const ObjectId& y, int lvl) const override {
        std::set<MorphismId> out;
        for (const auto& x : dom_->objects()) {
            if (omap_(x) != y) continue;
            if (dom_->finite()) {
                for (const auto& m : dom_->morphisms_into_up_to(x, 1)) {
                    auto fm = mmap_(m);
                    if (cod_->level(fm) == lvl) out.insert(fm);
                }
            } else if (level_preserving_) {
                for (const auto& m : dom_->morphisms_into(x, lvl)) out.insert(mmap_(m));
            } else {
                fail(Errc::fiber_infinite, "cannot enumerate the image of a graded functor "
                                           "without level preservation");
            }
        }
        return {out.begin(), out.end()};
    }

private:
    CategoryPtr dom_;
    CategoryPtr cod_;
    Fibration::ObjectMap omap_;
    Fibration::MorphismMap mmap_;
    bool level_preserving_;
    std::vector<ObjectId> objects_;
};

}  // namespace

Fibration restrict_to_image(const Fibration& f) {
    auto dcf = f.flags().get(kFlagDcf);
    auto split = f.flags().get(kFlagLocallySplit);
    auto ore = f.flags().get(kFlagStronglyRightOreBase);
    if (!dcf || !split || !ore)
        fail(Errc::bad_input,
             "restrict_to_image needs the dcf, locally_split and strongly_right_ore_base flags "
             "to be established first");

    auto image = std::make_shared<ImageCategory>(
        f.domain_ptr(), f.codomain_ptr(),
        [f](const ObjectId& x) { return f.map_object(x); },
        [f](const MorphismId& m) { return f.map_morphism(m); }, f.level_preserving());

    Fibration out(f.domain_ptr(), image, [f](const ObjectId& x) { return f.map_object(x); },
                  [f](const MorphismId& m) { return f.map_morphism(m); }, f.kind());
    out.set_level_preserving(f.level_preserving());
    out.set_splitting_hook(f.splitting_hook());
    out.set_name(f.name().empty() ? "image" : f.name() + ".image");
    out.flags().set(kFlagStronglySurjective, true, f.flags().depth_of(kFlagDcf));
    if (*dcf) out.flags().set(kFlagDcf, true, f.flags().depth_of(kFlagDcf));
    if (*split) out.flags().set(kFlagLocallySplit, true, f.flags().depth_of(kFlagLocallySplit));
    // The corestriction of a KPf stays a KPf: the image category inherits the
    // strong right Ore property through lifted completions.
    if (*ore)
        out.flags().set(kFlagStronglyRightOreBase, true,
                        f.flags().depth_of(kFlagStronglyRightOreBase));
    if (auto rf = f.flags().get(kFlagRowFinite))
        out.flags().set(kFlagRowFinite, *rf, f.flags().depth_of(kFlagRowFinite));
    return out;
}

}  // namespace conduche
