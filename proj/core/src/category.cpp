#include "conduche/category.hpp"

#include <algorithm>
#include <set>

namespace conduche {

namespace {

constexpr char kSep = '|';
constexpr char kEsc = '\\';

void append_escaped(std::string& out, const std::string& part) {
    for (char c : part) {
        if (c == kSep || c == kEsc) out.push_back(kEsc);
        out.push_back(c);
    }
}

}  // namespace

std::string encode_parts(const std::vector<std::string>& parts) {
    std::string out;
    for (size_t i = 0; i < parts.size(); ++i) {
        if (i) out.push_back(kSep);
        append_escaped(out, parts[i]);
    }
    return out;
}

std::vector<std::string> decode_parts(const std::string& encoded) {
    std::vector<std::string> parts(1);
    for (size_t i = 0; i < encoded.size(); ++i) {
        char c = encoded[i];
        if (c == kEsc && i + 1 < encoded.size()) {
            parts.back().push_back(encoded[++i]);
        } else if (c == kSep) {
            parts.emplace_back();
        } else {
            parts.back().push_back(c);
        }
    }
    return parts;
}

std::string encode_pair(const std::string& a, const std::string& b) {
    return encode_parts({a, b});
}

std::pair<std::string, std::string> decode_pair(const std::string& encoded) {
    auto parts = decode_parts(encoded);
    if (parts.size() != 2) fail(Errc::bad_input, "expected a pair id, got '" + encoded + "'");
    return {parts[0], parts[1]};
}

// ---------------------------------------------------------------------------
// Category base

std::vector<ObjectId> Category::objects_at(int lvl) const {
    if (lvl == 0) return objects();
    return {};
}

std::vector<ObjectId> Category::objects_up_to(int max_level) const {
    std::vector<ObjectId> out;
    for (int l = 0; l <= max_level; ++l) {
        auto xs = objects_at(l);
        out.insert(out.end(), xs.begin(), xs.end());
        if (finite_objects() && l == 0) break;
    }
    return out;
}

bool Category::has_object(const ObjectId& x) const {
    auto xs = objects();
    return std::find(xs.begin(), xs.end(), x) != xs.end();
}

bool Category::is_identity(const MorphismId& m) const {
    if (!has_morphism(m)) return false;
    return identity(target(m)) == m;
}

MorphismId Category::compose(const MorphismId& after, const MorphismId& before) const {
    if (!has_morphism(after)) fail(Errc::unknown_morphism, "'" + after + "'");
    if (!has_morphism(before)) fail(Errc::unknown_morphism, "'" + before + "'");
    if (source(after) != target(before))
        fail(Errc::not_composable,
             "source(" + after + ") = " + source(after) + " != target(" + before + ") = " +
                 target(before));
    auto c = try_compose(after, before);
    if (!c) fail(Errc::not_composable, "no composite recorded for (" + after + ", " + before + ")");
    return *c;
}

MorphismId Category::compose_chain(const std::vector<MorphismId>& factors) const {
    if (factors.empty()) fail(Errc::bad_input, "empty composition chain");
    MorphismId acc = factors.front();
    for (size_t i = 1; i < factors.size(); ++i) acc = compose(acc, factors[i]);
    return acc;
}

std::vector<MorphismId> Category::morphisms_into_up_to(const ObjectId& x, int max_level) const {
    std::vector<MorphismId> out;
    for (int l = 0; l <= max_level; ++l) {
        auto ms = morphisms_into(x, l);
        out.insert(out.end(), ms.begin(), ms.end());
    }
    return out;
}

std::vector<MorphismId> Category::morphisms_up_to(int max_level) const {
    std::vector<MorphismId> out;
    for (int ol = 0; ol <= (finite_objects() ? 0 : max_level); ++ol) {
        for (const auto& x : objects_at(ol)) {
            auto ms = morphisms_into_up_to(x, max_level);
            out.insert(out.end(), ms.begin(), ms.end());
        }
    }
    return out;
}

std::vector<MorphismId> Category::complements(const MorphismId& prefix,
                                              const MorphismId& whole) const {
    std::vector<MorphismId> out;
    if (target(prefix) != target(whole)) return out;
    const ObjectId at = source(prefix);
    if (additive_levels()) {
        int lv = level(whole) - level(prefix);
        if (lv < 0) return out;
        for (const auto& v : morphisms_into(at, lv))
            if (try_compose(prefix, v) == whole) out.push_back(v);
        return out;
    }
    // Finite backends: scan every morphism into source(prefix).
    int cap = finite() ? 1 : level(whole) + 1;
    for (int lv = 0; lv <= cap; ++lv)
        for (const auto& v : morphisms_into(at, lv))
            if (try_compose(prefix, v) == whole) out.push_back(v);
    std::sort(out.begin(), out.end());
    return out;
}

std::optional<std::pair<MorphismId, MorphismId>> Category::search_cospan_completion(
    const MorphismId& m, const MorphismId& n, int budget, const MorphismId* m2,
    const MorphismId* n2) const {
    const ObjectId sm = source(m);
    const ObjectId sn = source(n);
    int tried = 0;
    int level_cap = finite() ? 1 : 24;
    for (int total = 0; total <= 2 * level_cap; ++total) {
        bool any = false;
        for (int lp = std::max(0, total - level_cap); lp <= std::min(total, level_cap); ++lp) {
            int lq = total - lp;
            auto ps = morphisms_into(sm, lp);
            auto qs = morphisms_into(sn, lq);
            if (!ps.empty() && !qs.empty()) any = true;
            for (const auto& p : ps) {
                auto mp = try_compose(m, p);
                if (!mp) continue;
                for (const auto& q : qs) {
                    if (++tried > budget) return std::nullopt;
                    auto nq = try_compose(n, q);
                    if (!nq || *mp != *nq) continue;
                    if (m2 && n2) {
                        auto m2p = try_compose(*m2, p);
                        auto n2q = try_compose(*n2, q);
                        if (!m2p || !n2q || *m2p != *n2q) continue;
                    }
                    return std::make_pair(p, q);
                }
            }
        }
        if (!any && total > 2) break;  // ran out of morphisms at every split
    }
    return std::nullopt;
}

std::optional<std::pair<MorphismId, MorphismId>> Category::complete_cospan(const MorphismId& m,
                                                                           const MorphismId& n,
                                                                           int budget) const {
    return search_cospan_completion(m, n, budget);
}

std::optional<std::pair<MorphismId, MorphismId>> Category::complete_cospan_pair(
    const MorphismId& m1, const MorphismId& n1, const MorphismId& m2, const MorphismId& n2,
    int budget) const {
    if (source(m1) != source(m2) || source(n1) != source(n2)) return std::nullopt;
    return search_cospan_completion(m1, n1, budget, &m2, &n2);
}

// ---------------------------------------------------------------------------
// ExplicitCategory

ExplicitCategory::ExplicitCategory(Data data, std::string tag)
    : data_(std::move(data)), tag_(std::move(tag)) {
    std::sort(data_.objects.begin(), data_.objects.end());
    for (const auto& rec : data_.morphisms) {
        if (by_id_.count(rec.id))
            fail(Errc::bad_input, "duplicate morphism id '" + rec.id + "'");
        by_id_[rec.id] = rec;
    }
    for (const auto& rec : data_.morphisms) {
        auto idit = data_.identities.find(rec.tgt);
        if (idit != data_.identities.end() && idit->second == rec.id) continue;
        into_[rec.tgt].push_back(rec.id);
    }
    for (auto& [x, ms] : into_) std::sort(ms.begin(), ms.end());
}

const MorphismRecord& ExplicitCategory::record(const MorphismId& m) const {
    auto it = by_id_.find(m);
    if (it == by_id_.end()) fail(Errc::unknown_morphism, "'" + m + "'");
    return it->second;
}

MorphismId ExplicitCategory::identity(const ObjectId& x) const {
    auto it = data_.identities.find(x);
    if (it == data_.identities.end()) fail(Errc::unknown_object, "'" + x + "'");
    return it->second;
}

std::optional<MorphismId> ExplicitCategory::try_compose(const MorphismId& after,
                                                        const MorphismId& before) const {
    if (!has_morphism(after) || !has_morphism(before)) return std::nullopt;
    if (record(after).src != record(before).tgt) return std::nullopt;
    // Identity composites are implied even when the table omits them.
    auto it = data_.composition.find({after, before});
    if (it != data_.composition.end()) return it->second;
    if (is_identity(after)) return before;
    if (is_identity(before)) return after;
    return std::nullopt;
}

int ExplicitCategory::level(const MorphismId& m) const {
    const auto& rec = record(m);
    auto it = data_.identities.find(rec.tgt);
    return (it != data_.identities.end() && it->second == m) ? 0 : 1;
}

std::vector<MorphismId> ExplicitCategory::morphisms_into(const ObjectId& x, int lvl) const {
    if (!has_object(x)) fail(Errc::unknown_object, "'" + x + "'");
    if (lvl == 0) {
        auto it = data_.identities.find(x);
        if (it == data_.identities.end()) return {};
        return {it->second};
    }
    if (lvl != 1) return {};
    auto it = into_.find(x);
    return it == into_.end() ? std::vector<MorphismId>{} : it->second;
}

std::vector<MorphismId> ExplicitCategory::all_morphisms() const {
    std::vector<MorphismId> out;
    out.reserve(by_id_.size());
    for (const auto& [id, rec] : by_id_) out.push_back(id);
    return out;
}

// ---------------------------------------------------------------------------
// GroupCategory

GroupCategory::GroupCategory(Data data, ObjectId obj, std::map<MorphismId, MorphismId> inverses)
    : ExplicitCategory(std::move(data), "group"), obj_(std::move(obj)), inv_(std::move(inverses)) {}

const MorphismId& GroupCategory::inverse(const MorphismId& g) const {
    auto it = inv_.find(g);
    if (it == inv_.end()) fail(Errc::unknown_morphism, "'" + g + "'");
    return it->second;
}

std::optional<std::pair<MorphismId, MorphismId>> GroupCategory::complete_cospan(
    const MorphismId& m, const MorphismId& n, int /*budget*/) const {
    return std::make_pair(compose(inverse(m), n), identity(obj_));
}

std::optional<std::pair<MorphismId, MorphismId>> GroupCategory::complete_cospan_pair(
    const MorphismId& m1, const MorphismId& n1, const MorphismId& m2, const MorphismId& n2,
    int /*budget*/) const {
    // a = m1^-1 n1 b for free b; the second equation pins the existence test.
    MorphismId a = compose(inverse(m1), n1);
    if (compose(m2, a) != n2) return std::nullopt;
    return std::make_pair(a, identity(obj_));
}

// ---------------------------------------------------------------------------
// PosetCategory

PosetCategory::PosetCategory(Data data, std::vector<std::pair<ObjectId, ObjectId>> leq)
    : ExplicitCategory(std::move(data), "poset") {
    for (auto& [p, q] : leq) below_[q].push_back(p);
    for (auto& [q, ps] : below_) {
        std::sort(ps.begin(), ps.end());
        ps.erase(std::unique(ps.begin(), ps.end()), ps.end());
    }
}

bool PosetCategory::leq(const ObjectId& p, const ObjectId& q) const {
    auto it = below_.find(q);
    if (it == below_.end()) return false;
    return std::binary_search(it->second.begin(), it->second.end(), p);
}

std::vector<std::pair<ObjectId, ObjectId>> PosetCategory::leq_pairs() const {
    std::vector<std::pair<ObjectId, ObjectId>> out;
    for (const auto& [q, ps] : below_)
        for (const auto& p : ps) out.emplace_back(p, q);
    return out;
}

std::optional<ObjectId> PosetCategory::meet(const ObjectId& p, const ObjectId& q) const {
    std::vector<ObjectId> lower;
    for (const auto& w : objects())
        if (leq(w, p) && leq(w, q)) lower.push_back(w);
    if (lower.empty()) return std::nullopt;
    // Maximum lower bound when one dominates all others; otherwise the first
    // in sorted order keeps the choice deterministic.
    for (const auto& w : lower) {
        bool top = true;
        for (const auto& v : lower)
            if (!leq(v, w)) {
                top = false;
                break;
            }
        if (top) return w;
    }
    return lower.front();
}

std::optional<std::pair<MorphismId, MorphismId>> PosetCategory::complete_cospan(
    const MorphismId& m, const MorphismId& n, int /*budget*/) const {
    auto w = meet(source(m), source(n));
    if (!w) return std::nullopt;
    return std::make_pair(arrow(*w, source(m)), arrow(*w, source(n)));
}

std::optional<std::pair<MorphismId, MorphismId>> PosetCategory::complete_cospan_pair(
    const MorphismId& m1, const MorphismId& n1, const MorphismId& m2, const MorphismId& n2,
    int budget) const {
    if (source(m1) != source(m2) || source(n1) != source(n2)) return std::nullopt;
    // All squares over a poset commute, so any completion of (m1, n1) whose
    // legs compose with the second cospan works.
    auto c = complete_cospan(m1, n1, budget);
    return c;
}

// ---------------------------------------------------------------------------
// ProductCategory

ProductCategory::ProductCategory(std::vector<CategoryPtr> factors) : factors_(std::move(factors)) {
    if (factors_.empty()) fail(Errc::bad_input, "product of an empty family");
}

std::vector<std::string> ProductCategory::split(const MorphismId& m) const {
    auto parts = decode_parts(m);
    if (parts.size() != factors_.size())
        fail(Errc::unknown_morphism, "'" + m + "' is not a " + std::to_string(factors_.size()) +
                                         "-tuple");
    return parts;
}

bool ProductCategory::finite() const {
    for (const auto& f : factors_)
        if (!f->finite()) return false;
    return true;
}

std::vector<ObjectId> ProductCategory::objects() const {
    std::vector<std::vector<std::string>> acc{{}};
    for (const auto& f : factors_) {
        std::vector<std::vector<std::string>> next;
        for (const auto& partial : acc)
            for (const auto& x : f->objects()) {
                auto t = partial;
                t.push_back(x);
                next.push_back(std::move(t));
            }
        acc = std::move(next);
    }
    std::vector<ObjectId> out;
    out.reserve(acc.size());
    for (const auto& tuple : acc) out.push_back(encode_parts(tuple));
    std::sort(out.begin(), out.end());
    return out;
}

bool ProductCategory::has_morphism(const MorphismId& m) const {
    auto parts = decode_parts(m);
    if (parts.size() != factors_.size()) return false;
    for (size_t i = 0; i < parts.size(); ++i)
        if (!factors_[i]->has_morphism(parts[i])) return false;
    return true;
}

ObjectId ProductCategory::source(const MorphismId& m) const {
    auto parts = split(m);
    std::vector<std::string> out;
    for (size_t i = 0; i < parts.size(); ++i) out.push_back(factors_[i]->source(parts[i]));
    return encode_parts(out);
}

ObjectId ProductCategory::target(const MorphismId& m) const {
    auto parts = split(m);
    std::vector<std::string> out;
    for (size_t i = 0; i < parts.size(); ++i) out.push_back(factors_[i]->target(parts[i]));
    return encode_parts(out);
}

MorphismId ProductCategory::identity(const ObjectId& x) const {
    auto parts = split(x);
    std::vector<std::string> out;
    for (size_t i = 0; i < parts.size(); ++i) out.push_back(factors_[i]->identity(parts[i]));
    return encode_parts(out);
}

std::optional<MorphismId> ProductCategory::try_compose(const MorphismId& after,
                                                       const MorphismId& before) const {
    auto a = split(after);
    auto b = split(before);
    std::vector<std::string> out;
    for (size_t i = 0; i < a.size(); ++i) {
        auto c = factors_[i]->try_compose(a[i], b[i]);
        if (!c) return std::nullopt;
        out.push_back(*c);
    }
    return encode_parts(out);
}

int ProductCategory::level(const MorphismId& m) const {
    auto parts = split(m);
    int lv = 0;
    for (size_t i = 0; i < parts.size(); ++i) lv = std::max(lv, factors_[i]->level(parts[i]));
    return lv;
}

std::vector<MorphismId> ProductCategory::morphisms_into(const ObjectId& x, int lvl) const {
    auto xs = split(x);
    // Tuples whose maximum component level equals lvl.
    std::vector<std::vector<std::string>> acc{{}};
    for (size_t i = 0; i < factors_.size(); ++i) {
        std::vector<std::vector<std::string>> next;
        auto pool = factors_[i]->morphisms_into_up_to(xs[i], lvl);
        for (const auto& partial : acc)
            for (const auto& m : pool) {
                auto t = partial;
                t.push_back(m);
                next.push_back(std::move(t));
            }
        acc = std::move(next);
    }
    std::vector<MorphismId> out;
    for (const auto& tuple : acc) {
        int mx = 0;
        for (size_t i = 0; i < tuple.size(); ++i)
            mx = std::max(mx, factors_[i]->level(tuple[i]));
        if (mx == lvl) out.push_back(encode_parts(tuple));
    }
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<MorphismId> ProductCategory::complements(const MorphismId& prefix,
                                                     const MorphismId& whole) const {
    auto p = split(prefix);
    auto w = split(whole);
    std::vector<std::vector<std::string>> acc{{}};
    for (size_t i = 0; i < factors_.size(); ++i) {
        auto options = factors_[i]->complements(p[i], w[i]);
        if (options.empty()) return {};
        std::vector<std::vector<std::string>> next;
        for (const auto& partial : acc)
            for (const auto& v : options) {
                auto t = partial;
                t.push_back(v);
                next.push_back(std::move(t));
            }
        acc = std::move(next);
    }
    std::vector<MorphismId> out;
    for (const auto& tuple : acc) out.push_back(encode_parts(tuple));
    std::sort(out.begin(), out.end());
    return out;
}

std::optional<std::pair<MorphismId, MorphismId>> ProductCategory::complete_cospan(
    const MorphismId& m, const MorphismId& n, int budget) const {
    auto ms = split(m);
    auto ns = split(n);
    std::vector<std::string> ps, qs;
    for (size_t i = 0; i < factors_.size(); ++i) {
        auto c = factors_[i]->complete_cospan(ms[i], ns[i], budget);
        if (!c) return std::nullopt;
        ps.push_back(c->first);
        qs.push_back(c->second);
    }
    return std::make_pair(encode_parts(ps), encode_parts(qs));
}

std::optional<std::pair<MorphismId, MorphismId>> ProductCategory::complete_cospan_pair(
    const MorphismId& m1, const MorphismId& n1, const MorphismId& m2, const MorphismId& n2,
    int budget) const {
    auto a1 = split(m1), b1 = split(n1), a2 = split(m2), b2 = split(n2);
    std::vector<std::string> ps, qs;
    for (size_t i = 0; i < factors_.size(); ++i) {
        auto c = factors_[i]->complete_cospan_pair(a1[i], b1[i], a2[i], b2[i], budget);
        if (!c) return std::nullopt;
        ps.push_back(c->first);
        qs.push_back(c->second);
    }
    return std::make_pair(encode_parts(ps), encode_parts(qs));
}

// ---------------------------------------------------------------------------
// SliceCategory

SliceCategory::SliceCategory(CategoryPtr base, ObjectId apex)
    : base_(std::move(base)), apex_(std::move(apex)) {
    if (!base_->has_object(apex_)) fail(Errc::unknown_object, "'" + apex_ + "'");
}

std::vector<ObjectId> SliceCategory::objects() const {
    if (!base_->finite())
        fail(Errc::bad_input, "slice over a graded category has infinitely many objects; "
                              "enumerate with objects_at(level)");
    return base_->morphisms_into_up_to(apex_, 1);
}

std::vector<ObjectId> SliceCategory::objects_at(int lvl) const {
    return base_->morphisms_into(apex_, lvl);
}

bool SliceCategory::has_object(const ObjectId& x) const {
    return base_->has_morphism(x) && base_->target(x) == apex_;
}

bool SliceCategory::has_morphism(const MorphismId& m) const {
    auto parts = decode_parts(m);
    if (parts.size() != 2) return false;
    const auto& a = parts[0];
    const auto& g = parts[1];
    if (!has_object(a) || !base_->has_morphism(g)) return false;
    return base_->source(a) == base_->target(g);
}

ObjectId SliceCategory::source(const MorphismId& m) const {
    auto [a, g] = decode_pair(m);
    return base_->compose(a, g);
}

ObjectId SliceCategory::target(const MorphismId& m) const { return decode_pair(m).first; }

MorphismId SliceCategory::identity(const ObjectId& x) const {
    if (!has_object(x)) fail(Errc::unknown_object, "'" + x + "' is not a morphism into the apex");
    return make(x, base_->identity(base_->source(x)));
}

std::optional<MorphismId> SliceCategory::try_compose(const MorphismId& after,
                                                     const MorphismId& before) const {
    if (!has_morphism(after) || !has_morphism(before)) return std::nullopt;
    auto [a, g] = decode_pair(after);
    auto [b, d] = decode_pair(before);
    auto ag = base_->try_compose(a, g);
    if (!ag || *ag != b) return std::nullopt;
    auto gd = base_->try_compose(g, d);
    if (!gd) return std::nullopt;
    return make(a, *gd);
}

int SliceCategory::level(const MorphismId& m) const { return base_->level(decode_pair(m).second); }

std::vector<MorphismId> SliceCategory::morphisms_into(const ObjectId& x, int lvl) const {
    if (!has_object(x)) fail(Errc::unknown_object, "'" + x + "'");
    std::vector<MorphismId> out;
    for (const auto& g : base_->morphisms_into(base_->source(x), lvl)) out.push_back(make(x, g));
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<MorphismId> SliceCategory::complements(const MorphismId& prefix,
                                                   const MorphismId& whole) const {
    auto [a, g] = decode_pair(prefix);
    auto [a2, g2] = decode_pair(whole);
    if (a != a2) return {};
    auto ag = base_->try_compose(a, g);
    if (!ag) return {};
    std::vector<MorphismId> out;
    for (const auto& d : base_->complements(g, g2)) out.push_back(make(*ag, d));
    std::sort(out.begin(), out.end());
    return out;
}

// ---------------------------------------------------------------------------
// Reports and free functions

bool ValidationReport::pass() const {
    for (const auto& c : checks)
        if (!c.pass) return false;
    return true;
}

void ValidationReport::add(std::string name, bool ok, int depth, std::string detail) {
    checks.push_back({std::move(name), ok, depth, std::move(detail)});
}

const CheckResult* ValidationReport::find(const std::string& name) const {
    for (const auto& c : checks)
        if (c.name == name) return &c;
    return nullptr;
}

MorphismId compose(const Category& cat, const MorphismId& after, const MorphismId& before) {
    return cat.compose(after, before);
}

ValidationReport validate_category(const Category& cat, int depth) {
    ValidationReport rep;
    const int d = cat.finite() ? 1 : depth;

    std::vector<MorphismId> all = cat.morphisms_up_to(d);
    std::sort(all.begin(), all.end());
    all.erase(std::unique(all.begin(), all.end()), all.end());

    // Identity assignment is a bijection objects <-> level-0 morphisms.
    {
        bool ok = true;
        std::string detail;
        std::set<MorphismId> ids;
        for (const auto& x : cat.objects_up_to(cat.finite_objects() ? 0 : d)) {
            MorphismId e;
            try {
                e = cat.identity(x);
            } catch (const Error&) {
                ok = false;
                detail = "object '" + x + "' has no identity";
                break;
            }
            if (cat.source(e) != x || cat.target(e) != x) {
                ok = false;
                detail = "identity of '" + x + "' has wrong endpoints";
                break;
            }
            if (!ids.insert(e).second) {
                ok = false;
                detail = "identity '" + e + "' shared by two objects";
                break;
            }
        }
        rep.add("identity_assignment", ok, d, detail);
    }

    // Composability closure: composable pairs (to depth) have composites with
    // the expected endpoints.
    {
        bool ok = true;
        std::string detail;
        for (const auto& a : all) {
            for (const auto& b : all) {
                if (cat.source(a) != cat.target(b)) continue;
                auto c = cat.try_compose(a, b);
                if (!c) {
                    ok = false;
                    detail = "no composite for (" + a + ", " + b + ")";
                    break;
                }
                if (cat.target(*c) != cat.target(a) || cat.source(*c) != cat.source(b)) {
                    ok = false;
                    detail = "composite (" + a + ", " + b + ") = " + *c + " has wrong endpoints";
                    break;
                }
            }
            if (!ok) break;
        }
        rep.add("composition_closure", ok, d, detail);
    }

    // Identity laws.
    {
        bool ok = true;
        std::string detail;
        for (const auto& a : all) {
            auto le = cat.try_compose(cat.identity(cat.target(a)), a);
            auto re = cat.try_compose(a, cat.identity(cat.source(a)));
            if (!le || *le != a || !re || *re != a) {
                ok = false;
                detail = "identity law fails at '" + a + "'";
                break;
            }
        }
        rep.add("identity_laws", ok, d, detail);
    }

    // Associativity over all composable triples to depth.  For graded
    // backends with additive levels the composite of a triple lives at the
    // sum of the levels, so "up to depth" bounds the total; the enumeration
    // walks level splits to keep the candidate set small.
    {
        bool ok = true;
        std::string detail;
        long long checked = 0;
        const bool bound_total = !cat.finite() && cat.additive_levels();
        std::vector<std::vector<MorphismId>> by_level(1);
        if (bound_total) {
            by_level.assign((size_t)d + 1, {});
            for (const auto& m : all) by_level[(size_t)cat.level(m)].push_back(m);
        } else {
            by_level[0] = all;
        }
        auto test_triple = [&](const MorphismId& a, const MorphismId& b, const MorphismId& c) {
            if (cat.source(a) != cat.target(b) || cat.source(b) != cat.target(c)) return true;
            auto ab = cat.try_compose(a, b);
            if (!ab) return true;
            auto bc = cat.try_compose(b, c);
            auto ab_c = cat.try_compose(*ab, c);
            auto a_bc = bc ? cat.try_compose(a, *bc) : std::nullopt;
            ++checked;
            if (!bc || !ab_c || !a_bc || *ab_c != *a_bc) {
                detail = "associativity fails on triple (" + a + ", " + b + ", " + c + ")";
                return false;
            }
            return true;
        };
        if (bound_total) {
            for (int l1 = 0; l1 <= d && ok; ++l1)
                for (int l2 = 0; l1 + l2 <= d && ok; ++l2)
                    for (int l3 = 0; l1 + l2 + l3 <= d && ok; ++l3)
                        for (const auto& a : by_level[(size_t)l1]) {
                            for (const auto& b : by_level[(size_t)l2]) {
                                for (const auto& c : by_level[(size_t)l3])
                                    if (!(ok = test_triple(a, b, c))) break;
                                if (!ok) break;
                            }
                            if (!ok) break;
                        }
        } else {
            for (const auto& a : all) {
                for (const auto& b : all) {
                    for (const auto& c : all)
                        if (!(ok = test_triple(a, b, c))) break;
                    if (!ok) break;
                }
                if (!ok) break;
            }
        }
        rep.add("associativity", ok, d,
                ok ? std::to_string(checked) + " triples checked" : detail);
    }

    return rep;
}

std::shared_ptr<const SliceCategory> slice(CategoryPtr cat, const ObjectId& x) {
    return std::make_shared<SliceCategory>(std::move(cat), x);
}

CategoryPtr product(const std::vector<CategoryPtr>& factors) {
    return std::make_shared<ProductCategory>(factors);
}

const char* errc_name(Errc c) {
    switch (c) {
        case Errc::not_composable: return "NotComposable";
        case Errc::unknown_morphism: return "UnknownMorphism";
        case Errc::unknown_object: return "UnknownObject";
        case Errc::not_a_group: return "NotAGroup";
        case Errc::not_a_poset: return "NotAPoset";
        case Errc::inconsistent_squares: return "InconsistentSquares";
        case Errc::dangling_edge: return "DanglingEdge";
        case Errc::non_functorial_restriction: return "NonFunctorialRestriction";
        case Errc::base_not_ore: return "BaseNotOre";
        case Errc::not_a_cospan: return "NotACospan";
        case Errc::no_completion: return "NoCompletion";
        case Errc::fiber_infinite: return "FiberInfinite";
        case Errc::no_lift: return "NoLift";
        case Errc::multiple_lifts: return "MultipleLifts";
        case Errc::bad_factorization: return "BadFactorization";
        case Errc::path_not_in_cylinder: return "PathNotInCylinder";
        case Errc::incoherent_oracle: return "IncoherentOracle";
        case Errc::no_splitting_found: return "NoSplittingFound";
        case Errc::path_space_not_finite: return "PathSpaceNotFinite";
        case Errc::orbit_budget_exceeded: return "OrbitBudgetExceeded";
        case Errc::dimension_mismatch: return "DimensionMismatch";
        case Errc::bad_input: return "BadInput";
    }
    return "Error";
}

}  // namespace conduche
