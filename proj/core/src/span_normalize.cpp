#include "span_normalize.hpp"

#include <algorithm>

namespace conduche::detail {

std::optional<std::pair<MorphismId, MorphismId>> span_completion(const Fibration& f,
                                                                 const Span& s1, const Span& s2,
                                                                 int budget) {
    const Category& E = f.domain();
    if (E.target(s1.first) != E.target(s2.first) || E.target(s1.second) != E.target(s2.second))
        return std::nullopt;
    return f.codomain().complete_cospan_pair(f.map_morphism(s1.first), f.map_morphism(s2.first),
                                             f.map_morphism(s1.second), f.map_morphism(s2.second),
                                             budget);
}

std::vector<Span> refine_span(const Fibration& f, const Span& s, const MorphismId& c,
                              int budget) {
    const Category& E = f.domain();
    std::vector<Span> out;
    for (const auto& g : enumerate_fiber(f, E.source(s.first), c, budget)) {
        auto a = E.try_compose(s.first, g);
        auto b = E.try_compose(s.second, g);
        if (a && b) out.emplace_back(*a, *b);
    }
    return out;
}

namespace {

// The single base morphism c with F(alpha) c == t1 and F(beta) c == t2, if
// one exists.
std::optional<MorphismId> common_complement(const Category& B, const MorphismId& fa,
                                            const MorphismId& fb, const MorphismId& t1,
                                            const MorphismId& t2) {
    for (const auto& c : B.complements(fa, t1)) {
        auto fbc = B.try_compose(fb, c);
        if (fbc && *fbc == t2) return c;
    }
    return std::nullopt;
}

}  // namespace

std::map<Span, Scalar> normalize_spans(const Fibration& f, const std::map<Span, Scalar>& terms,
                                       int budget, bool* complete) {
    if (complete) *complete = true;
    const Category& B = f.codomain();
    std::vector<Span> spans;
    std::vector<Scalar> coeffs;
    for (const auto& [s, c] : terms) {
        spans.push_back(s);
        coeffs.push_back(c);
    }

    // Union-find over pairwise completable spans.
    std::vector<size_t> parent(spans.size());
    for (size_t i = 0; i < parent.size(); ++i) parent[i] = i;
    std::function<size_t(size_t)> find = [&](size_t i) {
        return parent[i] == i ? i : parent[i] = find(parent[i]);
    };
    for (size_t i = 0; i < spans.size(); ++i)
        for (size_t j = i + 1; j < spans.size(); ++j)
            if (find(i) != find(j) && span_completion(f, spans[i], spans[j], budget))
                parent[find(i)] = find(j);

    std::map<size_t, std::vector<size_t>> classes;
    for (size_t i = 0; i < spans.size(); ++i) classes[find(i)].push_back(i);

    std::map<Span, Scalar> out;
    auto emit = [&out](const Span& s, const Scalar& c) {
        if (c.is_zero()) return;
        auto it = out.find(s);
        if (it == out.end())
            out.emplace(s, c);
        else {
            it->second += c;
            if (it->second.is_zero()) out.erase(it);
        }
    };

    for (const auto& [root, members] : classes) {
        if (members.size() == 1) {
            emit(spans[members[0]], coeffs[members[0]]);
            continue;
        }
        // Fold a common target base-image pair over the class.
        std::pair<MorphismId, MorphismId> target{f.map_morphism(spans[members[0]].first),
                                                 f.map_morphism(spans[members[0]].second)};
        bool folded = true;
        for (size_t k = 1; k < members.size() && folded; ++k) {
            const Span& s = spans[members[k]];
            auto comp = B.complete_cospan_pair(target.first, f.map_morphism(s.first),
                                               target.second, f.map_morphism(s.second), budget);
            if (!comp) {
                folded = false;
                break;
            }
            auto t1 = B.try_compose(target.first, comp->first);
            auto t2 = B.try_compose(target.second, comp->first);
            if (!t1 || !t2) {
                folded = false;
                break;
            }
            target = {*t1, *t2};
        }
        if (!folded) {
            if (complete) *complete = false;
            for (size_t k : members) emit(spans[k], coeffs[k]);
            continue;
        }
        for (size_t k : members) {
            const Span& s = spans[k];
            auto c = common_complement(B, f.map_morphism(s.first), f.map_morphism(s.second),
                                       target.first, target.second);
            if (!c) {
                if (complete) *complete = false;
                emit(s, coeffs[k]);
                continue;
            }
            for (const auto& piece : refine_span(f, s, *c, budget)) emit(piece, coeffs[k]);
        }
    }
    return out;
}

}  // namespace conduche::detail
