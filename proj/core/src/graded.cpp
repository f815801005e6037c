#include "conduche/graded.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

namespace conduche {

std::string degree_id(const Degree& d) {
    std::string out = "(";
    for (size_t i = 0; i < d.size(); ++i) {
        if (i) out += ",";
        out += std::to_string(d[i]);
    }
    return out + ")";
}

Degree parse_degree(const std::string& id, int k) {
    std::string body = id;
    if (body.size() >= 2 && body.front() == '(' && body.back() == ')')
        body = body.substr(1, body.size() - 2);
    Degree d;
    std::stringstream ss(body);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        try {
            d.push_back(std::stoi(tok));
        } catch (const std::exception&) {
            fail(Errc::unknown_morphism, "bad degree component '" + tok + "' in '" + id + "'");
        }
    }
    if ((int)d.size() != k) fail(Errc::unknown_morphism, "'" + id + "' is not a degree in N^" +
                                                             std::to_string(k));
    for (int v : d)
        if (v < 0) fail(Errc::unknown_morphism, "negative degree in '" + id + "'");
    return d;
}

// ---------------------------------------------------------------------------
// NkCategory

NkCategory::NkCategory(int k) : k_(k) {
    if (k < 1) fail(Errc::bad_input, "N^k needs k >= 1");
}

bool NkCategory::has_morphism(const MorphismId& m) const {
    try {
        parse_degree(m, k_);
        return true;
    } catch (const Error&) {
        return false;
    }
}

MorphismId NkCategory::identity(const ObjectId& x) const {
    if (x != obj_) fail(Errc::unknown_object, "'" + x + "'");
    return degree_id(Degree(k_, 0));
}

std::optional<MorphismId> NkCategory::try_compose(const MorphismId& after,
                                                  const MorphismId& before) const {
    if (!has_morphism(after) || !has_morphism(before)) return std::nullopt;
    Degree a = degree(after), b = degree(before);
    for (int i = 0; i < k_; ++i) a[i] += b[i];
    return degree_id(a);
}

int NkCategory::level(const MorphismId& m) const {
    Degree d = degree(m);
    return std::accumulate(d.begin(), d.end(), 0);
}

std::vector<MorphismId> NkCategory::morphisms_into(const ObjectId& x, int lvl) const {
    if (x != obj_) fail(Errc::unknown_object, "'" + x + "'");
    std::vector<MorphismId> out;
    Degree cur(k_, 0);
    // Compositions of lvl into k parts, lexicographic.
    std::function<void(int, int)> rec = [&](int pos, int rest) {
        if (pos == k_ - 1) {
            cur[pos] = rest;
            out.push_back(degree_id(cur));
            return;
        }
        for (int v = 0; v <= rest; ++v) {
            cur[pos] = v;
            rec(pos + 1, rest - v);
        }
    };
    rec(0, lvl);
    return out;
}

std::vector<MorphismId> NkCategory::complements(const MorphismId& prefix,
                                                const MorphismId& whole) const {
    Degree p = degree(prefix), w = degree(whole);
    Degree d(k_);
    for (int i = 0; i < k_; ++i) {
        d[i] = w[i] - p[i];
        if (d[i] < 0) return {};
    }
    return {degree_id(d)};
}

std::optional<std::pair<MorphismId, MorphismId>> NkCategory::complete_cospan(
    const MorphismId& m, const MorphismId& n, int /*budget*/) const {
    Degree a = degree(m), b = degree(n), p(k_), q(k_);
    for (int i = 0; i < k_; ++i) {
        int j = std::max(a[i], b[i]);
        p[i] = j - a[i];
        q[i] = j - b[i];
    }
    return std::make_pair(degree_id(p), degree_id(q));
}

std::optional<std::pair<MorphismId, MorphismId>> NkCategory::complete_cospan_pair(
    const MorphismId& m1, const MorphismId& n1, const MorphismId& m2, const MorphismId& n2,
    int /*budget*/) const {
    Degree a1 = degree(m1), b1 = degree(n1), a2 = degree(m2), b2 = degree(n2);
    // Solvable iff the Z^k differences agree; then a = (n1-m1)+, b = (n1-m1)-.
    Degree a(k_), b(k_);
    for (int i = 0; i < k_; ++i) {
        int d1 = b1[i] - a1[i];
        if (d1 != b2[i] - a2[i]) return std::nullopt;
        a[i] = std::max(d1, 0);
        b[i] = std::max(-d1, 0);
    }
    return std::make_pair(degree_id(a), degree_id(b));
}

// ---------------------------------------------------------------------------
// KGraphCategory

namespace {

std::vector<std::string> split_word(const std::string& m) {
    std::vector<std::string> out;
    std::stringstream ss(m);
    std::string tok;
    while (std::getline(ss, tok, '.')) out.push_back(tok);
    return out;
}

std::string join_word(const std::vector<std::string>& w) {
    std::string out;
    for (size_t i = 0; i < w.size(); ++i) {
        if (i) out += ".";
        out += w[i];
    }
    return out;
}

}  // namespace

KGraphCategory::KGraphCategory(KGraphSkeleton skeleton) : skel_(std::move(skeleton)) {
    std::sort(skel_.vertices.begin(), skel_.vertices.end());
    int max_color = 0;
    for (const auto& e : skel_.edges) {
        if (e.id.find('.') != std::string::npos)
            fail(Errc::bad_input, "edge id '" + e.id + "' contains '.'");
        if (std::binary_search(skel_.vertices.begin(), skel_.vertices.end(), e.id))
            fail(Errc::bad_input, "edge id '" + e.id + "' collides with a vertex id");
        if (!std::binary_search(skel_.vertices.begin(), skel_.vertices.end(), e.src) ||
            !std::binary_search(skel_.vertices.begin(), skel_.vertices.end(), e.tgt))
            fail(Errc::dangling_edge, "edge '" + e.id + "' has an endpoint outside the vertex set");
        if (e.color < 0) fail(Errc::bad_input, "edge '" + e.id + "' has a negative color");
        max_color = std::max(max_color, e.color);
        if (!edge_by_id_.emplace(e.id, e).second)
            fail(Errc::bad_input, "duplicate edge id '" + e.id + "'");
        edges_into_[e.tgt].push_back(e.id);
    }
    for (auto& [v, es] : edges_into_) std::sort(es.begin(), es.end());
    k_ = max_color + 1;

    for (const auto& sq : skel_.squares) {
        const auto& e = edge(sq.e);
        const auto& f = edge(sq.f);
        const auto& f2 = edge(sq.f2);
        const auto& e2 = edge(sq.e2);
        if (!(e.color < f.color) || f2.color != f.color || e2.color != e.color)
            fail(Errc::inconsistent_squares,
                 "square (" + sq.e + "," + sq.f + "," + sq.f2 + "," + sq.e2 +
                     ") does not pair an ascending with a descending two-color path");
        // First entry wins on duplicate keys; the dCf checker reports the
        // resulting factorization defect on corrupt data.
        to_sorted_.emplace(std::make_pair(sq.f2, sq.e2), std::make_pair(sq.e, sq.f));
        to_swapped_.emplace(std::make_pair(sq.e, sq.f), std::make_pair(sq.f2, sq.e2));
    }
}

const ColoredEdge& KGraphCategory::edge(const std::string& id) const {
    auto it = edge_by_id_.find(id);
    if (it == edge_by_id_.end()) fail(Errc::unknown_morphism, "edge '" + id + "'");
    return it->second;
}

std::vector<ObjectId> KGraphCategory::objects() const { return skel_.vertices; }

std::vector<std::string> KGraphCategory::word(const MorphismId& m) const {
    if (std::binary_search(skel_.vertices.begin(), skel_.vertices.end(), m)) return {};
    return split_word(m);
}

bool KGraphCategory::has_morphism(const MorphismId& m) const {
    if (std::binary_search(skel_.vertices.begin(), skel_.vertices.end(), m)) return true;
    auto w = split_word(m);
    if (w.empty()) return false;
    for (size_t i = 0; i < w.size(); ++i) {
        auto it = edge_by_id_.find(w[i]);
        if (it == edge_by_id_.end()) return false;
        if (i > 0) {
            const auto& prev = edge_by_id_.at(w[i - 1]);
            if (prev.src != it->second.tgt) return false;
            if (edge_by_id_.at(w[i - 1]).color > it->second.color) return false;  // normal form
        }
    }
    return true;
}

ObjectId KGraphCategory::source(const MorphismId& m) const {
    auto w = word(m);
    if (w.empty()) {
        if (!has_morphism(m)) fail(Errc::unknown_morphism, "'" + m + "'");
        return m;
    }
    return edge(w.back()).src;
}

ObjectId KGraphCategory::target(const MorphismId& m) const {
    auto w = word(m);
    if (w.empty()) {
        if (!has_morphism(m)) fail(Errc::unknown_morphism, "'" + m + "'");
        return m;
    }
    return edge(w.front()).tgt;
}

MorphismId KGraphCategory::identity(const ObjectId& x) const {
    if (!std::binary_search(skel_.vertices.begin(), skel_.vertices.end(), x))
        fail(Errc::unknown_object, "'" + x + "'");
    return x;
}

std::optional<std::vector<std::string>> KGraphCategory::normalize(
    std::vector<std::string> w) const {
    // Leftmost descending adjacent pair first; each rewrite removes exactly
    // one color inversion, so this terminates.
    bool changed = true;
    while (changed) {
        changed = false;
        for (size_t i = 0; i + 1 < w.size(); ++i) {
            if (edge(w[i]).color <= edge(w[i + 1]).color) continue;
            auto it = to_sorted_.find({w[i], w[i + 1]});
            if (it == to_sorted_.end()) return std::nullopt;
            w[i] = it->second.first;
            w[i + 1] = it->second.second;
            changed = true;
            break;
        }
    }
    for (size_t i = 0; i + 1 < w.size(); ++i)
        if (edge(w[i]).src != edge(w[i + 1]).tgt) return std::nullopt;
    return w;
}

std::optional<MorphismId> KGraphCategory::try_compose(const MorphismId& after,
                                                      const MorphismId& before) const {
    if (!has_morphism(after) || !has_morphism(before)) return std::nullopt;
    if (source(after) != target(before)) return std::nullopt;
    auto w = word(after);
    auto v = word(before);
    w.insert(w.end(), v.begin(), v.end());
    if (w.empty()) return after;  // both identities
    auto nf = normalize(std::move(w));
    if (!nf) return std::nullopt;
    return join_word(*nf);
}

int KGraphCategory::level(const MorphismId& m) const {
    if (!has_morphism(m)) fail(Errc::unknown_morphism, "'" + m + "'");
    return (int)word(m).size();
}

Degree KGraphCategory::degree(const MorphismId& m) const {
    Degree d(k_, 0);
    for (const auto& e : word(m)) ++d[edge(e).color];
    return d;
}

std::vector<std::string> KGraphCategory::edges_into(const ObjectId& x, int color) const {
    std::vector<std::string> out;
    auto it = edges_into_.find(x);
    if (it == edges_into_.end()) return out;
    for (const auto& id : it->second)
        if (color < 0 || edge(id).color == color) out.push_back(id);
    return out;
}

std::vector<MorphismId> KGraphCategory::morphisms_into(const ObjectId& x, int lvl) const {
    if (!std::binary_search(skel_.vertices.begin(), skel_.vertices.end(), x))
        fail(Errc::unknown_object, "'" + x + "'");
    if (lvl == 0) return {x};
    std::vector<MorphismId> out;
    std::vector<std::string> cur;
    // Normal-form words only: colors non-decreasing toward the source end.
    std::function<void(const ObjectId&, int, int)> rec = [&](const ObjectId& at, int min_color,
                                                             int rest) {
        if (rest == 0) {
            out.push_back(join_word(cur));
            return;
        }
        auto it = edges_into_.find(at);
        if (it == edges_into_.end()) return;
        for (const auto& id : it->second) {
            const auto& e = edge(id);
            if (e.color < min_color) continue;
            cur.push_back(id);
            rec(e.src, e.color, rest - 1);
            cur.pop_back();
        }
    };
    rec(x, 0, lvl);
    std::sort(out.begin(), out.end());
    return out;
}

}  // namespace conduche
