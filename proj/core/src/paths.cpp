#include "conduche/paths.hpp"

#include <algorithm>
#include <mutex>
#include <sstream>

#include "conduche/graded.hpp"

namespace conduche {

struct PathOracle::State {
    std::mutex mx;
    std::map<MorphismId, MorphismId> memo;
};

PathOracle::PathOracle(Fibration fib, ObjectId target, Evaluator eval, std::string label,
                       int certified_depth)
    : fib_(std::move(fib)),
      target_(std::move(target)),
      label_(std::move(label)),
      certified_depth_(certified_depth),
      eval_(std::move(eval)),
      state_(std::make_shared<State>()) {
    if (!fib_.domain().has_object(target_)) fail(Errc::unknown_object, "'" + target_ + "'");
}

MorphismId PathOracle::eval(const MorphismId& b) const {
    const Category& B = fib_.codomain();
    const Category& E = fib_.domain();
    if (!B.has_morphism(b) || B.target(b) != fib_.map_object(target_))
        fail(Errc::bad_input,
             "'" + b + "' is not an object of the base slice at F(" + target_ + ")");

    std::map<MorphismId, MorphismId> snapshot;
    {
        std::lock_guard<std::mutex> lock(state_->mx);
        auto it = state_->memo.find(b);
        if (it != state_->memo.end()) return it->second;
        snapshot = state_->memo;
    }

    MorphismId v = eval_(b);
    if (!E.has_morphism(v) || E.target(v) != target_ || fib_.map_morphism(v) != b)
        fail(Errc::incoherent_oracle, "oracle '" + label_ + "' returned '" + v +
                                          "' at '" + b + "', which is not a lift of it");

    // Prefix coherence against every comparable memoized point.
    auto check_prefix = [&](const MorphismId& shorter_b, const MorphismId& shorter_v,
                            const MorphismId& longer_b, const MorphismId& longer_v) {
        for (const auto& c : B.complements(shorter_b, longer_b)) {
            std::vector<MorphismId> lifts;
            try {
                lifts = lift_factorization(fib_, longer_v, {shorter_b, c});
            } catch (const Error& e) {
                fail(Errc::incoherent_oracle,
                     "oracle '" + label_ + "': value at '" + longer_b +
                         "' does not factor through '" + shorter_b + "': " + e.what());
            }
            if (lifts[0] != shorter_v)
                fail(Errc::incoherent_oracle,
                     "oracle '" + label_ + "': values at '" + shorter_b + "' and '" + longer_b +
                         "' disagree on their common prefix");
        }
    };
    for (const auto& [b2, v2] : snapshot) {
        check_prefix(b2, v2, b, v);
        check_prefix(b, v, b2, v2);
    }

    std::lock_guard<std::mutex> lock(state_->mx);
    state_->memo.emplace(b, v);
    return v;
}

std::pair<MorphismId, MorphismId> PathOracle::eval_morphism(const MorphismId& a,
                                                            const MorphismId& b) const {
    const Category& B = fib_.codomain();
    MorphismId ab = B.compose(a, b);
    MorphismId whole = eval(ab);
    auto lifts = lift_factorization(fib_, whole, {a, b});
    MorphismId at_a = eval(a);
    if (lifts[0] != at_a)
        fail(Errc::incoherent_oracle, "oracle '" + label_ + "': x(" + a +
                                          ") is not the prefix of x(" + ab + ")");
    return {lifts[0], lifts[1]};
}

std::map<MorphismId, MorphismId> PathOracle::memoized() const {
    std::lock_guard<std::mutex> lock(state_->mx);
    return state_->memo;
}

// ---------------------------------------------------------------------------
// Cylinders

CylinderSet cylinder(const MorphismId& alpha) { return {alpha}; }

CylinderSet cylinder_of_object(const Fibration& f, const ObjectId& x) {
    return {f.domain().identity(x)};
}

bool cylinder_contains(const CylinderSet& z, const PathOracle& x) {
    const Fibration& f = x.fibration();
    if (f.domain().target(z.alpha) != x.target()) return false;
    return x.eval(f.map_morphism(z.alpha)) == z.alpha;
}

// ---------------------------------------------------------------------------
// res / ind

PathOracle res(const MorphismId& mu, const PathOracle& x) {
    const Fibration f = x.fibration();
    const Category& E = f.domain();
    if (!E.has_morphism(mu)) fail(Errc::unknown_morphism, "'" + mu + "'");
    if (E.target(mu) != x.target())
        fail(Errc::path_not_in_cylinder, "r(" + mu + ") != r(" + x.label() + ")");
    if (E.is_identity(mu)) return x;

    const MorphismId fmu = f.map_morphism(mu);
    PathOracle parent = x;
    auto evaluator = [f, parent, mu, fmu](const MorphismId& a) -> MorphismId {
        const MorphismId whole = parent.eval(f.codomain().compose(fmu, a));
        auto lifts = lift_factorization(f, whole, {fmu, a});
        if (lifts[0] != mu)
            fail(Errc::path_not_in_cylinder,
                 "'" + parent.label() + "' does not end in '" + mu + "'");
        return lifts[1];
    };
    return PathOracle(f, E.source(mu), evaluator, "res(" + mu + ", " + x.label() + ")",
                      x.certified_depth());
}

namespace {

PathOracle ind_impl(const MorphismId& mu, const PathOracle& x, CompletionChooser chooser) {
    const Fibration f = x.fibration();
    const Category& E = f.domain();
    if (!E.has_morphism(mu)) fail(Errc::unknown_morphism, "'" + mu + "'");
    if (E.source(mu) != x.target())
        fail(Errc::bad_input, "ind needs r(x) == s(mu); got r(x) = " + x.target());
    if (E.is_identity(mu)) return x;

    const MorphismId fmu = f.map_morphism(mu);
    PathOracle parent = x;
    auto evaluator = [f, parent, mu, fmu, chooser](const MorphismId& d) -> MorphismId {
        auto [c, e] = chooser(fmu, d);
        MorphismId w = f.domain().compose(mu, parent.eval(c));
        auto lifts = lift_factorization(f, w, {d, e});
        return lifts[0];
    };
    return PathOracle(f, E.target(mu), evaluator, "ind(" + mu + ", " + x.label() + ")",
                      x.certified_depth());
}

}  // namespace

PathOracle ind(const MorphismId& mu, const PathOracle& x) {
    const Fibration f = x.fibration();
    auto chooser = [f](const MorphismId& fmu, const MorphismId& d) {
        return ore_complete(f.codomain(), fmu, d);
    };
    return ind_impl(mu, x, chooser);
}

PathOracle ind_with_completion(const MorphismId& mu, const PathOracle& x,
                               CompletionChooser chooser) {
    return ind_impl(mu, x, std::move(chooser));
}

// ---------------------------------------------------------------------------
// Oracle constructors

PathOracle make_table_oracle(const Fibration& f, const ObjectId& X,
                             std::map<MorphismId, MorphismId> table, std::string label) {
    auto shared = std::make_shared<std::map<MorphismId, MorphismId>>(std::move(table));
    auto evaluator = [shared, label](const MorphismId& b) -> MorphismId {
        auto it = shared->find(b);
        if (it == shared->end())
            fail(Errc::no_splitting_found,
                 "table oracle '" + label + "' has no value at '" + b + "'");
        return it->second;
    };
    return PathOracle(f, X, evaluator, label, 1);
}

PathOracle make_edge_word_oracle(
    const Fibration& f, const ObjectId& X,
    std::function<std::string(int, const ObjectId&, int)> chooser, std::string label) {
    auto kc = std::dynamic_pointer_cast<const KGraphCategory>(f.domain_ptr());
    if (!kc) fail(Errc::bad_input, "edge-word oracles need a kgraph fibration");
    const int k = kc->k();

    struct WordState {
        std::mutex mx;
        std::vector<std::string> edges;
        ObjectId cursor;
    };
    auto st = std::make_shared<WordState>();
    st->cursor = X;

    auto extend_to = [st, kc, chooser, label, k](size_t n) {
        std::lock_guard<std::mutex> lock(st->mx);
        while (st->edges.size() < n) {
            int step = (int)st->edges.size();
            int color = step % k;
            std::string id = chooser(step, st->cursor, color);
            if (id.empty())
                fail(Errc::no_splitting_found, "oracle '" + label + "' has no edge of color " +
                                                   std::to_string(color) + " into '" +
                                                   st->cursor + "'");
            const auto& e = kc->edge(id);
            if (e.tgt != st->cursor || e.color != color)
                fail(Errc::bad_input, "oracle '" + label + "' chose edge '" + id +
                                          "' with the wrong target or color");
            st->edges.push_back(id);
            st->cursor = e.src;
        }
        return std::vector<std::string>(st->edges.begin(), st->edges.begin() + (long)n);
    };

    Fibration fib = f;
    auto evaluator = [fib, kc, st, extend_to, X, k](const MorphismId& b) -> MorphismId {
        Degree d = parse_degree(b, k);
        int m = 0;
        for (int v : d) m = std::max(m, v);
        if (m == 0) return kc->identity(X);
        auto prefix = extend_to((size_t)(k * m));
        MorphismId whole = kc->compose_chain(prefix);
        Degree rest(k);
        for (int i = 0; i < k; ++i) rest[i] = m - d[i];
        auto lifts = lift_factorization(fib, whole, {b, degree_id(rest)});
        return lifts[0];
    };
    return PathOracle(f, X, evaluator, std::move(label), 0);
}

namespace {

std::vector<std::string> split_csv(const std::string& s) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string tok;
    while (std::getline(ss, tok, ',')) out.push_back(tok);
    return out;
}

// Fibonacci substitution 0 -> 01, 1 -> 0; the fixed point is aperiodic.
std::vector<int> fibonacci_word(size_t n) {
    std::vector<int> w = {0};
    while (w.size() < n) {
        std::vector<int> next;
        for (int s : w) {
            if (s == 0) {
                next.push_back(0);
                next.push_back(1);
            } else {
                next.push_back(0);
            }
        }
        w = std::move(next);
    }
    w.resize(n);
    return w;
}

PathOracle unique_fiber_oracle(const Fibration& f, const ObjectId& X, std::string label) {
    Fibration fib = f;
    ObjectId x = X;
    auto evaluator = [fib, x](const MorphismId& b) -> MorphismId {
        auto fiber = enumerate_fiber(fib, x, b);
        if (fiber.size() != 1)
            fail(Errc::no_splitting_found, "fiber of '" + b + "' at '" + x + "' has " +
                                               std::to_string(fiber.size()) +
                                               " elements; no canonical lift");
        return fiber[0];
    };
    return PathOracle(f, X, evaluator, std::move(label), 1);
}

// Backtracking over the finite base slice: assign a lift to every slice
// object, keeping every pair of assigned values prefix-coherent.
std::vector<std::map<MorphismId, MorphismId>> enumerate_section_tables(const Fibration& f,
                                                                       const ObjectId& X,
                                                                       size_t limit) {
    const Category& E = f.domain();
    const Category& B = f.codomain();
    if (!E.finite() || !B.finite()) fail(Errc::path_space_not_finite, "the base is not finite");

    std::vector<MorphismId> slots = B.morphisms_into_up_to(f.map_object(X), 1);
    std::sort(slots.begin(), slots.end(), [&](const MorphismId& a, const MorphismId& b) {
        return std::make_pair(B.level(a), a) < std::make_pair(B.level(b), b);
    });

    std::vector<std::map<MorphismId, MorphismId>> results;
    std::map<MorphismId, MorphismId> cur;

    auto coherent = [&](const MorphismId& b, const MorphismId& v) {
        for (const auto& [b2, v2] : cur) {
            for (const auto& c : B.complements(b2, b)) {
                try {
                    if (lift_factorization(f, v, {b2, c})[0] != v2) return false;
                } catch (const Error&) {
                    return false;
                }
            }
            for (const auto& c : B.complements(b, b2)) {
                try {
                    if (lift_factorization(f, v2, {b, c})[0] != v) return false;
                } catch (const Error&) {
                    return false;
                }
            }
        }
        return true;
    };

    std::function<void(size_t)> rec = [&](size_t i) {
        if (results.size() >= limit) return;
        if (i == slots.size()) {
            results.push_back(cur);
            return;
        }
        const auto& b = slots[i];
        for (const auto& v : enumerate_fiber(f, X, b)) {
            if (!coherent(b, v)) continue;
            cur[b] = v;
            rec(i + 1);
            cur.erase(b);
        }
    };
    rec(0);
    return results;
}

}  // namespace

PathOracle make_oracle_from_spec(const Fibration& f, const ObjectId& X, const std::string& spec) {
    auto colon = spec.find(':');
    std::string kind = spec.substr(0, colon);
    std::string args = colon == std::string::npos ? "" : spec.substr(colon + 1);

    if (kind == "minlex" || kind == "canonical") return canonical_splitting(f, X, 4);
    if (kind == "unique") return unique_fiber_oracle(f, X, "unique@" + X);
    if (kind == "constant") {
        std::string e = args;
        return make_edge_word_oracle(
            f, X, [e](int, const ObjectId&, int) { return e; }, "constant:" + args + "@" + X);
    }
    if (kind == "periodic") {
        auto list = split_csv(args);
        if (list.empty()) fail(Errc::bad_input, "periodic oracle needs a nonempty edge list");
        return make_edge_word_oracle(
            f, X, [list](int step, const ObjectId&, int) { return list[step % list.size()]; },
            "periodic:" + args + "@" + X);
    }
    if (kind == "fib") {
        auto list = split_csv(args);
        if (list.size() != 2) fail(Errc::bad_input, "fib oracle needs exactly two edges");
        auto word = std::make_shared<std::vector<int>>(fibonacci_word(4096));
        return make_edge_word_oracle(
            f, X,
            [list, word](int step, const ObjectId&, int) {
                return list[(size_t)(*word)[(size_t)step % word->size()]];
            },
            "fib:" + args + "@" + X);
    }
    fail(Errc::bad_input, "unknown oracle spec '" + spec + "'");
}

PathOracle canonical_splitting(const Fibration& f, const ObjectId& X, int depth) {
    if (f.splitting_hook().has_value()) {
        const auto* factory = std::any_cast<SplittingFactory>(&f.splitting_hook());
        if (factory) return (*factory)(f, X);
    }

    PathOracle out = [&]() {
        if (f.kind() == "kgraph") {
            auto kc = std::dynamic_pointer_cast<const KGraphCategory>(f.domain_ptr());
            return make_edge_word_oracle(
                f, X,
                [kc](int, const ObjectId& at, int color) {
                    auto es = kc->edges_into(at, color);
                    return es.empty() ? std::string() : es.front();
                },
                "minlex@" + X);
        }
        if (f.kind() == "identity") {
            return PathOracle(
                f, X, [](const MorphismId& b) { return b; }, "identity@" + X, depth);
        }
        if (f.kind() == "sections") return unique_fiber_oracle(f, X, "sections@" + X);
        if (f.domain().finite() && f.codomain().finite()) {
            auto tables = enumerate_section_tables(f, X, 1);
            if (tables.empty())
                fail(Errc::no_splitting_found, "no section over '" + X + "' exists");
            return make_table_oracle(f, X, tables[0], "search@" + X);
        }
        fail(Errc::no_splitting_found,
             "no constructive splitting known for a '" + f.kind() + "' fibration over a graded "
             "base; the bounded search is exhausted");
    }();

    // Certify coherence on all base objects up to depth; the oracle's own
    // checks raise IncoherentOracle on any violation.
    const Category& B = f.codomain();
    const ObjectId fx = f.map_object(X);
    for (int lv = 0; lv <= (B.finite() ? 1 : depth); ++lv)
        for (const auto& b : B.morphisms_into(fx, lv)) out.eval(b);
    return PathOracle(f, X, [out](const MorphismId& b) { return out.eval(b); }, out.label(),
                      depth);
}

// ---------------------------------------------------------------------------
// Cylinder calculus

std::vector<CylinderSet> partition_by_lifts(const Fibration& f, const ObjectId& X,
                                            const MorphismId& b) {
    std::vector<CylinderSet> out;
    for (const auto& beta : enumerate_fiber(f, X, b)) out.push_back({beta});
    return out;
}

std::vector<MorphismId> cylinder_intersection(const Fibration& f, const MorphismId& alpha,
                                              const MorphismId& beta, int budget) {
    const Category& E = f.domain();
    if (E.target(alpha) != E.target(beta)) return {};
    auto [c, d] = ore_complete(f.codomain(), f.map_morphism(alpha), f.map_morphism(beta), budget);
    std::vector<MorphismId> left, right;
    for (const auto& g : enumerate_fiber(f, E.source(alpha), c, budget)) {
        auto w = E.try_compose(alpha, g);
        if (w) left.push_back(*w);
    }
    for (const auto& g : enumerate_fiber(f, E.source(beta), d, budget)) {
        auto w = E.try_compose(beta, g);
        if (w) right.push_back(*w);
    }
    std::sort(left.begin(), left.end());
    std::sort(right.begin(), right.end());
    std::vector<MorphismId> out;
    std::set_intersection(left.begin(), left.end(), right.begin(), right.end(),
                          std::back_inserter(out));
    return out;
}

PathComparison path_equal(const PathOracle& x, const PathOracle& y, int depth) {
    if (x.target() != y.target())
        fail(Errc::bad_input, "path_equal needs paths with the same target object");
    const Fibration& f = x.fibration();
    const Category& B = f.codomain();
    PathComparison out;
    out.exhaustive = B.finite();
    const ObjectId fx = f.map_object(x.target());
    for (int lv = 0; lv <= (B.finite() ? 1 : depth); ++lv) {
        for (const auto& b : B.morphisms_into(fx, lv)) {
            if (x.eval(b) != y.eval(b)) {
                out.equal = false;
                out.distinguished_at = b;
                return out;
            }
        }
    }
    return out;
}

AperiodicityResult aperiodicity_scan(const Fibration& f, const PathOracle& x, int depth) {
    AperiodicityResult result;
    result.depth = depth;
    result.verify_depth = 2 * depth + 2;
    const Category& B = f.codomain();
    const ObjectId fx = f.map_object(x.target());

    std::vector<MorphismId> values;  // x(b) for base objects b up to depth
    for (int lv = 0; lv <= (B.finite() ? 1 : depth); ++lv)
        for (const auto& b : B.morphisms_into(fx, lv)) values.push_back(x.eval(b));

    for (size_t i = 0; i < values.size(); ++i) {
        for (size_t j = 0; j < i; ++j) {
            const MorphismId& alpha = values[i];
            const MorphismId& beta = values[j];
            if (alpha == beta) continue;
            PathOracle rx = res(alpha, x);
            PathOracle ry = res(beta, x);
            if (rx.target() != ry.target()) continue;
            if (path_equal(rx, ry, result.verify_depth).equal) {
                result.witness_found = true;
                result.alpha = alpha;
                result.beta = beta;
                return result;
            }
        }
    }
    return result;
}

// ---------------------------------------------------------------------------
// Finite path spaces

std::vector<PathOracle> enumerate_paths(const Fibration& f, const ObjectId& X) {
    constexpr size_t kLimit = 1u << 20;
    auto tables = enumerate_section_tables(f, X, kLimit);
    if (tables.size() >= kLimit)
        fail(Errc::path_space_not_finite, "more than " + std::to_string(kLimit) +
                                              " sections at '" + X + "'");
    std::vector<PathOracle> out;
    int i = 0;
    for (auto& t : tables)
        out.push_back(make_table_oracle(f, X, std::move(t),
                                        "path" + std::to_string(i++) + "@" + X));
    return out;
}

std::vector<PathOracle> all_paths(const Fibration& f) {
    std::vector<PathOracle> out;
    for (const auto& X : f.domain().objects()) {
        auto ps = enumerate_paths(f, X);
        out.insert(out.end(), ps.begin(), ps.end());
    }
    return out;
}

}  // namespace conduche
