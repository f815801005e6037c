// Acceptance suite: one line per criterion, exit code == number of failures.

#include <functional>
#include <iostream>
#include <random>

#include "conduche/ckalgebra.hpp"
#include "conduche/examples.hpp"
#include "conduche/graded.hpp"

using namespace conduche;

namespace {

int failures = 0;

void criterion(int number, const std::string& label, const std::function<void()>& body) {
    try {
        body();
        std::cout << "PASS  criterion " << number << ": " << label << "\n";
    } catch (const std::exception& e) {
        ++failures;
        std::cout << "FAIL  criterion " << number << ": " << label << "  [" << e.what() << "]\n";
    }
}

void require(bool cond, const std::string& what) {
    if (!cond) throw std::runtime_error(what);
}

unsigned long long seed() {
    if (const char* env = std::getenv("CONDUCHE_SEED")) return std::strtoull(env, nullptr, 10);
    return 0x5eed;
}

// --------------------------------------------------------------------------

void dcf_gate() {
    auto good = build_kgraph(kgraph22_skeleton());
    require(check_dcf(good.fibration, 4).pass, "the bundled 2-graph must pass through (2,2)");

    // Corrupt each square entry in turn; every corruption must yield a
    // counterexample.
    auto other = [](const std::string& e) -> std::string {
        if (e == "b1") return "b2";
        if (e == "b2") return "b1";
        if (e == "r1") return "r2";
        return "r1";
    };
    int corruptions = 0;
    for (size_t s = 0; s < kgraph22_skeleton().squares.size(); ++s) {
        for (int pos = 0; pos < 4; ++pos) {
            KGraphSkeleton skel = kgraph22_skeleton();
            auto& sq = skel.squares[s];
            std::string* slot[4] = {&sq.e, &sq.f, &sq.f2, &sq.e2};
            *slot[pos] = other(*slot[pos]);
            auto built = build_kgraph(skel, /*validate=*/false);
            auto res = check_dcf(built.fibration, 4);
            require(!res.pass, "corruption of square " + std::to_string(s) + " entry " +
                                   std::to_string(pos) + " went unnoticed");
            require(res.counterexample.has_value(), "missing counterexample payload");
            ++corruptions;
        }
    }
    require(corruptions == 16, "expected 16 single-entry corruptions");
}

// --------------------------------------------------------------------------

void res_ind_suite() {
    struct Fixture {
        std::string name;
        std::vector<std::string> oracles;
    };
    std::vector<Fixture> fixtures = {
        {"o2", {"constant:e1", "periodic:e1,e2", "fib:e1,e2"}},
        {"kgraph22", {"minlex"}},
        {"s3", {"unique"}},
    };
    for (const auto& fx : fixtures) {
        auto ex = make_example(fx.name);
        const Category& E = ex.fibration.domain();
        const Category& B = ex.fibration.codomain();
        const int d = B.finite() ? 1 : 2;

        int triples = 0;
        for (const auto& spec : fx.oracles) {
            for (const auto& X : E.objects()) {
                PathOracle x = make_oracle_from_spec(ex.fibration, X, spec);
                std::vector<MorphismId> mus;
                for (const auto& m : E.morphisms_up_to(d))
                    if (E.target(m) == X) mus.push_back(m);
                std::vector<MorphismId> objectsB =
                    B.morphisms_into_up_to(ex.fibration.map_object(X), d);

                for (const auto& mu : mus) {
                    // x must sit at s(mu) for ind; rebase by restriction to
                    // s(mu) when needed.
                    PathOracle base_path = x;
                    if (E.source(mu) != X) continue;

                    for (const auto& a :
                         B.morphisms_into_up_to(ex.fibration.map_object(E.source(mu)), d)) {
                        ++triples;
                        // (1) ind_mu(x)(F(mu) a) == mu . x(a)
                        auto up = ind(mu, base_path);
                        require(up.eval(B.compose(ex.fibration.map_morphism(mu), a)) ==
                                    E.compose(mu, base_path.eval(a)),
                                fx.name + ": item 1 fails");
                        // (2) res_mu . ind_mu == id and ind_mu . res_mu == id
                        auto back = res(mu, up);
                        require(back.eval(a) == base_path.eval(a), fx.name + ": item 2a fails");
                        auto again = ind(mu, res(mu, up));
                        require(again.eval(B.compose(ex.fibration.map_morphism(mu), a)) ==
                                    up.eval(B.compose(ex.fibration.map_morphism(mu), a)),
                                fx.name + ": item 2b fails");
                    }

                    // (3) restriction and induction at identities fix paths.
                    auto rid = res(E.identity(X), base_path);
                    auto iid = ind(E.identity(X), base_path);
                    for (const auto& b : objectsB) {
                        require(rid.eval(b) == base_path.eval(b), fx.name + ": item 3 fails");
                        require(iid.eval(b) == base_path.eval(b), fx.name + ": item 3 fails");
                    }

                    // (4)-(6) need a second leg nu with r(nu) == s(mu).
                    for (const auto& nu : E.morphisms_up_to(1)) {
                        if (E.target(nu) != E.source(mu)) continue;
                        auto munu = E.try_compose(mu, nu);
                        if (!munu) continue;
                        PathOracle z = make_oracle_from_spec(
                            ex.fibration, E.source(nu), fx.oracles.front());
                        // (4) membership transport both ways.
                        auto y = ind(*munu, z);
                        require(cylinder_contains(cylinder(*munu), y),
                                fx.name + ": item 4 fails (ind into Z(mu nu))");
                        require(cylinder_contains(cylinder(nu), res(mu, y)),
                                fx.name + ": item 4 fails (res into Z(nu))");
                        require(cylinder_contains(cylinder(*munu), ind(mu, ind(nu, z))),
                                fx.name + ": item 4 fails (ind of Z(nu))");
                        // (5) res_nu . res_mu == res_{mu nu}
                        auto lhs5 = res(nu, res(mu, y));
                        auto rhs5 = res(*munu, y);
                        // (6) ind_mu . ind_nu == ind_{mu nu}
                        auto lhs6 = ind(mu, ind(nu, z));
                        auto rhs6 = ind(*munu, z);
                        for (const auto& b :
                             B.morphisms_into_up_to(ex.fibration.map_object(E.source(nu)), d)) {
                            ++triples;
                            require(lhs5.eval(b) == rhs5.eval(b), fx.name + ": item 5 fails");
                            auto lifted = B.compose(ex.fibration.map_morphism(*munu), b);
                            require(lhs6.eval(lifted) == rhs6.eval(lifted),
                                    fx.name + ": item 6 fails");
                        }
                    }
                }
            }
        }
        require(triples >= 20, fx.name + ": only " + std::to_string(triples) +
                                   " sampled triples, need at least 20");
    }
}

// --------------------------------------------------------------------------

std::vector<std::vector<std::string>> raw_paths_into(const KGraphSkeleton& s, const ObjectId& v,
                                                     int len) {
    if (len == 0) return {{}};
    std::vector<std::vector<std::string>> out;
    for (const auto& e : s.edges) {
        if (e.tgt != v) continue;
        for (auto tail : raw_paths_into(s, e.src, len - 1)) {
            tail.insert(tail.begin(), e.id);
            out.push_back(std::move(tail));
        }
    }
    return out;
}

void cylinder_oracle_equivalence() {
    for (const auto& name : one_graph_example_names()) {
        auto ex = make_example(name);
        auto kc = std::dynamic_pointer_cast<const KGraphCategory>(ex.category);
        const auto& skel = kc->skeleton();
        require(skel.vertices.size() <= 4 && skel.edges.size() <= 6,
                name + ": fixture outside the stated size bounds");
        auto prefix = [](const std::vector<std::string>& p, const std::vector<std::string>& q) {
            return q.size() <= p.size() && std::equal(q.begin(), q.end(), p.begin());
        };
        for (const auto& v : kc->objects()) {
            auto candidates = kc->morphisms_into_up_to(v, 4);
            for (const auto& alpha : candidates)
                for (const auto& beta : candidates) {
                    auto cells = cylinder_intersection(ex.fibration, alpha, beta);
                    for (int len = 0; len <= 5; ++len) {
                        for (const auto& p : raw_paths_into(skel, v, len)) {
                            bool in_both =
                                prefix(p, kc->word(alpha)) && prefix(p, kc->word(beta));
                            int hits = 0;
                            for (const auto& mu : cells)
                                if (prefix(p, kc->word(mu))) ++hits;
                            require(in_both == (hits > 0),
                                    name + ": membership mismatch at Z(" + alpha + ") n Z(" +
                                        beta + ")");
                            require(hits <= 1, name + ": cells overlap");
                        }
                    }
                }
        }
    }
}

// --------------------------------------------------------------------------

std::vector<SpanningWord> words_up_to(const Fibration& f, int depth) {
    const Category& E = f.domain();
    std::vector<SpanningWord> out;
    auto ms = E.morphisms_up_to(depth);
    for (const auto& a : ms)
        for (const auto& b : ms)
            if (E.source(a) == E.source(b)) out.push_back({a, b});
    return out;
}

void symbolic_algebra() {
    for (const std::string name : {"o2", "o3"}) {
        auto ex = make_example(name);
        auto kc = std::dynamic_pointer_cast<const KGraphCategory>(ex.category);
        std::vector<std::string> edges;
        for (const auto& e : kc->skeleton().edges) edges.push_back(e.id);

        for (const auto& i : edges)
            for (const auto& j : edges)
                for (const auto& k : edges)
                    for (const auto& l : edges) {
                        auto prod = multiply(AlgebraElement::word(ex.fibration, i, j),
                                             AlgebraElement::word(ex.fibration, k, l));
                        if (j == k) {
                            require(prod.terms().size() == 1 &&
                                        prod.terms().begin()->first == SpanningWord{i, l} &&
                                        prod.terms().begin()->second == Scalar(1),
                                    name + ": (s_i s_j*)(s_k s_l*) != delta s_i s_l*");
                        } else {
                            require(prod.is_zero(), name + ": nonzero cross term");
                        }
                    }

        auto pool = words_up_to(ex.fibration, 2);
        std::mt19937_64 rng(seed());
        std::uniform_int_distribution<size_t> pick(0, pool.size() - 1);
        for (int t = 0; t < 100; ++t) {
            auto a = AlgebraElement::word(ex.fibration, pool[pick(rng)].alpha,
                                          pool[pick(rng)].beta);
            auto b = AlgebraElement::word(ex.fibration, pool[pick(rng)].alpha,
                                          pool[pick(rng)].beta);
            auto c = AlgebraElement::word(ex.fibration, pool[pick(rng)].alpha,
                                          pool[pick(rng)].beta);
            require(equal(multiply(multiply(a, b), c), multiply(a, multiply(b, c))) ==
                        Trilean::yes,
                    name + ": associativity fails");
            require(equal(involute(multiply(a, b)), multiply(involute(b), involute(a))) ==
                        Trilean::yes,
                    name + ": involution is not anti-multiplicative");
        }
    }
}

// --------------------------------------------------------------------------

void group_algebra() {
    for (const std::string name : {"z2", "z3", "s3"}) {
        auto ex = make_example(name);
        const Category& G = ex.fibration.domain();
        auto gc = std::dynamic_pointer_cast<const GroupCategory>(ex.fibration.domain_ptr());
        auto elements = G.morphisms_up_to(1);
        const size_t n = elements.size();

        // Words in the generators reduce to a single s_g with coefficient 1.
        std::mt19937_64 rng(seed() + 1);
        std::uniform_int_distribution<size_t> pick(0, n - 1);
        std::bernoulli_distribution star(0.5);
        for (int t = 0; t < 40; ++t) {
            auto acc = AlgebraElement::projection(ex.fibration, "*");
            MorphismId expect = G.identity("*");
            for (int k = 0; k < 4; ++k) {
                const auto& g = elements[pick(rng)];
                if (star(rng)) {
                    acc = multiply(acc, AlgebraElement::generator_star(ex.fibration, g));
                    expect = G.compose(expect, gc->inverse(g));
                } else {
                    acc = multiply(acc, AlgebraElement::generator(ex.fibration, g));
                    expect = G.compose(expect, g);
                }
            }
            require(equal(acc, AlgebraElement::generator(ex.fibration, expect)) == Trilean::yes,
                    name + ": word does not reduce to the expected generator");
            require(acc.terms().size() == 1 && acc.terms().begin()->second == Scalar(1),
                    name + ": reduced word is not a single coefficient-1 term");
        }

        // The normal forms s_g are independent: dimension |H|.
        for (size_t i = 0; i < n; ++i)
            for (size_t j = i + 1; j < n; ++j)
                require(equal(AlgebraElement::generator(ex.fibration, elements[i]),
                              AlgebraElement::generator(ex.fibration, elements[j])) ==
                            Trilean::no,
                        name + ": distinct group elements collapse");

        // Regular representation: exact pass.
        RepAssignment rep;
        rep.exact = true;
        rep.tolerance = 0;
        rep.projections["*"] = ScalarMatrix::identity(n);
        std::map<MorphismId, size_t> index;
        for (size_t i = 0; i < n; ++i) index[elements[i]] = i;
        for (const auto& g : elements) {
            ScalarMatrix m(n, n);
            for (size_t j = 0; j < n; ++j) m.at(index[G.compose(g, elements[j])], j) = Scalar(1);
            rep.isometries[g] = m;
        }
        require(check_ck_relations(ex.fibration, rep, elements).pass(),
                name + ": regular representation fails the relations");

        // A deliberately non-unitary assignment must fail relation 6.
        RepAssignment bad = rep;
        ScalarMatrix nil(n, n);
        nil.at(0, n - 1) = Scalar(1);
        bad.isometries[elements[n - 1]] = nil;
        auto rep_report = check_ck_relations(ex.fibration, bad, elements);
        require(!rep_report.pass() && !rep_report.find("relation6_fiber_sums")->pass,
                name + ": non-unitary assignment slipped through relation 6");
    }
}

// --------------------------------------------------------------------------

void upsilon_intertwines() {
    for (const std::string name : {"o2", "kgraph22"}) {
        auto ex = make_example(name);
        auto pool = words_up_to(ex.fibration, 2);
        for (const auto& wa : pool)
            for (const auto& wb : pool) {
                auto a = AlgebraElement::word(ex.fibration, wa.alpha, wa.beta);
                auto b = AlgebraElement::word(ex.fibration, wb.alpha, wb.beta);
                require(upsilon(multiply(a, b)) == convolve(upsilon(a), upsilon(b)),
                        name + ": upsilon(ab) != upsilon(a) * upsilon(b) at (" + wa.alpha + "," +
                            wa.beta + ")(" + wb.alpha + "," + wb.beta + ")");
            }
    }
}

// --------------------------------------------------------------------------

void groupoid_recovery() {
    for (const std::string name : {"z2", "z3", "pair3"}) {
        auto ex = make_example(name);
        const Category& G = ex.fibration.domain();
        auto table = enumerate_germs(ex.fibration);
        auto all = G.morphisms_up_to(1);
        require(table.germs().size() == all.size(), name + ": germ count differs");

        // gamma -> [gamma, Id_{s(gamma)}, x_{s(gamma)}] matches the tables.
        std::map<MorphismId, int> to_germ;
        for (const auto& g : all) {
            for (size_t p = 0; p < table.units().size(); ++p)
                if (table.units()[p].target() == G.source(g))
                    to_germ[g] =
                        table.find(g, G.identity(G.source(g)), table.units()[p]);
            require(to_germ[g] >= 0, name + ": missing germ for " + g);
        }
        std::set<int> image;
        for (const auto& [g, i] : to_germ) image.insert(i);
        require(image.size() == all.size(), name + ": the correspondence is not injective");
        for (const auto& g : all)
            for (const auto& h : all) {
                auto gh = G.try_compose(g, h);
                int composed = table.compose(to_germ[g], to_germ[h]);
                if (gh)
                    require(composed == to_germ[*gh], name + ": table mismatch at " + g + "." + h);
                else
                    require(composed == -1, name + ": spurious composite " + g + "." + h);
            }

        // Regular representation multiplicative on all basis cells.
        RegularRepresentation rep(ex.fibration, table.units()[0]);
        std::vector<GermBasisSet> cells;
        for (const auto& mu : all)
            for (const auto& nu : all)
                if (G.source(mu) == G.source(nu)) cells.push_back({mu, nu});
        for (const auto& a : cells)
            for (const auto& b : cells) {
                auto ab = convolve(GroupoidFunction::indicator(ex.fibration, a),
                                   GroupoidFunction::indicator(ex.fibration, b));
                ScalarMatrix lhs(rep.orbit().size(), rep.orbit().size());
                for (const auto& [cell, coeff] : ab.terms()) {
                    auto mc = rep.matrix_of(cell);
                    for (size_t r = 0; r < mc.rows(); ++r)
                        for (size_t c = 0; c < mc.cols(); ++c) lhs.at(r, c) += coeff * mc.at(r, c);
                }
                require(lhs == rep.matrix_of(a) * rep.matrix_of(b),
                        name + ": L^u not multiplicative on cells");
            }
    }
}

// --------------------------------------------------------------------------

void aperiodicity() {
    auto o2 = make_example("o2");
    auto constant = make_oracle_from_spec(o2.fibration, "v", "constant:e1");
    auto w = aperiodicity_scan(o2.fibration, constant, 1);
    require(w.witness_found && w.alpha == "e1" && w.beta == "v",
            "constant path must yield the witness (e1, Id)");

    auto fib_path = make_oracle_from_spec(o2.fibration, "v", "fib:e1,e2");
    auto scan = aperiodicity_scan(o2.fibration, fib_path, 6);
    require(!scan.witness_found, "the aperiodic chooser produced a witness at depth 6");
}

// --------------------------------------------------------------------------

void ore_fast_paths() {
    for (const std::string name : {"z2", "z3", "s3", "chain3", "diamond", "antichain2"}) {
        auto ex = make_example(name);
        const Category& B = ex.fibration.codomain();
        auto fast = check_ore(B, 2);
        auto slow = check_ore_exhaustive(B, 2);
        require(fast.right_ore == slow.right_ore &&
                    fast.strongly_right_ore == slow.strongly_right_ore,
                name + ": fast path disagrees with exhaustive search");
        if (name == "antichain2")
            require(!fast.right_ore, "the antichain cospan must fail right Ore");
        else
            require(fast.strongly_right_ore, name + ": expected strongly right Ore");
    }
}

}  // namespace

int main() {
    criterion(1, "dCf gate on the bundled 2-graph with single-entry corruptions", dcf_gate);
    criterion(2, "restriction/induction suite on O2, the 2-graph and Id on S3", res_ind_suite);
    criterion(3, "cylinder intersections match brute-force path enumeration", cylinder_oracle_equivalence);
    criterion(4, "symbolic algebra: delta rule, associativity, involution", symbolic_algebra);
    criterion(5, "group algebras: normal forms, dimension, regular representation", group_algebra);
    criterion(6, "upsilon intertwines multiplication with convolution", upsilon_intertwines);
    criterion(7, "germ groupoids recover Z/2, Z/3 and the pair groupoid", groupoid_recovery);
    criterion(8, "aperiodicity scan: periodic witness and aperiodic certificate", aperiodicity);
    criterion(9, "Ore fast paths agree with exhaustive search", ore_fast_paths);
    return failures;
}
