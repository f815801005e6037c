#include <random>

#include "conduche/ckalgebra.hpp"
#include "conduche/examples.hpp"
#include "doctest.h"

using namespace conduche;

namespace {

ScalarMatrix mat2(long long a, long long b, long long c, long long d) {
    ScalarMatrix m(2, 2);
    m.at(0, 0) = Scalar(a);
    m.at(0, 1) = Scalar(b);
    m.at(1, 0) = Scalar(c);
    m.at(1, 1) = Scalar(d);
    return m;
}

// Product expansion forced through a non-canonical completion (the canonical
// one extended by `extra`); the result must describe the same element.
AlgebraElement multiply_with_extension(const AlgebraElement& a, const AlgebraElement& b,
                                       const MorphismId& extra) {
    const Fibration& f = a.fibration();
    const Category& E = f.domain();
    const Category& B = f.codomain();
    AlgebraElement out(f);
    for (const auto& [wa, ca] : a.terms()) {
        for (const auto& [wb, cb] : b.terms()) {
            if (E.target(wa.beta) != E.target(wb.alpha)) continue;
            auto [p, q] =
                ore_complete(B, f.map_morphism(wa.beta), f.map_morphism(wb.alpha));
            MorphismId pc = B.compose(p, extra);
            MorphismId qc = B.compose(q, extra);
            for (const auto& eta : enumerate_fiber(f, E.source(wa.beta), pc))
                for (const auto& lam : enumerate_fiber(f, E.source(wb.alpha), qc)) {
                    auto be = E.try_compose(wa.beta, eta);
                    auto ml = E.try_compose(wb.alpha, lam);
                    if (!be || !ml || *be != *ml) continue;
                    out.add_term({E.compose(wa.alpha, eta), E.compose(wb.beta, lam)}, ca * cb);
                }
        }
    }
    return out;
}

std::vector<SpanningWord> spanning_words_up_to(const Fibration& f, int depth) {
    const Category& E = f.domain();
    std::vector<SpanningWord> out;
    auto ms = E.morphisms_up_to(depth);
    for (const auto& a : ms)
        for (const auto& b : ms)
            if (E.source(a) == E.source(b)) out.push_back({a, b});
    return out;
}

}  // namespace

TEST_CASE("multiply: generator orthogonality in O_2") {
    auto o2 = make_example("o2");
    std::vector<MorphismId> edges = {"e1", "e2"};
    for (const auto& i : edges)
        for (const auto& j : edges)
            for (const auto& k : edges)
                for (const auto& l : edges) {
                    auto left = multiply(AlgebraElement::generator(o2.fibration, i),
                                         AlgebraElement::generator_star(o2.fibration, j));
                    auto right = multiply(AlgebraElement::generator(o2.fibration, k),
                                          AlgebraElement::generator_star(o2.fibration, l));
                    auto prod = multiply(left, right);
                    if (j == k) {
                        REQUIRE(prod.terms().size() == 1);
                        CHECK(prod.terms().begin()->first == SpanningWord{i, l});
                        CHECK(prod.terms().begin()->second == Scalar(1));
                    } else {
                        CHECK(prod.is_zero());
                    }
                }
}

TEST_CASE("multiply: group translations") {
    auto s3 = make_example("s3");
    const auto& G = s3.fibration.domain();
    auto gc = std::dynamic_pointer_cast<const GroupCategory>(s3.fibration.domain_ptr());
    for (const auto& g : G.morphisms_up_to(1))
        for (const auto& h : G.morphisms_up_to(1)) {
            auto prod = multiply(AlgebraElement::generator_star(s3.fibration, g),
                                 AlgebraElement::generator(s3.fibration, h));
            auto expect = AlgebraElement::generator(s3.fibration, G.compose(gc->inverse(g), h));
            CHECK(equal(prod, expect) == Trilean::yes);
        }
}

TEST_CASE("multiply: projections gate generators") {
    auto cyc = make_example("cycle2");
    const auto& E = cyc.fibration.domain();
    auto pa = AlgebraElement::projection(cyc.fibration, "u");
    auto sa = AlgebraElement::generator(cyc.fibration, "a");  // a: u -> w
    auto sb = AlgebraElement::generator(cyc.fibration, "b");  // b: w -> u
    CHECK(E.target("b") == "u");
    CHECK(equal(multiply(pa, sb), sb) == Trilean::yes);
    CHECK(multiply(pa, sa).is_zero());
}

TEST_CASE("involution") {
    auto o2 = make_example("o2");
    auto s1 = AlgebraElement::generator(o2.fibration, "e1");
    auto s1s = involute(s1);
    REQUIRE(s1s.terms().size() == 1);
    CHECK(s1s.terms().begin()->first == SpanningWord{"v", "e1"});

    auto p = AlgebraElement::projection(o2.fibration, "v");
    CHECK(equal(involute(p), p) == Trilean::yes);

    // Anti-multiplicative on seeded random pairs, exactly.
    auto words = spanning_words_up_to(o2.fibration, 2);
    std::mt19937_64 rng(7);
    std::uniform_int_distribution<size_t> pick(0, words.size() - 1);
    for (int t = 0; t < 50; ++t) {
        auto wa = words[pick(rng)];
        auto wb = words[pick(rng)];
        auto a = AlgebraElement::word(o2.fibration, wa.alpha, wa.beta, Scalar(Rational(2), Rational(1)));
        auto b = AlgebraElement::word(o2.fibration, wb.alpha, wb.beta, Scalar(Rational(1, 3)));
        CHECK(equal(involute(multiply(a, b)), multiply(involute(b), involute(a))) ==
              Trilean::yes);
    }
}

TEST_CASE("refine") {
    auto o2 = make_example("o2");
    auto p = AlgebraElement::projection(o2.fibration, "v");

    auto noop = refine(p, "(0)");
    CHECK(equal(noop, p) == Trilean::yes);
    CHECK(noop.terms() == p.terms());  // literally unchanged

    auto once = refine(p, "(1)");
    AlgebraElement expect(o2.fibration);
    expect.add_term({"e1", "e1"}, Scalar(1));
    expect.add_term({"e2", "e2"}, Scalar(1));
    CHECK(once.terms() == expect.terms());

    // Refining twice equals refining by the composite.
    auto twice = refine(refine(p, "(1)"), "(1)");
    auto direct = refine(p, "(2)");
    CHECK(twice.terms() == direct.terms());
}

TEST_CASE("equal by common refinement") {
    auto o2 = make_example("o2");
    auto p = AlgebraElement::projection(o2.fibration, "v");
    CHECK(equal(p, p) == Trilean::yes);
    CHECK(equal(AlgebraElement::generator(o2.fibration, "e1"),
                AlgebraElement::generator(o2.fibration, "e2")) == Trilean::no);
    AlgebraElement sum(o2.fibration);
    sum.add_term({"e1", "e1"}, Scalar(1));
    sum.add_term({"e2", "e2"}, Scalar(1));
    CHECK(equal(p, sum) == Trilean::yes);
}

TEST_CASE("relations recovered by multiply") {
    auto o2 = make_example("o2");
    // (5): distinct lifts annihilate.
    CHECK(multiply(AlgebraElement::generator_star(o2.fibration, "e2"),
                   AlgebraElement::generator(o2.fibration, "e1"))
              .is_zero());
    // (4): s*_a s_a == p_{s(a)}.
    auto p = AlgebraElement::projection(o2.fibration, "v");
    for (const auto& a : {"e1", "e2", "e1.e2"})
        CHECK(equal(multiply(AlgebraElement::generator_star(o2.fibration, a),
                             AlgebraElement::generator(o2.fibration, a)),
                    p) == Trilean::yes);
    // (2): s_{ab} == s_a s_b.
    const auto& E = o2.fibration.domain();
    auto ab = E.compose("e1", "e2");
    CHECK(equal(AlgebraElement::generator(o2.fibration, ab),
                multiply(AlgebraElement::generator(o2.fibration, "e1"),
                         AlgebraElement::generator(o2.fibration, "e2"))) == Trilean::yes);
}

TEST_CASE("cylinder facts transfer to the algebra") {
    auto o2 = make_example("o2");
    const auto& E = o2.fibration.domain();
    auto words = E.morphisms_up_to(2);
    for (const auto& a : words) {
        for (const auto& b : words) {
            auto cells = cylinder_intersection(o2.fibration, a, b);
            if (cells.empty()) {
                // Z(a) n Z(b) empty forces s*_a s_b == 0.
                CHECK(multiply(AlgebraElement::generator_star(o2.fibration, a),
                               AlgebraElement::generator(o2.fibration, b))
                          .is_zero());
            }
        }
        // Mutual refinement of Z(a) with itself certifies the range
        // projections agree.
        auto self_cells = cylinder_intersection(o2.fibration, a, a);
        AlgebraElement covered(o2.fibration);
        for (const auto& mu : self_cells) covered.add_term({mu, mu}, Scalar(1));
        auto range_proj = multiply(AlgebraElement::generator(o2.fibration, a),
                                   AlgebraElement::generator_star(o2.fibration, a));
        CHECK(equal(range_proj, covered) == Trilean::yes);
    }
}

TEST_CASE("multiply is independent of the completion") {
    auto fixtures = {std::string("o2"), std::string("kgraph22")};
    std::mt19937_64 rng(20240818);
    for (const auto& name : fixtures) {
        auto ex = make_example(name);
        auto words = spanning_words_up_to(ex.fibration, 2);
        std::uniform_int_distribution<size_t> pick(0, words.size() - 1);
        MorphismId extra =
            ex.fibration.codomain().morphisms_into("*", 1).front();  // one level deeper
        for (int t = 0; t < 25; ++t) {
            auto wa = words[pick(rng)];
            auto wb = words[pick(rng)];
            auto a = AlgebraElement::word(ex.fibration, wa.alpha, wa.beta);
            auto b = AlgebraElement::word(ex.fibration, wb.alpha, wb.beta);
            CHECK(equal(multiply(a, b), multiply_with_extension(a, b, extra)) == Trilean::yes);
        }
    }
    // Group fixture: extend by a nontrivial group element.
    auto s3 = make_example("s3");
    auto words = spanning_words_up_to(s3.fibration, 1);
    std::uniform_int_distribution<size_t> pick(0, words.size() - 1);
    for (int t = 0; t < 25; ++t) {
        auto wa = words[pick(rng)];
        auto wb = words[pick(rng)];
        auto a = AlgebraElement::word(s3.fibration, wa.alpha, wa.beta);
        auto b = AlgebraElement::word(s3.fibration, wb.alpha, wb.beta);
        CHECK(equal(multiply(a, b), multiply_with_extension(a, b, "r")) == Trilean::yes);
    }
}

TEST_CASE("upsilon maps words to indicator functions") {
    auto o2 = make_example("o2");
    auto s1 = AlgebraElement::generator(o2.fibration, "e1");
    auto img = upsilon(s1);
    REQUIRE(img.terms().size() == 1);
    CHECK(img.terms().begin()->first == GermBasisSet{"e1", "v"});

    auto p = upsilon(AlgebraElement::projection(o2.fibration, "v"));
    REQUIRE(p.terms().size() == 1);
    CHECK(p.terms().begin()->first == GermBasisSet{"v", "v"});
}

TEST_CASE("upsilon is a star-homomorphism on sampled pairs") {
    for (const auto& name : {"o2", "kgraph22"}) {
        auto ex = make_example(name);
        auto words = spanning_words_up_to(ex.fibration, 1);
        for (const auto& wa : words)
            for (const auto& wb : words) {
                auto a = AlgebraElement::word(ex.fibration, wa.alpha, wa.beta);
                auto b = AlgebraElement::word(ex.fibration, wb.alpha, wb.beta);
                CHECK(upsilon(multiply(a, b)) == convolve(upsilon(a), upsilon(b)));
                CHECK(upsilon(involute(a)) == upsilon(a).star());
            }
    }
}

TEST_CASE("check_ck_relations: the regular representation of Z/2") {
    auto z2 = make_example("z2");
    RepAssignment rep;
    rep.exact = true;
    rep.projections["*"] = ScalarMatrix::identity(2);
    rep.isometries["e"] = ScalarMatrix::identity(2);
    rep.isometries["g"] = mat2(0, 1, 1, 0);
    auto report = check_ck_relations(z2.fibration, rep, {"e", "g"});
    CHECK(report.pass());

    // S_g is forced unitary: both S*S and SS* already checked above; a
    // non-unitary choice breaks relation 6.
    RepAssignment bad = rep;
    bad.isometries["g"] = mat2(0, 1, 0, 0);
    auto broken = check_ck_relations(z2.fibration, bad, {"e", "g"});
    CHECK_FALSE(broken.pass());
    CHECK_FALSE(broken.find("relation6_fiber_sums")->pass);
}

TEST_CASE("check_ck_relations: the trivial representation of a group") {
    auto z3 = make_example("z3");
    RepAssignment rep;
    rep.exact = true;
    rep.projections["*"] = ScalarMatrix::identity(1);
    for (const auto& g : z3.fibration.domain().morphisms_up_to(1))
        rep.isometries[g] = ScalarMatrix::identity(1);
    CHECK(check_ck_relations(z3.fibration, rep, {"e", "g1", "g2"}).pass());
}

TEST_CASE("path_representation on finite path spaces") {
    auto z2 = make_example("z2");
    auto rep = path_representation(z2.fibration);
    CHECK(rep.projections.at("*").rows() == 1);  // one infinite path
    CHECK(rep.isometries.at("g") == ScalarMatrix::identity(1));
    CHECK(check_ck_relations(z2.fibration, rep, {"e", "g"}).pass());

    // Two isolated objects: the projections are orthogonal diagonal blocks.
    ExplicitCategory::Data d;
    d.objects = {"A", "B"};
    d.morphisms = {{"idA", "A", "A"}, {"idB", "B", "B"}};
    d.identities = {{"A", "idA"}, {"B", "idB"}};
    auto disc = std::make_shared<ExplicitCategory>(std::move(d));
    auto fib = make_identity_fibration(disc);
    auto drep = path_representation(fib);
    CHECK(drep.projections.at("A").rows() == 2);
    ScalarMatrix zero(2, 2);
    CHECK(drep.projections.at("A") * drep.projections.at("B") == zero);
    CHECK(drep.projections.at("A") + drep.projections.at("B") == ScalarMatrix::identity(2));
    CHECK(check_ck_relations(fib, drep, {"idA", "idB"}).pass());

    // The pair groupoid: three paths, permutation-like partial isometries.
    auto pair3 = make_example("pair3");
    auto prep = path_representation(pair3.fibration);
    CHECK(check_ck_relations(pair3.fibration, prep,
                             {encode_pair("1", "2"), encode_pair("1", "1")})
              .pass());
}

TEST_CASE("truncated path representation asserts only the surviving relations") {
    auto o2 = make_example("o2");
    auto rep = truncated_path_representation(o2.fibration, 2);
    CHECK(rep.approximate);
    CHECK(rep.projections.at("v").rows() == 4);  // the four length-2 words
    auto report = check_ck_relations(o2.fibration, rep, {"(1)"});
    CHECK(report.find("relation1_orthogonal_projections")->pass);
    CHECK(report.find("relation2_multiplicative")->pass);
    CHECK(report.find("relation3_identities")->pass);
    // Truncation collapses tails, so the isometry relations fail at the
    // boundary; that is exactly why the output carries the approximate tag.
    CHECK_FALSE(report.find("relation4_partial_isometries")->pass);
    CHECK_FALSE(report.pass());

    CHECK_THROWS_AS(truncated_path_representation(make_example("z2").fibration, 2), Error);
}

TEST_CASE("injectivity_probe") {
    auto o2 = make_example("o2");
    check_ore(o2.fibration.codomain(), 2);  // flags already set by the builder
    std::vector<std::pair<MorphismId, MorphismId>> pairs = {
        {"e1", "e1"}, {"e1", "e2"}, {"e1.e1", "e1.e2"}};
    auto report = injectivity_probe(o2.fibration, pairs);
    CHECK(report.pass());

    // Missing flags are rejected.
    auto anti = make_example("antichain2");
    CHECK_THROWS_AS(injectivity_probe(anti.fibration, pairs), Error);
}

TEST_CASE("group algebra: normal forms and dimension") {
    for (const auto& name : {"z2", "z3", "s3"}) {
        auto ex = make_example(name);
        const auto& G = ex.fibration.domain();
        auto gc = std::dynamic_pointer_cast<const GroupCategory>(ex.fibration.domain_ptr());
        auto elements = G.morphisms_up_to(1);

        // Every word in generators and adjoints reduces to a single s_g.
        std::mt19937_64 rng(99);
        std::uniform_int_distribution<size_t> pick(0, elements.size() - 1);
        std::bernoulli_distribution star(0.5);
        for (int t = 0; t < 30; ++t) {
            auto acc = AlgebraElement::projection(ex.fibration, "*");
            MorphismId expect = G.identity("*");
            for (int k = 0; k < 4; ++k) {
                auto g = elements[pick(rng)];
                if (star(rng)) {
                    acc = multiply(acc, AlgebraElement::generator_star(ex.fibration, g));
                    expect = G.compose(expect, gc->inverse(g));
                } else {
                    acc = multiply(acc, AlgebraElement::generator(ex.fibration, g));
                    expect = G.compose(expect, g);
                }
            }
            CHECK(equal(acc, AlgebraElement::generator(ex.fibration, expect)) == Trilean::yes);
        }

        // The normal forms s_g are pairwise independent: dimension |H|.
        for (const auto& g : elements)
            for (const auto& h : elements)
                if (g != h)
                    CHECK(equal(AlgebraElement::generator(ex.fibration, g),
                                AlgebraElement::generator(ex.fibration, h)) == Trilean::no);
    }
}

TEST_CASE("parse_word_product") {
    auto o2 = make_example("o2");
    auto a = parse_word_product(o2.fibration, "s(e1) s(e2)*");
    REQUIRE(a.terms().size() == 1);
    CHECK(a.terms().begin()->first == SpanningWord{"e1", "e2"});
    auto b = parse_word_product(o2.fibration, "p(v) s(e1)");
    CHECK(equal(b, AlgebraElement::generator(o2.fibration, "e1")) == Trilean::yes);
    CHECK_THROWS_AS(parse_word_product(o2.fibration, "x(e1)"), Error);
}
