#include <set>

#include "conduche/examples.hpp"
#include "conduche/fibration.hpp"
#include "doctest.h"

using namespace conduche;

namespace {

// E = single non-identity arrow over N, with the arrow sitting over degree d.
Fibration arrow_over_n(int d) {
    ExplicitCategory::Data data;
    data.objects = {"X", "Y"};
    data.morphisms = {{"idX", "X", "X"}, {"idY", "Y", "Y"}, {"arr", "Y", "X"}};
    data.identities = {{"X", "idX"}, {"Y", "idY"}};
    auto dom = std::make_shared<ExplicitCategory>(std::move(data));
    auto cod = std::make_shared<NkCategory>(1);
    return Fibration(
        dom, cod, [](const ObjectId&) { return ObjectId("*"); },
        [d](const MorphismId& m) {
            return m == "arr" ? degree_id({d}) : degree_id({0});
        },
        "explicit");
}

}  // namespace

TEST_CASE("validate_functor") {
    auto id = make_identity_fibration(build_group_category(s3_table()));
    CHECK(validate_functor(id, 1).pass());

    auto [cat, fib] = make_example("kgraph22");
    CHECK(validate_functor(fib, 3).pass());

    // A map sending a composite to the wrong image fails.
    auto z3 = build_group_category(z3_table());
    Fibration bad(z3, z3, [](const ObjectId& x) { return x; },
                  [](const MorphismId& m) { return m == "g2" ? MorphismId("g1") : m; });
    CHECK_FALSE(validate_functor(bad, 1).pass());
}

TEST_CASE("check_dcf: identity fibrations always pass") {
    for (const auto& name : {"z2", "s3", "chain3", "pair3"}) {
        auto ex = make_example(name);
        CHECK(check_dcf(ex.fibration, 2).pass);
    }
}

TEST_CASE("check_dcf: an arrow of degree 2 over N fails on the split 1+1") {
    auto fib = arrow_over_n(2);
    CHECK(validate_functor(fib, 2).pass());
    auto res = check_dcf(fib, 2);
    CHECK_FALSE(res.pass);
    REQUIRE(res.counterexample.has_value());
    CHECK(res.counterexample->phi == "arr");
    CHECK(res.counterexample->lifts == 0);

    // Degree 1 is fine: only trivial factorizations exist.
    CHECK(check_dcf(arrow_over_n(1), 2).pass);
}

TEST_CASE("check_dcf: 2-graph builders pass at depth covering (1,1)") {
    auto [cat, fib] = make_example("kgraph22");
    CHECK(check_dcf(fib, 2).pass);
    CHECK(check_dcf(fib, 4).pass);  // through degree (2,2)
}

TEST_CASE("lift_factorization on a 2-graph") {
    auto ex = make_example("kgraph22");
    auto kc = std::dynamic_pointer_cast<const KGraphCategory>(ex.category);
    // Every degree-(1,1) word splits uniquely as blue.red and as red.blue.
    for (const auto& w : kc->morphisms_into("v", 2)) {
        if (kc->degree(w) != Degree{1, 1}) continue;
        auto asc = lift_factorization(ex.fibration, w, {"(1,0)", "(0,1)"});
        REQUIRE(asc.size() == 2);
        CHECK(kc->compose(asc[0], asc[1]) == w);
        CHECK(ex.fibration.map_morphism(asc[0]) == "(1,0)");
        CHECK(ex.fibration.map_morphism(asc[1]) == "(0,1)");
        auto desc = lift_factorization(ex.fibration, w, {"(0,1)", "(1,0)"});
        CHECK(kc->compose(desc[0], desc[1]) == w);
    }

    // parts = [F(phi)] lifts to [phi].
    auto some = kc->morphisms_into("v", 3).front();
    auto one = lift_factorization(ex.fibration, some,
                                  {ex.fibration.map_morphism(some)});
    CHECK(one == std::vector<MorphismId>{some});

    // Three-part lifts agree with iterated two-part lifts.
    for (const auto& w : kc->morphisms_into("v", 3)) {
        if (kc->degree(w) != Degree{2, 1}) continue;
        auto three = lift_factorization(ex.fibration, w, {"(1,0)", "(0,1)", "(1,0)"});
        auto two = lift_factorization(ex.fibration, w, {"(1,0)", "(1,1)"});
        auto rest = lift_factorization(ex.fibration, two[1], {"(0,1)", "(1,0)"});
        CHECK(three[0] == two[0]);
        CHECK(three[1] == rest[0]);
        CHECK(three[2] == rest[1]);
    }

    CHECK_THROWS_AS(lift_factorization(ex.fibration, "b1", {"(0,1)"}), Error);
}

TEST_CASE("enumerate_fiber") {
    auto ex = make_example("o2");
    CHECK(enumerate_fiber(ex.fibration, "v", "(1)") == std::vector<MorphismId>{"e1", "e2"});
    for (int n = 0; n <= 6; ++n)
        CHECK(enumerate_fiber(ex.fibration, "v", degree_id({n})).size() == (size_t)(1 << n));

    auto idh = make_example("s3");
    for (const auto& h : {"e", "r", "sr"})
        CHECK(enumerate_fiber(idh.fibration, "*", h) == std::vector<MorphismId>{h});
}

TEST_CASE("row-finiteness and strong surjectivity") {
    auto ex = make_example("kgraph22");
    CHECK(check_row_finite(ex.fibration, 3).pass());
    CHECK(check_strong_surjectivity(ex.fibration, 3).pass());

    auto idh = make_example("z2");
    CHECK(check_row_finite(idh.fibration, 1).pass());
    CHECK(check_strong_surjectivity(idh.fibration, 1).pass());

    // A 1-graph with a vertex nothing points at: strong surjectivity fails.
    KGraphSkeleton s;
    s.vertices = {"u", "w"};
    s.edges = {{"a", "u", "w", 0}};  // w receives, u receives nothing
    auto built = build_kgraph(s);
    CHECK(check_row_finite(built.fibration, 3).pass());
    CHECK_FALSE(check_strong_surjectivity(built.fibration, 3).pass());
}

TEST_CASE("fiber enumeration beyond its budget reports FiberInfinite") {
    auto o2 = make_example("o2");
    bool caught = false;
    try {
        enumerate_fiber(o2.fibration, "v", degree_id({18}), 1000);
    } catch (const Error& e) {
        caught = e.code() == Errc::fiber_infinite;
    }
    CHECK(caught);
}

TEST_CASE("ore_complete reports NoCompletion on the antichain cospan") {
    auto anti = make_example("antichain2");
    const auto& P = anti.fibration.domain();
    bool caught = false;
    try {
        ore_complete(P, PosetCategory::arrow("a", "t"), PosetCategory::arrow("b", "t"));
    } catch (const Error& e) {
        caught = e.code() == Errc::no_completion;
    }
    CHECK(caught);
}

TEST_CASE("morphism_properties") {
    auto g = build_group_category(s3_table());
    auto gr = morphism_properties(*g, 1);
    CHECK(gr.left_cancellative);
    CHECK(gr.right_cancellative);
    for (const auto& [m, p] : gr.per_morphism) {
        CHECK(p.monic);
        CHECK(p.epi);
    }

    NkCategory nk(2);
    auto nr = morphism_properties(nk, 3);
    CHECK(nr.left_cancellative);
    CHECK(nr.right_cancellative);

    // Posets: at most one morphism between objects, so everything is monic
    // and epi by the hom-set sizes.
    auto chain = make_example("chain3");
    auto pr = morphism_properties(chain.fibration.domain(), 1);
    CHECK(pr.left_cancellative);
    CHECK(pr.right_cancellative);
}

TEST_CASE("ore_complete canonical choices") {
    NkCategory nk(2);
    auto [p, q] = ore_complete(nk, "(1,0)", "(0,1)");
    CHECK(p == "(0,1)");
    CHECK(q == "(1,0)");

    auto g = build_group_category(s3_table());
    auto [a, b] = ore_complete(*g, "r", "s");
    CHECK(g->compose("r", a) == g->compose("s", b));
    CHECK(b == "e");

    auto diamond = make_example("diamond");
    const auto& dc = diamond.fibration.domain();
    auto [x, y] = ore_complete(dc, PosetCategory::arrow("l", "top"),
                               PosetCategory::arrow("r", "top"));
    CHECK(dc.source(x) == "bot");  // the meet

    CHECK_THROWS_AS(ore_complete(nk, "(1,0)", "(0,1,0)"), Error);
}

TEST_CASE("check_ore: fast paths and the negative fixture") {
    auto diamond = make_example("diamond");
    auto dr = check_ore(diamond.fibration.domain(), 2);
    CHECK(dr.right_ore);
    CHECK(dr.strongly_right_ore);
    CHECK(dr.method == "pullbacks");

    auto s3 = make_example("s3");
    auto gr = check_ore(s3.fibration.domain(), 2);
    CHECK(gr.strongly_right_ore);

    // The antichain {a, b} under a common top: the cospan a -> t <- b has no
    // commuting square.
    auto anti = make_example("antichain2");
    auto ar = check_ore(anti.fibration.domain(), 2);
    CHECK_FALSE(ar.right_ore);
    CHECK(ar.counterexample.find("cospan") != std::string::npos);
}

TEST_CASE("check_ore fast paths agree with exhaustive search") {
    for (const auto& name : {"z2", "z3", "s3", "chain3", "diamond", "antichain2"}) {
        auto ex = make_example(name);
        auto fast = check_ore(ex.fibration.domain(), 2);
        auto slow = check_ore_exhaustive(ex.fibration.domain(), 2);
        CHECK(fast.right_ore == slow.right_ore);
        CHECK(fast.strongly_right_ore == slow.strongly_right_ore);
    }
}

TEST_CASE("products of strongly right Ore categories stay strongly right Ore") {
    auto c = make_example("chain3").fibration.domain_ptr();
    auto d = make_example("diamond").fibration.domain_ptr();
    auto prod = product({c, d});
    auto rep = check_ore(*prod, 1);
    CHECK(rep.right_ore);
    CHECK(rep.strongly_right_ore);
}

TEST_CASE("ore_match") {
    auto o2 = make_example("o2");
    // Equal legs: the diagonal over the fiber of the completion.
    auto diag = ore_match(o2.fibration, "e1", "e1");
    for (const auto& [eta, lam] : diag) CHECK(eta == lam);
    CHECK(diag.size() == 1);  // completion is ((0),(0)) so only the identity

    CHECK(ore_match(o2.fibration, "e1", "e2").empty());

    auto s3 = make_example("s3");
    auto pairs = ore_match(s3.fibration, "r", "s");
    REQUIRE(pairs.size() == 1);
    const auto& g = s3.fibration.domain();
    CHECK(g.compose("r", pairs[0].first) == g.compose("s", pairs[0].second));
    CHECK(pairs[0].second == "e");

    // Swapping the arguments swaps the pairs.
    auto swapped = ore_match(s3.fibration, "s", "r");
    REQUIRE(swapped.size() == 1);
    CHECK(swapped[0].first == pairs[0].second);
    CHECK(swapped[0].second == pairs[0].first);
}

TEST_CASE("identities lift: whenever check_dcf passes, preimages of identities are identities") {
    for (const auto& name : {"o2", "kgraph22", "s3", "chain_sections"}) {
        auto ex = make_example(name);
        REQUIRE(check_dcf(ex.fibration, 2).pass);
        const auto& E = ex.fibration.domain();
        const auto& B = ex.fibration.codomain();
        for (const auto& m : E.morphisms_up_to(2)) {
            if (B.is_identity(ex.fibration.map_morphism(m))) CHECK(E.is_identity(m));
        }
    }
}

TEST_CASE("restrict_to_image") {
    // Embed a 1-graph over N into N^2 via n -> (n, 0); the image is a copy
    // of N and the corestriction is strongly surjective.
    auto o2 = make_example("o2");
    auto kc = std::dynamic_pointer_cast<const KGraphCategory>(o2.category);
    auto n2 = std::make_shared<NkCategory>(2);
    Fibration emb(
        o2.category, n2, [](const ObjectId&) { return ObjectId("*"); },
        [kc](const MorphismId& m) {
            return degree_id({(int)kc->word(m).size(), 0});
        },
        "kgraph");
    emb.set_level_preserving(true);
    emb.flags().set(kFlagDcf, true, 3);
    emb.flags().set(kFlagLocallySplit, true, 3);
    emb.flags().set(kFlagStronglyRightOreBase, true, -1);

    auto hat = restrict_to_image(emb);
    CHECK(hat.flags().get(kFlagStronglySurjective) == true);
    const auto& img = hat.codomain();
    for (int l = 0; l <= 3; ++l) {
        auto ms = img.morphisms_into("*", l);
        REQUIRE(ms.size() == 1);  // one morphism per level, like N
        CHECK(ms[0] == degree_id({l, 0}));
    }
    CHECK(check_strong_surjectivity(hat, 3).pass());

    // Already-surjective fibration: the image is the whole codomain.
    auto [cat, fib] = make_example("o3");
    validate_functor(fib, 2);
    auto hat2 = restrict_to_image(fib);
    for (int l = 0; l <= 2; ++l)
        CHECK(hat2.codomain().morphisms_into("*", l) ==
              fib.codomain().morphisms_into("*", l));

    // Missing flags are rejected.
    auto raw = arrow_over_n(1);
    CHECK_THROWS_AS(restrict_to_image(raw), Error);
}
