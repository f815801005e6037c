#include <algorithm>
#include <set>

#include "conduche/builders.hpp"
#include "conduche/examples.hpp"
#include "doctest.h"

using namespace conduche;

namespace {

// Independent oracle: count edge paths of a given length into a vertex by
// walking the raw skeleton, never through the category machinery.
long long count_paths_into(const KGraphSkeleton& s, const ObjectId& v, int len) {
    if (len == 0) return 1;
    long long total = 0;
    for (const auto& e : s.edges)
        if (e.tgt == v) total += count_paths_into(s, e.src, len - 1);
    return total;
}

std::shared_ptr<const PosetCategory> chain(int n) {
    std::vector<ObjectId> els;
    std::vector<std::pair<ObjectId, ObjectId>> leq;
    for (int i = 0; i < n; ++i) els.push_back(std::to_string(i));
    for (int i = 0; i < n; ++i)
        for (int j = i; j < n; ++j) leq.push_back({els[i], els[j]});
    return build_poset_category(els, leq);
}

}  // namespace

TEST_CASE("composition in a poset category") {
    auto cat = chain(3);
    auto pq = PosetCategory::arrow("0", "1");
    auto qr = PosetCategory::arrow("1", "2");
    CHECK(cat->compose(qr, pq) == PosetCategory::arrow("0", "2"));
    CHECK_THROWS_AS(cat->compose(pq, qr), Error);  // wrong way round
}

TEST_CASE("composition in N^2") {
    NkCategory nk(2);
    CHECK(nk.compose("(1,0)", "(0,1)") == "(1,1)");
    CHECK(nk.compose(nk.identity("*"), "(2,3)") == "(2,3)");
    CHECK_THROWS_AS(nk.compose("(1,0)", "(0,1,0)"), Error);
}

TEST_CASE("identity laws via compose") {
    auto g = build_group_category(z3_table());
    for (const auto& m : g->all_morphisms()) {
        CHECK(g->compose(g->identity("*"), m) == m);
        CHECK(g->compose(m, g->identity("*")) == m);
    }
}

TEST_CASE("validate_category accepts Z/3 and N^2") {
    auto g = build_group_category(z3_table());
    CHECK(validate_category(*g, 1).pass());

    NkCategory nk(2);
    auto rep = validate_category(nk, 3);
    CHECK(rep.pass());
    CHECK(rep.find("associativity")->depth == 3);
}

TEST_CASE("validate_category pinpoints a corrupted associativity triple") {
    // Mutate one composite of a valid Z/3 table and re-run: the report must
    // fail and name a triple.
    auto g = build_group_category(z3_table());
    ExplicitCategory::Data d = g->data();
    d.composition[{"g1", "g1"}] = "g1";  // was g2
    ExplicitCategory bad(std::move(d));
    auto rep = validate_category(bad, 1);
    CHECK_FALSE(rep.pass());
    auto* assoc = rep.find("associativity");
    REQUIRE(assoc != nullptr);
    CHECK_FALSE(assoc->pass);
    CHECK(assoc->detail.find("triple") != std::string::npos);
}

TEST_CASE("slice of N^k over the point") {
    auto nk = std::make_shared<NkCategory>(2);
    auto sl = slice(nk, "*");
    // Objects at level l are the degree-l vectors.
    CHECK(sl->objects_at(1) == std::vector<ObjectId>{"(0,1)", "(1,0)"});
    // The pair (p, q) runs from p+q to p.
    auto m = SliceCategory::make("(1,0)", "(0,1)");
    CHECK(sl->target(m) == "(1,0)");
    CHECK(sl->source(m) == "(1,1)");
    // Composition per the triangle rule, and the projections match.
    auto m2 = SliceCategory::make("(1,1)", "(2,0)");
    auto c = sl->compose(m2, sl->identity(sl->source(m2)));
    CHECK(c == m2);
    auto chained = sl->try_compose(SliceCategory::make("(1,0)", "(0,1)"),
                                   SliceCategory::make("(1,1)", "(2,0)"));
    REQUIRE(chained.has_value());
    CHECK(*chained == SliceCategory::make("(1,0)", "(2,1)"));
}

TEST_CASE("slice morphisms satisfy proj1 . proj2 == source") {
    auto nk = std::make_shared<NkCategory>(2);
    auto sl = slice(nk, "*");
    for (const auto& a : sl->objects_at(2)) {
        for (const auto& m : sl->morphisms_into(a, 1)) {
            auto p1 = sl->proj1(m);
            auto p2 = sl->proj2(m);
            CHECK(nk->compose(p1, p2) == sl->source(m));
        }
    }
}

TEST_CASE("slice of the trivial category is trivial") {
    auto t = build_group_category({{"e"}, {{"e"}}});
    auto sl = slice(t, "*");
    CHECK(sl->objects() == std::vector<ObjectId>{"e"});
    CHECK(validate_category(*sl, 1).pass());
}

TEST_CASE("slice of a group has singleton hom-sets") {
    // Between any two objects (group elements) a and b there is exactly one
    // triangle: the witness is a^-1 b.
    auto g = build_group_category(z2_table());
    auto sl = slice(g, "*");
    auto objs = sl->objects();
    CHECK(objs.size() == 2);
    for (const auto& a : objs) {
        int incoming = 0;
        for (const auto& m : sl->morphisms_into_up_to(a, 1)) {
            (void)m;
            ++incoming;
        }
        CHECK(incoming == (int)objs.size());  // one from each object
        // and per source object exactly one:
        std::map<ObjectId, int> per_source;
        for (const auto& m : sl->morphisms_into_up_to(a, 1)) ++per_source[sl->source(m)];
        for (const auto& [src, cnt] : per_source) CHECK(cnt == 1);
    }
}

TEST_CASE("product of N x N matches N^2 through level 3") {
    auto n1 = std::make_shared<NkCategory>(1);
    auto prod = product({n1, n1});
    NkCategory n2(2);
    // The canonical bijection sends "(a)|(b)" to "(a,b)"; composition tables
    // agree on every pair up to level 3.
    auto obj = prod->objects()[0];
    std::vector<MorphismId> pm = prod->morphisms_into_up_to(obj, 3);
    auto translate = [](const MorphismId& m) {
        auto [a, b] = decode_pair(m);
        return "(" + a.substr(1, a.size() - 2) + "," + b.substr(1, b.size() - 2) + ")";
    };
    std::set<MorphismId> seen;
    for (const auto& m : pm) seen.insert(translate(m));
    for (const auto& m : n2.morphisms_into_up_to("*", 3))
        CHECK(seen.count(m) == 1);
    for (const auto& a : pm)
        for (const auto& b : pm) {
            auto c = prod->try_compose(a, b);
            REQUIRE(c.has_value());
            CHECK(translate(*c) == n2.compose(translate(a), translate(b)));
        }
}

TEST_CASE("product with the trivial category is isomorphic to the factor") {
    auto t = build_group_category({{"e"}, {{"e"}}});
    auto g = build_group_category(z3_table());
    auto prod = product({g, t});
    auto obj = prod->objects()[0];
    auto ms = prod->morphisms_into_up_to(obj, 1);
    CHECK(ms.size() == 3);
    for (const auto& a : ms)
        for (const auto& b : ms) {
            auto c = prod->try_compose(a, b);
            REQUIRE(c.has_value());
            CHECK(decode_parts(*c)[0] == g->compose(decode_parts(a)[0], decode_parts(b)[0]));
        }
}

TEST_CASE("group builder") {
    auto z2 = build_group_category(z2_table());
    CHECK(z2->all_morphisms().size() == 2);

    auto s3 = build_group_category(s3_table());
    CHECK(s3->all_morphisms().size() == 6);
    // Nonabelian: s.r != r.s.
    CHECK(s3->compose("s", "r") != s3->compose("r", "s"));
    CHECK(validate_category(*s3, 1).pass());

    GroupTable broken;  // N under truncated addition: no inverses
    broken.elements = {"0", "1"};
    broken.products = {{"0", "1"}, {"1", "1"}};
    CHECK_THROWS_AS(build_group_category(broken), Error);
}

TEST_CASE("poset builder") {
    auto c3 = chain(3);
    CHECK(c3->all_morphisms().size() == 6);  // pairs p <= q in a 3-chain
    CHECK(validate_category(*c3, 1).pass());

    auto anti = build_poset_category({"a", "b"}, {});
    CHECK(anti->all_morphisms().size() == 2);  // just the identities

    CHECK_THROWS_AS(build_poset_category({"a", "b"}, {{"a", "b"}, {"b", "a"}}), Error);
}

TEST_CASE("k-graph builder: fiber counts match brute-force path counts") {
    auto skel = o_n_skeleton(2);
    auto [cat, fib] = build_kgraph(skel);
    for (int n = 0; n <= 5; ++n) {
        auto words = cat->morphisms_into("v", n);
        CHECK((long long)words.size() == count_paths_into(skel, "v", n));
        CHECK((long long)words.size() == (1LL << n));
        // duplicate-free and stable
        std::set<MorphismId> uniq(words.begin(), words.end());
        CHECK(uniq.size() == words.size());
        CHECK(words == cat->morphisms_into("v", n));
    }

    auto g4 = graph4_skeleton();
    auto built = build_kgraph(g4);
    for (const auto& v : built.category->objects())
        for (int n = 0; n <= 4; ++n)
            CHECK((long long)built.category->morphisms_into(v, n).size() ==
                  count_paths_into(g4, v, n));
}

TEST_CASE("k-graph builder: the commuting 2-graph has singleton fibers") {
    auto [cat, fib] = build_kgraph(kgraph11_skeleton());
    for (int m = 0; m <= 2; ++m)
        for (int n = 0; n <= 2; ++n) {
            int count = 0;
            for (const auto& w : cat->morphisms_into("v", m + n)) {
                auto kc = std::dynamic_pointer_cast<const KGraphCategory>(cat);
                auto d = kc->degree(w);
                if (d[0] == m && d[1] == n) ++count;
            }
            CHECK(count == 1);
        }
}

TEST_CASE("k-graph builder rejects non-bijective squares") {
    auto skel = kgraph22_skeleton();
    skel.squares[3].f2 = "r2";  // collides with the image of (b2, r1)
    CHECK_THROWS_AS(build_kgraph(skel), Error);

    KGraphSkeleton dangling;
    dangling.vertices = {"v"};
    dangling.edges = {{"e", "v", "w", 0}};
    CHECK_THROWS_AS(build_kgraph(dangling), Error);
}

TEST_CASE("presheaf sections: constant presheaf over a chain mirrors the base") {
    auto base = chain(3);
    PresheafData data;
    for (const auto& x : base->objects()) data.stalks[x] = {"pt"};
    for (const auto& p : base->objects())
        for (const auto& q : base->objects())
            if (base->leq(p, q) && p != q) data.restrictions[{q, p}] = {{"pt", "pt"}};
    auto built = build_presheaf_sections(base, data);
    CHECK(built.category->objects().size() == base->objects().size());
    auto ec = std::dynamic_pointer_cast<const ExplicitCategory>(built.category);
    CHECK(ec->all_morphisms().size() == 6);
}

TEST_CASE("presheaf sections: functoriality violation is rejected") {
    auto base = chain(3);
    PresheafData data;
    data.stalks["0"] = {"x", "y"};
    data.stalks["1"] = {"x", "y"};
    data.stalks["2"] = {"x", "y"};
    data.restrictions[{"1", "0"}] = {{"x", "x"}, {"y", "y"}};
    data.restrictions[{"2", "1"}] = {{"x", "y"}, {"y", "x"}};  // swap
    data.restrictions[{"2", "0"}] = {{"x", "x"}, {"y", "y"}};  // should be the swap
    CHECK_THROWS_AS(build_presheaf_sections(base, data), Error);
}

TEST_CASE("presheaf sections over a non-Ore base are rejected") {
    auto vee = build_poset_category({"a", "b", "t"}, {{"a", "t"}, {"b", "t"}});
    PresheafData data;
    for (const auto& x : vee->objects()) data.stalks[x] = {"pt"};
    data.restrictions[{"t", "a"}] = {{"pt", "pt"}};
    data.restrictions[{"t", "b"}] = {{"pt", "pt"}};
    CHECK_THROWS_AS(build_presheaf_sections(vee, data), Error);
}

TEST_CASE("graded enumerators are duplicate-free and deterministic") {
    NkCategory nk(3);
    for (int l = 0; l <= 3; ++l) {
        auto a = nk.morphisms_into("*", l);
        auto b = nk.morphisms_into("*", l);
        CHECK(a == b);
        std::set<MorphismId> uniq(a.begin(), a.end());
        CHECK(uniq.size() == a.size());
    }
}
