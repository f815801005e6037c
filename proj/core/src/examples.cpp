#include "conduche/examples.hpp"

#include <array>

namespace conduche {

namespace {

GroupTable cyclic_table(int n) {
    GroupTable t;
    for (int i = 0; i < n; ++i) t.elements.push_back(i == 0 ? "e" : "g" + std::to_string(i));
    t.products.resize(n, std::vector<std::string>(n));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) t.products[i][j] = t.elements[(i + j) % n];
    return t;
}

}  // namespace

GroupTable z2_table() {
    GroupTable t = cyclic_table(2);
    t.elements = {"e", "g"};
    t.products = {{"e", "g"}, {"g", "e"}};
    return t;
}

GroupTable z3_table() { return cyclic_table(3); }

GroupTable s3_table() {
    // Permutations of {0,1,2}; sr means "s after r".
    using Perm = std::array<int, 3>;
    const Perm pe = {0, 1, 2}, pr = {1, 2, 0}, ps = {1, 0, 2};
    auto mul = [](const Perm& f, const Perm& g) {
        return Perm{f[g[0]], f[g[1]], f[g[2]]};
    };
    std::vector<std::pair<std::string, Perm>> els = {
        {"e", pe},          {"r", pr},          {"rr", mul(pr, pr)},
        {"s", ps},          {"sr", mul(ps, pr)}, {"srr", mul(ps, mul(pr, pr))},
    };
    auto name_of = [&](const Perm& p) {
        for (const auto& [n, q] : els)
            if (q == p) return n;
        fail(Errc::bad_input, "permutation outside S3");
    };
    GroupTable t;
    for (const auto& [n, p] : els) t.elements.push_back(n);
    t.products.resize(6, std::vector<std::string>(6));
    for (size_t i = 0; i < els.size(); ++i)
        for (size_t j = 0; j < els.size(); ++j)
            t.products[i][j] = name_of(mul(els[i].second, els[j].second));
    return t;
}

KGraphSkeleton o_n_skeleton(int n) {
    KGraphSkeleton s;
    s.vertices = {"v"};
    for (int i = 1; i <= n; ++i) s.edges.push_back({"e" + std::to_string(i), "v", "v", 0});
    return s;
}

KGraphSkeleton kgraph11_skeleton() {
    KGraphSkeleton s;
    s.vertices = {"v"};
    s.edges = {{"e", "v", "v", 0}, {"f", "v", "v", 1}};
    s.squares = {{"e", "f", "f", "e"}};
    return s;
}

KGraphSkeleton kgraph22_skeleton() {
    KGraphSkeleton s;
    s.vertices = {"v"};
    s.edges = {{"b1", "v", "v", 0},
               {"b2", "v", "v", 0},
               {"r1", "v", "v", 1},
               {"r2", "v", "v", 1}};
    // A twisted bijection between blue-red and red-blue paths.
    s.squares = {{"b1", "r1", "r1", "b1"},
                 {"b1", "r2", "r2", "b1"},
                 {"b2", "r1", "r2", "b2"},
                 {"b2", "r2", "r1", "b2"}};
    return s;
}

KGraphSkeleton cycle2_skeleton() {
    KGraphSkeleton s;
    s.vertices = {"u", "w"};
    s.edges = {{"a", "u", "w", 0}, {"b", "w", "u", 0}};
    return s;
}

KGraphSkeleton graph4_skeleton() {
    KGraphSkeleton s;
    s.vertices = {"v1", "v2", "v3", "v4"};
    s.edges = {{"e1", "v2", "v1", 0}, {"e2", "v3", "v1", 0}, {"e3", "v1", "v2", 0},
               {"e4", "v4", "v3", 0}, {"e5", "v1", "v4", 0}, {"e6", "v3", "v2", 0}};
    return s;
}

std::shared_ptr<const ExplicitCategory> pair_groupoid(int points) {
    ExplicitCategory::Data d;
    for (int i = 1; i <= points; ++i) d.objects.push_back(std::to_string(i));
    for (const auto& i : d.objects)
        for (const auto& j : d.objects) d.morphisms.push_back({encode_pair(i, j), j, i});
    for (const auto& i : d.objects) d.identities[i] = encode_pair(i, i);
    for (const auto& i : d.objects)
        for (const auto& j : d.objects)
            for (const auto& k : d.objects)
                d.composition[{encode_pair(i, j), encode_pair(j, k)}] = encode_pair(i, k);
    return std::make_shared<ExplicitCategory>(std::move(d), "explicit");
}

namespace {

std::shared_ptr<const PosetCategory> chain_poset(int n) {
    std::vector<ObjectId> els;
    std::vector<std::pair<ObjectId, ObjectId>> leq;
    for (int i = 0; i < n; ++i) els.push_back(std::to_string(i));
    for (int i = 0; i < n; ++i)
        for (int j = i; j < n; ++j) leq.push_back({els[i], els[j]});
    return build_poset_category(els, leq);
}

std::shared_ptr<const PosetCategory> diamond_poset() {
    return build_poset_category({"bot", "l", "r", "top"}, {{"bot", "l"},
                                                           {"bot", "r"},
                                                           {"l", "top"},
                                                           {"r", "top"},
                                                           {"bot", "top"}});
}

// The two-element antichain {a, b} completed with a common upper bound, the
// smallest poset whose cospan (a -> t <- b) has no commuting square.
std::shared_ptr<const PosetCategory> antichain2_poset() {
    return build_poset_category({"a", "b", "t"}, {{"a", "t"}, {"b", "t"}});
}

CategoryWithFibration sections_example() {
    auto base = chain_poset(2);
    PresheafData data;
    data.stalks["0"] = {"x", "y"};
    data.stalks["1"] = {"a", "b"};
    data.restrictions[{"1", "0"}] = {{"a", "x"}, {"b", "y"}};
    return build_presheaf_sections(base, data);
}

struct Entry {
    const char* name;
    const char* description;
};

constexpr Entry kEntries[] = {
    {"o2", "one vertex with two loops (k = 1)"},
    {"o3", "one vertex with three loops (k = 1)"},
    {"kgraph11", "2-graph: one blue and one red loop with the commuting square"},
    {"kgraph22", "2-graph: two blue and two red loops with a twisted square bijection"},
    {"cycle2", "1-graph: directed 2-cycle"},
    {"graph4", "1-graph: four vertices, six edges, source-free"},
    {"z2", "identity fibration on the group Z/2"},
    {"z3", "identity fibration on the group Z/3"},
    {"s3", "identity fibration on the symmetric group S3"},
    {"pair3", "identity fibration on the pair groupoid over three points"},
    {"chain3", "identity fibration on the chain poset 0 <= 1 <= 2"},
    {"diamond", "identity fibration on the diamond lattice"},
    {"antichain2", "identity fibration on the antichain {a, b} with a common top"},
    {"chain_sections", "sections of a two-element presheaf over the chain 0 <= 1"},
};

CategoryWithFibration identity_example(CategoryPtr cat) {
    auto fib = make_identity_fibration(cat);
    return {std::move(cat), std::move(fib)};
}

}  // namespace

std::vector<std::string> example_names() {
    std::vector<std::string> out;
    for (const auto& e : kEntries) out.push_back(e.name);
    return out;
}

std::vector<std::string> one_graph_example_names() { return {"o2", "o3", "cycle2", "graph4"}; }

std::string example_description(const std::string& name) {
    for (const auto& e : kEntries)
        if (name == e.name) return e.description;
    fail(Errc::bad_input, "unknown example '" + name + "'");
}

CategoryWithFibration make_example(const std::string& name) {
    if (name == "o2") return build_kgraph(o_n_skeleton(2));
    if (name == "o3") return build_kgraph(o_n_skeleton(3));
    if (name == "kgraph11") return build_kgraph(kgraph11_skeleton());
    if (name == "kgraph22") return build_kgraph(kgraph22_skeleton());
    if (name == "cycle2") return build_kgraph(cycle2_skeleton());
    if (name == "graph4") return build_kgraph(graph4_skeleton());
    if (name == "z2") return identity_example(build_group_category(z2_table()));
    if (name == "z3") return identity_example(build_group_category(z3_table()));
    if (name == "s3") return identity_example(build_group_category(s3_table()));
    if (name == "pair3") return identity_example(pair_groupoid(3));
    if (name == "chain3") return identity_example(chain_poset(3));
    if (name == "diamond") return identity_example(diamond_poset());
    if (name == "antichain2") return identity_example(antichain2_poset());
    if (name == "chain_sections") return sections_example();
    fail(Errc::bad_input, "unknown example '" + name + "'");
}

}  // namespace conduche
