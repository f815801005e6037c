#include "conduche/json_io.hpp"

#include <fstream>

#include "conduche/graded.hpp"

namespace conduche {

namespace {

[[noreturn]] void bad_doc(const std::string& what) { fail(Errc::bad_input, what); }

std::string require_string(const Json& doc, const char* key) {
    if (!doc.contains(key) || !doc[key].is_string())
        bad_doc(std::string("missing string field '") + key + "'");
    return doc[key].get<std::string>();
}

GroupTable group_table_from_json(const Json& t) {
    GroupTable table;
    for (const auto& e : t.at("elements")) table.elements.push_back(e.get<std::string>());
    for (const auto& row : t.at("products")) {
        table.products.emplace_back();
        for (const auto& v : row) table.products.back().push_back(v.get<std::string>());
    }
    return table;
}

KGraphSkeleton kgraph_from_json(const Json& doc) {
    KGraphSkeleton s;
    for (const auto& v : doc.at("vertices")) s.vertices.push_back(v.get<std::string>());
    for (const auto& e : doc.at("edges"))
        s.edges.push_back({require_string(e, "id"), require_string(e, "src"),
                           require_string(e, "tgt"), e.value("color", 0)});
    if (doc.contains("squares"))
        for (const auto& sq : doc.at("squares")) {
            if (!sq.is_array() || sq.size() != 4)
                bad_doc("each square is a 4-tuple [e, f, f2, e2]");
            s.squares.push_back({sq[0].get<std::string>(), sq[1].get<std::string>(),
                                 sq[2].get<std::string>(), sq[3].get<std::string>()});
        }
    return s;
}

std::shared_ptr<const PosetCategory> poset_from_json(const Json& doc) {
    std::vector<ObjectId> elements;
    if (doc.contains("elements"))
        for (const auto& e : doc.at("elements")) elements.push_back(e.get<std::string>());
    std::vector<std::pair<ObjectId, ObjectId>> leq;
    for (const auto& pair : doc.at("leq")) {
        if (!pair.is_array() || pair.size() != 2) bad_doc("each leq entry is a pair [p, q]");
        leq.emplace_back(pair[0].get<std::string>(), pair[1].get<std::string>());
    }
    return build_poset_category(elements, leq);
}

CategoryPtr explicit_from_json(const Json& doc) {
    ExplicitCategory::Data d;
    for (const auto& o : doc.at("objects")) d.objects.push_back(o.get<std::string>());
    for (const auto& m : doc.at("morphisms"))
        d.morphisms.push_back(
            {require_string(m, "id"), require_string(m, "src"), require_string(m, "tgt")});
    if (doc.contains("composition"))
        for (const auto& t : doc.at("composition")) {
            if (!t.is_array() || t.size() != 3)
                bad_doc("each composition entry is a triple [after, before, composite]");
            d.composition[{t[0].get<std::string>(), t[1].get<std::string>()}] =
                t[2].get<std::string>();
        }
    for (const auto& [x, e] : doc.at("identities").items()) d.identities[x] = e.get<std::string>();
    return std::make_shared<ExplicitCategory>(std::move(d));
}

}  // namespace

CategoryPtr category_from_json(const Json& doc) {
    const std::string backend = require_string(doc, "backend");
    if (backend == "explicit") return explicit_from_json(doc);
    if (backend == "nk") return std::make_shared<NkCategory>(doc.at("k").get<int>());
    if (backend == "group") return build_group_category(group_table_from_json(doc.at("table")));
    if (backend == "poset") return poset_from_json(doc);
    if (backend == "kgraph") return std::make_shared<KGraphCategory>(kgraph_from_json(doc));
    bad_doc("unknown category backend '" + backend + "'");
}

Json category_to_json(const Category& cat) {
    Json doc;
    if (const auto* nk = dynamic_cast<const NkCategory*>(&cat)) {
        doc["backend"] = "nk";
        doc["k"] = nk->k();
        return doc;
    }
    if (const auto* kg = dynamic_cast<const KGraphCategory*>(&cat)) {
        doc["backend"] = "kgraph";
        doc["vertices"] = kg->skeleton().vertices;
        doc["edges"] = Json::array();
        for (const auto& e : kg->skeleton().edges)
            doc["edges"].push_back({{"id", e.id}, {"src", e.src}, {"tgt", e.tgt},
                                    {"color", e.color}});
        doc["squares"] = Json::array();
        for (const auto& sq : kg->skeleton().squares)
            doc["squares"].push_back({sq.e, sq.f, sq.f2, sq.e2});
        return doc;
    }
    if (const auto* gc = dynamic_cast<const GroupCategory*>(&cat)) {
        doc["backend"] = "group";
        Json table;
        std::vector<std::string> elements;
        for (const auto& rec : gc->data().morphisms) elements.push_back(rec.id);
        table["elements"] = elements;
        Json rows = Json::array();
        for (const auto& a : elements) {
            Json row = Json::array();
            for (const auto& b : elements) row.push_back(gc->compose(a, b));
            rows.push_back(row);
        }
        table["products"] = rows;
        doc["table"] = table;
        return doc;
    }
    if (const auto* pc = dynamic_cast<const PosetCategory*>(&cat)) {
        doc["backend"] = "poset";
        doc["elements"] = pc->objects();
        Json leq = Json::array();
        for (const auto& [p, q] : pc->leq_pairs())
            if (p != q) leq.push_back({p, q});
        doc["leq"] = leq;
        return doc;
    }
    if (const auto* ec = dynamic_cast<const ExplicitCategory*>(&cat)) {
        doc["backend"] = "explicit";
        doc["objects"] = ec->objects();
        doc["morphisms"] = Json::array();
        for (const auto& rec : ec->data().morphisms)
            doc["morphisms"].push_back({{"id", rec.id}, {"src", rec.src}, {"tgt", rec.tgt}});
        Json comp = Json::array();
        for (const auto& [pair, c] : ec->data().composition)
            comp.push_back({pair.first, pair.second, c});
        doc["composition"] = comp;
        Json ids;
        for (const auto& [x, e] : ec->data().identities) ids[x] = e;
        doc["identities"] = ids;
        return doc;
    }
    fail(Errc::bad_input, "category backend '" + cat.backend() + "' has no JSON form");
}

Fibration fibration_from_json(const Json& doc) {
    if (doc.contains("domain")) {
        auto dom = category_from_json(doc.at("domain"));
        auto cod = category_from_json(doc.at("codomain"));
        auto omap = std::make_shared<std::map<ObjectId, ObjectId>>();
        auto mmap = std::make_shared<std::map<MorphismId, MorphismId>>();
        for (const auto& [k, v] : doc.at("object_map").items())
            (*omap)[k] = v.get<std::string>();
        for (const auto& [k, v] : doc.at("morphism_map").items())
            (*mmap)[k] = v.get<std::string>();
        return Fibration(
            dom, cod,
            [omap](const ObjectId& x) {
                auto it = omap->find(x);
                if (it == omap->end()) fail(Errc::unknown_object, "object_map misses '" + x + "'");
                return it->second;
            },
            [mmap](const MorphismId& m) {
                auto it = mmap->find(m);
                if (it == mmap->end())
                    fail(Errc::unknown_morphism, "morphism_map misses '" + m + "'");
                return it->second;
            },
            "explicit");
    }

    const std::string backend = require_string(doc, "backend");
    if (backend == "identity") return make_identity_fibration(category_from_json(doc.at("category")));
    if (backend == "kgraph") {
        // Load without the builder's own validation so that the validators
        // can exhibit counterexamples for corrupt square data.
        return build_kgraph(kgraph_from_json(doc), /*validate=*/false).fibration;
    }
    if (backend == "sections") {
        auto base = poset_from_json(doc.at("base"));
        PresheafData data;
        for (const auto& [u, stalk] : doc.at("stalks").items())
            for (const auto& a : stalk) data.stalks[u].push_back(a.get<std::string>());
        if (doc.contains("restrictions"))
            for (const auto& r : doc.at("restrictions")) {
                auto from = require_string(r, "from");
                auto to = require_string(r, "to");
                for (const auto& [a, b] : r.at("map").items())
                    data.restrictions[{from, to}][a] = b.get<std::string>();
            }
        return build_presheaf_sections(base, data).fibration;
    }
    // A bare category document denotes its identity fibration.
    return make_identity_fibration(category_from_json(doc));
}

Json fibration_to_json(const Fibration& f) {
    if (f.kind() == "identity") {
        Json doc;
        doc["backend"] = "identity";
        doc["category"] = category_to_json(f.domain());
        return doc;
    }
    if (f.kind() == "kgraph") return category_to_json(f.domain());
    if (f.kind() == "sections") {
        const auto* base = dynamic_cast<const PosetCategory*>(&f.codomain());
        const auto* total = dynamic_cast<const PosetCategory*>(&f.domain());
        if (!base || !total)
            fail(Errc::bad_input, "sections fibration lost its poset structure");
        Json doc;
        doc["backend"] = "sections";
        doc["base"] = category_to_json(*base);
        Json stalks;
        for (const auto& u : base->objects()) {
            Json list = Json::array();
            for (const auto& so : total->objects())
                if (decode_pair(so).first == u) list.push_back(decode_pair(so).second);
            stalks[u] = list;
        }
        doc["stalks"] = stalks;
        Json restrictions = Json::array();
        for (const auto& u : base->objects()) {
            for (const auto& v : base->objects()) {
                if (u == v || !base->leq(v, u)) continue;
                Json map;
                for (const auto& so : total->objects()) {
                    if (decode_pair(so).first != u) continue;
                    // The restriction of the section is the unique object of
                    // the total poset under it over v.
                    for (const auto& to : total->objects())
                        if (decode_pair(to).first == v && total->leq(to, so))
                            map[decode_pair(so).second] = decode_pair(to).second;
                }
                restrictions.push_back({{"from", u}, {"to", v}, {"map", map}});
            }
        }
        doc["restrictions"] = restrictions;
        return doc;
    }
    // Explicit functor between finite categories.
    if (!f.domain().finite())
        fail(Errc::bad_input, "cannot serialize a graded fibration of kind '" + f.kind() + "'");
    Json doc;
    doc["domain"] = category_to_json(f.domain());
    doc["codomain"] = category_to_json(f.codomain());
    Json omap, mmap;
    for (const auto& x : f.domain().objects()) omap[x] = f.map_object(x);
    for (const auto& x : f.domain().objects())
        for (const auto& m : f.domain().morphisms_into_up_to(x, 1)) mmap[m] = f.map_morphism(m);
    doc["object_map"] = omap;
    doc["morphism_map"] = mmap;
    return doc;
}

Fibration load_fibration_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) fail(Errc::bad_input, "cannot open '" + path + "'");
    Json doc;
    try {
        in >> doc;
    } catch (const std::exception& e) {
        fail(Errc::bad_input, "parse error in '" + path + "': " + e.what());
    }
    return fibration_from_json(doc);
}

Json report_to_json(const ValidationReport& rep) {
    Json checks = Json::array();
    for (const auto& c : rep.checks)
        checks.push_back({{"name", c.name}, {"pass", c.pass}, {"depth", c.depth},
                          {"detail", c.detail}});
    return Json{{"pass", rep.pass()}, {"checks", checks}};
}

Json ore_report_to_json(const OreReport& rep) {
    return Json{{"right_ore", rep.right_ore},
                {"strongly_right_ore", rep.strongly_right_ore},
                {"method", rep.method},
                {"depth", rep.depth},
                {"counterexample", rep.counterexample}};
}

Json dcf_result_to_json(const DcfResult& res) {
    Json doc{{"pass", res.pass}, {"depth", res.depth}};
    if (res.counterexample) {
        doc["counterexample"] = {{"morphism", res.counterexample->phi},
                                 {"left", res.counterexample->left},
                                 {"right", res.counterexample->right},
                                 {"lifts", res.counterexample->lifts}};
    }
    return doc;
}

Json algebra_to_json(const AlgebraElement& a) {
    Json terms = Json::array();
    for (const auto& [w, c] : a.terms())
        terms.push_back({{"alpha", w.alpha}, {"beta", w.beta}, {"re", c.re.str()},
                         {"im", c.im.str()}});
    return Json{{"terms", terms}};
}

AlgebraElement algebra_from_json(const Fibration& f, const Json& doc) {
    AlgebraElement out(f);
    for (const auto& t : doc.at("terms"))
        out.add_term({require_string(t, "alpha"), require_string(t, "beta")},
                     Scalar(Rational::parse(t.value("re", "0")),
                            Rational::parse(t.value("im", "0"))));
    return out;
}

Json cells_to_json(const std::vector<GermBasisSet>& cells) {
    Json out = Json::array();
    for (const auto& c : cells) out.push_back({{"mu", c.mu}, {"nu", c.nu}});
    return out;
}

Json groupoid_function_to_json(const GroupoidFunction& g) {
    Json terms = Json::array();
    for (const auto& [cell, c] : g.terms())
        terms.push_back({{"mu", cell.mu}, {"nu", cell.nu}, {"re", c.re.str()},
                         {"im", c.im.str()}});
    return Json{{"terms", terms}};
}

namespace {

Scalar scalar_from_json(const Json& v) {
    if (v.is_string()) return Scalar(Rational::parse(v.get<std::string>()));
    if (v.is_number_integer()) return Scalar(v.get<long long>());
    if (v.is_object())
        return Scalar(Rational::parse(v.value("re", "0")), Rational::parse(v.value("im", "0")));
    bad_doc("matrix entries are rational strings, integers or {re, im} objects");
}

ScalarMatrix matrix_from_json(const Json& rows) {
    if (!rows.is_array() || rows.empty()) bad_doc("matrix must be a nonempty array of rows");
    ScalarMatrix m(rows.size(), rows[0].size());
    for (size_t i = 0; i < rows.size(); ++i) {
        if (rows[i].size() != m.cols()) bad_doc("ragged matrix");
        for (size_t j = 0; j < m.cols(); ++j) m.at(i, j) = scalar_from_json(rows[i][j]);
    }
    return m;
}

}  // namespace

RepAssignment rep_from_json(const Json& doc) {
    RepAssignment rep;
    for (const auto& [x, m] : doc.at("projections").items())
        rep.projections[x] = matrix_from_json(m);
    for (const auto& [a, m] : doc.at("isometries").items())
        rep.isometries[a] = matrix_from_json(m);
    rep.tolerance = doc.value("tolerance", 1e-9);
    rep.exact = doc.value("exact", false);
    return rep;
}

}  // namespace conduche
