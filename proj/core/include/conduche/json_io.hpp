#pragma once

#include <json.hpp>

#include "conduche/builders.hpp"
#include "conduche/ckalgebra.hpp"

namespace conduche {

using Json = nlohmann::ordered_json;

/// Category documents: {"backend": "explicit" | "nk" | "group" | "poset" |
/// "kgraph", ...}; see the README for the per-backend schemas.
CategoryPtr category_from_json(const Json& doc);
Json category_to_json(const Category& cat);

/// Fibration bundles: either an explicit {"domain", "codomain",
/// "object_map", "morphism_map"} document, {"backend": "identity",
/// "category": ...}, {"backend": "sections", ...}, a kgraph document (its
/// degree functor), or a bare category document (its identity fibration).
Fibration fibration_from_json(const Json& doc);
Json fibration_to_json(const Fibration& f);
Fibration load_fibration_file(const std::string& path);

Json report_to_json(const ValidationReport& rep);
Json ore_report_to_json(const OreReport& rep);
Json dcf_result_to_json(const DcfResult& res);

Json algebra_to_json(const AlgebraElement& a);
AlgebraElement algebra_from_json(const Fibration& f, const Json& doc);

Json cells_to_json(const std::vector<GermBasisSet>& cells);
Json groupoid_function_to_json(const GroupoidFunction& g);

/// {"dimension": n, "projections": {"X": [[...]]}, "isometries": ...,
/// "tolerance": eps, "exact": bool}; entries are rational strings or
/// {"re": "...", "im": "..."} objects.
RepAssignment rep_from_json(const Json& doc);

}  // namespace conduche
