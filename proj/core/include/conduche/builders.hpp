#pragma once

#include "conduche/fibration.hpp"
#include "conduche/graded.hpp"

namespace conduche {

struct GroupTable {
    std::vector<std::string> elements;            // elements[0] need not be the identity
    std::vector<std::vector<std::string>> products;  // products[i][j] = elements[i] * elements[j]
};

/// One-object category of a finite group; the table is checked for
/// associativity, a two-sided identity and inverses.
std::shared_ptr<const GroupCategory> build_group_category(const GroupTable& table,
                                                          const ObjectId& object_name = "*");

/// Category of a finite poset given by a relation (reflexivity is implied;
/// antisymmetry and transitivity are checked).
std::shared_ptr<const PosetCategory> build_poset_category(
    const std::vector<ObjectId>& elements, const std::vector<std::pair<ObjectId, ObjectId>>& leq);

struct CategoryWithFibration {
    CategoryPtr category;  // the total category E
    Fibration fibration;   // E -> B
};

/**
 * Path category of a k-colored skeleton together with its degree functor to
 * N^k.  Squares must form bijections between ascending and descending
 * two-color paths; for k >= 3 the coherence of the squares is validated by
 * running the dCf checker up to total degree k (covering degree (1,...,1)).
 * Set validate = false to build from raw data for counterexample studies.
 */
CategoryWithFibration build_kgraph(const KGraphSkeleton& skeleton, bool validate = true);

struct PresheafData {
    std::map<ObjectId, std::vector<std::string>> stalks;  // per poset element
    // restriction along V <= U: (U, V) -> (element of stalk(U) -> element of stalk(V))
    std::map<std::pair<ObjectId, ObjectId>, std::map<std::string, std::string>> restrictions;
};

/// Poset of local sections (U, a) with the projection functor to the base
/// poset; the restrictions are checked for functoriality and the base for the
/// right Ore property.
CategoryWithFibration build_presheaf_sections(std::shared_ptr<const PosetCategory> base,
                                              const PresheafData& data);

/// Section object ids are encode_pair(U, a).
inline ObjectId section_object(const ObjectId& u, const std::string& a) {
    return encode_pair(u, a);
}

}  // namespace conduche
