#pragma once

#include "conduche/builders.hpp"

namespace conduche {

/// The bundled example catalog: the worked examples of the construction
/// (cycle-free graphs, 2-graphs, groups, posets, presheaf sections, the pair
/// groupoid), each packaged as a category plus its fibration.
std::vector<std::string> example_names();
std::string example_description(const std::string& name);
CategoryWithFibration make_example(const std::string& name);

/// Names of the bundled 1-graph fixtures (k = 1), used by the cylinder
/// cross-checks.
std::vector<std::string> one_graph_example_names();

GroupTable z2_table();
GroupTable z3_table();
GroupTable s3_table();

KGraphSkeleton o_n_skeleton(int n);      // one vertex, n loops
KGraphSkeleton kgraph11_skeleton();      // one vertex, one loop per color, commuting
KGraphSkeleton kgraph22_skeleton();      // one vertex, two loops per color, twisted squares
KGraphSkeleton cycle2_skeleton();        // two vertices on a directed cycle
KGraphSkeleton graph4_skeleton();        // four vertices, six edges, source-free

std::shared_ptr<const ExplicitCategory> pair_groupoid(int points);

}  // namespace conduche
