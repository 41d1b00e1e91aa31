#ifndef SNOE_GRAPH_IO_HPP_
#define SNOE_GRAPH_IO_HPP_

#include <string>

#include "snoe/graph.hpp"

namespace snoe {

// JSON: {"nodes":[labels...],"edges":[{"a":i,"b":j,"type":"directed"|"undirected"}]}
// where "directed" means a -> b.
std::string graph_to_json(const MixedGraph& g);
MixedGraph graph_from_json(const std::string& text);
void save_graph_json(const MixedGraph& g, const std::string& path);
MixedGraph load_graph_json(const std::string& path);

// Edge-list text: one "a -> b" or "a -- b" per line; names resolve against
// labels when a node list is given, otherwise nodes are created on sight.
std::string graph_to_edgelist(const MixedGraph& g);
MixedGraph graph_from_edgelist(const std::string& text);
void save_graph_edgelist(const MixedGraph& g, const std::string& path);
MixedGraph load_graph_edgelist(const std::string& path);

// Dispatch on extension: .json -> JSON, anything else -> edge list.
MixedGraph load_structure(const std::string& path);
void save_structure(const MixedGraph& g, const std::string& path);

}  // namespace snoe

#endif  // SNOE_GRAPH_IO_HPP_
