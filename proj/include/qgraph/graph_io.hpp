#pragma once

#include <fstream>
#include <string>

#include <nlohmann/json.hpp>

#include "qgraph/graph.hpp"

namespace qgraph {

// Graph file format:
// {
//   "vertices": ["v0", "v1"],
//   "edges": [
//     {"id": "e1", "from": "v0", "to": "v1",
//      "potential": {"breakpoints": [0, 0.5, 1], "values": [2, -1]}}
//   ]
// }
// The potential object is optional and defaults to zero.
inline GraphSpec parse_graph_spec(const nlohmann::json& j) {
    GraphSpec spec;
    if (!j.is_object() || !j.contains("vertices") || !j.contains("edges"))
        throw std::invalid_argument("graph file needs 'vertices' and 'edges'");
    for (const auto& v : j.at("vertices"))
        spec.vertices.push_back(v.get<std::string>());
    for (const auto& e : j.at("edges")) {
        GraphSpec::EdgeSpec es;
        es.id = e.at("id").get<std::string>();
        es.from = e.at("from").get<std::string>();
        es.to = e.at("to").get<std::string>();
        if (e.contains("potential")) {
            const auto& p = e.at("potential");
            es.potential = EdgePotential(p.at("breakpoints").get<std::vector<double>>(),
                                         p.at("values").get<std::vector<double>>());
        }
        spec.edges.push_back(std::move(es));
    }
    return spec;
}

inline GraphSpec load_graph_spec(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw std::invalid_argument("cannot open graph file: " + path);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw std::invalid_argument("invalid JSON in " + path + ": " + e.what());
    }
    try {
        return parse_graph_spec(j);
    } catch (const nlohmann::json::exception& e) {
        throw std::invalid_argument("malformed graph file " + path + ": " + e.what());
    }
}

}  // namespace qgraph
