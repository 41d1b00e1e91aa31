#include "snoe/graph_io.hpp"

#include <fstream>
#include <map>
#include <sstream>

#include <nlohmann/json.hpp>

namespace snoe {

using nlohmann::json;

std::string graph_to_json(const MixedGraph& g) {
    json j;
    j["nodes"] = g.labels();
    j["edges"] = json::array();
    for (auto [a, b] : g.directed_edges()) j["edges"].push_back({{"a", a}, {"b", b}, {"type", "directed"}});
    for (auto [a, b] : g.undirected_edges()) j["edges"].push_back({{"a", a}, {"b", b}, {"type", "undirected"}});
    return j.dump(2);
}

MixedGraph graph_from_json(const std::string& text) {
    json j = json::parse(text);
    MixedGraph g(j.at("nodes").get<std::vector<std::string>>());
    for (const auto& e : j.at("edges")) {
        int a = e.at("a").get<int>();
        int b = e.at("b").get<int>();
        std::string type = e.at("type").get<std::string>();
        if (type == "directed") {
            if (!g.orient(a, b)) throw std::runtime_error("graph_from_json: directed edges form a cycle");
        } else if (type == "undirected") {
            g.set_undirected(a, b);
        } else {
            throw std::runtime_error("graph_from_json: unknown edge type '" + type + "'");
        }
    }
    return g;
}

void save_graph_json(const MixedGraph& g, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    out << graph_to_json(g) << "\n";
}

MixedGraph load_graph_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open: " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return graph_from_json(ss.str());
}

std::string graph_to_edgelist(const MixedGraph& g) {
    std::ostringstream out;
    for (auto [a, b] : g.directed_edges()) out << g.label(a) << " -> " << g.label(b) << "\n";
    for (auto [a, b] : g.undirected_edges()) out << g.label(a) << " -- " << g.label(b) << "\n";
    return out.str();
}

MixedGraph graph_from_edgelist(const std::string& text) {
    struct Line { std::string a, b; bool directed; };
    std::vector<Line> lines;
    std::vector<std::string> labels;
    std::map<std::string, int> index;
    auto intern = [&](const std::string& name) {
        auto it = index.find(name);
        if (it != index.end()) return it->second;
        int id = static_cast<int>(labels.size());
        labels.push_back(name);
        index[name] = id;
        return id;
    };
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        std::istringstream ls(line);
        std::string a, op, b, extra;
        if (!(ls >> a)) continue;  // blank line
        if (a[0] == '#') continue;
        if (!(ls >> op >> b) || (ls >> extra) || (op != "->" && op != "--"))
            throw std::runtime_error("edge list parse error at line " + std::to_string(lineno) + ": '" + line + "'");
        intern(a);
        intern(b);
        lines.push_back({a, b, op == "->"});
    }
    MixedGraph g(labels);
    for (const auto& l : lines) {
        int a = index[l.a], b = index[l.b];
        if (l.directed) {
            if (!g.orient(a, b)) throw std::runtime_error("edge list: directed edges form a cycle");
        } else {
            g.set_undirected(a, b);
        }
    }
    return g;
}

void save_graph_edgelist(const MixedGraph& g, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    out << graph_to_edgelist(g);
}

MixedGraph load_graph_edgelist(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open: " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return graph_from_edgelist(ss.str());
}

MixedGraph load_structure(const std::string& path) {
    if (path.size() >= 5 && path.substr(path.size() - 5) == ".json") return load_graph_json(path);
    return load_graph_edgelist(path);
}

void save_structure(const MixedGraph& g, const std::string& path) {
    if (path.size() >= 5 && path.substr(path.size() - 5) == ".json") return save_graph_json(g, path);
    save_graph_edgelist(g, path);
}

}  // namespace snoe
