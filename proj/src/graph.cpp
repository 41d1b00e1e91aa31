#include "snoe/graph.hpp"

#include <algorithm>

namespace snoe {

MixedGraph::MixedGraph(int p) : p_(p) {
    if (p < 0) throw std::invalid_argument("MixedGraph: negative node count");
    labels_.reserve(p);
    for (int i = 0; i < p; ++i) labels_.push_back("X" + std::to_string(i));
    marks_.assign(static_cast<std::size_t>(p) * (p - 1) / 2, Mark::None);
}

MixedGraph::MixedGraph(std::vector<std::string> labels) : p_(static_cast<int>(labels.size())), labels_(std::move(labels)) {
    marks_.assign(static_cast<std::size_t>(p_) * (p_ - 1) / 2, Mark::None);
}

int MixedGraph::index_of(const std::string& label) const {
    auto it = std::find(labels_.begin(), labels_.end(), label);
    return it == labels_.end() ? -1 : static_cast<int>(it - labels_.begin());
}

Mark MixedGraph::mark_of(int i, int j) const {
    check_pair(i, j);
    if (i < j) return marks_[pair_index(i, j)];
    Mark m = marks_[pair_index(j, i)];
    if (m == Mark::Fwd) return Mark::Bwd;
    if (m == Mark::Bwd) return Mark::Fwd;
    return m;
}

void MixedGraph::set_mark(int i, int j, Mark m) {
    check_pair(i, j);
    if (i < j) {
        marks_[pair_index(i, j)] = m;
    } else {
        if (m == Mark::Fwd) m = Mark::Bwd;
        else if (m == Mark::Bwd) m = Mark::Fwd;
        marks_[pair_index(j, i)] = m;
    }
}

bool MixedGraph::has_directed(int i, int j) const { return mark_of(i, j) == Mark::Fwd; }
bool MixedGraph::has_undirected(int i, int j) const { return mark_of(i, j) == Mark::Undirected; }

void MixedGraph::set_undirected(int i, int j) { set_mark(i, j, Mark::Undirected); }

bool MixedGraph::orient(int i, int j) {
    check_pair(i, j);
    Mark old = mark_of(i, j);
    if (old == Mark::Fwd) return true;
    set_mark(i, j, Mark::None);  // the pair's own mark is not a path
    if (reachable_directed(j, i)) {
        set_mark(i, j, old);
        return false;  // i->j would close a cycle
    }
    set_mark(i, j, Mark::Fwd);
    return true;
}

void MixedGraph::remove_edge(int i, int j) { set_mark(i, j, Mark::None); }

void MixedGraph::clear_marks() { std::fill(marks_.begin(), marks_.end(), Mark::None); }

std::vector<int> MixedGraph::parents(int i) const {
    check_node(i);
    std::vector<int> out;
    for (int j = 0; j < p_; ++j)
        if (j != i && mark_of(j, i) == Mark::Fwd) out.push_back(j);
    return out;
}

std::vector<int> MixedGraph::children(int i) const {
    check_node(i);
    std::vector<int> out;
    for (int j = 0; j < p_; ++j)
        if (j != i && mark_of(i, j) == Mark::Fwd) out.push_back(j);
    return out;
}

std::vector<int> MixedGraph::neighbors(int i) const {
    check_node(i);
    std::vector<int> out;
    for (int j = 0; j < p_; ++j)
        if (j != i && mark_of(i, j) == Mark::Undirected) out.push_back(j);
    return out;
}

std::vector<int> MixedGraph::nc(int i) const {
    check_node(i);
    std::vector<int> out;
    for (int j = 0; j < p_; ++j) {
        if (j == i) continue;
        Mark m = mark_of(i, j);
        if (m == Mark::Undirected || m == Mark::Fwd) out.push_back(j);
    }
    return out;
}

std::vector<int> MixedGraph::adjacency(int i) const {
    check_node(i);
    std::vector<int> out;
    for (int j = 0; j < p_; ++j)
        if (j != i && mark_of(i, j) != Mark::None) out.push_back(j);
    return out;
}

std::vector<std::pair<int, int>> MixedGraph::directed_edges() const {
    std::vector<std::pair<int, int>> out;
    for (int a = 0; a < p_; ++a)
        for (int b = a + 1; b < p_; ++b) {
            Mark m = marks_[pair_index(a, b)];
            if (m == Mark::Fwd) out.emplace_back(a, b);
            else if (m == Mark::Bwd) out.emplace_back(b, a);
        }
    return out;
}

std::vector<std::pair<int, int>> MixedGraph::undirected_edges() const {
    std::vector<std::pair<int, int>> out;
    for (int a = 0; a < p_; ++a)
        for (int b = a + 1; b < p_; ++b)
            if (marks_[pair_index(a, b)] == Mark::Undirected) out.emplace_back(a, b);
    return out;
}

int MixedGraph::edge_count() const {
    int c = 0;
    for (Mark m : marks_) c += (m != Mark::None);
    return c;
}

int MixedGraph::undirected_edge_count() const {
    int c = 0;
    for (Mark m : marks_) c += (m == Mark::Undirected);
    return c;
}

bool MixedGraph::reachable_directed(int from, int to) const {
    if (from == to) return true;
    std::vector<char> seen(p_, 0);
    std::vector<int> stack{from};
    seen[from] = 1;
    while (!stack.empty()) {
        int u = stack.back();
        stack.pop_back();
        for (int v : children(u)) {
            if (v == to) return true;
            if (!seen[v]) { seen[v] = 1; stack.push_back(v); }
        }
    }
    return false;
}

bool MixedGraph::directed_part_acyclic() const { return topo_order().has_value(); }

bool MixedGraph::is_dag() const { return undirected_edge_count() == 0 && directed_part_acyclic(); }

std::optional<std::vector<int>> MixedGraph::topo_order() const {
    std::vector<int> indeg(p_, 0);
    for (auto [u, v] : directed_edges()) indeg[v]++;
    std::vector<int> order;
    order.reserve(p_);
    std::vector<int> ready;
    for (int i = p_ - 1; i >= 0; --i)
        if (indeg[i] == 0) ready.push_back(i);
    while (!ready.empty()) {
        int u = ready.back();
        ready.pop_back();
        order.push_back(u);
        for (int v : children(u))
            if (--indeg[v] == 0) ready.push_back(v);
    }
    if (static_cast<int>(order.size()) != p_) return std::nullopt;
    return order;
}

}  // namespace snoe
