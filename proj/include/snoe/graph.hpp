#ifndef SNOE_GRAPH_HPP_
#define SNOE_GRAPH_HPP_

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace snoe {

// Edge mark for an unordered pair (a,b) with a < b.
enum class Mark : std::uint8_t { None, Undirected, Fwd, Bwd };  // Fwd: a->b, Bwd: b->a

// Mixed graph over nodes 0..p-1: at most one mark per pair, no self loops.
// The directed part is kept acyclic; orientations that would close a cycle
// are rejected and reported to the caller.
class MixedGraph {
public:
    MixedGraph() = default;
    explicit MixedGraph(int p);
    explicit MixedGraph(std::vector<std::string> labels);

    int num_nodes() const { return p_; }
    const std::vector<std::string>& labels() const { return labels_; }
    const std::string& label(int i) const { check_node(i); return labels_[i]; }
    int index_of(const std::string& label) const;  // -1 if absent

    bool adjacent(int i, int j) const { return mark_of(i, j) != Mark::None; }
    bool has_directed(int i, int j) const;    // i -> j
    bool has_undirected(int i, int j) const;

    // Mutators. orient() and set_undirected() overwrite any existing mark on
    // the pair; orient() returns false (graph unchanged) if i->j would close
    // a directed cycle.
    void add_undirected(int i, int j) { set_undirected(i, j); }
    void set_undirected(int i, int j);
    [[nodiscard]] bool orient(int i, int j);
    void remove_edge(int i, int j);
    void clear_marks();

    std::vector<int> parents(int i) const;
    std::vector<int> children(int i) const;
    std::vector<int> neighbors(int i) const;   // undirected links only
    std::vector<int> nc(int i) const;          // neighbors + children
    std::vector<int> adjacency(int i) const;   // any mark

    std::vector<std::pair<int, int>> directed_edges() const;    // (from, to)
    std::vector<std::pair<int, int>> undirected_edges() const;  // (a, b), a < b
    int edge_count() const;
    int undirected_edge_count() const;

    bool directed_part_acyclic() const;
    bool is_dag() const;  // no undirected marks and acyclic
    // Topological order of the directed part; nullopt if cyclic.
    std::optional<std::vector<int>> topo_order() const;

    bool operator==(const MixedGraph& o) const { return marks_ == o.marks_; }

private:
    int p_ = 0;
    std::vector<std::string> labels_;
    std::vector<Mark> marks_;  // upper triangle, pair (a<b) at a*p - a(a+1)/2 + b - a - 1

    std::size_t pair_index(int a, int b) const {
        return static_cast<std::size_t>(a) * p_ - static_cast<std::size_t>(a) * (a + 1) / 2 + b - a - 1;
    }
    Mark mark_of(int i, int j) const;
    void set_mark(int i, int j, Mark m);
    void check_node(int i) const {
        if (i < 0 || i >= p_) throw std::invalid_argument("MixedGraph: node index out of range");
    }
    void check_pair(int i, int j) const {
        check_node(i); check_node(j);
        if (i == j) throw std::invalid_argument("MixedGraph: self loop");
    }
    bool reachable_directed(int from, int to) const;
};

}  // namespace snoe

#endif  // SNOE_GRAPH_HPP_
