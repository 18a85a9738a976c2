#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "botsim/random.hpp"

namespace botsim {

using NodeId = std::uint32_t;

/// Static undirected graph over dense node ids 0..node_count-1.
///
/// Adjacency lists are sorted ascending, symmetric, and free of self-loops
/// and duplicates. Instances are immutable once built.
class Network {
public:
    Network() = default;

    /// Builds a network from an undirected edge list. Throws ParameterError on
    /// self-loops, duplicate edges, or out-of-range endpoints.
    static Network from_edges(std::size_t node_count, std::span<const std::pair<NodeId, NodeId>> edges);

    std::size_t node_count() const noexcept { return adjacency_.size(); }
    std::size_t edge_count() const noexcept { return edge_count_; }
    std::span<const NodeId> neighbors(NodeId node) const { return adjacency_.at(node); }
    std::size_t degree(NodeId node) const { return adjacency_.at(node).size(); }

    /// Edges as (i, j) with i < j, sorted lexicographically.
    std::vector<std::pair<NodeId, NodeId>> edges() const;

    friend bool operator==(const Network&, const Network&) = default;

private:
    friend Network generate_small_world(const struct SmallWorldSpec&, Rng&);
    friend Network generate_erdos_renyi(const struct SmallWorldSpec&, Rng&);

    explicit Network(std::vector<std::vector<NodeId>> adjacency);

    std::vector<std::vector<NodeId>> adjacency_;
    std::size_t edge_count_ = 0;
};

enum class NetworkModel { WattsStrogatz, ErdosRenyi };

/// Parameters of the generated topology.
///
/// For WattsStrogatz, `k` is the ring-lattice degree and `beta` the rewiring
/// probability. For ErdosRenyi, `beta` is used as the independent link
/// probability and `k` is ignored.
struct SmallWorldSpec {
    std::size_t n = 0;
    std::size_t k = 10;
    double beta = 0.05;
    NetworkModel model = NetworkModel::WattsStrogatz;

    void validate() const;

    friend bool operator==(const SmallWorldSpec&, const SmallWorldSpec&) = default;
};

/// Ring lattice of degree k with each lattice edge rewired with probability beta.
///
/// Lattice edges are visited in order (i ascending, then offset 1..k/2); a
/// rewired edge keeps endpoint i and takes a uniform target that is neither i
/// nor an existing neighbor of i. If no valid target is found within n draws
/// the edge is kept.
Network generate_small_world(const SmallWorldSpec& spec, Rng& rng);

/// G(n, p) with p = spec.beta.
Network generate_erdos_renyi(const SmallWorldSpec& spec, Rng& rng);

/// Dispatches on spec.model.
Network generate_network(const SmallWorldSpec& spec, Rng& rng);

/// Mean local clustering coefficient; nodes of degree < 2 contribute 0.
double clustering_coefficient(const Network& net);

/// Node ids of the largest connected component (ties go to the component with the smallest id).
std::vector<NodeId> largest_component(const Network& net);

/// Mean BFS distance over unordered node pairs of the largest component.
/// Returns 0 for a single-node component. Throws ParameterError on an empty graph.
double mean_path_length(const Network& net);

/// One "i j" line per edge, i < j, sorted.
void write_edge_list(const Network& net, std::ostream& out);

}  // namespace botsim
