#include "botsim/network.hpp"

#include <algorithm>
#include <deque>
#include <ostream>
#include <set>

#include "botsim/errors.hpp"

namespace botsim {

Network::Network(std::vector<std::vector<NodeId>> adjacency) : adjacency_(std::move(adjacency)) {
    std::size_t ends = 0;
    for (auto& list : adjacency_) {
        std::sort(list.begin(), list.end());
        ends += list.size();
    }
    edge_count_ = ends / 2;
}

Network Network::from_edges(std::size_t node_count, std::span<const std::pair<NodeId, NodeId>> edges) {
    std::vector<std::vector<NodeId>> adj(node_count);
    std::set<std::pair<NodeId, NodeId>> seen;
    for (auto [a, b] : edges) {
        if (a >= node_count || b >= node_count) throw ParameterError("edge endpoint out of range");
        if (a == b) throw ParameterError("self-loop on node " + std::to_string(a));
        if (!seen.insert(std::minmax(a, b)).second)
            throw ParameterError("duplicate edge " + std::to_string(a) + "-" + std::to_string(b));
        adj[a].push_back(b);
        adj[b].push_back(a);
    }
    return Network(std::move(adj));
}

std::vector<std::pair<NodeId, NodeId>> Network::edges() const {
    std::vector<std::pair<NodeId, NodeId>> out;
    out.reserve(edge_count_);
    for (NodeId i = 0; i < adjacency_.size(); ++i)
        for (NodeId j : adjacency_[i])
            if (i < j) out.emplace_back(i, j);
    return out;
}

void SmallWorldSpec::validate() const {
    if (!(beta >= 0.0 && beta <= 1.0)) throw ParameterError("beta must lie in [0, 1]");
    if (model == NetworkModel::ErdosRenyi) {
        if (n == 0) throw ParameterError("network needs at least one node");
        return;
    }
    if (k % 2 != 0) throw ParameterError("k must be even, got " + std::to_string(k));
    if (k < 2 || k >= n)
        throw ParameterError("k must satisfy 2 <= k < n (k=" + std::to_string(k) + ", n=" + std::to_string(n) + ")");
}

Network generate_small_world(const SmallWorldSpec& spec, Rng& rng) {
    spec.validate();
    const std::size_t n = spec.n;
    const std::size_t half = spec.k / 2;

    std::vector<std::set<NodeId>> adj(n);
    for (NodeId i = 0; i < n; ++i) {
        for (std::size_t j = 1; j <= half; ++j) {
            const auto t = static_cast<NodeId>((i + j) % n);
            adj[i].insert(t);
            adj[t].insert(i);
        }
    }

    for (NodeId i = 0; i < n; ++i) {
        for (std::size_t j = 1; j <= half; ++j) {
            const auto old = static_cast<NodeId>((i + j) % n);
            if (!rng.bernoulli(spec.beta)) continue;
            // The lattice edge may already have been moved by an earlier rewire.
            if (!adj[i].contains(old)) continue;
            for (std::size_t attempt = 0; attempt < n; ++attempt) {
                const auto target = static_cast<NodeId>(rng.below(n));
                if (target == i || adj[i].contains(target)) continue;
                adj[i].erase(old);
                adj[old].erase(i);
                adj[i].insert(target);
                adj[target].insert(i);
                break;
            }
        }
    }

    std::vector<std::vector<NodeId>> lists(n);
    for (std::size_t i = 0; i < n; ++i) lists[i].assign(adj[i].begin(), adj[i].end());
    return Network(std::move(lists));
}

Network generate_erdos_renyi(const SmallWorldSpec& spec, Rng& rng) {
    spec.validate();
    std::vector<std::vector<NodeId>> adj(spec.n);
    for (NodeId i = 0; i < spec.n; ++i) {
        for (NodeId j = i + 1; j < spec.n; ++j) {
            if (rng.bernoulli(spec.beta)) {
                adj[i].push_back(j);
                adj[j].push_back(i);
            }
        }
    }
    return Network(std::move(adj));
}

Network generate_network(const SmallWorldSpec& spec, Rng& rng) {
    return spec.model == NetworkModel::ErdosRenyi ? generate_erdos_renyi(spec, rng)
                                                   : generate_small_world(spec, rng);
}

double clustering_coefficient(const Network& net) {
    const std::size_t n = net.node_count();
    if (n == 0) return 0.0;
    std::vector<char> mark(n, 0);
    double total = 0.0;
    for (NodeId v = 0; v < n; ++v) {
        auto nbrs = net.neighbors(v);
        const std::size_t d = nbrs.size();
        if (d < 2) continue;
        for (NodeId u : nbrs) mark[u] = 1;
        std::size_t links = 0;
        for (NodeId u : nbrs)
            for (NodeId w : net.neighbors(u))
                if (w > u && mark[w]) ++links;
        for (NodeId u : nbrs) mark[u] = 0;
        total += static_cast<double>(links) / (static_cast<double>(d) * static_cast<double>(d - 1) / 2.0);
    }
    return total / static_cast<double>(n);
}

std::vector<NodeId> largest_component(const Network& net) {
    const std::size_t n = net.node_count();
    std::vector<int> comp(n, -1);
    std::vector<NodeId> best;
    int label = 0;
    for (NodeId s = 0; s < n; ++s) {
        if (comp[s] >= 0) continue;
        std::vector<NodeId> members{s};
        comp[s] = label;
        for (std::size_t head = 0; head < members.size(); ++head)
            for (NodeId w : net.neighbors(members[head]))
                if (comp[w] < 0) {
                    comp[w] = label;
                    members.push_back(w);
                }
        if (members.size() > best.size()) best = std::move(members);
        ++label;
    }
    std::sort(best.begin(), best.end());
    return best;
}

double mean_path_length(const Network& net) {
    if (net.node_count() == 0) throw ParameterError("mean path length of an empty graph");
    const auto members = largest_component(net);
    if (members.size() < 2) return 0.0;

    std::vector<int> dist(net.node_count(), -1);
    std::deque<NodeId> queue;
    long double sum = 0.0;
    for (NodeId src : members) {
        std::fill(dist.begin(), dist.end(), -1);
        dist[src] = 0;
        queue.assign(1, src);
        while (!queue.empty()) {
            const NodeId v = queue.front();
            queue.pop_front();
            for (NodeId w : net.neighbors(v))
                if (dist[w] < 0) {
                    dist[w] = dist[v] + 1;
                    queue.push_back(w);
                    if (w > src) sum += dist[w];
                }
        }
    }
    const auto m = static_cast<long double>(members.size());
    return static_cast<double>(sum / (m * (m - 1) / 2));
}

void write_edge_list(const Network& net, std::ostream& out) {
    for (auto [i, j] : net.edges()) out << i << ' ' << j << '\n';
}

}  // namespace botsim
