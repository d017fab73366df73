/**
 * @file network.hpp
 * @brief Undirected user graph and deterministic test-topology generators.
 */

#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace cyberins {

using Edge = std::pair<std::size_t, std::size_t>;

/**
 * Immutable undirected, unweighted graph over users 0..n-1.
 *
 * Neighbor lists are kept sorted; degrees are cached at construction.
 * Self-loops and duplicate edges are rejected.
 */
class Network {
public:
    /// Build from an explicit edge list. Throws std::invalid_argument on
    /// self-loops, duplicates or out-of-range endpoints.
    Network(std::size_t n, const std::vector<Edge>& edges);

    std::size_t size() const noexcept { return adjacency_.size(); }
    std::size_t edge_count() const noexcept { return edge_count_; }

    /// Sorted neighbor indices of user i. Throws std::out_of_range.
    const std::vector<std::size_t>& neighbors(std::size_t i) const;
    std::size_t degree(std::size_t i) const;
    bool adjacent(std::size_t i, std::size_t j) const;

    /// Edges (i, j) with i < j in lexicographic order.
    std::vector<Edge> edges() const;

private:
    std::vector<std::vector<std::size_t>> adjacency_;
    std::vector<std::size_t> degrees_;
    std::size_t edge_count_ = 0;
};

namespace topology {
struct ErdosRenyi { double p_edge; };
struct Regular { std::size_t degree; };
struct Star {};
struct Complete {};
struct FromEdges { std::vector<Edge> edges; };
}  // namespace topology

using TopologyKind = std::variant<topology::ErdosRenyi, topology::Regular, topology::Star,
                                  topology::Complete, topology::FromEdges>;

/**
 * Deterministic graph factory; identical (kind, n, seed) gives an identical graph.
 *
 * Regular graphs use the circulant construction: node i links to i±1, ..., i±d/2
 * (mod n), plus the antipodal node i+n/2 when d is odd (n even). Star centers on 0.
 */
Network generate(const TopologyKind& kind, std::size_t n, std::uint64_t seed);

/// Parse the "i j" per line edge-list format (0-based, '#' starts a comment).
/// When n is 0 it is inferred as max index + 1.
Network load_edge_list(std::istream& in, std::size_t n = 0);
Network load_edge_list_file(const std::string& path, std::size_t n = 0);
void write_edge_list(std::ostream& out, const Network& net);

}  // namespace cyberins
