#include "cyberins/network.hpp"

#include <algorithm>
#include <fstream>
#include <istream>
#include <ostream>
#include <random>
#include <set>
#include <sstream>
#include <stdexcept>

namespace cyberins {

Network::Network(std::size_t n, const std::vector<Edge>& edges)
    : adjacency_(n), degrees_(n, 0) {
    if (n == 0) {
        throw std::invalid_argument("network: n must be at least 1");
    }
    for (const auto& [i, j] : edges) {
        if (i >= n || j >= n) {
            throw std::invalid_argument("network: edge (" + std::to_string(i) + ", " +
                                        std::to_string(j) + ") out of range for n=" +
                                        std::to_string(n));
        }
        if (i == j) {
            throw std::invalid_argument("network: self-loop at node " + std::to_string(i));
        }
        adjacency_[i].push_back(j);
        adjacency_[j].push_back(i);
    }
    for (std::size_t i = 0; i < n; ++i) {
        auto& row = adjacency_[i];
        std::sort(row.begin(), row.end());
        if (std::adjacent_find(row.begin(), row.end()) != row.end()) {
            throw std::invalid_argument("network: duplicate edge at node " + std::to_string(i));
        }
        degrees_[i] = row.size();
    }
    edge_count_ = edges.size();
}

const std::vector<std::size_t>& Network::neighbors(std::size_t i) const {
    if (i >= size()) {
        throw std::out_of_range("network: user index " + std::to_string(i) + " out of range");
    }
    return adjacency_[i];
}

std::size_t Network::degree(std::size_t i) const {
    if (i >= size()) {
        throw std::out_of_range("network: user index " + std::to_string(i) + " out of range");
    }
    return degrees_[i];
}

bool Network::adjacent(std::size_t i, std::size_t j) const {
    const auto& row = neighbors(i);
    return std::binary_search(row.begin(), row.end(), j);
}

std::vector<Edge> Network::edges() const {
    std::vector<Edge> out;
    out.reserve(edge_count_);
    for (std::size_t i = 0; i < size(); ++i) {
        for (std::size_t j : adjacency_[i]) {
            if (i < j) out.emplace_back(i, j);
        }
    }
    return out;
}

namespace {

// 53-bit uniform in [0, 1) from the raw engine output; avoids the
// implementation-defined std::uniform_real_distribution.
double unit_uniform(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

std::vector<Edge> circulant_edges(std::size_t n, std::size_t d) {
    if (d >= n) {
        throw std::invalid_argument("network: regular degree " + std::to_string(d) +
                                    " must be below n=" + std::to_string(n));
    }
    if ((n * d) % 2 != 0) {
        throw std::invalid_argument("network: regular graph needs n*d even (n=" +
                                    std::to_string(n) + ", d=" + std::to_string(d) + ")");
    }
    std::vector<Edge> edges;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t k = 1; k <= d / 2; ++k) {
            const std::size_t j = (i + k) % n;
            edges.emplace_back(std::min(i, j), std::max(i, j));
        }
        if (d % 2 == 1 && i < n / 2) {
            edges.emplace_back(i, i + n / 2);
        }
    }
    return edges;
}

}  // namespace

Network generate(const TopologyKind& kind, std::size_t n, std::uint64_t seed) {
    if (n == 0) {
        throw std::invalid_argument("network: n must be at least 1");
    }
    struct Visitor {
        std::size_t n;
        std::uint64_t seed;

        Network operator()(const topology::ErdosRenyi& er) const {
            if (!(er.p_edge >= 0.0 && er.p_edge <= 1.0)) {
                throw std::invalid_argument("network: p_edge must lie in [0, 1]");
            }
            std::mt19937_64 rng(seed);
            std::vector<Edge> edges;
            for (std::size_t i = 0; i < n; ++i) {
                for (std::size_t j = i + 1; j < n; ++j) {
                    if (unit_uniform(rng) < er.p_edge) edges.emplace_back(i, j);
                }
            }
            return Network(n, edges);
        }
        Network operator()(const topology::Regular& reg) const {
            return Network(n, circulant_edges(n, reg.degree));
        }
        Network operator()(const topology::Star&) const {
            std::vector<Edge> edges;
            for (std::size_t j = 1; j < n; ++j) edges.emplace_back(0, j);
            return Network(n, edges);
        }
        Network operator()(const topology::Complete&) const {
            std::vector<Edge> edges;
            for (std::size_t i = 0; i < n; ++i) {
                for (std::size_t j = i + 1; j < n; ++j) edges.emplace_back(i, j);
            }
            return Network(n, edges);
        }
        Network operator()(const topology::FromEdges& fe) const { return Network(n, fe.edges); }
    };
    return std::visit(Visitor{n, seed}, kind);
}

Network load_edge_list(std::istream& in, std::size_t n) {
    std::vector<Edge> edges;
    std::set<Edge> seen;
    std::size_t max_index = 0;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        std::istringstream ls(line);
        long long a = 0;
        long long b = 0;
        if (!(ls >> a)) continue;  // blank line
        std::string rest;
        if (!(ls >> b) || (ls >> rest) || a < 0 || b < 0) {
            throw std::invalid_argument("edge list line " + std::to_string(line_no) +
                                        ": expected two non-negative indices");
        }
        auto i = static_cast<std::size_t>(a);
        auto j = static_cast<std::size_t>(b);
        if (i == j) {
            throw std::invalid_argument("edge list line " + std::to_string(line_no) +
                                        ": self-loop");
        }
        Edge key{std::min(i, j), std::max(i, j)};
        if (!seen.insert(key).second) {
            throw std::invalid_argument("edge list line " + std::to_string(line_no) +
                                        ": duplicate edge");
        }
        edges.push_back(key);
        max_index = std::max(max_index, key.second);
    }
    if (n == 0) n = edges.empty() ? 1 : max_index + 1;
    return Network(n, edges);
}

Network load_edge_list_file(const std::string& path, std::size_t n) {
    std::ifstream in(path);
    if (!in) {
        throw std::invalid_argument("cannot open edge list: " + path);
    }
    return load_edge_list(in, n);
}

void write_edge_list(std::ostream& out, const Network& net) {
    for (const auto& [i, j] : net.edges()) out << i << ' ' << j << '\n';
}

}  // namespace cyberins
