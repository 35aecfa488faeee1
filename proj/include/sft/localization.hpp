#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "sft/diffusion.hpp"
#include "sft/graph.hpp"

namespace sft {

enum class Algorithm { kSftWbnd, kSftBnd, kEcce, kRum, kNetsleuth };

std::string_view to_string(Algorithm a);
// Parses the CLI/config tags "sft-wbnd", "sft-bnd", "ecce", "rum", "netsleuth".
std::optional<Algorithm> parse_algorithm(std::string_view tag);

/// Subgraph of g induced by the infected set, with local ids.
///
/// Local id i corresponds to global node nodes()[i]; nodes() is ascending, so
/// ordering by local id and by global id agree. Local adjacency lists are
/// sorted as well.
class InfectionSubgraph {
 public:
  // Throws kDisconnectedInfection if the induced subgraph is not connected.
  InfectionSubgraph(const Graph& g, std::span<const NodeId> infected);

  std::size_t size() const noexcept { return nodes_.size(); }
  std::span<const NodeId> nodes() const noexcept { return nodes_; }
  NodeId global(std::uint32_t local) const noexcept { return nodes_[local]; }
  // kUnreachable for nodes outside the infected set.
  std::uint32_t local(NodeId global) const noexcept { return local_[global]; }
  bool contains(NodeId global) const noexcept { return global < local_.size() && local_[global] != kUnreachable; }

  std::span<const std::uint32_t> neighbors(std::uint32_t local) const noexcept {
    return {adjacency_.data() + offsets_[local], adjacency_.data() + offsets_[local + 1]};
  }
  std::size_t edge_count() const noexcept { return adjacency_.size() / 2; }

  // Hop distances inside the subgraph from one local node.
  std::vector<std::uint32_t> distances_from(std::uint32_t local) const;

 private:
  std::vector<NodeId> nodes_;
  std::vector<std::uint32_t> local_;
  std::vector<std::size_t> offsets_;
  std::vector<std::uint32_t> adjacency_;
};

InfectionSubgraph infection_subgraph(const Graph& g, std::span<const NodeId> infected);

// Infection eccentricity of every infected node, indexed by local id.
struct EccentricityTable {
  std::vector<std::uint32_t> ecc;

  std::uint32_t min() const;
};

EccentricityTable eccentricities(const InfectionSubgraph& gi);

// Nodes of minimum eccentricity, as ascending global ids.
std::vector<NodeId> jordan_centers(const InfectionSubgraph& gi, const EccentricityTable& table);

struct BoundaryNode {
  NodeId node;
  std::optional<NodeId> parent;  // empty only when the boundary is the root itself
};

// Infected nodes farthest from a root v, each with its BFS-tree parent: the
// smallest-id neighbor in g_i one hop closer to v.
struct BoundarySet {
  std::uint32_t eccentricity = 0;
  std::vector<BoundaryNode> nodes;  // ascending node id
};

BoundarySet boundary_nodes(const InfectionSubgraph& gi, NodeId v);

// Probabilities are clamped to 1 - 1e-12 so q = 1 edges give a large finite term.
inline constexpr double kMaxWeightProbability = 1.0 - 1e-12;

/// Weighted boundary node degree of root v: the sum of |log(1 - q_uw)| over
/// every boundary node u and every g-neighbor w of u other than u's parent.
/// An edge between two boundary nodes is counted once from each end.
double wbnd(const Graph& g, const InfectionSubgraph& gi, NodeId v);

// Boundary node degree: sum of g-degrees of the boundary nodes minus the
// number of parent edges (|B| whenever |I| > 1).
std::uint64_t bnd(const Graph& g, const InfectionSubgraph& gi, NodeId v);

struct NodeScore {
  NodeId node;
  std::optional<std::uint32_t> eccentricity;
  double score;  // algorithm-specific tie-break or ranking score
};

struct LocalizationResult {
  Algorithm algorithm;
  NodeId estimator;
  std::vector<NodeId> ranking;   // permutation of I, best first
  std::vector<NodeScore> scores; // same order as ranking

  // 1-based position of v in the ranking, or 0 when v is not ranked.
  std::size_t rank_of(NodeId v) const;
};

enum class TieBreak { kWbnd, kBnd };

struct SftOptions {
  // Skip full eccentricities of nodes that cannot be Jordan centers. Only the
  // Jordan centers are then scored; the rest follow in id order without an
  // eccentricity.
  bool early_exit = false;
};

/// Short-fat-tree estimator: Jordan infection centers of g_i, tie broken by
/// the largest WBND (or BND), then by the smallest node id. The ranking orders
/// all infected nodes by (eccentricity asc, tie-break score desc, id asc).
LocalizationResult sft_estimate(const Graph& g, const Snapshot& snapshot, TieBreak mode, SftOptions options = {});

}  // namespace sft
