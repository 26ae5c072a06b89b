#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "relfree/word.hpp"

namespace relfree {

struct GraphEdge {
  uint32_t src;
  uint32_t dst;
  uint32_t label;
  friend auto operator<=>(const GraphEdge&, const GraphEdge&) = default;
};

// Folded basepointed core graph of a finitely generated subgroup. Vertices
// are numbered canonically by breadth-first order from the basepoint (vertex
// 0), with ties broken by generator index and direction (outgoing first), so
// two graphs are basepoint-isomorphic iff they compare equal.
class SubgroupGraph {
 public:
  SubgroupGraph();  // the trivial subgroup: one vertex, no edges

  // Takes a folded edge set over vertices 0..n-1 with basepoint 0 and
  // renumbers canonically. Throws validation_error if the edges are not
  // deterministic in both directions.
  SubgroupGraph(uint32_t vertex_count, std::vector<GraphEdge> edges);

  uint32_t vertex_count() const { return vertex_count_; }
  const std::vector<GraphEdge>& edges() const { return edges_; }
  uint32_t rank() const {
    return static_cast<uint32_t>(edges_.size()) - vertex_count_ + 1;
  }

  // Endpoint of the unique edge with this label leaving (entering) v, if any.
  std::optional<uint32_t> step(uint32_t v, Letter l) const;
  // Vertex reached reading w from the basepoint, or nullopt if the path
  // falls off the graph.
  std::optional<uint32_t> trace(const Word& w) const;
  bool contains(const Word& w) const { return trace(w) == std::optional<uint32_t>(0u); }

  std::string to_dot() const;

  friend bool operator==(const SubgroupGraph&, const SubgroupGraph&) = default;

 private:
  uint32_t vertex_count_ = 1;
  std::vector<GraphEdge> edges_;
  // out_[v][label] / in_[v][label]; single-valued by the folded invariant.
  std::vector<std::map<uint32_t, uint32_t>> out_, in_;

  void build_adjacency();
  void canonicalize();
};

// Folds the wedge of loops spelling the generators. Empty words contribute
// nothing; duplicates collapse. The result is the canonical graph, so the
// identification order cannot influence it (tested, not assumed).
SubgroupGraph fold(std::span<const Word> generators);

// Same subgroup, but the loop insertion order and the identification order
// are shuffled by the seed. Used by the confluence tests.
SubgroupGraph fold_shuffled(std::span<const Word> generators, uint64_t seed);

struct BasisExpression {
  bool member = false;
  Word expression;  // over basis symbols b_0, b_1, ...; meaningful iff member
};

// Words of the spanning-tree basis, sorted shortlex. Folding them back
// reproduces the graph.
std::vector<Word> graph_basis(const SubgroupGraph& g);

// Membership plus rewriting in the spanning-tree basis of graph_basis. When
// member is true, substituting the basis words for the b_j symbols recovers
// w exactly.
BasisExpression member_express(const SubgroupGraph& g, const Word& w);

// Expression of w in the *given* generators (symbol j = gens[j]) rather than
// the extracted tree basis. Requires gens independent (folded rank equals
// count); throws validation_error otherwise. nullopt when w is not a member.
std::optional<Word> express_in_generators(std::span<const Word> gens, const Word& w);

// Iterated support closure across several bases: starting from the seeds,
// alternately express every known element in each basis and collect the
// basis elements that occur, round-robin, until a full round adds nothing.
// Returns for each basis the subset of its words in the final support.
// Throws validation_error if a basis is dependent or an element fails to lie
// in some basis's subgroup.
std::vector<std::vector<Word>> support_closure(std::span<const Word> seeds,
                                               const std::vector<std::vector<Word>>& bases);

}  // namespace relfree
