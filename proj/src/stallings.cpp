#include "relfree/stallings.hpp"

#include <algorithm>
#include <deque>
#include <numeric>
#include <random>
#include <set>
#include <unordered_map>

namespace relfree {

namespace {

struct UnionFind {
  std::vector<uint32_t> parent;
  explicit UnionFind(uint32_t n) : parent(n) {
    std::iota(parent.begin(), parent.end(), 0u);
  }
  uint32_t find(uint32_t v) {
    while (parent[v] != v) v = parent[v] = parent[parent[v]];
    return v;
  }
  void unite(uint32_t a, uint32_t b) { parent[find(a)] = find(b); }
};

struct RawEdge {
  uint32_t src, dst, label;
  bool alive;
};

// Lays out one loop per generator at vertex 0; negative letters become
// forward edges read backward.
uint32_t build_bouquet(std::span<const Word> gens, std::span<const size_t> order,
                       std::vector<RawEdge>& edges) {
  uint32_t next = 1;
  for (size_t gi : order) {
    const Word& w = gens[gi];
    if (w.empty()) continue;
    uint32_t cur = 0;
    for (size_t t = 0; t < w.size(); ++t) {
      uint32_t nxt = (t + 1 == w.size()) ? 0 : next++;
      Letter l = w.letters()[t];
      if (l.sign() > 0)
        edges.push_back({cur, nxt, l.index(), true});
      else
        edges.push_back({nxt, cur, l.index(), true});
      cur = nxt;
    }
  }
  return next;
}

SubgroupGraph fold_impl(std::span<const Word> gens, std::optional<uint64_t> seed) {
  std::mt19937_64 rng(seed.value_or(0));
  std::vector<size_t> gen_order(gens.size());
  std::iota(gen_order.begin(), gen_order.end(), size_t{0});
  if (seed) std::shuffle(gen_order.begin(), gen_order.end(), rng);

  std::vector<RawEdge> edges;
  uint32_t n = build_bouquet(gens, gen_order, edges);
  UnionFind uf(n);

  std::vector<size_t> scan(edges.size());
  std::iota(scan.begin(), scan.end(), size_t{0});

  // Repeated local identification: find two edges with the same label leaving
  // (or entering) one vertex class, identify their far endpoints, drop one
  // edge, rescan. Each merge removes an edge, so this terminates.
  bool merged = true;
  while (merged) {
    merged = false;
    if (seed) std::shuffle(scan.begin(), scan.end(), rng);
    std::unordered_map<uint64_t, size_t> slot;
    slot.reserve(edges.size() * 2);
    for (size_t idx : scan) {
      RawEdge& e = edges[idx];
      if (!e.alive) continue;
      uint32_t s = uf.find(e.src), d = uf.find(e.dst);
      uint64_t kout = (uint64_t(s) << 33) | (uint64_t(e.label) << 1);
      uint64_t kin = (uint64_t(d) << 33) | (uint64_t(e.label) << 1) | 1u;
      for (uint64_t key : {kout, kin}) {
        auto [it, inserted] = slot.try_emplace(key, idx);
        if (!inserted && it->second != idx) {
          RawEdge& f = edges[it->second];
          if (key & 1)
            uf.unite(uf.find(e.src), uf.find(f.src));
          else
            uf.unite(uf.find(e.dst), uf.find(f.dst));
          e.alive = false;
          merged = true;
          break;
        }
      }
      if (merged) break;
    }
  }

  std::unordered_map<uint32_t, uint32_t> dense;
  dense[uf.find(0)] = 0;
  auto id_of = [&](uint32_t v) {
    uint32_t r = uf.find(v);
    auto [it, inserted] = dense.try_emplace(r, static_cast<uint32_t>(dense.size()));
    return it->second;
  };
  std::vector<GraphEdge> folded;
  for (const RawEdge& e : edges)
    if (e.alive) folded.push_back({id_of(e.src), id_of(e.dst), e.label});
  return SubgroupGraph(static_cast<uint32_t>(dense.size()), std::move(folded));
}

}  // namespace

SubgroupGraph fold(std::span<const Word> generators) {
  return fold_impl(generators, std::nullopt);
}

SubgroupGraph fold_shuffled(std::span<const Word> generators, uint64_t seed) {
  return fold_impl(generators, seed);
}

SubgroupGraph::SubgroupGraph() { build_adjacency(); }

SubgroupGraph::SubgroupGraph(uint32_t vertex_count, std::vector<GraphEdge> edges)
    : vertex_count_(vertex_count), edges_(std::move(edges)) {
  for (const GraphEdge& e : edges_)
    if (e.src >= vertex_count_ || e.dst >= vertex_count_)
      throw validation_error("graph edge endpoint out of range");
  canonicalize();
  build_adjacency();
}

void SubgroupGraph::canonicalize() {
  size_t n = vertex_count_;
  std::vector<bool> vertex_alive(n, true);
  std::vector<bool> edge_alive(edges_.size(), true);

  // Trim hair: a non-basepoint vertex of degree <= 1 lies on no reduced
  // closed path at the basepoint.
  bool trimmed = true;
  while (trimmed) {
    trimmed = false;
    std::vector<uint32_t> degree(n, 0);
    for (size_t i = 0; i < edges_.size(); ++i)
      if (edge_alive[i]) {
        degree[edges_[i].src]++;
        degree[edges_[i].dst]++;
      }
    for (uint32_t v = 1; v < n; ++v) {
      if (vertex_alive[v] && degree[v] <= 1) {
        vertex_alive[v] = false;
        for (size_t i = 0; i < edges_.size(); ++i)
          if (edge_alive[i] && (edges_[i].src == v || edges_[i].dst == v))
            edge_alive[i] = false;
        trimmed = true;
      }
    }
  }

  // Breadth-first renumbering from the basepoint; at each vertex neighbors
  // are taken by (generator index, direction) with outgoing first.
  std::vector<std::map<std::pair<uint32_t, uint32_t>, uint32_t>> nbr(n);
  for (size_t i = 0; i < edges_.size(); ++i) {
    if (!edge_alive[i]) continue;
    const GraphEdge& e = edges_[i];
    nbr[e.src][{e.label, 0}] = e.dst;
    nbr[e.dst][{e.label, 1}] = e.src;
  }
  std::vector<uint32_t> newid(n, UINT32_MAX);
  std::deque<uint32_t> queue{0};
  newid[0] = 0;
  uint32_t assigned = 1;
  while (!queue.empty()) {
    uint32_t v = queue.front();
    queue.pop_front();
    for (auto& [key, w] : nbr[v]) {
      if (newid[w] == UINT32_MAX) {
        newid[w] = assigned++;
        queue.push_back(w);
      }
    }
  }
  for (uint32_t v = 0; v < n; ++v)
    if (vertex_alive[v] && newid[v] == UINT32_MAX)
      throw validation_error("subgroup graph is not connected");

  std::vector<GraphEdge> renumbered;
  renumbered.reserve(edges_.size());
  for (size_t i = 0; i < edges_.size(); ++i)
    if (edge_alive[i])
      renumbered.push_back(
          {newid[edges_[i].src], newid[edges_[i].dst], edges_[i].label});
  std::sort(renumbered.begin(), renumbered.end());
  edges_ = std::move(renumbered);
  vertex_count_ = assigned;
}

void SubgroupGraph::build_adjacency() {
  out_.assign(vertex_count_, {});
  in_.assign(vertex_count_, {});
  for (const GraphEdge& e : edges_) {
    if (!out_[e.src].emplace(e.label, e.dst).second ||
        !in_[e.dst].emplace(e.label, e.src).second)
      throw validation_error("graph is not folded");
  }
}

std::optional<uint32_t> SubgroupGraph::step(uint32_t v, Letter l) const {
  const auto& table = l.sign() > 0 ? out_[v] : in_[v];
  auto it = table.find(l.index());
  if (it == table.end()) return std::nullopt;
  return it->second;
}

std::optional<uint32_t> SubgroupGraph::trace(const Word& w) const {
  uint32_t v = 0;
  for (Letter l : w.letters()) {
    auto next = step(v, l);
    if (!next) return std::nullopt;
    v = *next;
  }
  return v;
}

std::string SubgroupGraph::to_dot() const {
  std::string out = "digraph subgroup {\n  rankdir=LR;\n";
  for (uint32_t v = 0; v < vertex_count_; ++v) {
    out += "  " + std::to_string(v);
    out += v == 0 ? " [shape=doublecircle];\n" : " [shape=circle];\n";
  }
  for (const GraphEdge& e : edges_) {
    out += "  " + std::to_string(e.src) + " -> " + std::to_string(e.dst) +
           " [label=\"x" + std::to_string(e.label) + "\"];\n";
  }
  out += "}\n";
  return out;
}

namespace {

// Spanning tree plus oriented non-tree basis edges of a folded graph. The
// tree is the BFS tree in the canonical vertex order; each non-tree edge is
// oriented so that its loop word is shortlex-minimal (the two traversals give
// a word and its inverse), and basis indices sort the loop words shortlex.
struct TreeBasis {
  std::vector<uint32_t> parent;
  std::vector<Letter> via;  // letter read walking parent -> v
  std::vector<Word> basis_words;
  std::map<GraphEdge, std::pair<size_t, bool>> nontree;  // edge -> (index, forward chosen)

  explicit TreeBasis(const SubgroupGraph& g)
      : parent(g.vertex_count(), 0), via(g.vertex_count(), Letter(0, 1)) {
    std::set<GraphEdge> tree;
    std::vector<bool> seen(g.vertex_count(), false);
    seen[0] = true;
    std::deque<uint32_t> queue{0};
    std::vector<std::map<std::pair<uint32_t, uint32_t>, GraphEdge>> nbr(g.vertex_count());
    for (const GraphEdge& e : g.edges()) {
      nbr[e.src][{e.label, 0}] = e;
      nbr[e.dst][{e.label, 1}] = e;
    }
    while (!queue.empty()) {
      uint32_t v = queue.front();
      queue.pop_front();
      for (auto& [key, e] : nbr[v]) {
        bool outgoing = key.second == 0;
        uint32_t w = outgoing ? e.dst : e.src;
        if (seen[w]) continue;
        seen[w] = true;
        parent[w] = v;
        via[w] = Letter(e.label, outgoing ? 1 : -1);
        tree.insert(e);
        queue.push_back(w);
      }
    }

    std::vector<std::pair<Word, std::pair<GraphEdge, bool>>> loops;
    for (const GraphEdge& e : g.edges()) {
      if (tree.contains(e)) continue;
      Word forward = path_from_base(e.src) * Word::generator(e.label) *
                     path_from_base(e.dst).inverse();
      Word backward = forward.inverse();
      bool take_forward = shortlex_less(forward, backward);
      loops.push_back({take_forward ? forward : backward, {e, take_forward}});
    }
    std::sort(loops.begin(), loops.end(),
              [](const auto& a, const auto& b) { return shortlex_less(a.first, b.first); });
    for (size_t i = 0; i < loops.size(); ++i) {
      basis_words.push_back(loops[i].first);
      nontree[loops[i].second.first] = {i, loops[i].second.second};
    }
  }

  Word path_from_base(uint32_t v) const {
    std::vector<Letter> rev;
    while (v != 0) {
      rev.push_back(via[v]);
      v = parent[v];
    }
    std::reverse(rev.begin(), rev.end());
    return Word::reduce(rev);
  }
};

}  // namespace

std::vector<Word> graph_basis(const SubgroupGraph& g) {
  return TreeBasis(g).basis_words;
}

BasisExpression member_express(const SubgroupGraph& g, const Word& w) {
  if (g.trace(w) != std::optional<uint32_t>(0u)) return {false, {}};
  TreeBasis tb(g);
  std::vector<Letter> expr;
  uint32_t v = 0;
  for (Letter l : w.letters()) {
    uint32_t next = *g.step(v, l);
    bool crossing_forward = l.sign() > 0;
    GraphEdge e = crossing_forward ? GraphEdge{v, next, l.index()}
                                   : GraphEdge{next, v, l.index()};
    auto it = tb.nontree.find(e);
    if (it != tb.nontree.end()) {
      auto [index, chosen_forward] = it->second;
      int sign = crossing_forward == chosen_forward ? 1 : -1;
      push_reduced(expr, Letter(static_cast<uint32_t>(index), sign));
    }
    v = next;
  }
  return {true, Word::from_reduced(std::move(expr))};
}

namespace {

// Folding where every edge carries a word over the input-generator symbols.
// Closed paths at the basepoint multiply their decorations to the (unique)
// expression of the path word in the given generators. Merges keep the
// invariant by gauging decorations at the vertex being identified away.
class DecoratedGraph {
 public:
  explicit DecoratedGraph(std::span<const Word> gens) {
    uint32_t next = 1;
    for (size_t gi = 0; gi < gens.size(); ++gi) {
      const Word& w = gens[gi];
      if (w.empty()) throw validation_error("dependent generators: empty word");
      uint32_t cur = 0;
      for (size_t t = 0; t < w.size(); ++t) {
        uint32_t nxt = (t + 1 == w.size()) ? 0 : next++;
        Letter l = w.letters()[t];
        // The symbol s_gi rides on the first edge, oriented with the edge.
        Word dec = t == 0 ? Word::generator(static_cast<uint32_t>(gi), l.sign())
                          : Word();
        if (l.sign() > 0)
          edges_.push_back({cur, nxt, l.index(), std::move(dec), true});
        else
          edges_.push_back({nxt, cur, l.index(), std::move(dec), true});
        cur = nxt;
      }
    }
    fold_all();
    index();
  }

  std::optional<Word> express(const Word& w) const {
    uint32_t v = 0;
    Word acc;
    for (Letter l : w.letters()) {
      auto key = std::make_pair(v, l.index());
      if (l.sign() > 0) {
        auto it = out_.find(key);
        if (it == out_.end()) return std::nullopt;
        acc = acc * edges_[it->second].dec;
        v = edges_[it->second].dst;
      } else {
        auto it = in_.find(key);
        if (it == in_.end()) return std::nullopt;
        acc = acc * edges_[it->second].dec.inverse();
        v = edges_[it->second].src;
      }
    }
    if (v != 0) return std::nullopt;
    return acc;
  }

 private:
  struct DecEdge {
    uint32_t src, dst, label;
    Word dec;
    bool alive;
  };
  std::vector<DecEdge> edges_;
  std::map<std::pair<uint32_t, uint32_t>, size_t> out_, in_;

  void gauge(uint32_t v, const Word& g) {
    for (DecEdge& e : edges_) {
      if (!e.alive) continue;
      bool at_src = e.src == v, at_dst = e.dst == v;
      if (at_src && at_dst)
        e.dec = g.inverse() * e.dec * g;
      else if (at_dst)
        e.dec = e.dec * g;
      else if (at_src)
        e.dec = g.inverse() * e.dec;
    }
  }

  void rename(uint32_t from, uint32_t to) {
    for (DecEdge& e : edges_) {
      if (!e.alive) continue;
      if (e.src == from) e.src = to;
      if (e.dst == from) e.dst = to;
    }
  }

  void fold_all() {
    bool merged = true;
    while (merged) {
      merged = false;
      for (size_t i = 0; i < edges_.size() && !merged; ++i) {
        if (!edges_[i].alive) continue;
        for (size_t j = i + 1; j < edges_.size() && !merged; ++j) {
          if (!edges_[j].alive || edges_[j].label != edges_[i].label) continue;
          if (edges_[i].src == edges_[j].src) {
            merge_same_src(i, j);
            merged = true;
          } else if (edges_[i].dst == edges_[j].dst) {
            merge_same_dst(i, j);
            merged = true;
          }
        }
      }
    }
  }

  void merge_same_src(size_t a, size_t b) {
    if (edges_[a].dst == edges_[b].dst) {
      // Parallel edges: distinct decorations would witness a relation among
      // the generators, which independence rules out.
      if (edges_[a].dec != edges_[b].dec)
        throw validation_error("dependent generators");
      edges_[b].alive = false;
      return;
    }
    if (edges_[b].dst == 0) std::swap(a, b);  // identify away a non-basepoint
    uint32_t victim = edges_[b].dst, keep = edges_[a].dst;
    gauge(victim, edges_[b].dec.inverse() * edges_[a].dec);
    rename(victim, keep);
    edges_[b].alive = false;
  }

  void merge_same_dst(size_t a, size_t b) {
    if (edges_[a].src == edges_[b].src) {
      if (edges_[a].dec != edges_[b].dec)
        throw validation_error("dependent generators");
      edges_[b].alive = false;
      return;
    }
    if (edges_[b].src == 0) std::swap(a, b);
    uint32_t victim = edges_[b].src, keep = edges_[a].src;
    gauge(victim, edges_[b].dec * edges_[a].dec.inverse());
    rename(victim, keep);
    edges_[b].alive = false;
  }

  void index() {
    for (size_t i = 0; i < edges_.size(); ++i) {
      if (!edges_[i].alive) continue;
      const DecEdge& e = edges_[i];
      if (!out_.emplace(std::make_pair(e.src, e.label), i).second ||
          !in_.emplace(std::make_pair(e.dst, e.label), i).second)
        throw validation_error("decorated fold left a non-deterministic vertex");
    }
  }
};

void require_independent(std::span<const Word> gens) {
  if (fold(gens).rank() != gens.size())
    throw validation_error("dependent generators: folded rank below count");
}

}  // namespace

std::optional<Word> express_in_generators(std::span<const Word> gens, const Word& w) {
  require_independent(gens);
  return DecoratedGraph(gens).express(w);
}

std::vector<std::vector<Word>> support_closure(std::span<const Word> seeds,
                                               const std::vector<std::vector<Word>>& bases) {
  std::vector<DecoratedGraph> graphs;
  graphs.reserve(bases.size());
  for (const auto& basis : bases) {
    require_independent(basis);
    graphs.emplace_back(std::span<const Word>(basis));
  }

  std::vector<std::set<uint32_t>> supports(bases.size());
  std::vector<Word> elements;
  std::set<std::string> seen;
  for (const Word& s : seeds) {
    if (s.empty()) continue;  // the identity contributes nothing
    if (seen.insert(s.str()).second) elements.push_back(s);
  }
  std::set<std::pair<size_t, std::string>> expressed;

  bool changed = true;
  while (changed) {
    changed = false;
    for (size_t j = 0; j < bases.size(); ++j) {
      for (size_t t = 0; t < elements.size(); ++t) {
        Word element = elements[t];
        if (!expressed.insert({j, element.str()}).second) continue;
        auto expr = graphs[j].express(element);
        if (!expr)
          throw validation_error("support closure: element \"" + element.str() +
                                 "\" is not in the subgroup of basis " + std::to_string(j));
        for (Letter l : expr->letters()) {
          if (!supports[j].insert(l.index()).second) continue;
          changed = true;
          const Word& bw = bases[j][l.index()];
          if (!bw.empty() && seen.insert(bw.str()).second) elements.push_back(bw);
        }
      }
    }
  }

  std::vector<std::vector<Word>> result(bases.size());
  for (size_t j = 0; j < bases.size(); ++j)
    for (uint32_t idx : supports[j]) result[j].push_back(bases[j][idx]);
  return result;
}

}  // namespace relfree
