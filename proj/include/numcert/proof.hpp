#ifndef NUMCERT_PROOF_HPP
#define NUMCERT_PROOF_HPP

// Proof trees: {subproofs, statement, rule label} triples. Nodes are
// immutable and may be shared, so a proof is in general a DAG whose
// unfolding is the stored tree.

#include <algorithm>
#include <cstdint>
#include <map>
#include <memory>
#include <string>
#include <unordered_map>
#include <vector>

#include "numcert/term.hpp"

namespace numcert {

struct ProofNode;
using Proof = std::shared_ptr<const ProofNode>;

inline constexpr std::string_view kStubRule = "?";

struct ProofNode {
  std::vector<Proof> hyps;
  Statement stmt;
  std::string rule;
};

inline Proof make_proof(std::string rule, Statement stmt, std::vector<Proof> hyps = {}) {
  return std::make_shared<const ProofNode>(
      ProofNode{std::move(hyps), std::move(stmt), std::move(rule)});
}

/// An unfinished goal.
inline Proof make_stub(Statement stmt) { return make_proof(std::string(kStubRule), std::move(stmt)); }

/// Assigns one id per structurally distinct subtree. Shared nodes are visited
/// once; distinct-but-equal nodes collapse to the same id.
class StructuralIndex {
 public:
  std::size_t id_of(const Proof& node) {
    if (auto it = by_pointer_.find(node.get()); it != by_pointer_.end()) return it->second;
    Key key{node.get(), {}};
    key.children.reserve(node->hyps.size());
    for (const Proof& h : node->hyps) key.children.push_back(id_of(h));
    std::size_t id;
    if (auto it = by_structure_.find(key); it != by_structure_.end()) {
      id = it->second;
    } else {
      id = representatives_.size();
      representatives_.push_back(node);
      child_ids_.push_back(key.children);
      by_structure_.emplace(std::move(key), id);
    }
    keep_alive_.push_back(node);
    by_pointer_.emplace(node.get(), id);
    return id;
  }

  std::size_t size() const noexcept { return representatives_.size(); }
  const Proof& representative(std::size_t id) const { return representatives_[id]; }
  const std::vector<std::size_t>& children(std::size_t id) const { return child_ids_[id]; }

 private:
  struct Key {
    const ProofNode* node;
    std::vector<std::size_t> children;
  };
  struct KeyHash {
    std::size_t operator()(const Key& k) const noexcept {
      std::size_t h = std::hash<std::string>{}(k.node->rule);
      h = detail::mix(h, k.node->stmt.hash());
      for (std::size_t c : k.children) h = detail::mix(h, c);
      return h;
    }
  };
  struct KeyEq {
    bool operator()(const Key& a, const Key& b) const noexcept {
      return a.children == b.children && a.node->rule == b.node->rule &&
             a.node->stmt == b.node->stmt;
    }
  };

  std::unordered_map<const ProofNode*, std::size_t> by_pointer_;
  std::unordered_map<Key, std::size_t, KeyHash, KeyEq> by_structure_;
  std::vector<Proof> representatives_;
  std::vector<std::vector<std::size_t>> child_ids_;
  std::vector<Proof> keep_alive_;
};

struct ProofStats {
  /// Nodes of the fully unfolded tree; every node is one step.
  std::uint64_t steps = 0;
  /// Structurally distinct subtrees.
  std::uint64_t steps_dedup = 0;
  /// Unfolded nodes outside closure (elN, elN0, elC) sub-proofs.
  std::uint64_t steps_no_closure = 0;
  std::uint64_t depth = 0;
  std::map<std::string, std::uint64_t> rules;
};

inline ProofStats proof_stats(const Proof& root) {
  StructuralIndex index;
  std::size_t root_id = index.id_of(root);
  std::vector<std::uint64_t> raw(index.size()), depth(index.size()), core(index.size());
  // Ids are assigned in postorder, so children precede parents.
  for (std::size_t id = 0; id < index.size(); ++id) {
    std::uint64_t r = 1, d = 0, k = 1;
    for (std::size_t c : index.children(id)) {
      r += raw[c];
      k += core[c];
      d = std::max(d, depth[c]);
    }
    raw[id] = r;
    depth[id] = d + 1;
    Head h = index.representative(id)->stmt.head();
    core[id] = (h == Head::ElN || h == Head::ElN0 || h == Head::ElC) ? 0 : k;
  }
  // Unfolded multiplicity of each distinct subtree.
  std::vector<std::uint64_t> count(index.size(), 0);
  count[root_id] = 1;
  for (std::size_t id = index.size(); id-- > 0;) {
    if (count[id] == 0) continue;
    for (std::size_t c : index.children(id)) count[c] += count[id];
  }
  ProofStats stats;
  stats.steps = raw[root_id];
  stats.steps_dedup = index.size();
  stats.steps_no_closure = core[root_id];
  stats.depth = depth[root_id];
  for (std::size_t id = 0; id < index.size(); ++id) {
    if (count[id]) stats.rules[index.representative(id)->rule] += count[id];
  }
  return stats;
}

inline std::uint64_t proof_size(const Proof& root) { return proof_stats(root).steps; }

/// Structural equality of the unfolded trees.
inline bool same_proof(const Proof& a, const Proof& b) {
  StructuralIndex index;
  return index.id_of(a) == index.id_of(b);
}

/// Visits every distinct node object once, in postorder.
template <typename Fn>
void for_each_node(const Proof& root, Fn&& fn) {
  std::unordered_map<const ProofNode*, bool> seen;
  std::vector<std::pair<const ProofNode*, std::size_t>> stack{{root.get(), 0}};
  while (!stack.empty()) {
    auto& [node, next] = stack.back();
    if (next == 0 && seen.count(node)) {
      stack.pop_back();
      continue;
    }
    if (next < node->hyps.size()) {
      const ProofNode* child = node->hyps[next++].get();
      if (!seen.count(child)) stack.emplace_back(child, 0);
      continue;
    }
    seen.emplace(node, true);
    fn(*node);
    stack.pop_back();
  }
}

}  // namespace numcert

#endif  // NUMCERT_PROOF_HPP
