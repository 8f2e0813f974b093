#ifndef NUMCERT_CHECKER_HPP
#define NUMCERT_CHECKER_HPP

// Independent proof verifier. Depends only on the term language and the
// rule registry.

#include <optional>
#include <string>
#include <unordered_set>
#include <vector>

#include "numcert/proof.hpp"
#include "numcert/rules.hpp"
#include "numcert/term.hpp"

namespace numcert {

enum class CheckErrorKind {
  UnknownRule,
  ArityMismatch,
  ConclusionMismatch,
  HypothesisMismatch,
  IncompleteProof,
  RootMismatch,
  SemanticFailure,
};

constexpr std::string_view to_string(CheckErrorKind kind) {
  switch (kind) {
    case CheckErrorKind::UnknownRule: return "UnknownRule";
    case CheckErrorKind::ArityMismatch: return "ArityMismatch";
    case CheckErrorKind::ConclusionMismatch: return "ConclusionMismatch";
    case CheckErrorKind::HypothesisMismatch: return "HypothesisMismatch";
    case CheckErrorKind::IncompleteProof: return "IncompleteProof";
    case CheckErrorKind::RootMismatch: return "RootMismatch";
    case CheckErrorKind::SemanticFailure: return "SemanticFailure";
  }
  return "";
}

/// Child indices from the root to a node.
using NodePath = std::vector<std::size_t>;

inline std::string format_path(const NodePath& path) {
  std::string out = "root";
  for (std::size_t i : path) out += "/" + std::to_string(i);
  return out;
}

struct CheckFailure {
  CheckErrorKind kind;
  NodePath path;
  std::string rule;
  /// Offending hypothesis for HypothesisMismatch.
  std::size_t hyp_index = 0;
  std::string detail;

  std::string message() const {
    std::string out = std::string(to_string(kind));
    if (kind == CheckErrorKind::HypothesisMismatch) out += "(" + std::to_string(hyp_index) + ")";
    out += " at " + format_path(path);
    if (!rule.empty()) out += " [" + rule + "]";
    if (!detail.empty()) out += ": " + detail;
    return out;
  }
};

class CheckResult {
 public:
  CheckResult() = default;
  explicit CheckResult(CheckFailure failure) : failure_(std::move(failure)) {}

  bool ok() const noexcept { return !failure_.has_value(); }
  explicit operator bool() const noexcept { return ok(); }
  const CheckFailure& failure() const { return *failure_; }
  std::string message() const { return ok() ? "ok" : failure_->message(); }

 private:
  std::optional<CheckFailure> failure_;
};

/// Replays proofs against the registry. Node objects that have already been
/// verified are remembered (up to `cache_capacity` of them) and not walked
/// again; nodes are immutable, so a verified object stays verified.
class Checker {
 public:
  explicit Checker(std::size_t cache_capacity = 1u << 20,
                   const Registry& rules = registry())
      : capacity_(cache_capacity), rules_(rules) {}

  CheckResult check(const Proof& root) {
    NodePath path;
    if (auto failure = visit(root, path)) return CheckResult(std::move(*failure));
    return {};
  }

  CheckResult check_root(const Proof& root, const Statement& expected) {
    CheckResult result = check(root);
    if (!result) return result;
    if (!(root->stmt == expected)) {
      return CheckResult(CheckFailure{CheckErrorKind::RootMismatch, {}, root->rule, 0,
                                      "proves " + debug_string(root->stmt) + ", expected " +
                                          debug_string(expected)});
    }
    return {};
  }

  /// Validates a single inference step without descending into children.
  std::optional<CheckFailure> check_step(const ProofNode& node) const {
    if (node.rule == kStubRule) {
      return CheckFailure{CheckErrorKind::IncompleteProof, {}, node.rule, 0,
                          debug_string(node.stmt)};
    }
    const RuleSchema* rule = rules_.find(node.rule);
    if (!rule) return CheckFailure{CheckErrorKind::UnknownRule, {}, node.rule, 0, {}};
    if (rule->hyps.size() != node.hyps.size()) {
      return CheckFailure{CheckErrorKind::ArityMismatch, {}, node.rule, 0,
                          "expected " + std::to_string(rule->hyps.size()) + " hypotheses, got " +
                              std::to_string(node.hyps.size())};
    }
    Substitution s;
    if (!detail::match_into(rule->concl, node.stmt, s)) {
      return CheckFailure{CheckErrorKind::ConclusionMismatch, {}, node.rule, 0,
                          debug_string(node.stmt)};
    }
    for (std::size_t i = 0; i < rule->hyps.size(); ++i) {
      const Proof& child = node.hyps[i];
      if (!child || !detail::match_into(rule->hyps[i], child->stmt, s)) {
        return CheckFailure{CheckErrorKind::HypothesisMismatch, {}, node.rule, i,
                            child ? debug_string(child->stmt) : "<null>"};
      }
    }
    return std::nullopt;
  }

  void clear_cache() {
    verified_.clear();
    holders_.clear();
  }

 private:
  std::optional<CheckFailure> visit(const Proof& node, NodePath& path) {
    if (!node) {
      return CheckFailure{CheckErrorKind::IncompleteProof, path, {}, 0, "missing node"};
    }
    if (verified_.count(node.get())) return std::nullopt;
    if (auto failure = check_step(*node)) {
      failure->path = path;
      return failure;
    }
    for (std::size_t i = 0; i < node->hyps.size(); ++i) {
      path.push_back(i);
      auto failure = visit(node->hyps[i], path);
      path.pop_back();
      if (failure) return failure;
    }
    remember(node);
    return std::nullopt;
  }

  void remember(const Proof& node) {
    if (capacity_ == 0) return;
    if (verified_.size() >= capacity_) clear_cache();
    verified_.insert(node.get());
    holders_.push_back(node);
  }

  std::size_t capacity_;
  const Registry& rules_;
  std::unordered_set<const ProofNode*> verified_;
  std::vector<Proof> holders_;
};

inline CheckResult check(const Proof& root) { return Checker().check(root); }

inline CheckResult check_root(const Proof& root, const Statement& expected) {
  return Checker().check_root(root, expected);
}

/// Confirms every node's statement is true under integer semantics.
inline CheckResult audit_semantics(const Proof& root) {
  std::unordered_set<const ProofNode*> seen;
  NodePath path;
  std::optional<CheckFailure> failure;
  auto visit = [&](auto&& self, const Proof& node) -> bool {
    if (!node || seen.count(node.get())) return true;
    if (!statement_holds(node->stmt)) {
      failure = CheckFailure{CheckErrorKind::SemanticFailure, path, node->rule, 0,
                             debug_string(node->stmt)};
      return false;
    }
    for (std::size_t i = 0; i < node->hyps.size(); ++i) {
      path.push_back(i);
      bool ok = self(self, node->hyps[i]);
      path.pop_back();
      if (!ok) return false;
    }
    seen.insert(node.get());
    return true;
  };
  visit(visit, root);
  if (failure) return CheckResult(std::move(*failure));
  return {};
}

}  // namespace numcert

#endif  // NUMCERT_CHECKER_HPP
