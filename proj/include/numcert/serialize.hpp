#ifndef NUMCERT_SERIALIZE_HPP
#define NUMCERT_SERIALIZE_HPP

// JSON encoding of terms, statements, proofs and proof documents.
//
//   node = {"hyps": [node...], "rule": label, "stmt": stmt}
//   stmt = {"args": [term...], "head": name}
//   term = integer 0..10 | {"args": [term, term], "op": "pl"|"tm"|"exp"}
//
// Documents may additionally hoist repeated subtrees into "lemmas"; a node
// position can then hold {"ref": i} instead of a node. Keys are written in
// sorted order.

#include <algorithm>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include <json.hpp>

#include "numcert/proof.hpp"
#include "numcert/term.hpp"

namespace numcert {

using Json = nlohmann::json;

inline constexpr std::string_view kFormatVersion = "1";

namespace detail {

[[noreturn]] inline void schema_error(const std::string& what) {
  throw Error(ErrorKind::SchemaError, what);
}

inline std::string_view op_name(TermKind kind) {
  switch (kind) {
    case TermKind::Add: return "pl";
    case TermKind::Mul: return "tm";
    case TermKind::Pow: return "exp";
    default: return "";
  }
}

}  // namespace detail

inline Json term_to_json(const Term& t) {
  if (t.is_lit()) return t.value();
  if (t.is_var()) detail::schema_error("metavariables are not serializable");
  Json args = Json::array();
  args.push_back(term_to_json(t.lhs()));
  args.push_back(term_to_json(t.rhs()));
  Json out = Json::object();
  out["op"] = detail::op_name(t.kind());
  out["args"] = std::move(args);
  return out;
}

inline Term term_from_json(const Json& j) {
  if (j.is_number_integer()) {
    auto v = j.get<long long>();
    if (v < 0 || v > kMaxLiteral) detail::schema_error("literal out of range: " + j.dump());
    return Term::lit(static_cast<int>(v));
  }
  if (!j.is_object() || !j.contains("op") || !j.contains("args") || j.size() != 2) {
    detail::schema_error("malformed term: " + j.dump());
  }
  const Json& op = j["op"];
  const Json& args = j["args"];
  if (!op.is_string() || !args.is_array() || args.size() != 2) {
    detail::schema_error("malformed term: " + j.dump());
  }
  Term a = term_from_json(args[0]), b = term_from_json(args[1]);
  const auto& name = op.get_ref<const std::string&>();
  if (name == "pl") return Term::add(a, b);
  if (name == "tm") return Term::mul(a, b);
  if (name == "exp") return Term::pow(a, b);
  detail::schema_error("unknown operator: " + name);
}

inline Json statement_to_json(const Statement& s) {
  Json args = Json::array();
  for (const Term& t : s.args()) args.push_back(term_to_json(t));
  Json out = Json::object();
  out["head"] = head_name(s.head());
  out["args"] = std::move(args);
  return out;
}

inline Statement statement_from_json(const Json& j) {
  if (!j.is_object() || !j.contains("head") || !j.contains("args") || j.size() != 2 ||
      !j["head"].is_string() || !j["args"].is_array()) {
    detail::schema_error("malformed statement");
  }
  auto head = head_from_name(j["head"].get_ref<const std::string&>());
  if (!head) detail::schema_error("unknown head: " + j["head"].get<std::string>());
  const Json& args = j["args"];
  if (static_cast<int>(args.size()) != arity(*head)) detail::schema_error("wrong argument count");
  std::array<Term, 4> terms;
  for (std::size_t i = 0; i < args.size(); ++i) terms[i] = term_from_json(args[i]);
  switch (*head) {
    case Head::Eq: return Statement::eq(terms[0], terms[1]);
    case Head::Lt: return Statement::lt(terms[0], terms[1]);
    case Head::ElN: return Statement::el_n(terms[0]);
    case Head::ElN0: return Statement::el_n0(terms[0]);
    case Head::ElC: return Statement::el_c(terms[0]);
    case Head::NDvd: return Statement::ndvd(terms[0], terms[1]);
    case Head::NPrm: return Statement::nprm(terms[0]);
    case Head::Prm: return Statement::prm(terms[0]);
    case Head::GcdEq: return Statement::gcd_eq(terms[0], terms[1], terms[2]);
    case Head::PMod: return Statement::pmod(terms[0], terms[1], terms[2], terms[3]);
  }
  detail::schema_error("unknown head");
}

namespace detail {

inline void append_string(std::string& out, std::string_view s) {
  bool plain = std::all_of(s.begin(), s.end(), [](char c) {
    return c >= 0x20 && c != '"' && c != '\\' && static_cast<unsigned char>(c) < 0x80;
  });
  if (!plain) {
    out += Json(std::string(s)).dump();
    return;
  }
  out += '"';
  out += s;
  out += '"';
}

/// Text writer. Compound terms are rendered once per node object.
class Writer {
 public:
  void term(std::string& out, const Term& t) {
    if (t.is_lit()) {
      out += std::to_string(t.value());
      return;
    }
    if (t.is_var()) schema_error("metavariables are not serializable");
    if (auto it = cache_.find(t.get()); it != cache_.end()) {
      out += it->second;
      return;
    }
    std::string text = "{\"args\":[";
    term(text, t.lhs());
    text += ',';
    term(text, t.rhs());
    text += "],\"op\":\"";
    text += op_name(t.kind());
    text += "\"}";
    out += text;
    cache_.emplace(t.get(), std::move(text));
    keep_.push_back(t);
  }

  void statement(std::string& out, const Statement& s) {
    out += "{\"args\":[";
    for (int i = 0; i < s.arity(); ++i) {
      if (i) out += ',';
      term(out, s.arg(i));
    }
    out += "],\"head\":\"";
    out += head_name(s.head());
    out += "\"}";
  }

  /// Writes a node; `child` writes the i-th hypothesis.
  template <typename Child>
  void node(std::string& out, const ProofNode& p, Child&& child) {
    out += "{\"hyps\":";
    if (p.rule == kStubRule && p.hyps.empty()) {
      out += "null";
    } else {
      out += '[';
      for (std::size_t i = 0; i < p.hyps.size(); ++i) {
        if (i) out += ',';
        child(out, i);
      }
      out += ']';
    }
    out += ",\"rule\":";
    append_string(out, p.rule);
    out += ",\"stmt\":";
    statement(out, p.stmt);
    out += '}';
  }

  void plain(std::string& out, const Proof& p) {
    node(out, *p, [&](std::string& o, std::size_t i) { plain(o, p->hyps[i]); });
  }

 private:
  std::unordered_map<const TermNode*, std::string> cache_;
  std::vector<Term> keep_;
};

inline Statement make_statement(Head head, const std::vector<Term>& a) {
  if (static_cast<int>(a.size()) != arity(head)) schema_error("wrong argument count");
  switch (a.size()) {
    case 1: return Statement(head, {a[0]});
    case 2: return Statement(head, {a[0], a[1]});
    case 3: return Statement(head, {a[0], a[1], a[2]});
    default: return Statement(head, {a[0], a[1], a[2], a[3]});
  }
}

/// Event-driven reader; builds terms and proofs without an intermediate DOM.
class Reader : public nlohmann::json_sax<Json> {
 public:
  explicit Reader(bool document) : document_(document) {
    stack_.resize(16);
    stack_[0].kind = Kind::Top;
  }

  Proof proof() const { return proof_; }
  const std::string& goal() const { return goal_; }
  /// Lemmas arrived after the proof; the caller must reorder and retry.
  bool out_of_order() const { return out_of_order_; }

  bool null() override {
    Frame& f = top();
    if (f.kind == Kind::Node && f.key == Key::Hyps) return true;
    return scalar("null");
  }
  bool boolean(bool) override { return scalar("boolean"); }
  bool number_float(number_float_t, const string_t&) override { return scalar("number"); }
  bool binary(binary_t&) override { return scalar("binary"); }

  bool number_integer(number_integer_t v) override {
    if (v < 0) return scalar("negative number");
    return number_unsigned(static_cast<number_unsigned_t>(v));
  }

  bool number_unsigned(number_unsigned_t v) override {
    Frame& f = top();
    if (f.kind == Kind::Args) {
      if (v > static_cast<number_unsigned_t>(kMaxLiteral)) {
        schema_error("literal out of range: " + std::to_string(v));
      }
      f.terms.push_back(Term::lit(static_cast<int>(v)));
      return true;
    }
    if (f.kind == Kind::Node && f.key == Key::Ref) {
      f.ref = static_cast<long long>(v);
      return true;
    }
    return scalar("number");
  }

  bool string(string_t& s) override {
    Frame& f = top();
    if (f.kind == Kind::Doc && f.key == Key::Version) {
      if (s != kFormatVersion) schema_error("unsupported format_version " + s);
      f.seen = 1;
      return true;
    }
    if (f.kind == Kind::Doc && f.key == Key::Goal) {
      goal_ = std::move(s);
      return true;
    }
    if ((f.kind == Kind::Node && f.key == Key::Rule) || (f.kind == Kind::Stmt && f.key == Key::Head) ||
        (f.kind == Kind::Term && f.key == Key::Op)) {
      f.text.swap(s);
      return true;
    }
    return scalar("string");
  }

  bool start_object(std::size_t) override {
    Frame& f = top();
    switch (f.kind) {
      case Kind::Skip: ++f.depth; return true;
      case Kind::Top: push(document_ ? Kind::Doc : Kind::Node); return true;
      case Kind::Hyps:
      case Kind::Lemmas: push(Kind::Node); return true;
      case Kind::Args: push(Kind::Term); return true;
      case Kind::Doc:
        if (f.key == Key::Proof) {
          push(Kind::Node);
          return true;
        }
        if (f.key == Key::Other) {
          push(Kind::Skip);
          return true;
        }
        break;
      case Kind::Node:
        if (f.key == Key::Stmt) {
          push(Kind::Stmt);
          return true;
        }
        break;
      default: break;
    }
    schema_error("unexpected object" + where());
  }

  bool key(string_t& k) override {
    Frame& f = top();
    switch (f.kind) {
      case Kind::Node:
        f.key = k == "hyps" ? Key::Hyps : k == "rule" ? Key::Rule : k == "stmt" ? Key::Stmt
              : k == "ref"  ? Key::Ref  : Key::Other;
        break;
      case Kind::Stmt:
        f.key = k == "args" ? Key::Args : k == "head" ? Key::Head : Key::Other;
        break;
      case Kind::Term:
        f.key = k == "args" ? Key::Args : k == "op" ? Key::Op : Key::Other;
        break;
      case Kind::Doc:
        f.key = k == "format_version" ? Key::Version : k == "goal" ? Key::Goal
              : k == "lemmas" ? Key::Lemmas : k == "proof" ? Key::Proof : Key::Other;
        return true;
      default: return true;
    }
    if (f.key == Key::Other) schema_error("unexpected key " + k);
    unsigned bit = 1u << static_cast<unsigned>(f.key);
    if (f.seen & bit) schema_error("duplicate key " + k);
    f.seen |= bit;
    return true;
  }

  bool end_object() override {
    Frame& f = pop();
    switch (f.kind) {
      case Kind::Skip: return unskip(f);
      case Kind::Doc:
        if (!f.seen) schema_error("unsupported or missing format_version");
        if (!proof_) schema_error("document has no proof");
        top().done = true;
        return true;
      case Kind::Node: deliver(finish_node(f)); return true;
      case Kind::Stmt: {
        if (f.seen != (bit(Key::Args) | bit(Key::Head))) schema_error("malformed statement");
        auto head = head_from_name(f.text);
        if (!head) schema_error("unknown head: " + f.text);
        top().stmt = make_statement(*head, f.terms);
        return true;
      }
      case Kind::Term: {
        if (f.seen != (bit(Key::Args) | bit(Key::Op)) || f.terms.size() != 2) schema_error("malformed term");
        TermKind kind = f.text == "pl"  ? TermKind::Add
                        : f.text == "tm"  ? TermKind::Mul
                        : f.text == "exp" ? TermKind::Pow
                                          : TermKind::Lit;
        if (kind == TermKind::Lit) schema_error("unknown operator: " + f.text);
        top().terms.push_back(intern(kind, f.terms[0], f.terms[1]));
        return true;
      }
      default: schema_error("unbalanced object");
    }
  }

  bool start_array(std::size_t) override {
    Frame& f = top();
    if (f.kind == Kind::Skip) {
      ++f.depth;
      return true;
    }
    if (f.kind == Kind::Doc && f.key == Key::Lemmas) {
      if (proof_) {
        out_of_order_ = true;
        push(Kind::Skip);
      } else {
        push(Kind::Lemmas);
      }
      return true;
    }
    if (f.kind == Kind::Doc && f.key == Key::Other) {
      push(Kind::Skip);
      return true;
    }
    if (f.kind == Kind::Node && f.key == Key::Hyps) {
      push(Kind::Hyps);
      return true;
    }
    if ((f.kind == Kind::Stmt || f.kind == Kind::Term) && f.key == Key::Args) {
      push(Kind::Args);
      return true;
    }
    schema_error("unexpected array" + where());
  }

  bool end_array() override {
    Frame& f = pop();
    switch (f.kind) {
      case Kind::Skip: return unskip(f);
      case Kind::Hyps: top().proofs.swap(f.proofs); return true;
      case Kind::Args: top().terms.swap(f.terms); return true;
      case Kind::Lemmas: return true;
      default: schema_error("unbalanced array");
    }
  }

  bool parse_error(std::size_t, const std::string&, const nlohmann::detail::exception& e) override {
    schema_error(std::string("invalid JSON: ") + e.what());
  }

  void finish() const {
    if (!out_of_order_ && !stack_[0].done) schema_error("incomplete document");
  }

 private:
  enum class Kind { Top, Doc, Node, Hyps, Lemmas, Stmt, Term, Args, Skip };
  enum class Key { None, Hyps, Rule, Stmt, Ref, Args, Head, Op, Version, Goal, Lemmas, Proof, Other };

  /// Frames are reused between siblings, so their buffers keep capacity.
  struct Frame {
    Kind kind = Kind::Top;
    Key key = Key::None;
    unsigned seen = 0;
    bool done = false;
    long long ref = -1;
    int depth = 0;
    std::string text;
    Statement stmt;
    std::vector<Term> terms;
    std::vector<Proof> proofs;
  };

  static constexpr unsigned bit(Key k) { return 1u << static_cast<unsigned>(k); }

  Frame& top() { return stack_[size_ - 1]; }

  void push(Kind k) {
    if (size_ == stack_.size()) stack_.resize(2 * size_);
    Frame& f = stack_[size_++];
    f.kind = k;
    f.key = Key::None;
    f.seen = 0;
    f.ref = -1;
    f.depth = 0;
    f.terms.clear();
    f.proofs.clear();
  }

  /// The popped frame stays valid until the next push.
  Frame& pop() {
    if (size_ < 2) schema_error("unbalanced document");
    return stack_[--size_];
  }

  bool unskip(Frame& f) {
    if (f.depth > 0) {
      --f.depth;
      ++size_;
    }
    return true;
  }

  std::string where() {
    switch (top().key) {
      case Key::None: return "";
      case Key::Hyps: return " at \"hyps\"";
      case Key::Rule: return " at \"rule\"";
      case Key::Stmt: return " at \"stmt\"";
      case Key::Ref: return " at \"ref\"";
      case Key::Args: return " at \"args\"";
      case Key::Head: return " at \"head\"";
      case Key::Op: return " at \"op\"";
      case Key::Version: return " at \"format_version\"";
      case Key::Goal: return " at \"goal\"";
      case Key::Lemmas: return " at \"lemmas\"";
      case Key::Proof: return " at \"proof\"";
      default: return "";
    }
  }

  bool scalar(const char* what) {
    const Frame& f = top();
    if (f.kind == Kind::Skip) return true;
    if (f.kind == Kind::Doc && f.key == Key::Other) return true;
    schema_error(std::string("unexpected ") + what + where());
  }

  Proof finish_node(Frame& f) {
    if (f.seen & bit(Key::Ref)) {
      if (f.seen != bit(Key::Ref) || f.ref < 0) schema_error("malformed reference");
      if (top().kind == Kind::Lemmas) schema_error("a lemma cannot be a bare reference");
      if (static_cast<std::size_t>(f.ref) >= lemmas_.size()) {
        schema_error("dangling reference " + std::to_string(f.ref));
      }
      return lemmas_[static_cast<std::size_t>(f.ref)];
    }
    if (f.seen != (bit(Key::Hyps) | bit(Key::Rule) | bit(Key::Stmt))) {
      schema_error("proof node needs exactly hyps, rule and stmt");
    }
    return make_proof(f.text, std::move(f.stmt), std::move(f.proofs));
  }

  void deliver(Proof p) {
    Frame& f = top();
    switch (f.kind) {
      case Kind::Top:
        proof_ = std::move(p);
        f.done = true;
        return;
      case Kind::Doc: proof_ = std::move(p); return;
      case Kind::Hyps: f.proofs.push_back(std::move(p)); return;
      case Kind::Lemmas: lemmas_.push_back(std::move(p)); return;
      default: schema_error("misplaced proof node");
    }
  }

  struct TermKey {
    TermKind kind;
    const TermNode* lhs;
    const TermNode* rhs;
    bool operator==(const TermKey&) const = default;
  };
  struct TermKeyHash {
    std::size_t operator()(const TermKey& k) const noexcept {
      auto h = std::hash<const void*>();
      return (h(k.lhs) * 31 + h(k.rhs)) * 4 + static_cast<std::size_t>(k.kind);
    }
  };

  /// Repeated subterms in the text become one shared node.
  Term intern(TermKind kind, const Term& a, const Term& b) {
    auto [it, fresh] = terms_.try_emplace(TermKey{kind, a.get(), b.get()});
    if (fresh) {
      it->second = kind == TermKind::Add ? Term::add(a, b)
                 : kind == TermKind::Mul ? Term::mul(a, b)
                                         : Term::pow(a, b);
    }
    return it->second;
  }

  bool document_;
  bool out_of_order_ = false;
  std::unordered_map<TermKey, Term, TermKeyHash> terms_;
  std::vector<Frame> stack_;
  std::size_t size_ = 1;
  std::vector<Proof> lemmas_;
  Proof proof_;
  std::string goal_;
};

inline Reader read(std::string_view bytes, bool document) {
  Reader reader(document);
  Json::sax_parse(bytes.begin(), bytes.end(), &reader);
  reader.finish();
  return reader;
}

}  // namespace detail

inline Json parse_json(std::string_view bytes) {
  try {
    return Json::parse(bytes.begin(), bytes.end());
  } catch (const Json::parse_error& e) {
    detail::schema_error(std::string("invalid JSON: ") + e.what());
  }
}

/// Plain tree encoding; shared subtrees are written out at every use.
inline std::string serialize(const Proof& p) {
  std::string out;
  detail::Writer().plain(out, p);
  return out;
}

inline Proof deserialize(std::string_view bytes) { return detail::read(bytes, false).proof(); }

inline Json proof_to_json(const Proof& p) { return parse_json(serialize(p)); }
inline Proof proof_from_json(const Json& j) { return deserialize(j.dump()); }

inline Json stats_to_json(const ProofStats& s) {
  Json rules = Json::object();
  for (const auto& [label, count] : s.rules) rules[label] = count;
  return Json{{"steps", s.steps},
              {"steps_dedup", s.steps_dedup},
              {"steps_no_closure", s.steps_no_closure},
              {"depth", s.depth},
              {"rules", std::move(rules)}};
}

struct ProofDocument {
  std::string goal;
  Proof proof;
  ProofStats stats;
};

inline ProofDocument make_document(std::string goal, Proof proof) {
  ProofStats stats = proof_stats(proof);
  return ProofDocument{std::move(goal), std::move(proof), std::move(stats)};
}

/// Encodes with repeated non-leaf subtrees hoisted into a lemma table.
inline std::string serialize_document(const ProofDocument& doc) {
  StructuralIndex index;
  std::size_t root = index.id_of(doc.proof);
  std::vector<std::size_t> uses(index.size(), 0);
  for (std::size_t id = 0; id < index.size(); ++id) {
    for (std::size_t c : index.children(id)) ++uses[c];
  }
  std::vector<long long> lemma_of(index.size(), -1);
  detail::Writer writer;
  auto write = [&](auto&& self, std::string& out, std::size_t id, bool allow_ref) -> void {
    if (allow_ref && lemma_of[id] >= 0) {
      out += "{\"ref\":" + std::to_string(lemma_of[id]) + "}";
      return;
    }
    const auto& kids = index.children(id);
    writer.node(out, *index.representative(id),
                [&](std::string& o, std::size_t i) { self(self, o, kids[i], true); });
  };
  // Ids are postorder, so a lemma only refers to earlier lemmas.
  std::string lemmas;
  long long count = 0;
  for (std::size_t id = 0; id < index.size(); ++id) {
    if (id == root || uses[id] < 2 || index.children(id).empty()) continue;
    if (count) lemmas += ',';
    write(write, lemmas, id, false);
    lemma_of[id] = count++;
  }
  std::string out = "{\"format_version\":";
  detail::append_string(out, kFormatVersion);
  out += ",\"goal\":";
  detail::append_string(out, doc.goal);
  if (count) out += ",\"lemmas\":[" + lemmas + "]";
  out += ",\"proof\":";
  write(write, out, root, false);
  out += ",\"stats\":" + stats_to_json(doc.stats).dump() + "}";
  return out;
}

inline ProofDocument deserialize_document(std::string_view bytes) {
  // The reader expects lemmas before the proof, as written above. Other key
  // orders are normalized through the DOM and read again.
  std::optional<detail::Reader> reader;
  try {
    reader.emplace(detail::read(bytes, true));
    if (!reader->out_of_order()) return make_document(reader->goal(), reader->proof());
  } catch (const Error&) {
    std::string sorted = parse_json(bytes).dump();
    if (sorted == bytes) throw;
    reader.emplace(detail::read(sorted, true));
    return make_document(reader->goal(), reader->proof());
  }
  reader.emplace(detail::read(parse_json(bytes).dump(), true));
  return make_document(reader->goal(), reader->proof());
}

inline Json document_to_json(const ProofDocument& doc) { return parse_json(serialize_document(doc)); }
inline ProofDocument document_from_json(const Json& j) { return deserialize_document(j.dump()); }

}  // namespace numcert

#endif  // NUMCERT_SERIALIZE_HPP
