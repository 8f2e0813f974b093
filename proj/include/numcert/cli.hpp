#ifndef NUMCERT_CLI_HPP
#define NUMCERT_CLI_HPP

// Command implementations behind the numcert executable.

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "numcert/checker.hpp"
#include "numcert/goal.hpp"
#include "numcert/serialize.hpp"
#include "numcert/synth_prime.hpp"

namespace numcert {

namespace exit_code {
inline constexpr int ok = 0;
inline constexpr int verify_failed = 1;
inline constexpr int parse_error = 2;
inline constexpr int rejected = 3;
inline constexpr int no_certificate = 4;
}  // namespace exit_code

struct PrimeOptions {
  PrimeMethod method = PrimeMethod::Auto;
  std::optional<std::string> cert;
};

namespace detail {

inline Integer int_value(const Term& t) { return eval(t); }

inline Proof synthesize(PrimeProver& prover, const Statement& goal) {
  Prover& arith = prover.arith();
  switch (goal.head()) {
    case Head::Eq:
    case Head::Lt:
    case Head::ElN:
    case Head::ElN0:
    case Head::ElC:
      return arith.prove(goal);
    case Head::NDvd:
      return prover.prove_ndvd(int_value(goal.arg(0)), int_value(goal.arg(1)));
    case Head::NPrm:
      return prover.prove_nprime(int_value(goal.arg(0)));
    case Head::Prm:
      return prover.prove_prime(int_value(goal.arg(0)));
    case Head::GcdEq: {
      Integer m = int_value(goal.arg(0)), n = int_value(goal.arg(1));
      if (gcd(m, n) != int_value(goal.arg(2))) {
        throw Error(ErrorKind::NotTrue, "gcd(" + m.str() + "," + n.str() + ") = " + gcd(m, n).str());
      }
      return prover.prove_gcd(m, n);
    }
    case Head::PMod: {
      Integer a = int_value(goal.arg(0)), e = int_value(goal.arg(1));
      Integer r = int_value(goal.arg(2)), n = int_value(goal.arg(3));
      if (e < 1 || n < 2) throw Error(ErrorKind::OutOfDomain, "modular goal needs e >= 1, n >= 2");
      if (powmod(a, e, n) != r) throw Error(ErrorKind::NotTrue, "residue is " + powmod(a, e, n).str());
      return prover.prove_powmod(a, e, n).proof;
    }
  }
  throw Error(ErrorKind::OutOfDomain, "unsupported goal");
}

inline bool write_output(const std::string& path, const std::string& bytes, std::ostream& out,
                         std::ostream& err) {
  if (path.empty() || path == "-") {
    out << bytes << "\n";
    return true;
  }
  std::ofstream file(path, std::ios::binary);
  file << bytes << "\n";
  if (!file) {
    err << "error: cannot write " << path << "\n";
    return false;
  }
  return true;
}

inline void print_stats(const ProofStats& s, std::ostream& err) {
  err << "steps=" << s.steps << " steps_dedup=" << s.steps_dedup
      << " steps_no_closure=" << s.steps_no_closure << " depth=" << s.depth << "\n";
  for (const auto& [rule, count] : s.rules) err << "  " << rule << " " << count << "\n";
}

/// Self-check, then write the document. Returns an exit code.
inline int emit(const Statement& goal, const Proof& proof, const std::string& out_path, bool stats,
                std::ostream& out, std::ostream& err) {
  CheckResult verdict = Checker().check_root(proof, goal);
  if (!verdict) {
    err << "internal error: synthesized proof rejected: " << verdict.message() << "\n";
    return exit_code::verify_failed;
  }
  ProofDocument doc = make_document(render_goal(goal), proof);
  if (!write_output(out_path, serialize_document(doc), out, err)) return exit_code::verify_failed;
  if (stats) print_stats(doc.stats, err);
  return exit_code::ok;
}

inline bool is_rejection(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::OutOfRange:
    case ErrorKind::OutOfDomain:
    case ErrorKind::NotTrue:
    case ErrorKind::ZeroValue:
    case ErrorKind::Divides:
    case ErrorKind::IsPrime:
    case ErrorKind::Composite:
    case ErrorKind::NotPrime:
    case ErrorKind::NoCertificate:
    case ErrorKind::BadChain:
      return true;
    default:
      return false;
  }
}

inline std::optional<std::string> read_file(const std::string& path) {
  std::ifstream file(path, std::ios::binary);
  if (!file) return std::nullopt;
  std::ostringstream buf;
  buf << file.rdbuf();
  return buf.str();
}

}  // namespace detail

inline int cmd_prove(const std::string& goal_text, const std::string& out_path, bool stats,
                     std::ostream& out = std::cout, std::ostream& err = std::cerr) {
  Statement goal;
  try {
    goal = parse_goal(goal_text);
  } catch (const ParseError& e) {
    err << e.what() << "\n";
    return exit_code::parse_error;
  }
  try {
    PrimeProver prover;
    Proof proof = detail::synthesize(prover, goal);
    return detail::emit(goal, proof, out_path, stats, out, err);
  } catch (const Error& e) {
    err << e.what() << "\n";
    return detail::is_rejection(e.kind()) ? exit_code::rejected : exit_code::verify_failed;
  }
}

inline int cmd_verify(const std::string& path, const std::optional<std::string>& expected_goal,
                      std::ostream& out = std::cout, std::ostream& err = std::cerr) {
  std::optional<Statement> expected;
  if (expected_goal) {
    try {
      expected = parse_goal(*expected_goal);
    } catch (const ParseError& e) {
      err << e.what() << "\n";
      return exit_code::parse_error;
    }
  }
  auto bytes = detail::read_file(path);
  if (!bytes) {
    err << "error: cannot read " << path << "\n";
    return exit_code::verify_failed;
  }
  ProofDocument doc;
  try {
    doc = deserialize_document(*bytes);
  } catch (const Error& e) {
    err << e.what() << "\n";
    return exit_code::verify_failed;
  }
  if (!expected && !doc.goal.empty()) {
    try {
      expected = parse_goal(doc.goal);
    } catch (const ParseError& e) {
      err << "SchemaError: document goal does not parse: " << e.what() << "\n";
      return exit_code::verify_failed;
    }
  }
  Checker checker;
  CheckResult verdict = expected ? checker.check_root(doc.proof, *expected) : checker.check(doc.proof);
  if (!verdict) {
    err << "rejected: " << verdict.message() << "\n";
    return exit_code::verify_failed;
  }
  out << "ok: " << debug_string(doc.proof->stmt) << " (" << doc.stats.steps << " steps)\n";
  return exit_code::ok;
}

inline int cmd_prime(const std::string& n_text, const PrimeOptions& options,
                     const std::string& out_path, bool stats, std::ostream& out = std::cout,
                     std::ostream& err = std::cerr) {
  Integer n;
  std::optional<PocklingtonCert> cert;
  try {
    Statement goal = parse_goal("prime " + n_text);
    n = eval(goal.arg(0));
    if (options.cert) cert = parse_cert(n, *options.cert);
  } catch (const ParseError& e) {
    err << e.what() << "\n";
    return exit_code::parse_error;
  }
  try {
    PrimeProver prover;
    PrimeMethod method = options.method;
    if (cert && method == PrimeMethod::Auto) method = PrimeMethod::Pocklington;
    PrimeCertificate result = prover.certify_prime(n, method, cert);
    Statement goal = Statement::prm(to_numeral(n));
    int code = detail::emit(goal, result.proof, out_path, stats, out, err);
    if (code != exit_code::ok) return code;
    std::ostream& summary = (out_path.empty() || out_path == "-") ? err : out;
    summary << "prime " << n << ": " << result.method;
    if (result.cert) {
      summary << " p=" << result.cert->p << " e=" << result.cert->e << " B=" << result.cert->B
              << " a=" << result.cert->a << " g=" << result.cert->g();
    }
    summary << "\n";
    return exit_code::ok;
  } catch (const Error& e) {
    err << e.what() << "\n";
    if (e.kind() == ErrorKind::NoCertificate) return exit_code::no_certificate;
    return detail::is_rejection(e.kind()) ? exit_code::rejected : exit_code::verify_failed;
  }
}

inline int cmd_rules(std::ostream& out = std::cout) {
  for (const RuleSchema& rule : registry().rules()) {
    out << rule.label << ":";
    for (std::size_t i = 0; i < rule.hyps.size(); ++i) {
      out << (i ? ", " : " ") << debug_string(rule.hyps[i]);
    }
    out << " |- " << debug_string(rule.concl) << "\n";
  }
  return exit_code::ok;
}

}  // namespace numcert

#endif  // NUMCERT_CLI_HPP
