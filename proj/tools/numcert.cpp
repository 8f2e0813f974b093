#include <map>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "numcert/cli.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Generate and check arithmetic and primality proofs over base-4 numerals"};
  app.require_subcommand(1);

  std::string goal, out_path, proof_path, n_text, method_name = "auto", cert_text, expected;
  bool stats = false;

  auto* prove = app.add_subcommand("prove", "Synthesize and self-check a proof of GOAL");
  prove->add_option("goal", goal, "Goal expression, e.g. '4*(4*1+3)+2 = 5*6'")->required();
  prove->add_option("-o,--out", out_path, "Output file (default stdout)");
  prove->add_flag("--stats", stats, "Print step statistics to stderr");

  auto* verify = app.add_subcommand("verify", "Check a proof document");
  verify->add_option("path", proof_path, "Proof document")->required();
  verify->add_option("goal", expected, "Expected root goal");

  auto* prime = app.add_subcommand("prime", "Prove N prime");
  prime->add_option("N", n_text, "Integer to certify")->required();
  prime->add_option("-m,--method", method_name, "auto, trial or pocklington")
      ->check(CLI::IsMember({"auto", "trial", "pocklington"}));
  prime->add_option("--cert", cert_text, "Pocklington data 'p=<int>,e=<int>,a=<int>'");
  prime->add_option("-o,--out", out_path, "Output file (default stdout)");
  prime->add_flag("--stats", stats, "Print step statistics to stderr");

  auto* rules = app.add_subcommand("rules", "List the rule registry");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : numcert::exit_code::parse_error;
  }

  if (*prove) return numcert::cmd_prove(goal, out_path, stats);
  if (*verify) {
    std::optional<std::string> want;
    if (verify->count("goal")) want = expected;
    return numcert::cmd_verify(proof_path, want);
  }
  if (*prime) {
    static const std::map<std::string, numcert::PrimeMethod> methods = {
        {"auto", numcert::PrimeMethod::Auto},
        {"trial", numcert::PrimeMethod::Trial},
        {"pocklington", numcert::PrimeMethod::Pocklington}};
    numcert::PrimeOptions options;
    options.method = methods.at(method_name);
    if (prime->count("--cert")) options.cert = cert_text;
    return numcert::cmd_prime(n_text, options, out_path, stats);
  }
  if (*rules) return numcert::cmd_rules();
  return numcert::exit_code::parse_error;
}
