#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "zariski/report.hpp"

namespace {

void add_common(CLI::App* cmd, zariski::RunConfig& config) {
  cmd->add_option("--format", config.format, "Output format: json, csv or table")
      ->check(CLI::IsMember({"json", "csv", "table"}));
  cmd->add_option("--workers", config.workers, "Worker threads")->check(CLI::Range(1u, 256u));
  cmd->add_option("--budget", config.budget, "Node/pair budget (overrides ZF_BUDGET)");
}

void add_counting_flags(CLI::App* cmd, zariski::RunConfig& config) {
  cmd->add_flag("--count-ordered-pairs", config.count_ordered_pairs,
                "Do not identify (T1, T2) with (T2, T1) when the types agree");
  cmd->add_flag("--identify-inner", config.identify_inner, "Also identify structures up to inner automorphisms");
}

}  // namespace

int main(int argc, char** argv) {
  zariski::RunConfig config;
  CLI::App app{"Ramification structures, moduli component counts and branch-curve invariants"};
  app.require_subcommand(1);
  app.allow_extras(false);

  auto* enumerate = app.add_subcommand("enumerate", "List spherical systems of a given type");
  enumerate->add_option("--group", config.group, "Z2^k, S3, D4, Q8, Z<n> or a group file")->required();
  enumerate->add_option("--tau", config.tau, "Type, e.g. 2^4 or 2^4,3^2")->required();
  enumerate->add_option("--mode", config.mode, "ordered or multiset")->check(CLI::IsMember({"ordered", "multiset"}));
  enumerate->add_option("--limit", config.limit, "Maximum number of systems to list");
  add_common(enumerate, config);

  auto* components = app.add_subcommand("components", "Count structure classes (moduli components)");
  components->add_option("--group", config.group, "Z2^k, S3, D4, Q8, Z<n> or a group file")->required();
  components->add_option("--tau1", config.tau1, "Type of the first system")->required();
  components->add_option("--tau2", config.tau2, "Type of the second system")->required();
  add_counting_flags(components, config);
  add_common(components, config);

  auto* invariants = app.add_subcommand("invariants", "Branch-curve invariants from Chern numbers");
  invariants->add_option("--ksq", config.ksq, "K^2")->required();
  invariants->add_option("--c2", config.c2, "c2 (topological Euler number)")->required();
  invariants->add_option("--m", config.m, "Multiple of the canonical class (>= 2)");
  add_common(invariants, config);

  auto* family = app.add_subcommand("family", "Multiplet report for one (k, l)");
  family->add_option("--k", config.k, "Rank of (Z/2Z)^k")->required();
  family->add_option("--l", config.l, "Second parameter, l > 2k")->required();
  family->add_option("--epsilon", config.epsilon, "Override epsilon (rational or decimal)");
  add_counting_flags(family, config);
  add_common(family, config);

  auto* report = app.add_subcommand("report", "Batch multiplet reports over a (k, l) grid");
  report->add_option("--k-min", config.k_min, "Smallest k");
  report->add_option("--k-max", config.k_max, "Largest k");
  report->add_option("--l-offset-min", config.l_offset_min, "Smallest l - 2k");
  report->add_option("--l-offset-max", config.l_offset_max, "Largest l - 2k");
  report->add_option("--epsilon", config.epsilon, "Override epsilon for every row");
  add_counting_flags(report, config);
  add_common(report, config);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  config.command = app.get_subcommands().front()->get_name();
  return zariski::run(config, std::cout, std::cerr);
}
