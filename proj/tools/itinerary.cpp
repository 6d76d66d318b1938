#include <iostream>

#include "CLI11.hpp"
#include "itinerary/commands.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Itinerary planning for agent groups with goal lattices"};
  app.require_subcommand(1);

  itinerary::CommandOptions options;
  std::size_t depth = 0;
  std::size_t max_steps = 0;
  std::string eq1_mode;

  const auto add = [&](const char* name, const char* help) {
    CLI::App* sub = app.add_subcommand(name, help);
    sub->add_option("--scenario", options.scenario, "Scenario file (JSON)")->required();
    sub->add_option("--depth", depth, "Override the planner depth");
    sub->add_option("--max-steps", max_steps, "Override the simulation step limit");
    sub->add_option("--eq1-mode", eq1_mode, "Reward reading: prose or positionwise")
        ->check(CLI::IsMember({"prose", "positionwise"}));
    return sub;
  };
  add("validate", "Run every scenario validator and report PASS/FAIL per check");
  add("facts", "List the facts of the system phase space");
  add("weights", "Print desire-lattice vertex weights per agent");
  add("plan", "Run one planning round from the start positions");
  add("simulate", "Run the receding-horizon simulation and print the trace");
  add("dot", "Emit DOT for a lattice or an agent game")
      ->add_option("target", options.target,
                   "system-lattice | desire-lattice:<agent> | agent-game:<agent>:<depth>")
      ->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int status = app.exit(e);
    return status == 0 ? 0 : itinerary::exit_code::parse_error;
  }

  for (CLI::App* sub : app.get_subcommands()) {
    options.command = sub->get_name();
    if (sub->count("--depth")) options.depth = depth;
    if (sub->count("--max-steps")) options.max_steps = max_steps;
    if (sub->count("--eq1-mode")) options.eq1_mode = eq1_mode;
  }
  return itinerary::run_command(options, std::cout, std::cerr);
}
