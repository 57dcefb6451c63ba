// Copyright 2026 The qpd Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "qpd/cli.hpp"

namespace {

struct Args {
  std::string input;
  std::string output = "-";
  double tolerance_rel = 0.0;
  bool tolerance_set = false;
  std::uint64_t seed = 0;
  bool seed_set = false;
  std::string format = "json";
};

int run(const std::string& command, const Args& args) {
  std::string input_text;
  if (!args.input.empty()) {
    std::ifstream in(args.input);
    if (!in) {
      std::cerr << "cannot open input file: " << args.input << "\n";
      return 1;
    }
    std::ostringstream buffer;
    buffer << in.rdbuf();
    input_text = buffer.str();
  } else if (command != "selftest") {
    std::cerr << "command '" << command << "' requires --input\n";
    return 1;
  }

  qpd::CliOptions options;
  if (args.tolerance_set) options.tolerance_rel = args.tolerance_rel;
  if (args.seed_set) options.seed = args.seed;
  options.format = args.format;

  const qpd::RunResult result = qpd::run_command(command, input_text, options);

  if (args.output == "-") {
    std::cout << result.report;
  } else {
    std::ofstream out(args.output, std::ios::binary);
    if (!out) {
      std::cerr << "cannot open output file: " << args.output << "\n";
      return 1;
    }
    out << result.report;
  }
  return result.exit_code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "qpd: polar duals, covariance ellipsoids, symplectic capacities, and "
      "Gaussian-state reconstruction"};
  app.require_subcommand(1);

  Args args;
  const std::vector<std::string> commands = {
      "dual",     "pair-check", "williamson", "project",      "reconstruct",
      "capacity", "evolve",     "mahler",     "hardy",        "donoho-stark",
      "selftest"};

  std::string chosen;
  for (const auto& name : commands) {
    CLI::App* sub = app.add_subcommand(name, "run the '" + name + "' command");
    sub->add_option("--input", args.input, "JSON problem file");
    sub->add_option("--output", args.output, "report destination ('-' for stdout)");
    sub->add_option("--tolerance-rel", args.tolerance_rel, "override rel_eq")
        ->each([&](const std::string&) { args.tolerance_set = true; });
    sub->add_option("--seed", args.seed, "override the problem-file seed")
        ->each([&](const std::string&) { args.seed_set = true; });
    sub->add_option("--format", args.format, "json (default) or csv (evolve series)");
    sub->callback([&chosen, name]() { chosen = name; });
  }

  CLI11_PARSE(app, argc, argv);
  return run(chosen, args);
}
