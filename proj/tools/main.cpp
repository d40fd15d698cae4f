#include <iostream>
#include <string>
#include <vector>

#include "commands.hpp"

namespace {

void print_usage(std::ostream& out) {
  out << "usage: slog <command> [flags]\n"
         "\n"
         "commands:\n"
         "  gen-data    generate a synthetic diffusion dataset\n"
         "  solve-admm  run the iterative solver on a dataset\n"
         "  train       train the unrolled network on a dataset\n"
         "  infer       run a trained model over a dataset\n"
         "  bench       compare solver and network across a noise sweep\n"
         "  report      aggregate benchmark CSVs into a summary JSON\n"
         "\n"
         "global flags: --config FILE.json (keys mirror flags; explicit flags win),\n"
         "              --seed U64, --jobs N, --quiet\n"
         "run `slog <command> --help` for per-command flags\n";
}

}  // namespace

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  if (args.empty()) {
    print_usage(std::cerr);
    return 1;
  }
  const std::string sub = args.front();
  args.erase(args.begin());
  if (sub == "--help" || sub == "-h" || sub == "help") {
    print_usage(std::cout);
    return 0;
  }

  using Handler = int (*)(std::vector<std::string>);
  const std::pair<const char*, Handler> table[] = {
      {"gen-data", slog::cli::cmd_gen_data}, {"solve-admm", slog::cli::cmd_solve_admm},
      {"train", slog::cli::cmd_train},       {"infer", slog::cli::cmd_infer},
      {"bench", slog::cli::cmd_bench},       {"report", slog::cli::cmd_report},
  };
  for (const auto& [name, handler] : table) {
    if (sub == name) return handler(std::move(args));
  }
  std::cerr << "slog: unknown command '" << sub << "'\n";
  print_usage(std::cerr);
  return 1;
}
