#pragma once

#include <string>
#include <vector>

namespace slog::cli {

// Each command parses its own flags (after JSON config-file merging) and
// returns a process exit code: 0 success, 1 usage error, 2 runtime failure.
int cmd_gen_data(std::vector<std::string> args);
int cmd_solve_admm(std::vector<std::string> args);
int cmd_train(std::vector<std::string> args);
int cmd_infer(std::vector<std::string> args);
int cmd_bench(std::vector<std::string> args);
int cmd_report(std::vector<std::string> args);

}  // namespace slog::cli
