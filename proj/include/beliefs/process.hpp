#pragma once

#include <functional>
#include <string>
#include <string_view>
#include <vector>

namespace beliefs {

struct ProcessResult {
    int exit_code = -1;
    std::string output;
};

/// Runs argv[0] (looked up on PATH) without a shell and captures stdout.
/// stderr is discarded. Throws Error if the process cannot be started.
ProcessResult run_process(const std::vector<std::string>& argv);

/// Streaming variant: stdout is handed to `sink` in chunks as it arrives.
/// Returns the exit code.
int run_process_streaming(const std::vector<std::string>& argv,
                          const std::function<void(std::string_view)>& sink);

}  // namespace beliefs
