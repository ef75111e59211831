#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace optocorr::cli {

enum ExitCode : int { ok = 0, config_error = 2, degenerate_data = 3, io_error = 4, internal_error = 1 };

// Environment variable naming the default output root.
inline constexpr const char* kOutputRootEnv = "OPTOCORR_OUTPUT_ROOT";

// Entry point shared by the executable and the tests. args excludes argv[0].
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace optocorr::cli
