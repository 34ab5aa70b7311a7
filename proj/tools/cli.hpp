#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace ychan::cli {

/// Exit codes: 0 success or inside, 1 semantic negative (outside, infeasible),
/// 2 usage or parse error.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace ychan::cli
