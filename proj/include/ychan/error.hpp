#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace ychan {

enum class Errc {
  invalid_cycle,
  range,
  complexity_guard,
  regime,
  conditioning,
  degenerate_channel,
  integrality,
  capacity,
  invariant_violation,
  plan_consistency,
  parse,
};

std::string_view to_string(Errc code);

/// Single exception type for the library; callers switch on code().
class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what);

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

}  // namespace ychan
