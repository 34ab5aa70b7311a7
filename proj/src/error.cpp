#include "ychan/error.hpp"

namespace ychan {

std::string_view to_string(Errc code) {
  switch (code) {
    case Errc::invalid_cycle: return "invalid-cycle";
    case Errc::range: return "range";
    case Errc::complexity_guard: return "complexity-guard";
    case Errc::regime: return "regime";
    case Errc::conditioning: return "conditioning";
    case Errc::degenerate_channel: return "degenerate-channel";
    case Errc::integrality: return "integrality";
    case Errc::capacity: return "capacity";
    case Errc::invariant_violation: return "invariant-violation";
    case Errc::plan_consistency: return "plan-consistency";
    case Errc::parse: return "parse";
  }
  return "unknown";
}

Error::Error(Errc code, const std::string& what)
    : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

}  // namespace ychan
