#ifndef CAUSALPROBE_EVENTS_HPP
#define CAUSALPROBE_EVENTS_HPP

#include <optional>
#include <string>

#include "causalprobe/scm.hpp"

namespace causalprobe {

// An event is a variable taking a value (discrete domains) or crossing a
// threshold (real domains).
struct Event {
  enum class Kind { Value, Threshold };
  enum class Rel { Lt, Le, Gt, Ge };

  std::string variable;
  Kind kind = Kind::Value;
  Value value;          // Kind::Value
  Rel rel = Rel::Ge;    // Kind::Threshold
  double bound = 0.0;   // Kind::Threshold

  static Event equals(std::string variable, Value v);
  static Event threshold(std::string variable, Rel rel, double bound);

  // Whether the event obtains in a world. Value events on real variables
  // hold within absolute tolerance 1e-9.
  bool holds(const Assignment& world) const;

  // Numeric reading of the event's variable in a world: bool -> 0/1,
  // real -> value, label -> indicator of the event's own label.
  double numeric(const Assignment& world) const;

  std::string describe() const;
};

// A cause event plus the "had not occurred" alternate. If the alternate
// is absent it defaults by domain: negation for booleans, 0.0 (the zero
// ablation) for reals; finite-set causes require an explicit alternate.
struct CauseSpec {
  Event actual;
  std::optional<Value> alternate;
};

// Resolve the alternate value of a cause against a graph's domains.
Value resolve_alternate(const CauseSpec& cause, const CausalGraph& graph);

}  // namespace causalprobe

#endif
