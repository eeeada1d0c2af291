#include "causalprobe/events.hpp"

#include <cmath>

#include "causalprobe/errors.hpp"

namespace causalprobe {

Event Event::equals(std::string variable, Value v) {
  Event e;
  e.variable = std::move(variable);
  e.kind = Kind::Value;
  e.value = std::move(v);
  return e;
}

Event Event::threshold(std::string variable, Rel rel, double bound) {
  if (!std::isfinite(bound))
    throw ValidationError("event threshold bound must be finite");
  Event e;
  e.variable = std::move(variable);
  e.kind = Kind::Threshold;
  e.rel = rel;
  e.bound = bound;
  return e;
}

bool Event::holds(const Assignment& world) const {
  const Value& v = world.at(variable);
  if (kind == Kind::Threshold) {
    double x = value_as_real(v);
    switch (rel) {
      case Rel::Lt: return x < bound;
      case Rel::Le: return x <= bound;
      case Rel::Gt: return x > bound;
      case Rel::Ge: return x >= bound;
    }
    return false;
  }
  if (is_real(v) && is_real(value))
    return std::abs(std::get<double>(v) - std::get<double>(value)) <= 1e-9;
  return value_equal(v, value);
}

double Event::numeric(const Assignment& world) const {
  const Value& v = world.at(variable);
  if (is_label(v)) {
    if (kind == Kind::Value && is_label(value))
      return value_equal(v, value) ? 1.0 : 0.0;
    throw EvalError("no numeric reading for label variable '" + variable +
                    "' without a value event");
  }
  return value_as_real(v);
}

std::string Event::describe() const {
  if (kind == Kind::Value) return variable + " = " + format_value(value);
  const char* r = rel == Rel::Lt   ? " < "
                  : rel == Rel::Le ? " <= "
                  : rel == Rel::Gt ? " > "
                                   : " >= ";
  return variable + r + format_real(bound);
}

Value resolve_alternate(const CauseSpec& cause, const CausalGraph& graph) {
  const Variable& var = graph.variable(cause.actual.variable);
  if (cause.alternate.has_value()) {
    if (!var.domain.contains(*cause.alternate))
      throw ValidationError("alternate value " +
                            format_value(*cause.alternate) + " for '" +
                            var.name + "' is outside its domain");
    return *cause.alternate;
  }
  switch (var.domain.kind()) {
    case Domain::Kind::Bool: {
      if (cause.actual.kind != Event::Kind::Value ||
          !is_bool(cause.actual.value))
        throw ValidationError("boolean cause '" + var.name +
                              "' needs a boolean value event");
      return Value(!std::get<bool>(cause.actual.value));
    }
    case Domain::Kind::Finite:
      throw ValidationError("finite-set cause '" + var.name +
                            "' requires an explicit alternate value");
    case Domain::Kind::Real:
      // Default "had not occurred" for reals is the zero ablation.
      return Value(0.0);
  }
  throw ValidationError("unreachable");
}

}  // namespace causalprobe
