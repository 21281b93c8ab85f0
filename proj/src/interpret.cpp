#include "sllam/interpret.hpp"

namespace sllam {

const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::Equal: return "Equal";
    case Verdict::Distinct: return "Distinct";
    case Verdict::Inconclusive: return "Inconclusive";
  }
  return "?";
}

std::string GroundResult::str() const {
  switch (kind) {
    case Kind::Bottom: return "Bottom";
    case Kind::Num: return "Num(" + std::to_string(value) + ")";
    case Kind::Unstable: return "Unstable";
  }
  return "?";
}

bool uses_fix(const Derivation& d) {
  if (d.rule() == Rule::Mu) return true;
  for (const auto& p : d.premises())
    if (uses_fix(*p)) return true;
  return false;
}

}  // namespace sllam
