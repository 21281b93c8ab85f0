#pragma once

#include <random>
#include <string>
#include <vector>

#include "sllam/parser.hpp"
#include "sllam/syntax.hpp"

namespace sllam::testing {

inline Term P(const std::string& s) { return parse_term(s); }
inline Term PX(const std::string& s) {
  ParseOptions o;
  o.extensions = true;
  return parse_term(s, o);
}

/// Small random terms over a fixed name pool; not necessarily well typed.
class RawGen {
 public:
  explicit RawGen(unsigned seed) : rng_(seed) {}

  Term term(int depth) {
    int pick = depth <= 0 ? roll(5) : roll(10);
    switch (pick) {
      case 0: return numeral(static_cast<std::uint64_t>(roll(4)));
      case 1: return roll(2) ? Term::succ() : Term::pred();
      case 2: return Term::var(ground_[roll(3)], VarKind::Ground);
      case 3: return Term::var(higher_[roll(2)], VarKind::Higher);
      case 4: return Term::var(stable_[roll(2)], VarKind::Stable);
      case 5:
      case 6: return Term::app(term(depth - 1), term(depth - 1));
      case 7:
        if (roll(2)) return Term::lam(ground_[roll(3)], Type::ground(), term(depth - 1));
        return Term::lam(higher_[roll(2)], nat_to_nat(), term(depth - 1));
      case 8: return Term::lif(term(depth - 1), term(depth - 1), term(depth - 1));
      default: return Term::mu(stable_[roll(2)], Type::ground(), term(depth - 1));
    }
  }

 private:
  int roll(int n) { return std::uniform_int_distribution<int>(0, n - 1)(rng_); }
  std::mt19937 rng_;
  std::vector<std::string> ground_{"x", "y", "z"};
  std::vector<std::string> higher_{"f", "g"};
  std::vector<std::string> stable_{"F", "G"};
};

}  // namespace sllam::testing
