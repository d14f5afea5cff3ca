#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>

#include "spinel/core.hpp"

namespace spinel {

class StepLimitExceeded : public std::runtime_error {
public:
  explicit StepLimitExceeded(std::uint64_t limit)
      : std::runtime_error("step limit exceeded (" + std::to_string(limit) + " steps)"),
        limit(limit) {}

  std::uint64_t limit;
};

// Optional fuel for reduction; the default (no budget) never limits. Each
// beta or delta step spends one unit.
class StepBudget {
public:
  explicit StepBudget(std::uint64_t maxSteps) : remaining_(maxSteps), limit_(maxSteps) {}

  void spend() {
    if (remaining_ == 0) throw StepLimitExceeded(limit_);
    --remaining_;
  }

private:
  std::uint64_t remaining_;
  std::uint64_t limit_;
};

// A primitive reduction rule; defined only on canonical numeral spines.
struct PrimRule {
  std::string_view ruleId;
  std::size_t arity;
  std::uint64_t (*step)(std::span<const std::uint64_t>);
};

/// Known rules: natPlus, natMax. Unknown rule ids mean the primitive never
/// reduces (canonical constructors and opaque/axiom-style functions).
const PrimRule* findPrimRule(std::string_view ruleId);

/// suc applied n times to zero.
TermPtr numeralTerm(std::uint64_t n);

/// Reads back a canonical numeral; nullopt for anything else.
std::optional<std::uint64_t> numeralValue(const TermPtr& term);

/// One delta step of an exactly-applied call: defined bodies unfold
/// unconditionally, primitives step only when the (normalized) arguments are
/// canonical numerals. nullopt means the call is stuck. Throws
/// std::logic_error if the term is not a FnCall or its spine length does not
/// match the declared arity — that signals a corrupted core term.
std::optional<TermPtr> deltaStep(const TermPtr& call, const SignatureTable& sigs,
                                 StepBudget* budget = nullptr);

/// Weak head normal form: the root is neither a beta redex nor a reducible
/// call. Guaranteed to terminate only on well-typed terms.
TermPtr whnf(TermPtr term, const SignatureTable& sigs, StepBudget* budget = nullptr);

/// Full beta/delta normal form; no eta contraction.
TermPtr normalize(const TermPtr& term, const SignatureTable& sigs, StepBudget* budget = nullptr);

/// Beta-eta-delta conversion: whnf both sides, compare structurally, eta-
/// expand when exactly one side is a lambda.
bool convertible(const TermPtr& a, const TermPtr& b, const SignatureTable& sigs);

}  // namespace spinel
