#pragma once

#include <functional>

#include "sparkdet/detcheck.hpp"

namespace sparkdet::detail {

/// Every distinct execution of the subject over the multiset of xs; `visit`
/// returns true to stop early. Returns true when stopped.
bool for_each_execution(const Subject& s, const std::vector<Value>& xs,
                        const std::function<bool(const Execution&)>& visit);

/// foldl / reducel reference (per key for by-key subjects).
Value reference(const Subject& s, const std::vector<Value>& xs);

/// Whether the multiset of xs is deterministic: every execution and the
/// reference of every ordering produce the same value.
bool multiset_deterministic(const Subject& s, const std::vector<Value>& xs, std::size_t& executions);

/// Oracle verdict without the operator-error guard.
Verdict oracle_unguarded(const Subject& s, const std::vector<Value>& xs, const CheckOptions& opts);

bool allows_empty_blocks(Combinator c);
bool uses_plans(Combinator c);

}  // namespace sparkdet::detail
