#pragma once

#include <optional>
#include <string>
#include <vector>

#include "osidh/protocol.hpp"

namespace osidh {

struct AttackLevel {
    int depth = 0;  // lifting from depth - 1 to depth
    bool skipped = false;  // h(O_depth) = 1
    std::vector<OrderClass> tested;
    std::vector<OrderClass> survivors;
    /// Lifts with no smooth representative inside the final bound.
    std::vector<OrderClass> unrepresented;
    i64 bound = 0;  // largest exponent bound used at this level
};

struct AttackTranscript {
    std::vector<AttackLevel> levels;
    OrderClass recovered;
    /// Classes acting identically on the full chains, besides the recovered one.
    std::vector<OrderClass> alternatives;
    std::optional<std::vector<i64>> exponents;
    int act_calls = 0;
};

/// Recovers the secret class of a naive public chain F = [a] * E, lifting it
/// one level of the order tower at a time.
AttackTranscript recover_naive(const PublicParams &params, const ModularChain &E, const ModularChain &F);

}  // namespace osidh
