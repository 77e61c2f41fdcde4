#pragma once

#include <string>
#include <string_view>

#include <json.hpp>

#include "osidh/attack.hpp"
#include "osidh/protocol.hpp"

namespace osidh::wire {

using Json = nlohmann::json;

inline constexpr int kVersion = 1;

/// Canonical text: sorted keys, compact, big integers and field elements as decimal strings.
std::string dump(const Json &doc);
/// Malformed on invalid JSON text.
Json parse(std::string_view text);

Json encode(const PublicParams &params);
Json encode(const ModularChain &chain);
Json encode(const SecretKey &sk);
Json encode(const PublicData &data);
Json encode(const SharedSecret &secret);
Json encode(const OrderClass &cls);
Json encode_table(const DirectionTable &table);
Json encode(const AttackTranscript &transcript);

// Decoders raise Malformed (message starts with the JSON pointer of the bad
// value) for shape errors and InvariantViolation for semantic ones.
PublicParams decode_params(const Json &doc, const ModPolyDB &db);
/// Chains must start at the base j-invariant and have the parameter length.
ModularChain decode_chain(const Json &doc, const PublicParams &params);
SecretKey decode_key(const Json &doc, const PublicParams &params);
PublicData decode_public_data(const Json &doc, const PublicParams &params);
SharedSecret decode_secret(const Json &doc, const PublicParams &params);
OrderClass decode_class(const Json &doc);
DirectionTable decode_table(const Json &doc, const Field *field, const std::string &where = "");

}  // namespace osidh::wire
