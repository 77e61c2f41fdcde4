#pragma once

#include <memory>
#include <string>
#include <vector>

#include "osidh/chains.hpp"
#include "osidh/modpoly.hpp"
#include "osidh/quadorder.hpp"

namespace osidh {

struct PublicParams {
    FieldParams field;
    i64 disc = -3;
    u64 ell = 2;
    int n = 0;
    ModularChain chain;
    std::vector<SplitPrimeIdeal> primes;  // increasing q
    i64 r = 0;
    DirectionTable table;
    u64 seed = 0;
    bool allow_collisions = false;
    std::vector<std::string> warnings;

    // Runtime handles, not serialized.
    std::shared_ptr<const Field> F;
    std::shared_ptr<const ModularPolys> mp;

    OrderParams order() const { return OrderParams::make(disc, ell); }
    std::vector<u64> prime_list() const;
    Fp2 j0() const { return chain.j.front(); }
};

struct ParamOptions {
    /// Accept direction tables whose j-tuples carry several orientations.
    bool allow_collisions = false;
};

PublicParams param_gen(const ModPolyDB &db, u64 p, i64 disc, u64 ell, int n, std::vector<u64> primes, i64 r,
                       u64 seed, const ParamOptions &options = {});
/// Rebuilds the runtime handles and checks every invariant of decoded params;
/// the chain and table must equal what the recorded seed regenerates.
void bind_and_validate(PublicParams &params, const ModPolyDB &db);

struct SecretKey {
    std::vector<i64> e;

    friend bool operator==(const SecretKey &, const SecretKey &) = default;
};

struct PublicData {
    Fp2 end;
    std::vector<std::vector<Fp2>> forward;   // per prime: F^(1), ..., F^(r)
    std::vector<std::vector<Fp2>> backward;  // per prime: F^(-1), ..., F^(-r)

    friend bool operator==(const PublicData &, const PublicData &) = default;
};

struct SharedSecret {
    Fp2 j;

    friend bool operator==(const SharedSecret &x, const SharedSecret &y) { return x.j == y.j; }
};

SecretKey keygen(const PublicParams &params, u64 seed);
void validate_key(const PublicParams &params, const SecretKey &sk);

ModularChain naive_public(const PublicParams &params, const SecretKey &sk);
SharedSecret naive_shared(const PublicParams &params, const SecretKey &sk, const ModularChain &other);

PublicData public_data(const PublicParams &params, const SecretKey &sk);
void validate_public_data(const PublicParams &params, const PublicData &data);
SharedSecret derive(const PublicParams &params, const SecretKey &sk, const PublicData &other);

/// End of act_vector(public chain, e): the secret shared by e = e_A + e_B.
SharedSecret direct_secret(const PublicParams &params, const std::vector<i64> &e);

/// One simulated two-party run of the full protocol.
struct ExchangeResult {
    SecretKey alice, bob;
    PublicData alice_msg, bob_msg;
    SharedSecret alice_secret, bob_secret;
    int attempts = 0;  // key pairs tried, including Ambiguous aborts
    std::vector<std::string> aborts;

    bool agreed() const { return alice_secret == bob_secret; }
};

/// Retries with fresh key pairs (up to max_attempts) on Ambiguous.
ExchangeResult run_exchange(const PublicParams &params, u64 seed, int max_attempts = 3);

}  // namespace osidh
