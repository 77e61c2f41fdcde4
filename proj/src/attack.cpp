#include "osidh/attack.hpp"

#include <algorithm>

#include "osidh/error.hpp"

namespace osidh {

namespace {

struct Representation {
    std::optional<std::vector<i64>> exponents;
    i64 bound = 0;
};

// Bound r first, doubling up to 4r.
Representation represent(const OrderClass &cls, const PublicParams &P)
{
    i64 start = std::max<i64>(P.r, 1);
    Representation out;
    for (i64 bound = start; bound <= 4 * start; bound *= 2) {
        out.bound = bound;
        if (auto e = smooth_representative(cls, P.primes, bound)) {
            out.exponents = std::move(e);
            return out;
        }
    }
    return out;
}

void insert_unique(std::vector<OrderClass> &xs, const OrderClass &x)
{
    if (std::find(xs.begin(), xs.end(), x) == xs.end())
        xs.push_back(x);
}

}  // namespace

AttackTranscript recover_naive(const PublicParams &P, const ModularChain &E, const ModularChain &F)
{
    const auto &mp = *P.mp;
    for (const auto *c : {&E, &F}) {
        if (c->ell != P.ell || c->length() != P.n)
            fail(ErrorKind::InvariantViolation, "attack input chain has the wrong degree or length");
        validate_chain(mp, *c, P.j0());
    }
    auto order = P.order();
    auto primes = P.prime_list();

    AttackTranscript out;
    std::vector<OrderClass> current{OrderClass::identity(order, 0)};
    std::vector<i64> last_exponents(primes.size(), 0);

    for (int depth = 1; depth <= P.n; ++depth) {
        AttackLevel level;
        level.depth = depth;
        if (class_number(order, depth) == 1) {
            level.skipped = true;
            level.survivors = {OrderClass::identity(order, depth)};
            out.levels.push_back(std::move(level));
            current = out.levels.back().survivors;
            continue;
        }

        if (depth == 1 || class_number(order, depth - 1) == 1) {
            level.tested = class_enumerate(order, depth);
        } else {
            auto g = kernel_generator(order, depth);
            for (const auto &c : current) {
                auto lifted = c.lift(depth);
                auto step = OrderClass::identity(order, depth);
                for (u64 k = 0; k < g.order(); ++k) {
                    insert_unique(level.tested, lifted * step);
                    step = step * g;
                }
            }
        }

        auto E_prefix = E.prefix(depth), F_prefix = F.prefix(depth);
        std::vector<std::vector<i64>> survivor_exponents;
        for (const auto &cand : level.tested) {
            auto rep = represent(cand, P);
            level.bound = std::max(level.bound, rep.bound);
            if (!rep.exponents) {
                level.unrepresented.push_back(cand);
                continue;
            }
            ++out.act_calls;
            try {
                if (act_vector(mp, E_prefix, primes, *rep.exponents, P.table) == F_prefix) {
                    level.survivors.push_back(cand);
                    survivor_exponents.push_back(*rep.exponents);
                }
            } catch (const Error &e) {
                // A wrong class may wander into an ambiguous ladder; it just fails to match.
                if (e.kind() != ErrorKind::Ambiguous && e.kind() != ErrorKind::Inconsistent)
                    throw;
            }
        }

        if (level.survivors.empty()) {
            bool stuck = !level.unrepresented.empty();
            std::string msg = "no candidate class matches the chains at depth " + std::to_string(depth);
            out.levels.push_back(std::move(level));
            fail(stuck ? ErrorKind::SmoothSearchExhausted : ErrorKind::NoCandidateSurvives,
                 stuck ? msg + " (some lifts have no smooth representative up to 4r)" : msg);
        }
        current = level.survivors;
        last_exponents = survivor_exponents.front();
        out.levels.push_back(std::move(level));
    }

    out.recovered = current.front();
    out.alternatives.assign(current.begin() + 1, current.end());
    out.exponents = last_exponents;
    return out;
}

}  // namespace osidh
