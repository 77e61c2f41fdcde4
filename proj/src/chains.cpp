#include "osidh/chains.hpp"

#include <algorithm>
#include <random>

#include "osidh/ec.hpp"
#include "osidh/error.hpp"

namespace osidh {

ModularChain ModularChain::prefix(int depth) const
{
    if (depth < 0 || depth > length())
        fail(ErrorKind::InvalidArgument, "prefix depth out of range");
    return {ell, std::vector<Fp2>(j.begin(), j.begin() + depth + 1)};
}

std::vector<Fp2> children(const ModularPolys &mp, const Fp2 &j_cur, const std::optional<Fp2> &j_prev, u64 ell)
{
    Poly f = mp.instantiate(static_cast<int>(ell), j_cur).poly;
    if (j_prev) {
        auto [q, r] = divrem(f, Poly::linear(*j_prev));
        if (!r.is_zero())
            fail(ErrorKind::ParentNotAdjacent, "j = " + j_prev->to_string() + " is not " + std::to_string(ell) +
                                                   "-adjacent to " + j_cur.to_string());
        f = std::move(q);
    }
    return roots_in_fp2(f);
}

Fp2 base_j(i64 disc, const Field *field)
{
    return base_curve(disc, field).j_invariant();
}

ModularChain generate_chain(const ModularPolys &mp, u64 ell, i64 disc, int n, u64 seed)
{
    OrderParams::make(disc, ell);  // l must be inert
    std::mt19937_64 rng(seed);
    ModularChain c{ell, {base_j(disc, mp.field())}};
    for (int i = 0; i < n; ++i) {
        std::optional<Fp2> prev;
        if (i > 0)
            prev = c.j[static_cast<size_t>(i) - 1];
        auto kids = children(mp, c.j.back(), prev, ell);
        if (kids.empty())
            fail(ErrorKind::NoRoots, "no F_{p^2} roots above j = " + c.j.back().to_string());
        c.j.push_back(kids[std::uniform_int_distribution<size_t>(0, kids.size() - 1)(rng)]);
    }
    return c;
}

void validate_chain(const ModularPolys &mp, const ModularChain &chain, const Fp2 &j0)
{
    if (chain.j.empty())
        fail(ErrorKind::InvariantViolation, "empty chain");
    if (!(chain.j.front() == j0))
        fail(ErrorKind::InvariantViolation, "chain does not start at the base j-invariant");
    for (size_t i = 0; i + 1 < chain.j.size(); ++i) {
        std::optional<Fp2> prev;
        if (i > 0)
            prev = chain.j[i - 1];
        bool ok;
        try {
            auto kids = children(mp, chain.j[i], prev, chain.ell);
            ok = std::find(kids.begin(), kids.end(), chain.j[i + 1]) != kids.end();
        } catch (const Error &e) {
            if (e.kind() != ErrorKind::ParentNotAdjacent)
                throw;
            ok = false;
        }
        if (!ok)
            fail(ErrorKind::InvariantViolation, "chain link " + std::to_string(i) + " -> " + std::to_string(i + 1) +
                                                    " is not a non-backtracking " + std::to_string(chain.ell) +
                                                    "-isogeny");
    }
}

// ---------------------------------------------------------------- direction table

const PrimeDirections *DirectionTable::find(u64 q) const
{
    for (const auto &d : primes)
        if (d.q == q)
            return &d;
    return nullptr;
}

namespace {

struct Walker {
    int ell;
    bool strict;
    PrimeDirections *out;

    struct Side {
        KernelPoly kernel;
        std::vector<Fp2> image;
    };

    struct Branch {
        ExplicitIsogeny phi;
        Side plus, minus;
    };

    Branch extend(const Curve &E, const KernelPoly &L, const Side &plus, const Side &minus) const
    {
        auto phi = velu(E, L, false);
        auto next = [&](const Side &s) {
            auto K = push_kernel(phi, s.kernel);
            Side t{K, s.image};
            t.image.push_back(velu(phi.codomain, K, false).codomain.j_invariant());
            return t;
        };
        Side p = next(plus), m = next(minus);
        return {std::move(phi), std::move(p), std::move(m)};
    }

    void walk(const Curve &E, const std::optional<KernelPoly> &back, std::vector<Fp2> &js, const Side &plus,
              const Side &minus)
    {
        out->images.emplace(std::pair{js, 1}, plus.image);
        out->images.emplace(std::pair{js, -1}, minus.image);
        if (static_cast<int>(js.size()) > out->depth)
            return;
        // Group kernels by target j; the smallest kernel polynomial represents each
        // target, exactly as explicit_step would choose it.
        std::map<Fp2, std::vector<Branch>> by_target;
        for (const auto &L : ell_kernels(E, ell)) {
            if (back && L == *back)
                continue;
            auto br = extend(E, L, plus, minus);
            by_target[br.phi.codomain.j_invariant()].push_back(std::move(br));
        }
        for (auto &[j, group] : by_target) {
            std::sort(group.begin(), group.end(),
                      [](const Branch &x, const Branch &y) { return x.phi.kernel.poly < y.phi.kernel.poly; });
            const Branch &chosen = group.front();
            js.push_back(j);
            for (size_t k = 1; k < group.size(); ++k) {
                if (group[k].plus.image == chosen.plus.image && group[k].minus.image == chosen.minus.image)
                    continue;
                if (strict)
                    fail(ErrorKind::PrefixCollision, "two oriented prefixes share a j-tuple ending at " + j.to_string() +
                                                         " (q = " + std::to_string(out->q) + "); choose a larger p");
                if (out->collisions.empty() || out->collisions.back() != js)
                    out->collisions.push_back(js);
            }
            walk(chosen.phi.codomain, dual_kernel(chosen.phi), js, chosen.plus, chosen.minus);
            js.pop_back();
        }
    }
};

}  // namespace

DirectionTable build_direction_table(const ModularPolys &mp, const OrderParams &params,
                                     const std::vector<SplitPrimeIdeal> &primes, bool strict)
{
    DirectionTable table;
    table.ell = params.ell;
    Curve E0 = base_curve(params.disc, mp.field());
    Fp2 j0 = E0.j_invariant();
    for (const auto &I : primes) {
        PrimeDirections dir;
        dir.q = I.q;
        dir.depth = min_separation_depth(params, I);
        Walker w{static_cast<int>(params.ell), strict, &dir};
        Walker::Side plus{cm_eigenspace_kernel(E0, params.disc, I.q, I.lambda), {j0}};
        Walker::Side minus{cm_eigenspace_kernel(E0, params.disc, I.q, I.lambda_bar), {j0}};
        std::vector<Fp2> js{j0};
        w.walk(E0, std::nullopt, js, plus, minus);
        table.primes.push_back(std::move(dir));
    }
    return table;
}

bool is_level_ladder(const ModularPolys &mp, const ModularChain &parent, const ModularChain &child, u64 q)
{
    if (parent.j.size() != child.j.size())
        return false;
    for (size_t i = 0; i < parent.j.size(); ++i)
        if (!mp.eval_pair(static_cast<int>(q), parent.j[i], child.j[i]).is_zero())
            return false;
    return true;
}

void validate_table(const ModularPolys &mp, const DirectionTable &table, const Fp2 &j0)
{
    for (const auto &dir : table.primes) {
        if (dir.depth < 0)
            fail(ErrorKind::InvariantViolation, "negative table depth");
        for (const auto &[key, image] : dir.images) {
            const auto &[js, sign] = key;
            if ((sign != 1 && sign != -1) || js.empty() || static_cast<int>(js.size()) > dir.depth + 1)
                fail(ErrorKind::InvariantViolation, "malformed direction-table key for q = " + std::to_string(dir.q));
            ModularChain src{table.ell, js}, dst{table.ell, image};
            validate_chain(mp, src, j0);
            validate_chain(mp, dst, j0);
            if (!is_level_ladder(mp, src, dst, dir.q))
                fail(ErrorKind::InvariantViolation, "direction-table entry is not a q-ladder for q = " +
                                                        std::to_string(dir.q));
        }
    }
}

// ---------------------------------------------------------------- ladders

std::vector<Fp2> ladder_candidates(const ModularPolys &mp, const Fp2 &j_child_prev, const Fp2 &j_parent_next, u64 ell,
                                   u64 q)
{
    Poly a = mp.instantiate(static_cast<int>(ell), j_child_prev).poly;
    Poly b = mp.instantiate(static_cast<int>(q), j_parent_next).poly;
    Poly g = gcd_monic(a, b);
    if (g.degree() <= 0)
        return {};
    return distinct_roots(g);
}

Fp2 ladder_step(const ModularPolys &mp, const Fp2 &j_child_prev, const Fp2 &j_parent_next, u64 ell, u64 q)
{
    auto roots = ladder_candidates(mp, j_child_prev, j_parent_next, ell, q);
    if (roots.empty())
        fail(ErrorKind::Inconsistent, "no common root of Phi_" + std::to_string(ell) + "(" + j_child_prev.to_string() +
                                          ", Y) and Phi_" + std::to_string(q) + "(" + j_parent_next.to_string() + ", Y)");
    if (roots.size() > 1)
        fail(ErrorKind::Ambiguous, std::to_string(roots.size()) + " common roots of Phi_" + std::to_string(ell) + "(" +
                                       j_child_prev.to_string() + ", Y) and Phi_" + std::to_string(q) + "(" +
                                       j_parent_next.to_string() + ", Y)");
    return roots.front();
}

ModularChain act_prime(const ModularPolys &mp, const ModularChain &chain, u64 q, int sign, const DirectionTable &table)
{
    const PrimeDirections *dir = table.find(q);
    if (!dir)
        fail(ErrorKind::PrefixMissing, "direction table has no entries for q = " + std::to_string(q));
    int n = chain.length();
    int shallow = std::min(n, dir->depth);
    std::vector<Fp2> head(chain.j.begin(), chain.j.begin() + shallow + 1);
    auto it = dir->images.find({head, sign > 0 ? 1 : -1});
    if (it == dir->images.end())
        fail(ErrorKind::PrefixMissing, "chain prefix not in the direction table for q = " + std::to_string(q));
    ModularChain out{chain.ell, it->second};
    for (int i = shallow; i < n; ++i)
        out.j.push_back(ladder_step(mp, out.j.back(), chain.j[static_cast<size_t>(i) + 1], chain.ell, q));
    return out;
}

ModularChain act_vector(const ModularPolys &mp, const ModularChain &chain, const std::vector<u64> &primes,
                        const std::vector<i64> &exponents, const DirectionTable &table)
{
    if (primes.size() != exponents.size())
        fail(ErrorKind::InvalidArgument, "exponent vector length differs from prime count");
    ModularChain cur = chain;
    for (size_t i = 0; i < primes.size(); ++i) {
        int sign = exponents[i] < 0 ? -1 : 1;
        for (i64 k = 0; k < std::abs(exponents[i]); ++k)
            cur = act_prime(mp, cur, primes[i], sign, table);
    }
    return cur;
}

}  // namespace osidh
