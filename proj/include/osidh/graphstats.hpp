#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "osidh/modpoly.hpp"
#include "osidh/quadorder.hpp"

namespace osidh {

struct GraphEdge {
    Fp2 a, b;  // a <= b
    int level = 0;
    int multiplicity = 1;  // as a root of Phi_level(a, Y)
};

struct GraphReport {
    std::vector<Fp2> vertices;  // sorted
    std::vector<GraphEdge> edges;
    /// Connected components under the edges of the primary level.
    std::vector<std::vector<Fp2>> components;
    /// Depth annotations where the structure determines them (floor leaves).
    std::map<Fp2, int> depth;
    int level = 2;
};

/// Number of supersingular j-invariants in characteristic p >= 5.
u64 ss_count_formula(u64 p);

/// j-invariant of the class-number-one CM discriminant disc, reduced into the field.
Fp2 cm_j_invariant(i64 disc, const Field *field);
/// A class-number-one discriminant inert or ramified at p (so its j is supersingular).
i64 supersingular_cm_disc(u64 p);

/// BFS over Phi_ell from the CM point of disc (or a suitable one when none is given).
GraphReport enumerate_ss(const ModularPolys &mp, u64 ell = 2, std::optional<i64> disc = std::nullopt);

/// BFS from start over Phi_ell and the connector levels; with restrict_to_fp only
/// j in F_p are kept. Components are taken over the Phi_ell edges alone.
GraphReport volcano_components(const ModularPolys &mp, u64 ell, const Fp2 &start, bool restrict_to_fp,
                               const std::vector<int> &connectors = {});

/// Throws InvariantViolation at the first edge with Phi_m(a, b) != 0.
void validate_report(const ModularPolys &mp, const GraphReport &report);
std::string to_dot(const GraphReport &report);

struct ForgetfulRow {
    int depth = 0;
    u64 Y = 0;  // distinct end j's of depth-i descending chains
    u64 X = 0;  // cumulative over depths <= i
    double lambda = 0;  // log_p |l^{2i} disc|
    u64 h = 0;
};

/// Needs (l + 1) l^(max_depth - 1) <= 2^20, else TooDeep.
std::vector<ForgetfulRow> forgetful_table(const ModularPolys &mp, const OrderParams &params, int max_depth);
std::string forgetful_csv(const std::vector<ForgetfulRow> &rows);

struct ReproFact {
    std::string name;
    bool pass = false;
    std::string detail;
};

struct ReproReport {
    std::vector<ReproFact> facts;
    bool all_pass() const;
};

/// The p = 71 chain (0, 40, 17, 41, 66) under q and its conjugate.
ReproReport reproduce_71(const ModPolyDB &db, u64 q = 7);
/// The F_353 ordinary 2-cordillera from j = 160, joined through 7- and 13-isogenies.
ReproReport reproduce_353(const ModPolyDB &db, GraphReport *graph = nullptr);

}  // namespace osidh
