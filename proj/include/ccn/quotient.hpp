#pragma once

#include <cstddef>
#include <vector>

#include "ccn/admissible.hpp"
#include "ccn/colouring.hpp"
#include "ccn/network.hpp"

namespace ccn {

/// Quasi-quotient G^R for a colouring and a choice R of one node per colour.
/// Node k of the quotient is reps[k]; it keeps that node's id and type and
/// receives I(reps[k]) with every tail t replaced by [t].
struct QuasiQuotient {
    Network net;
    Colouring colouring;
    std::vector<std::size_t> reps;     ///< quotient node -> G node, in colour order
    std::vector<std::size_t> bracket;  ///< G node -> quotient node of its colour
};

/// reps lists G node indices, one per colour in any order. Throws if a colour
/// is missing or repeated.
[[nodiscard]] QuasiQuotient quasi_quotient(const Network& net, const Colouring& col,
                                           const std::vector<std::size_t>& reps);

/// Quotient with the smallest node of each colour as representative.
[[nodiscard]] QuasiQuotient quasi_quotient(const Network& net, const Colouring& col);

/// Quotient-level system f^R: representative components with bracketed tails.
[[nodiscard]] AdmissibleSystem restrict_system(const AdmissibleSystem& sys, const QuasiQuotient& qq);

/// G-admissible lift of a quotient-level system: classes meeting R reuse the
/// representative component, all others are zero.
[[nodiscard]] AdmissibleSystem lift_system(const AdmissibleSystem& qsys, const QuasiQuotient& qq, const Network& net);

/// Largest mismatch |f_c(x_[c], x_[T(c)]) - f_[c](x_[c], x_[T([c])])| over c not
/// in R, after projecting each state onto the polydiagonal of the colouring.
struct ConstraintResidual {
    double max = 0.0;
    std::vector<double> per_node;  ///< zero for representatives
};

[[nodiscard]] ConstraintResidual constraint_residual(const AdmissibleSystem& sys, const QuasiQuotient& qq,
                                                     const std::vector<std::vector<double>>& states);

/// Two decoupled copies of a network; copy-2 ids are shifted by the largest id.
[[nodiscard]] Network double_network(const Network& net);

/// The same admissible field on both copies of the doubled network.
[[nodiscard]] AdmissibleSystem double_system(const AdmissibleSystem& sys);

/// Component f_K of the base system recovered from a doubled-network field.
[[nodiscard]] AdmissibleSystem undouble_system(const AdmissibleSystem& dsys, const AdmissibleSystem& base);

/// Transversal search: quasi-quotients with a single maximal transitive component.
struct TransversalSearch {
    std::vector<std::vector<std::size_t>> good;
    std::size_t examined = 0;
    bool truncated = false;
};

[[nodiscard]] TransversalSearch good_transversals(const Network& net, const Colouring& col, std::size_t cap = 4096);

/// Orthogonal projection of a state onto the polydiagonal of a colouring.
[[nodiscard]] std::vector<double> project_polydiagonal(const AdmissibleSystem& sys, const Colouring& col,
                                                       const std::vector<double>& x);

}  // namespace ccn
