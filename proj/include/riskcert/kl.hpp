#pragma once

#include "riskcert/probability.hpp"

namespace riskcert {

/// Binary (Bernoulli) KL divergence
///   kl(q,p) = q log(q/p) + (1-q) log((1-q)/(1-p))
/// with the conventions 0*log(0) = 0 and kl(q,p) = +infinity when
/// p is 0 or 1 while q differs from it. Always >= 0, zero iff q == p.
/// Evaluated through log1p so that both terms stay accurate near the
/// endpoints and near q == p.
double kl(Probability q, Probability p) noexcept;

/// One-sided variant: kl(q,p) for q <= p, zero otherwise.
/// Non-increasing in q for fixed p.
double kl_plus(Probability q, Probability p) noexcept;

/// Probabilities above this are indistinguishable from 1 for certification
/// purposes: kl_inverse_upper reports 1 instead of a value in
/// (kInversionCeiling, 1). Below the ceiling the inverse is resolved to the
/// last floating-point ulp, which keeps the round-trip defect
/// kl(q, kl_inverse_upper(q,c)) - c under ~2e-10 (the defect scales with
/// the kl derivative 1/(1-p), so some cap is needed for any finite
/// precision). Rounding up to 1 is conservative: a reported bound of 1 is
/// vacuous but never invalid.
inline constexpr double kInversionCeiling = 1.0 - 1e-6;

/// Generalized upper inverse of the binary KL divergence:
///   sup{ p in [0,1] : kl(q,p) <= c }
/// resolved by bisection on [q, kInversionCeiling], where kl(q, .) is
/// increasing. The returned value is never below the true supremum
/// (certificates must err upward); when the result is < 1 it satisfies
/// kl(q, result) in (c, c + 2e-10]. Returns q when c == 0, and 1 when
/// q == 1 or when the supremum exceeds the ceiling.
Probability kl_inverse_upper(Probability q, SlackBudget c);

/// min(1, q + sqrt(c/2)): the square-root relaxation of the upper inverse,
/// used as a sanity ceiling. kl_inverse_upper(q,c) <= q + sqrt(c/2) always.
Probability pinsker_relaxation(Probability q, SlackBudget c) noexcept;

} // namespace riskcert
