#include "riskcert/kl.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace riskcert {

namespace {

// Core on raw doubles; callers guarantee q, p in [0,1].
double kl_raw(double q, double p) noexcept {
    if (q == p) {
        return 0.0;
    }
    if (p <= 0.0 || p >= 1.0) {
        return std::numeric_limits<double>::infinity();
    }
    // q*log(q/p) as q*log1p((q-p)/p); the q==0 / q==1 guards implement the
    // 0*log(0) = 0 convention without producing 0 * inf.
    const double t1 = (q == 0.0) ? 0.0 : q * std::log1p((q - p) / p);
    const double t2 = (q == 1.0) ? 0.0 : (1.0 - q) * std::log1p((p - q) / (1.0 - p));
    return std::max(0.0, t1 + t2);
}

} // namespace

double kl(Probability q, Probability p) noexcept {
    return kl_raw(q.value(), p.value());
}

double kl_plus(Probability q, Probability p) noexcept {
    return q.value() <= p.value() ? kl_raw(q.value(), p.value()) : 0.0;
}

Probability kl_inverse_upper(Probability q_in, SlackBudget budget) {
    const double q = q_in.value();
    const double c = budget.nats();
    if (c == 0.0) {
        return q_in;  // kl(q,p) <= 0 iff p == q on p >= q
    }
    if (q >= kInversionCeiling) {
        return Probability(1.0);
    }
    if (kl_raw(q, kInversionCeiling) <= c) {
        return Probability(1.0);
    }

    // Bracket invariant: kl(q,lo) <= c < kl(q,hi). Bisect until the bracket
    // collapses to adjacent doubles, then report the upper endpoint so the
    // result never under-covers. std::midpoint returns an endpoint exactly
    // when no double lies strictly between them.
    double lo = q;
    double hi = kInversionCeiling;
    for (int iter = 0; iter < 200; ++iter) {
        const double mid = std::midpoint(lo, hi);
        if (mid <= lo || mid >= hi) {
            break;
        }
        if (kl_raw(q, mid) <= c) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    return Probability(hi);
}

Probability pinsker_relaxation(Probability q, SlackBudget c) noexcept {
    return Probability(std::min(1.0, q.value() + std::sqrt(c.nats() / 2.0)));
}

} // namespace riskcert
