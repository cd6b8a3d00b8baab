#pragma once

#include <cstdint>
#include <vector>

#include "riskcert/probability.hpp"

namespace riskcert {

/// Means of T independent Bernoulli variables X_1..X_T (not necessarily
/// identical). The Bernoulli case is the extremal instance of bounded
/// [0,1]-valued variables for lower-tail bounds, and the one whose tail is
/// exactly computable, which is what makes it useful as a falsifier.
class HeterogeneousBernoulliSpec {
public:
    explicit HeterogeneousBernoulliSpec(std::vector<Probability> means);

    [[nodiscard]] std::uint64_t size() const noexcept { return means_.size(); }
    [[nodiscard]] const std::vector<Probability>& means() const noexcept { return means_; }

    /// (1/T) sum of the means, compensated; clamped into [0,1] against
    /// last-bit rounding (the exact value is always in range).
    [[nodiscard]] Probability aggregate_mean() const noexcept { return aggregate_; }

private:
    std::vector<Probability> means_;
    Probability aggregate_;
};

/// One grid point of the tail-bound check: the exact lower-tail probability
/// of the sample mean against its Chernoff-style bound exp(-T kl(t, p)).
struct TailReport {
    Probability threshold;
    Probability exact_tail;
    Probability bound;
    bool satisfied = false;  // exact_tail <= bound + 1e-12
};

/// Outcome of a coverage simulation: how often the certified upper bound
/// fell below the true aggregate mean. The guarantee is failure_rate <=
/// delta up to binomial noise; z_slack reports the headroom
/// (delta - failure_rate) in binomial standard errors.
struct CoverageReport {
    std::uint64_t trials = 0;
    std::uint64_t failures = 0;
    double delta = 0.0;
    double failure_rate = 0.0;
    double z_slack = 0.0;
    // context for emitted tables
    std::uint64_t summands = 0;
    double true_mean = 0.0;
    std::uint64_t seed = 0;
};

/// Equal-evaluation-budget comparison of the classic and fresh schemes.
/// At a budget of n_classic * m loss evaluations the fresh scheme has m
/// times as many independent summands, so its slack is smaller by exactly
/// a factor of m; equivalently it needs n_classic / m passes to match the
/// classic slack.
struct BudgetComparison {
    std::uint64_t m = 1;
    std::uint64_t n_classic = 1;
    double delta = 0.5;
    Probability q;
    double slack_classic = 0.0;
    double slack_fresh_equal_budget = 0.0;
    Probability bound_classic;
    Probability bound_fresh;
    double pass_ratio = 1.0;  // passes saved at equal slack: exactly m
    std::uint64_t fresh_passes_equal_guarantee = 1;  // ceil(n_classic / m)
};

/// exp(-T kl(t, p)) for the aggregate mean p. Requires t <= p; anything
/// else violates the premise of the bound and is rejected.
Probability chernoff_kl_tail_bound(const HeterogeneousBernoulliSpec& spec, Probability t);

/// Pr(X <= t) for the mean X of the spec's Bernoulli variables, exact up
/// to accumulation error <= T*1e-15, via the O(T^2) Poisson-binomial
/// convolution. No constraint ties t to the aggregate mean here.
Probability exact_lower_tail(const HeterogeneousBernoulliSpec& spec, Probability t);

/// Same quantity by brute-force enumeration of all 2^T outcomes (T <= 25).
/// Kept as an independent route to cross-check the convolution.
Probability exact_lower_tail_enumeration(const HeterogeneousBernoulliSpec& spec, Probability t);

/// Probability mass function of the count sum(X_i), support {0..T}.
std::vector<double> poisson_binomial_pmf(const HeterogeneousBernoulliSpec& spec);

/// Pair exact tail with bound on every grid point (each must satisfy
/// t <= aggregate mean). An unsatisfied report falsifies the implementation.
std::vector<TailReport> verify_theorem3(const HeterogeneousBernoulliSpec& spec,
                                        const std::vector<Probability>& t_grid);

/// Repeatedly draw X_1..X_T, certify the aggregate mean at level delta via
/// the KL inverse, and count how often the certificate fails to cover the
/// true mean. Trial r uses the stream derived from (seed, r).
CoverageReport coverage_simulation(const HeterogeneousBernoulliSpec& true_means, double delta,
                                   std::uint64_t trials, std::uint64_t seed);

/// Slacks and bounds for classic vs fresh at an equal evaluation budget of
/// n_classic * m, evaluated at a common empirical value q.
BudgetComparison budget_compare(std::uint64_t m, std::uint64_t n_classic, double delta,
                                Probability q);

} // namespace riskcert
