#include "riskcert/tail_lab.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <string>

#include "riskcert/kl.hpp"
#include "riskcert/rng.hpp"
#include "riskcert/summation.hpp"

namespace riskcert {

namespace {

// Largest count k with k/T <= t, i.e. the atoms of the sample mean that the
// event {X <= t} contains. Evaluated in extended precision with an absolute
// guard of 1e-9 on the count scale so that thresholds built as k/T land on
// the intended atom instead of straddling a rounding boundary.
std::int64_t tail_cutoff(double t, std::uint64_t T) {
    const long double scaled =
        static_cast<long double>(t) * static_cast<long double>(T) + 1e-9L;
    const auto k = static_cast<std::int64_t>(std::floor(scaled));
    return std::min<std::int64_t>(k, static_cast<std::int64_t>(T));
}

} // namespace

HeterogeneousBernoulliSpec::HeterogeneousBernoulliSpec(std::vector<Probability> means)
    : means_(std::move(means)) {
    if (means_.empty()) {
        throw ValidationError("Bernoulli spec needs at least one mean");
    }
    NeumaierSum sum;
    for (Probability p : means_) {
        sum.add(p.value());
    }
    const double mean = sum.value() / static_cast<double>(means_.size());
    aggregate_ = Probability(std::clamp(mean, 0.0, 1.0));
}

Probability chernoff_kl_tail_bound(const HeterogeneousBernoulliSpec& spec, Probability t) {
    const Probability p = spec.aggregate_mean();
    if (t.value() > p.value()) {
        throw ValidationError("tail threshold t=" + std::to_string(t.value()) +
                              " exceeds the aggregate mean p=" + std::to_string(p.value()));
    }
    const double exponent = static_cast<double>(spec.size()) * kl(t, p);
    return Probability(std::exp(-exponent));
}

std::vector<double> poisson_binomial_pmf(const HeterogeneousBernoulliSpec& spec) {
    // Iterative convolution: after absorbing p_i, pmf[k] = Pr(count == k).
    std::vector<double> pmf(spec.size() + 1, 0.0);
    pmf[0] = 1.0;
    std::size_t absorbed = 0;
    for (Probability mean : spec.means()) {
        const double p = mean.value();
        ++absorbed;
        for (std::size_t k = absorbed; k-- > 0;) {
            pmf[k + 1] += pmf[k] * p;
            pmf[k] *= (1.0 - p);
        }
    }
    return pmf;
}

Probability exact_lower_tail(const HeterogeneousBernoulliSpec& spec, Probability t) {
    const std::int64_t cutoff = tail_cutoff(t.value(), spec.size());
    if (cutoff < 0) {
        return Probability(0.0);
    }
    const std::vector<double> pmf = poisson_binomial_pmf(spec);
    NeumaierSum sum;
    for (std::int64_t k = 0; k <= cutoff; ++k) {
        sum.add(pmf[static_cast<std::size_t>(k)]);
    }
    return Probability(std::clamp(sum.value(), 0.0, 1.0));
}

Probability exact_lower_tail_enumeration(const HeterogeneousBernoulliSpec& spec, Probability t) {
    const std::uint64_t T = spec.size();
    if (T > 25) {
        throw ValidationError("enumeration oracle limited to T <= 25, got T=" +
                              std::to_string(T));
    }
    const std::int64_t cutoff = tail_cutoff(t.value(), T);
    NeumaierSum tail;
    for (std::uint64_t outcome = 0; outcome < (std::uint64_t{1} << T); ++outcome) {
        const auto count = static_cast<std::int64_t>(std::popcount(outcome));
        if (count > cutoff) {
            continue;
        }
        double prob = 1.0;
        for (std::uint64_t i = 0; i < T; ++i) {
            const double p = spec.means()[i].value();
            prob *= ((outcome >> i) & 1u) ? p : (1.0 - p);
        }
        tail.add(prob);
    }
    return Probability(std::clamp(tail.value(), 0.0, 1.0));
}

std::vector<TailReport> verify_theorem3(const HeterogeneousBernoulliSpec& spec,
                                        const std::vector<Probability>& t_grid) {
    std::vector<TailReport> reports;
    reports.reserve(t_grid.size());
    const std::vector<double> pmf = poisson_binomial_pmf(spec);
    for (Probability t : t_grid) {
        TailReport report;
        report.threshold = t;
        report.bound = chernoff_kl_tail_bound(spec, t);  // rejects t > aggregate mean
        const std::int64_t cutoff = tail_cutoff(t.value(), spec.size());
        NeumaierSum sum;
        for (std::int64_t k = 0; k <= cutoff; ++k) {
            sum.add(pmf[static_cast<std::size_t>(k)]);
        }
        report.exact_tail = Probability(std::clamp(sum.value(), 0.0, 1.0));
        report.satisfied = report.exact_tail.value() <= report.bound.value() + 1e-12;
        reports.push_back(report);
    }
    return reports;
}

CoverageReport coverage_simulation(const HeterogeneousBernoulliSpec& true_means, double delta,
                                   std::uint64_t trials, std::uint64_t seed) {
    if (trials == 0) {
        throw ValidationError("coverage simulation needs at least one trial");
    }
    const std::uint64_t T = true_means.size();
    const double p = true_means.aggregate_mean().value();
    const SlackBudget slack = SlackBudget::from_confidence(delta, T);

    std::uint64_t failures = 0;
    for (std::uint64_t trial = 0; trial < trials; ++trial) {
        CounterRng rng(derive_stream(seed, trial));
        std::uint64_t successes = 0;
        for (Probability mean : true_means.means()) {
            successes += rng.bernoulli(mean.value()) ? 1 : 0;
        }
        const Probability sample_mean(static_cast<double>(successes) / static_cast<double>(T));
        const Probability bound = kl_inverse_upper(sample_mean, slack);
        if (bound.value() < p) {
            ++failures;
        }
    }

    CoverageReport report;
    report.trials = trials;
    report.failures = failures;
    report.delta = delta;
    report.failure_rate = static_cast<double>(failures) / static_cast<double>(trials);
    const double se = std::sqrt(delta * (1.0 - delta) / static_cast<double>(trials));
    report.z_slack = (delta - report.failure_rate) / se;
    report.summands = T;
    report.true_mean = p;
    report.seed = seed;
    return report;
}

BudgetComparison budget_compare(std::uint64_t m, std::uint64_t n_classic, double delta,
                                Probability q) {
    if (m == 0 || n_classic == 0) {
        throw ValidationError("m and n_classic must be positive");
    }
    BudgetComparison cmp;
    cmp.m = m;
    cmp.n_classic = n_classic;
    cmp.delta = delta;
    cmp.q = q;
    cmp.slack_classic = SlackBudget::from_confidence(delta, n_classic).nats();

    // slack_fresh = log(1/delta)/(n_classic*m) = slack_classic/m. Both
    // float routes agree to one ulp; prefer the representative whose stored
    // ratio against slack_classic divides back to m exactly, so the m-fold
    // strengthening survives serialization untouched.
    const auto md = static_cast<double>(m);
    double fresh = cmp.slack_classic / md;
    if (cmp.slack_classic / fresh != md) {
        for (const double cand : {std::nextafter(fresh, 0.0),
                                  std::nextafter(fresh, cmp.slack_classic)}) {
            if (cmp.slack_classic / cand == md) {
                fresh = cand;
                break;
            }
        }
    }
    cmp.slack_fresh_equal_budget = fresh;

    cmp.bound_classic = kl_inverse_upper(q, SlackBudget(cmp.slack_classic));
    cmp.bound_fresh = kl_inverse_upper(q, SlackBudget(cmp.slack_fresh_equal_budget));
    cmp.pass_ratio = md;
    cmp.fresh_passes_equal_guarantee = (n_classic + m - 1) / m;
    return cmp;
}

} // namespace riskcert
