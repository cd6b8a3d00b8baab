#include "riskcert/estimators.hpp"

#include <cmath>
#include <string>

#include "riskcert/kl.hpp"
#include "riskcert/rng.hpp"
#include "riskcert/summation.hpp"

namespace riskcert {

std::string_view method_name(Method m) {
    switch (m) {
        case Method::classic: return "classic";
        case Method::fresh: return "fresh";
        case Method::testset: return "testset";
        case Method::subsampled: return "subsampled";
    }
    throw InternalError("unknown method enum value");
}

Method method_from_name(std::string_view name) {
    if (name == "classic") return Method::classic;
    if (name == "fresh") return Method::fresh;
    if (name == "testset") return Method::testset;
    if (name == "subsampled") return Method::subsampled;
    throw ValidationError("unknown estimator method: " + std::string(name));
}

namespace {

void check_common(std::uint64_t n, double delta, std::uint64_t m) {
    if (n == 0) {
        throw ValidationError("sample count must be positive");
    }
    if (!(delta > 0.0 && delta < 1.0)) {
        throw ValidationError("delta must lie in (0,1), got " + std::to_string(delta));
    }
    if (m == 0) {
        throw ValidationError("dataset is empty");
    }
}

Certificate finish(Method method, double mean, std::uint64_t summands, double delta,
                   std::uint64_t n_passes, std::uint64_t m, std::uint64_t seed,
                   std::uint64_t data_digest) {
    Certificate cert;
    cert.method = method;
    cert.empirical_mean = Probability(mean);
    cert.summands = summands;
    cert.delta = delta;
    cert.slack = SlackBudget::from_confidence(delta, summands);
    cert.bound = kl_inverse_upper(cert.empirical_mean, cert.slack);
    cert.n_passes = n_passes;
    cert.m = m;
    cert.seed = seed;
    cert.data_digest = data_digest;
    return cert;
}

// Mean of the n*m losses under the shared (pass, example) index discipline.
// Draw index for (pass i, example j), both 0-based here, is t = i*m + j;
// for the classic estimator one draw (index i) covers the whole pass. The
// summands are accumulated in fixed t order with compensated summation so
// the result does not depend on evaluation order.
double pass_mean(const PosteriorSampler& sampler, const DatasetHandle& data,
                 const LossOracle& loss, std::uint64_t n, bool fresh_draw_per_example) {
    const std::uint64_t m = data.size();
    NeumaierSum sum;
    for (std::uint64_t i = 0; i < n; ++i) {
        Hypothesis h = fresh_draw_per_example ? Hypothesis{} : sampler.draw(i);
        for (std::uint64_t j = 0; j < m; ++j) {
            if (fresh_draw_per_example) {
                h = sampler.draw(i * m + j);
            }
            sum.add(loss.loss(h, data.example(j)).value());
        }
    }
    return sum.value() / (static_cast<double>(n) * static_cast<double>(m));
}

} // namespace

Certificate estimate_classic(const PosteriorSampler& sampler, const DatasetHandle& data,
                             const LossOracle& loss, std::uint64_t n, double delta) {
    check_common(n, delta, data.size());
    const double mean = pass_mean(sampler, data, loss, n, /*fresh_draw_per_example=*/false);
    return finish(Method::classic, mean, /*summands=*/n, delta, /*n_passes=*/n, data.size(),
                  sampler.master_seed(), data.digest());
}

Certificate estimate_fresh(const PosteriorSampler& sampler, const DatasetHandle& data,
                           const LossOracle& loss, std::uint64_t n, double delta) {
    check_common(n, delta, data.size());
    const double mean = pass_mean(sampler, data, loss, n, /*fresh_draw_per_example=*/true);
    return finish(Method::fresh, mean, /*summands=*/n * data.size(), delta, /*n_passes=*/n,
                  data.size(), sampler.master_seed(), data.digest());
}

Certificate estimate_testset(const PosteriorSampler& sampler, const DatasetHandle& stream,
                             const LossOracle& loss, std::uint64_t n, double delta,
                             bool holdout_attested) {
    check_common(n, delta, stream.size());
    const double mean = pass_mean(sampler, stream, loss, n, /*fresh_draw_per_example=*/true);
    Certificate cert = finish(Method::testset, mean, /*summands=*/n * stream.size(), delta,
                              /*n_passes=*/n, stream.size(), sampler.master_seed(),
                              stream.digest());
    cert.holdout_attested = holdout_attested;
    return cert;
}

Certificate estimate_subsampled(const PosteriorSampler& sampler, const DatasetHandle& data,
                                const LossOracle& loss, std::uint64_t summands, double delta,
                                std::uint64_t subsample_seed) {
    check_common(summands, delta, data.size());
    const std::uint64_t m = data.size();
    NeumaierSum sum;
    for (std::uint64_t t = 0; t < summands; ++t) {
        // Uniform example index with replacement, from its own counter stream.
        CounterRng pick(derive_stream(subsample_seed, t));
        const std::uint64_t j = pick.uniform_below(m);
        const Hypothesis h = sampler.draw(t);
        sum.add(loss.loss(h, data.example(j)).value());
    }
    const double mean = sum.value() / static_cast<double>(summands);
    Certificate cert = finish(Method::subsampled, mean, summands, delta, /*n_passes=*/0, m,
                              sampler.master_seed(), data.digest());
    cert.subsample_seed = subsample_seed;
    return cert;
}

Probability recompute_bound(const Certificate& cert) {
    const SlackBudget expected_slack = SlackBudget::from_confidence(cert.delta, cert.summands);
    // Tolerate one ulp of drift in the stored slack (it is derived data);
    // the bound itself must match bit-exactly.
    const double a = expected_slack.nats();
    const double b = cert.slack.nats();
    if (std::abs(a - b) > std::ldexp(std::abs(a), -50)) {
        throw InternalError("certificate slack is inconsistent with (delta, T)");
    }
    const Probability recomputed = kl_inverse_upper(cert.empirical_mean, cert.slack);
    if (recomputed != cert.bound) {
        throw InternalError("certificate bound mismatch: stored " +
                            std::to_string(cert.bound.value()) + ", recomputed " +
                            std::to_string(recomputed.value()));
    }
    return recomputed;
}

Probability rescale_loss(double value, double lo, double hi) {
    if (!(lo < hi) || !std::isfinite(lo) || !std::isfinite(hi)) {
        throw ValidationError("rescale range must satisfy lo < hi and be finite");
    }
    if (!(value >= lo && value <= hi)) {
        throw ValidationError("loss " + std::to_string(value) + " outside declared range [" +
                              std::to_string(lo) + ", " + std::to_string(hi) + "]");
    }
    return Probability((value - lo) / (hi - lo));
}

} // namespace riskcert
