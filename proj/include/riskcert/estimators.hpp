#pragma once

#include <cstdint>
#include <string_view>

#include "riskcert/probability.hpp"

namespace riskcert {

/// Opaque token identifying one dataset example. Stable across passes:
/// the same index always yields the same token.
using ExampleToken = std::uint64_t;

/// Handle to one posterior draw. `index` is the draw counter t; `stream`
/// carries the randomness key derived from (master seed, t) so a loss
/// oracle that needs per-hypothesis randomness can reproduce it without
/// any shared state.
struct Hypothesis {
    std::uint64_t index = 0;
    std::uint64_t stream = 0;
};

/// Seeded source of i.i.d. posterior draws. draw(t) must be a pure function
/// of (sampler spec, t): reproducible for any t in isolation, independent of
/// the order in which draws are requested.
class PosteriorSampler {
public:
    virtual ~PosteriorSampler() = default;
    [[nodiscard]] virtual Hypothesis draw(std::uint64_t index) const = 0;
    [[nodiscard]] virtual std::uint64_t master_seed() const noexcept = 0;
};

/// Evaluation map (hypothesis, example) -> loss in [0,1]. The only bridge
/// to user models and data. Out-of-range values must surface as errors in
/// the implementation (returning Probability enforces this).
class LossOracle {
public:
    virtual ~LossOracle() = default;
    [[nodiscard]] virtual Probability loss(const Hypothesis& h, ExampleToken z) const = 0;
};

/// A fixed, stably-indexed collection of m examples.
class DatasetHandle {
public:
    virtual ~DatasetHandle() = default;
    [[nodiscard]] virtual std::uint64_t size() const noexcept = 0;
    [[nodiscard]] virtual ExampleToken example(std::uint64_t j) const = 0;  // j in [0, size())
    /// Provenance fingerprint of the underlying data, recorded in certificates.
    [[nodiscard]] virtual std::uint64_t digest() const noexcept = 0;
};

enum class Method { classic, fresh, testset, subsampled };

std::string_view method_name(Method m);
Method method_from_name(std::string_view name);

/// The output record of a certification run. Immutable once produced; the
/// bound is recomputable from (empirical_mean, slack), and the slack from
/// (delta, summands), so third parties can audit a certificate without
/// rerunning the loss evaluations.
struct Certificate {
    std::int64_t schema_version = 1;
    Method method = Method::classic;
    Probability empirical_mean;
    std::uint64_t summands = 1;  // T: number of independent summands behind the slack
    double delta = 0.5;
    SlackBudget slack;           // log(1/delta) / T
    Probability bound;           // kl_inverse_upper(empirical_mean, slack)
    std::uint64_t n_passes = 0;  // dataset passes (0 for subsampled)
    std::uint64_t m = 0;         // dataset / stream size
    std::uint64_t seed = 0;      // posterior sampler master seed
    std::uint64_t subsample_seed = 0;  // only meaningful for subsampled
    std::uint64_t data_digest = 0;
    bool holdout_attested = false;  // testset only: caller vouches the stream is held out
    std::int64_t created_at_unix = 0;  // 0 = unset, keeps default output byte-stable
};

/// Classic multi-pass estimator: n posterior draws, each evaluated on the
/// full dataset. T = n independent summands; n*m loss evaluations.
Certificate estimate_classic(const PosteriorSampler& sampler, const DatasetHandle& data,
                             const LossOracle& loss, std::uint64_t n, double delta);

/// Fresh-draw estimator: a new posterior draw for every (pass, example)
/// pair, draw index t = (i-1)*m + (j-1) for pass i and example j. Same n*m
/// evaluation count as classic, but T = n*m summands, so the slack shrinks
/// by a factor of m.
Certificate estimate_fresh(const PosteriorSampler& sampler, const DatasetHandle& data,
                           const LossOracle& loss, std::uint64_t n, double delta);

/// Fresh-draw construction over a held-out stream of i.i.d. examples;
/// certifies the out-of-sample Gibbs risk. That the stream is genuinely
/// disjoint from whatever trained the posterior is the caller's
/// responsibility; `holdout_attested` records the claim in the certificate.
Certificate estimate_testset(const PosteriorSampler& sampler, const DatasetHandle& stream,
                             const LossOracle& loss, std::uint64_t n, double delta,
                             bool holdout_attested);

/// Sub-sampled estimator: T example indices drawn uniformly with
/// replacement (the uniform mixture over the dataset has mean equal to the
/// in-sample Gibbs risk), each paired with a fresh posterior draw.
Certificate estimate_subsampled(const PosteriorSampler& sampler, const DatasetHandle& data,
                                const LossOracle& loss, std::uint64_t summands, double delta,
                                std::uint64_t subsample_seed);

/// Recompute kl_inverse_upper(empirical_mean, slack) and check it against
/// the stored bound bit-exactly; also re-derives the slack from (delta, T).
/// Any mismatch throws: it signals corruption or version drift.
Probability recompute_bound(const Certificate& cert);

/// Explicit pre-processing for losses in [lo,hi]: affine map onto [0,1].
/// Never applied implicitly by any estimator.
Probability rescale_loss(double value, double lo, double hi);

} // namespace riskcert
