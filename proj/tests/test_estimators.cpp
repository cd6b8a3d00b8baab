#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <vector>

#include <doctest.h>

#include "oracle.hpp"
#include "riskcert/estimators.hpp"
#include "riskcert/kl.hpp"
#include "riskcert/serialize.hpp"
#include "riskcert/summation.hpp"
#include "riskcert/synthetic.hpp"

using namespace riskcert;

namespace {

SyntheticPosterior make(const char* spec_text, std::uint64_t seed) {
    return SyntheticPosterior(SyntheticPosteriorSpec::parse(spec_text), seed);
}

} // namespace

TEST_CASE("synthetic spec parsing") {
    const auto constant = SyntheticPosteriorSpec::parse("bernoulli=0.3x4");
    CHECK(constant.kind == SyntheticKind::bernoulli_per_example);
    CHECK(constant.m == 4);
    CHECK(constant.params == std::vector<double>{0.3, 0.3, 0.3, 0.3});

    const auto listed = SyntheticPosteriorSpec::parse("point-mass=0.1,0.9");
    CHECK(listed.m == 2);
    CHECK(listed.gibbs_risk() == doctest::Approx(0.5));

    const auto lin = SyntheticPosteriorSpec::parse("bernoulli=linear:0,1x5");
    CHECK(lin.params == std::vector<double>{0.0, 0.25, 0.5, 0.75, 1.0});

    const auto beta = SyntheticPosteriorSpec::parse("beta=2,5x10");
    CHECK(beta.m == 10);
    CHECK(beta.gibbs_risk() == doctest::Approx(2.0 / 7.0));

    CHECK_THROWS_AS(SyntheticPosteriorSpec::parse("bernoulli=1.5x2"), ValidationError);
    CHECK_THROWS_AS(SyntheticPosteriorSpec::parse("beta=2x3"), ValidationError);
    CHECK_THROWS_AS(SyntheticPosteriorSpec::parse("gauss=0.5x2"), ValidationError);
    CHECK_THROWS_AS(SyntheticPosteriorSpec::parse("bernoulli"), ValidationError);
    CHECK_THROWS_AS(SyntheticPosteriorSpec::parse("bernoulli=0.1,,0.2"), ValidationError);
}

TEST_CASE("classic estimator on zero loss") {
    const auto posterior = make("point-mass=0x5", 42);
    const Certificate cert = estimate_classic(posterior, posterior, posterior, 1, 0.05);
    CHECK(cert.method == Method::classic);
    CHECK(cert.empirical_mean.value() == 0.0);
    CHECK(cert.summands == 1);
    CHECK(cert.n_passes == 1);
    CHECK(cert.m == 5);
    CHECK(std::fabs(cert.bound.value() - oracle::kBound_T1_d005_mean0) <= 1e-9);
}

TEST_CASE("constant loss gives the constant mean exactly") {
    const auto posterior = make("point-mass=0.5x7", 3);
    CHECK(estimate_classic(posterior, posterior, posterior, 3, 0.1).empirical_mean.value() ==
          0.5);
    CHECK(estimate_fresh(posterior, posterior, posterior, 2, 0.1).empirical_mean.value() == 0.5);
    CHECK(estimate_subsampled(posterior, posterior, posterior, 11, 0.1, 99)
              .empirical_mean.value() == 0.5);
}

TEST_CASE("fresh estimator on zero loss: T = n*m") {
    const auto posterior = make("point-mass=0x10", 42);
    const Certificate cert = estimate_fresh(posterior, posterior, posterior, 1, 0.05);
    CHECK(cert.summands == 10);
    CHECK(cert.n_passes == 1);
    CHECK(std::fabs(cert.bound.value() - oracle::kBound_T10_d005_mean0) <= 1e-9);
}

TEST_CASE("classic estimator at reference scale n=150000") {
    const auto posterior = make("point-mass=0.1x1", 1);
    const Certificate cert = estimate_classic(posterior, posterior, posterior, 150000, 0.025);
    CHECK(cert.summands == 150000);
    CHECK(cert.empirical_mean.value() == doctest::Approx(0.1).epsilon(1e-12));
    CHECK(cert.slack.nats() == doctest::Approx(oracle::kSlack_n150000_d0025).epsilon(1e-12));
    CHECK(std::fabs(cert.bound.value() - oracle::kBound_q01_slack150000) <= 1e-9);
}

TEST_CASE("point-mass posterior: classic and fresh agree bit-for-bit") {
    const auto posterior = make("point-mass=linear:0.05,0.95x7", 1234);
    const Certificate a = estimate_classic(posterior, posterior, posterior, 2, 0.2);
    const Certificate b = estimate_fresh(posterior, posterior, posterior, 2, 0.2);
    CHECK(a.empirical_mean.value() == b.empirical_mean.value());
    // and the draws genuinely do not matter
    const auto other_seed = make("point-mass=linear:0.05,0.95x7", 999);
    CHECK(estimate_fresh(other_seed, other_seed, other_seed, 2, 0.2).empirical_mean.value() ==
          b.empirical_mean.value());
}

TEST_CASE("empirical mean matches an extended-precision reference") {
    std::mt19937_64 gen(77);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::string spec = "point-mass=";
    std::vector<double> values;
    for (int j = 0; j < 113; ++j) {
        values.push_back(unit(gen));
        spec += format_double(values.back());
        if (j + 1 < 113) {
            spec += ',';
        }
    }
    const auto posterior = SyntheticPosterior(SyntheticPosteriorSpec::parse(spec), 5);
    const std::uint64_t n = 9;
    const Certificate cert = estimate_classic(posterior, posterior, posterior, n, 0.1);
    long double acc = 0.0L;
    for (double v : posterior.spec().params) {
        acc += v;
    }
    const double reference = static_cast<double>(acc / 113.0L);
    CHECK(std::fabs(cert.empirical_mean.value() - reference) <=
          1e-12 * static_cast<double>(n * 113));
}

TEST_CASE("index discipline: summands are pure in (seed, t, example)") {
    const auto posterior = make("bernoulli=linear:0.1,0.8x23", 2024);
    const std::uint64_t n = 3;
    const std::uint64_t m = posterior.size();
    const Certificate cert = estimate_fresh(posterior, posterior, posterior, n, 0.25);

    // Evaluate every summand in a scrambled order, then reduce in index
    // order; the mean must be bit-identical.
    std::vector<std::uint64_t> order(n * m);
    std::iota(order.begin(), order.end(), 0);
    std::shuffle(order.begin(), order.end(), std::mt19937_64(5));
    std::vector<double> summands(n * m, -1.0);
    for (std::uint64_t t : order) {
        const std::uint64_t j = t % m;
        summands[t] = posterior.loss(posterior.draw(t), posterior.example(j)).value();
    }
    NeumaierSum sum;
    for (double v : summands) {
        sum.add(v);
    }
    const double mean = sum.value() / static_cast<double>(n * m);
    CHECK(mean == cert.empirical_mean.value());

    // and a rerun of the estimator serializes identically
    const Certificate again = estimate_fresh(posterior, posterior, posterior, n, 0.25);
    CHECK(to_canonical_json(again) == to_canonical_json(cert));
}

TEST_CASE("fresh estimator is unbiased for the per-example mean mixture") {
    // losses Bernoulli(p_j): the expected empirical mean is avg(p_j)
    const SyntheticPosteriorSpec spec = SyntheticPosteriorSpec::parse("bernoulli=linear:0.1,0.5x50");
    const double target = spec.gibbs_risk();
    const int runs = 10000;
    NeumaierSum acc;
    NeumaierSum acc_sq;
    for (int r = 0; r < runs; ++r) {
        SyntheticPosterior posterior(spec, static_cast<std::uint64_t>(r));
        const double mean =
            estimate_fresh(posterior, posterior, posterior, 2, 0.1).empirical_mean.value();
        acc.add(mean);
        acc_sq.add(mean * mean);
    }
    const double avg = acc.value() / runs;
    const double var = std::max(0.0, acc_sq.value() / runs - avg * avg);
    const double se = std::sqrt(var / runs);
    CHECK(std::fabs(avg - target) <= 3.0 * se + 1e-12);
}

TEST_CASE("equal budgets: fresh slack is m times smaller, bound never worse") {
    std::mt19937_64 gen(31);
    std::uniform_real_distribution<double> qdist(0.0, 0.99);
    std::uniform_int_distribution<std::uint64_t> ndist(1, 500);
    std::uniform_int_distribution<std::uint64_t> mdist(1, 5000);
    for (int i = 0; i < 300; ++i) {
        const double q = qdist(gen);
        const std::uint64_t n = ndist(gen);
        const std::uint64_t m = mdist(gen);
        const SlackBudget classic = SlackBudget::from_confidence(0.05, n);
        const SlackBudget fresh = SlackBudget::from_confidence(0.05, n * m);
        CHECK(kl_inverse_upper(Probability(q), fresh).value() <=
              kl_inverse_upper(Probability(q), classic).value());
    }
}

TEST_CASE("testset estimator") {
    const auto all_wrong = make("point-mass=1x4", 8);
    const Certificate cert = estimate_testset(all_wrong, all_wrong, all_wrong, 2, 0.1, true);
    CHECK(cert.method == Method::testset);
    CHECK(cert.empirical_mean.value() == 1.0);
    CHECK(cert.bound.value() == 1.0);
    CHECK(cert.holdout_attested);

    const auto tiny = make("point-mass=0.25x1", 8);
    const Certificate degenerate = estimate_testset(tiny, tiny, tiny, 1, 0.2, false);
    CHECK(degenerate.summands == 1);
    CHECK(degenerate.slack.nats() == doctest::Approx(std::log(1.0 / 0.2)).epsilon(1e-15));
    CHECK_FALSE(degenerate.holdout_attested);
}

TEST_CASE("subsampled estimator") {
    const auto posterior = make("point-mass=0.37x9", 21);
    const Certificate single = estimate_subsampled(posterior, posterior, posterior, 1, 0.1, 55);
    CHECK(single.method == Method::subsampled);
    CHECK(single.summands == 1);
    CHECK(single.n_passes == 0);
    CHECK(single.subsample_seed == 55);
    CHECK(single.slack.nats() == doctest::Approx(std::log(10.0)).epsilon(1e-15));
    CHECK(single.empirical_mean.value() == 0.37);
    CHECK(single.bound ==
          kl_inverse_upper(Probability(0.37), SlackBudget::from_confidence(0.1, 1)));

    // picks stay in range for long runs
    const auto wide = make("bernoulli=linear:0,0.9x10", 4);
    const Certificate longrun = estimate_subsampled(wide, wide, wide, 400, 0.1, 7);
    CHECK(longrun.empirical_mean.value() >= 0.0);
    CHECK(longrun.empirical_mean.value() <= 1.0);
}

TEST_CASE("recompute_bound audits certificates") {
    const auto posterior = make("bernoulli=linear:0.2,0.6x13", 17);
    Certificate cert = estimate_fresh(posterior, posterior, posterior, 2, 0.1);
    CHECK(recompute_bound(cert) == cert.bound);

    Certificate tampered = cert;
    tampered.empirical_mean = Probability(cert.empirical_mean.value() + 0.01);
    CHECK_THROWS_AS(recompute_bound(tampered), InternalError);

    Certificate drifted = cert;
    drifted.slack = SlackBudget(cert.slack.nats() * 1.5);
    CHECK_THROWS_AS(recompute_bound(drifted), InternalError);
}

TEST_CASE("estimator input validation") {
    const auto posterior = make("point-mass=0.5x3", 1);
    CHECK_THROWS_AS(estimate_classic(posterior, posterior, posterior, 0, 0.1), ValidationError);
    CHECK_THROWS_AS(estimate_classic(posterior, posterior, posterior, 1, 0.0), ValidationError);
    CHECK_THROWS_AS(estimate_classic(posterior, posterior, posterior, 1, 1.0), ValidationError);
    CHECK_THROWS_AS(estimate_fresh(posterior, posterior, posterior, 2, -0.3), ValidationError);
}

TEST_CASE("loss rescaling is explicit pre-processing") {
    CHECK(rescale_loss(5.0, 0.0, 10.0).value() == 0.5);
    CHECK(rescale_loss(-2.0, -2.0, 6.0).value() == 0.0);
    CHECK(rescale_loss(6.0, -2.0, 6.0).value() == 1.0);
    CHECK_THROWS_AS(rescale_loss(-1.0, 0.0, 10.0), ValidationError);
    CHECK_THROWS_AS(rescale_loss(0.5, 3.0, 3.0), ValidationError);
}

TEST_CASE("beta-loss synthetic posterior produces in-range losses with the right mean") {
    const auto posterior = make("beta=2,5x40", 99);
    const Certificate cert = estimate_fresh(posterior, posterior, posterior, 50, 0.1);
    // Beta(2,5): mean 2/7, var 10/392; se of the 2000-evaluation mean
    const double se = std::sqrt((10.0 / 392.0) / 2000.0);
    CHECK(std::fabs(cert.empirical_mean.value() - 2.0 / 7.0) <= 4.0 * se);
}
