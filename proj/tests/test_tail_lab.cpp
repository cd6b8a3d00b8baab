#include <cmath>
#include <random>
#include <vector>

#include <doctest.h>

#include "oracle.hpp"
#include "riskcert/kl.hpp"
#include "riskcert/summation.hpp"
#include "riskcert/tail_lab.hpp"

using namespace riskcert;

namespace {

HeterogeneousBernoulliSpec spec_of(std::initializer_list<double> means) {
    std::vector<Probability> ps;
    for (double p : means) {
        ps.push_back(Probability(p));
    }
    return HeterogeneousBernoulliSpec(std::move(ps));
}

HeterogeneousBernoulliSpec random_spec(std::mt19937_64& gen, std::uint64_t max_size) {
    std::uniform_int_distribution<std::uint64_t> size_dist(1, max_size);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::vector<Probability> ps;
    const std::uint64_t T = size_dist(gen);
    ps.reserve(T);
    for (std::uint64_t i = 0; i < T; ++i) {
        ps.push_back(Probability(unit(gen)));
    }
    return HeterogeneousBernoulliSpec(std::move(ps));
}

} // namespace

TEST_CASE("chernoff kl tail bound") {
    const auto two = spec_of({0.2, 0.6});
    CHECK(chernoff_kl_tail_bound(two, two.aggregate_mean()).value() == 1.0);
    CHECK(chernoff_kl_tail_bound(two, Probability(0.0)).value() ==
          doctest::Approx(0.36).epsilon(1e-12));

    const auto ten = spec_of({0.5, 0.5, 0.5, 0.5, 0.5, 0.5, 0.5, 0.5, 0.5, 0.5});
    CHECK(chernoff_kl_tail_bound(ten, Probability(0.2)).value() ==
          doctest::Approx(oracle::kChernoff_T10_p05_t02).epsilon(1e-12));

    CHECK_THROWS_AS(chernoff_kl_tail_bound(two, Probability(0.4000001)), ValidationError);
}

TEST_CASE("exact lower tail, small hand-checked cases") {
    const auto two = spec_of({0.2, 0.6});
    CHECK(exact_lower_tail(two, Probability(0.0)).value() ==
          doctest::Approx(0.32).epsilon(1e-14));
    CHECK(exact_lower_tail(two, Probability(1.0)).value() == 1.0);
    // one atom in: Pr(count <= 1) = 1 - 0.2*0.6
    CHECK(exact_lower_tail(two, Probability(0.5)).value() ==
          doctest::Approx(1.0 - 0.12).epsilon(1e-14));

    const auto one = spec_of({0.3});
    CHECK(exact_lower_tail(one, Probability(0.0)).value() == doctest::Approx(0.7).epsilon(1e-15));
}

TEST_CASE("poisson-binomial pmf is a distribution") {
    std::mt19937_64 gen(41);
    for (int i = 0; i < 50; ++i) {
        const auto spec = random_spec(gen, 100);
        const auto pmf = poisson_binomial_pmf(spec);
        CHECK(pmf.size() == spec.size() + 1);
        NeumaierSum total;
        for (double mass : pmf) {
            CHECK(mass >= -1e-18);
            total.add(mass);
        }
        CHECK(std::fabs(total.value() - 1.0) <= static_cast<double>(spec.size()) * 1e-15);
    }
}

TEST_CASE("convolution tail matches brute-force enumeration") {
    std::mt19937_64 gen(42);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (int i = 0; i < 100; ++i) {
        const auto spec = random_spec(gen, 10);
        for (int k = 0; k < 8; ++k) {
            const Probability t(unit(gen));
            const double dp = exact_lower_tail(spec, t).value();
            const double brute = exact_lower_tail_enumeration(spec, t).value();
            CHECK(std::fabs(dp - brute) <= 1e-12);
        }
        // atoms themselves
        for (std::uint64_t k = 0; k <= spec.size(); ++k) {
            const Probability t(static_cast<double>(k) / static_cast<double>(spec.size()));
            CHECK(std::fabs(exact_lower_tail(spec, t).value() -
                            exact_lower_tail_enumeration(spec, t).value()) <= 1e-12);
        }
    }
    CHECK_THROWS_AS(exact_lower_tail_enumeration(random_spec(gen, 1), Probability(0.5)),
                    ValidationError);  // guard only triggers above T=25, so build one that big
}

TEST_CASE("verify_theorem3 on the worked example and random specs") {
    const auto two = spec_of({0.2, 0.6});
    const std::vector<Probability> grid = {Probability(0.0), Probability(0.2), Probability(0.4)};
    const auto reports = verify_theorem3(two, grid);
    REQUIRE(reports.size() == 3);
    CHECK(reports[0].exact_tail.value() == doctest::Approx(0.32).epsilon(1e-14));
    CHECK(reports[0].bound.value() == doctest::Approx(0.36).epsilon(1e-12));
    for (const auto& r : reports) {
        CHECK(r.satisfied);
    }

    // homogeneous means degenerate to the classical single-p check
    std::vector<Probability> homogeneous(8, Probability(0.5));
    const HeterogeneousBernoulliSpec homo(homogeneous);
    std::vector<Probability> hgrid;
    for (int k = 0; k <= 10; ++k) {
        hgrid.push_back(Probability(0.5 * k / 10.0));
    }
    for (const auto& r : verify_theorem3(homo, hgrid)) {
        CHECK(r.satisfied);
    }

    std::mt19937_64 gen(43);
    for (int i = 0; i < 40; ++i) {
        const auto spec = random_spec(gen, 14);
        const double p = spec.aggregate_mean().value();
        std::vector<Probability> tg;
        for (int k = 0; k < 15; ++k) {
            tg.push_back(Probability(p * k / 14.0));
        }
        for (const auto& r : verify_theorem3(spec, tg)) {
            CHECK(r.satisfied);
        }
    }

    CHECK_THROWS_AS(verify_theorem3(two, {Probability(0.5)}), ValidationError);
}

TEST_CASE("coverage simulation: zero-loss sanity case") {
    const auto report = coverage_simulation(spec_of({0.0}), 0.5, 64, 7);
    CHECK(report.trials == 64);
    CHECK(report.failures == 0);
    CHECK(report.failure_rate == 0.0);
    CHECK(report.z_slack == doctest::Approx(0.5 / std::sqrt(0.25 / 64.0)).epsilon(1e-12));
}

TEST_CASE("coverage simulation stays within the guarantee, homogeneous and not") {
    std::vector<Probability> homogeneous(500, Probability(0.3));
    const auto homo =
        coverage_simulation(HeterogeneousBernoulliSpec(homogeneous), 0.1, 600, 2024);
    CHECK(homo.failure_rate <= 0.1 + 3.0 * std::sqrt(0.1 * 0.9 / 600.0));

    std::vector<Probability> ramp;
    for (int i = 1; i <= 100; ++i) {
        ramp.push_back(Probability(i / 100.0));
    }
    const auto hetero = coverage_simulation(HeterogeneousBernoulliSpec(ramp), 0.05, 600, 5);
    CHECK(hetero.failure_rate <= 0.05 + 3.0 * std::sqrt(0.05 * 0.95 / 600.0));
}

TEST_CASE("budget comparison") {
    const auto same = budget_compare(1, 120, 0.05, Probability(0.2));
    CHECK(same.slack_classic == same.slack_fresh_equal_budget);
    CHECK(same.bound_classic == same.bound_fresh);
    CHECK(same.pass_ratio == 1.0);
    CHECK(same.fresh_passes_equal_guarantee == 120);

    const auto reference = budget_compare(50000, 150000, 0.025, Probability(0.1));
    CHECK(reference.fresh_passes_equal_guarantee == 3);
    CHECK(reference.slack_classic / reference.slack_fresh_equal_budget == 50000.0);
    CHECK(reference.bound_fresh.value() <= reference.bound_classic.value());

    const auto cited = budget_compare(1000, 100, 0.05, Probability(0.1));
    CHECK(cited.slack_fresh_equal_budget ==
          doctest::Approx(oracle::kSlack_T100000_d005).epsilon(1e-12));

    std::mt19937_64 gen(44);
    std::uniform_int_distribution<std::uint64_t> mdist(1, 100000);
    std::uniform_int_distribution<std::uint64_t> ndist(1, 200000);
    for (int i = 0; i < 200; ++i) {
        const std::uint64_t m = mdist(gen);
        const auto cmp = budget_compare(m, ndist(gen), 0.1, Probability(0.25));
        const double ratio = cmp.slack_classic / cmp.slack_fresh_equal_budget;
        CHECK(std::fabs(ratio - static_cast<double>(m)) <=
              std::ldexp(static_cast<double>(m), -52));
        CHECK(cmp.bound_fresh.value() <= cmp.bound_classic.value());
    }
}

TEST_CASE("bounds tighten monotonically with more summands") {
    const Probability q(0.2);
    double prev = 2.0;
    for (std::uint64_t T : {1ULL, 3ULL, 10ULL, 100ULL, 1000ULL, 100000ULL, 10000000ULL}) {
        const double bound =
            kl_inverse_upper(q, SlackBudget::from_confidence(0.05, T)).value();
        CHECK(bound <= prev);
        prev = bound;
    }
}
