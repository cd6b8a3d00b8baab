// riskcert: high-probability upper bounds on the Gibbs risk of a posterior
// from Monte-Carlo loss evaluations, plus the simulation lab that checks
// the underlying tail inequalities.

#include <cstdint>
#include <ctime>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "riskcert/estimators.hpp"
#include "riskcert/kl.hpp"
#include "riskcert/loss_matrix.hpp"
#include "riskcert/serialize.hpp"
#include "riskcert/synthetic.hpp"
#include "riskcert/tail_lab.hpp"

namespace {

using namespace riskcert;

constexpr int kExitOk = 0;
constexpr int kExitValidation = 2;
constexpr int kExitIo = 3;
constexpr int kExitInternal = 4;

// All output is assembled in memory first and written in one shot, so a
// validation failure can never leave a partial file behind.
void emit(const std::string& text, const std::string& out_path) {
    if (out_path.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream out(out_path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw IoError("cannot open output file: " + out_path);
    }
    out << text;
    if (!out) {
        throw IoError("failed writing output file: " + out_path);
    }
}

std::vector<Probability> to_probabilities(const std::vector<double>& values) {
    std::vector<Probability> out;
    out.reserve(values.size());
    for (double v : values) {
        out.push_back(Probability(v));
    }
    return out;
}

struct CertifyOptions {
    std::string input;
    std::string synthetic;
    std::uint64_t n = 1;
    double delta = 0.0;
    std::uint64_t m = 0;  // optional cross-check against the matrix header
    std::uint64_t seed = 0;
    bool seed_given = false;
    std::uint64_t subsample_seed = 0;
    bool attest_holdout = false;
    bool stamp = false;
    std::string out;
    std::string format = "json";
};

void add_common_certify_flags(CLI::App* cmd, CertifyOptions& opt, bool subsampled) {
    cmd->add_option("--input", opt.input, "loss matrix CSV (header m=<int>, one row per draw)");
    cmd->add_option("--synthetic", opt.synthetic,
                    "synthetic posterior spec, e.g. bernoulli=linear:0,0.6x100");
    cmd->add_option(subsampled ? "--T" : "--n", opt.n,
                    subsampled ? "number of sub-sampled evaluations"
                               : "number of dataset passes")
        ->required();
    cmd->add_option("--delta", opt.delta, "confidence level in (0,1)")->required();
    cmd->add_option("--m", opt.m, "expected dataset size (checked against the input)");
    cmd->add_option("--seed", opt.seed, "posterior sampler master seed")
        ->each([&opt](const std::string&) { opt.seed_given = true; });
    cmd->add_flag("--stamp", opt.stamp, "record wall-clock time (breaks byte reproducibility)");
    cmd->add_option("--out", opt.out, "output path (stdout if omitted)");
    cmd->add_option("--format", opt.format, "json or csv")
        ->check(CLI::IsMember({"json", "csv"}));
}

void run_certify(Method method, const CertifyOptions& opt) {
    if (opt.input.empty() == opt.synthetic.empty()) {
        throw ValidationError("exactly one of --input or --synthetic must be given");
    }
    if (!(opt.delta > 0.0 && opt.delta < 1.0)) {
        throw ValidationError("delta must lie in (0,1)");
    }

    Certificate cert;
    if (!opt.synthetic.empty()) {
        if (!opt.seed_given) {
            throw ValidationError("--seed is required with --synthetic runs");
        }
        SyntheticPosteriorSpec spec = SyntheticPosteriorSpec::parse(opt.synthetic);
        if (opt.m != 0 && opt.m != spec.m) {
            throw ValidationError("--m disagrees with the synthetic spec's example count");
        }
        SyntheticPosterior posterior(spec, opt.seed);
        switch (method) {
            case Method::classic:
                cert = estimate_classic(posterior, posterior, posterior, opt.n, opt.delta);
                break;
            case Method::fresh:
                cert = estimate_fresh(posterior, posterior, posterior, opt.n, opt.delta);
                break;
            case Method::testset:
                cert = estimate_testset(posterior, posterior, posterior, opt.n, opt.delta,
                                        opt.attest_holdout);
                break;
            case Method::subsampled:
                cert = estimate_subsampled(posterior, posterior, posterior, opt.n, opt.delta,
                                           opt.subsample_seed);
                break;
        }
    } else {
        LossMatrix matrix = ingest_loss_matrix(opt.input, method, opt.n, opt.m);
        const std::uint64_t rows = matrix.rows();
        RowSampler sampler(opt.seed, rows);
        switch (method) {
            case Method::classic:
                cert = estimate_classic(sampler, matrix, matrix, opt.n, opt.delta);
                break;
            case Method::fresh:
                cert = estimate_fresh(sampler, matrix, matrix, opt.n, opt.delta);
                break;
            case Method::testset:
                cert = estimate_testset(sampler, matrix, matrix, opt.n, opt.delta,
                                        opt.attest_holdout);
                break;
            case Method::subsampled:
                cert = estimate_subsampled(sampler, matrix, matrix, opt.n, opt.delta,
                                           opt.subsample_seed);
                break;
        }
    }
    if (opt.stamp) {
        cert.created_at_unix = static_cast<std::int64_t>(std::time(nullptr));
    }
    emit(opt.format == "csv" ? to_csv(cert) : to_canonical_json(cert), opt.out);
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"PAC-Bayes Gibbs risk certification from Monte-Carlo loss evaluations"};
    app.require_subcommand(1);

    CertifyOptions classic_opt, fresh_opt, testset_opt, subsampled_opt;

    CLI::App* classic = app.add_subcommand(
        "certify-classic", "n full passes, one posterior draw per pass (T = n)");
    add_common_certify_flags(classic, classic_opt, false);

    CLI::App* fresh = app.add_subcommand(
        "certify-fresh", "fresh posterior draw per (pass, example) pair (T = n*m)");
    add_common_certify_flags(fresh, fresh_opt, false);

    CLI::App* testset = app.add_subcommand(
        "certify-testset", "fresh-draw scheme over a held-out example stream");
    add_common_certify_flags(testset, testset_opt, false);
    testset->add_flag("--attest-holdout", testset_opt.attest_holdout,
                      "record that the stream is disjoint from posterior training data");

    CLI::App* subsampled = app.add_subcommand(
        "certify-subsampled", "T uniform-with-replacement example picks, fresh draw each");
    add_common_certify_flags(subsampled, subsampled_opt, true);
    subsampled->add_option("--subsample-seed", subsampled_opt.subsample_seed,
                           "seed for the example-index stream")
        ->required();

    // simulate-coverage
    std::string cov_means;
    double cov_delta = 0.0;
    std::uint64_t cov_trials = 2000;
    std::uint64_t cov_seed = 0;
    std::string cov_out, cov_format = "json";
    CLI::App* coverage = app.add_subcommand(
        "simulate-coverage", "empirical coverage of the KL-inverse certificate");
    coverage->add_option("--means", cov_means, "true Bernoulli means, e.g. 0.3x500 or linear:0.01,1x100")
        ->required();
    coverage->add_option("--delta", cov_delta, "confidence level in (0,1)")->required();
    coverage->add_option("--trials", cov_trials, "number of simulated certificates");
    coverage->add_option("--seed", cov_seed, "trial stream seed")->required();
    coverage->add_option("--out", cov_out, "output path (stdout if omitted)");
    coverage->add_option("--format", cov_format, "json or csv")
        ->check(CLI::IsMember({"json", "csv"}));

    // verify-theorem3
    std::string t3_spec, t3_grid = "auto:15";
    std::string t3_out, t3_format = "csv";
    CLI::App* theorem3 = app.add_subcommand(
        "verify-theorem3", "exact Poisson-binomial tails against the Chernoff-KL bound");
    theorem3->add_option("--spec", t3_spec, "Bernoulli means, e.g. 0.2,0.6 or 0.5x10")
        ->required();
    theorem3->add_option("--grid", t3_grid,
                         "thresholds: list, constant/linear grid, or auto:<k> over [0, mean]");
    theorem3->add_option("--out", t3_out, "output path (stdout if omitted)");
    theorem3->add_option("--format", t3_format, "json or csv")
        ->check(CLI::IsMember({"json", "csv"}));

    // budget-compare
    std::uint64_t bc_m = 1, bc_n = 1;
    double bc_delta = 0.0, bc_q = 0.0;
    std::string bc_out, bc_format = "json";
    CLI::App* budget = app.add_subcommand(
        "budget-compare", "classic vs fresh slack and bound at an equal evaluation budget");
    budget->add_option("--m", bc_m, "dataset size")->required();
    budget->add_option("--n-classic", bc_n, "classic pass count")->required();
    budget->add_option("--delta", bc_delta, "confidence level in (0,1)")->required();
    budget->add_option("--q", bc_q, "common empirical value for both bounds")->required();
    budget->add_option("--out", bc_out, "output path (stdout if omitted)");
    budget->add_option("--format", bc_format, "json or csv")
        ->check(CLI::IsMember({"json", "csv"}));

    // klinv
    double ki_q = 0.0, ki_c = 0.0;
    std::string ki_out, ki_format = "json";
    CLI::App* klinv_cmd = app.add_subcommand(
        "klinv", "upper inverse of the binary KL divergence at (q, c)");
    klinv_cmd->add_option("--q", ki_q, "empirical value in [0,1]")->required();
    klinv_cmd->add_option("--c", ki_c, "slack budget in nats, >= 0")->required();
    klinv_cmd->add_option("--out", ki_out, "also write a JSON/CSV record here");
    klinv_cmd->add_option("--format", ki_format, "json or csv")
        ->check(CLI::IsMember({"json", "csv"}));

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitValidation;
    }

    try {
        if (classic->parsed()) {
            run_certify(Method::classic, classic_opt);
        } else if (fresh->parsed()) {
            run_certify(Method::fresh, fresh_opt);
        } else if (testset->parsed()) {
            run_certify(Method::testset, testset_opt);
        } else if (subsampled->parsed()) {
            run_certify(Method::subsampled, subsampled_opt);
        } else if (coverage->parsed()) {
            HeterogeneousBernoulliSpec spec(to_probabilities(parse_value_grid(cov_means)));
            const CoverageReport report =
                coverage_simulation(spec, cov_delta, cov_trials, cov_seed);
            emit(cov_format == "csv" ? to_csv(report) : to_canonical_json(report), cov_out);
        } else if (theorem3->parsed()) {
            HeterogeneousBernoulliSpec spec(to_probabilities(parse_value_grid(t3_spec)));
            std::vector<Probability> grid;
            if (t3_grid.rfind("auto:", 0) == 0) {
                const auto points = std::stoull(t3_grid.substr(5));
                if (points < 2) {
                    throw ValidationError("auto grid needs at least two points");
                }
                const double p = spec.aggregate_mean().value();
                for (std::uint64_t k = 0; k < points; ++k) {
                    grid.push_back(Probability(
                        p * static_cast<double>(k) / static_cast<double>(points - 1)));
                }
            } else {
                grid = to_probabilities(parse_value_grid(t3_grid));
            }
            const std::vector<TailReport> reports = verify_theorem3(spec, grid);
            emit(t3_format == "json" ? to_canonical_json(reports) : to_csv(reports), t3_out);
        } else if (budget->parsed()) {
            const BudgetComparison cmp =
                budget_compare(bc_m, bc_n, bc_delta, Probability(bc_q));
            emit(bc_format == "csv" ? to_csv(cmp) : to_canonical_json(cmp), bc_out);
        } else if (klinv_cmd->parsed()) {
            const Probability bound = kl_inverse_upper(Probability(ki_q), SlackBudget(ki_c));
            std::cout << format_double(bound.value()) << "\n";
            if (!ki_out.empty()) {
                std::string record;
                if (ki_format == "csv") {
                    record = "q,c,bound\n" + format_double(ki_q) + "," + format_double(ki_c) +
                             "," + format_double(bound.value()) + "\n";
                } else {
                    record = "{\"bound\":" + format_double(bound.value()) +
                             ",\"c\":" + format_double(ki_c) + ",\"q\":" + format_double(ki_q) +
                             "}\n";
                }
                emit(record, ki_out);
            }
        }
    } catch (const ValidationError& e) {
        std::cerr << "validation error: " << e.what() << "\n";
        return kExitValidation;
    } catch (const IoError& e) {
        std::cerr << "i/o error: " << e.what() << "\n";
        return kExitIo;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return kExitInternal;
    }
    return kExitOk;
}
