#include "riskcert/serialize.hpp"

#include <cstdio>

#include <json.hpp>

namespace riskcert {

namespace {

void append_kv(std::string& out, const char* key, const std::string& value, bool quoted) {
    out += '"';
    out += key;
    out += "\":";
    if (quoted) {
        out += '"';
        out += value;
        out += '"';
    } else {
        out += value;
    }
}

std::string bool_text(bool b) { return b ? "true" : "false"; }

} // namespace

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string to_canonical_json(const Certificate& cert) {
    // Keys in ASCII order; no whitespace; one trailing newline.
    std::string out = "{";
    append_kv(out, "T", std::to_string(cert.summands), false);
    out += ',';
    append_kv(out, "bound", format_double(cert.bound.value()), false);
    out += ',';
    append_kv(out, "created_at_unix", std::to_string(cert.created_at_unix), false);
    out += ',';
    append_kv(out, "data_digest", std::to_string(cert.data_digest), false);
    out += ',';
    append_kv(out, "delta", format_double(cert.delta), false);
    out += ',';
    append_kv(out, "empirical_mean", format_double(cert.empirical_mean.value()), false);
    out += ',';
    append_kv(out, "holdout_attested", bool_text(cert.holdout_attested), false);
    out += ',';
    append_kv(out, "m", std::to_string(cert.m), false);
    out += ',';
    append_kv(out, "method", std::string(method_name(cert.method)), true);
    out += ',';
    append_kv(out, "n_passes", std::to_string(cert.n_passes), false);
    out += ',';
    append_kv(out, "schema_version", std::to_string(cert.schema_version), false);
    out += ',';
    append_kv(out, "seed", std::to_string(cert.seed), false);
    out += ',';
    append_kv(out, "slack", format_double(cert.slack.nats()), false);
    out += ',';
    append_kv(out, "subsample_seed", std::to_string(cert.subsample_seed), false);
    out += "}\n";
    return out;
}

std::string to_csv(const Certificate& cert) {
    std::string out =
        "method,empirical_mean,bound,T,delta,slack,n_passes,m,seed,subsample_seed,"
        "data_digest,holdout_attested,schema_version,created_at_unix\n";
    out += std::string(method_name(cert.method));
    out += ',';
    out += format_double(cert.empirical_mean.value());
    out += ',';
    out += format_double(cert.bound.value());
    out += ',';
    out += std::to_string(cert.summands);
    out += ',';
    out += format_double(cert.delta);
    out += ',';
    out += format_double(cert.slack.nats());
    out += ',';
    out += std::to_string(cert.n_passes);
    out += ',';
    out += std::to_string(cert.m);
    out += ',';
    out += std::to_string(cert.seed);
    out += ',';
    out += std::to_string(cert.subsample_seed);
    out += ',';
    out += std::to_string(cert.data_digest);
    out += ',';
    out += bool_text(cert.holdout_attested);
    out += ',';
    out += std::to_string(cert.schema_version);
    out += ',';
    out += std::to_string(cert.created_at_unix);
    out += '\n';
    return out;
}

Certificate certificate_from_json(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw ValidationError(std::string("certificate JSON parse failure: ") + e.what());
    }
    try {
        Certificate cert;
        cert.schema_version = j.at("schema_version").get<std::int64_t>();
        cert.method = method_from_name(j.at("method").get<std::string>());
        cert.empirical_mean = Probability(j.at("empirical_mean").get<double>());
        cert.summands = j.at("T").get<std::uint64_t>();
        cert.delta = j.at("delta").get<double>();
        cert.slack = SlackBudget(j.at("slack").get<double>());
        cert.bound = Probability(j.at("bound").get<double>());
        cert.n_passes = j.at("n_passes").get<std::uint64_t>();
        cert.m = j.at("m").get<std::uint64_t>();
        cert.seed = j.at("seed").get<std::uint64_t>();
        cert.subsample_seed = j.at("subsample_seed").get<std::uint64_t>();
        cert.data_digest = j.at("data_digest").get<std::uint64_t>();
        cert.holdout_attested = j.at("holdout_attested").get<bool>();
        cert.created_at_unix = j.at("created_at_unix").get<std::int64_t>();
        return cert;
    } catch (const nlohmann::json::exception& e) {
        throw ValidationError(std::string("certificate JSON missing/invalid field: ") + e.what());
    }
}

std::string to_canonical_json(const std::vector<TailReport>& reports) {
    std::string out = "{\"reports\":[";
    for (std::size_t i = 0; i < reports.size(); ++i) {
        const TailReport& r = reports[i];
        if (i > 0) {
            out += ',';
        }
        out += '{';
        append_kv(out, "bound", format_double(r.bound.value()), false);
        out += ',';
        append_kv(out, "exact_tail", format_double(r.exact_tail.value()), false);
        out += ',';
        append_kv(out, "satisfied", bool_text(r.satisfied), false);
        out += ',';
        append_kv(out, "threshold", format_double(r.threshold.value()), false);
        out += '}';
    }
    out += "]}\n";
    return out;
}

std::string to_csv(const std::vector<TailReport>& reports) {
    std::string out = "threshold,exact_tail,bound,satisfied\n";
    for (const TailReport& r : reports) {
        out += format_double(r.threshold.value());
        out += ',';
        out += format_double(r.exact_tail.value());
        out += ',';
        out += format_double(r.bound.value());
        out += ',';
        out += bool_text(r.satisfied);
        out += '\n';
    }
    return out;
}

std::string to_canonical_json(const CoverageReport& report) {
    std::string out = "{";
    append_kv(out, "delta", format_double(report.delta), false);
    out += ',';
    append_kv(out, "failure_rate", format_double(report.failure_rate), false);
    out += ',';
    append_kv(out, "failures", std::to_string(report.failures), false);
    out += ',';
    append_kv(out, "seed", std::to_string(report.seed), false);
    out += ',';
    append_kv(out, "summands", std::to_string(report.summands), false);
    out += ',';
    append_kv(out, "trials", std::to_string(report.trials), false);
    out += ',';
    append_kv(out, "true_mean", format_double(report.true_mean), false);
    out += ',';
    append_kv(out, "z_slack", format_double(report.z_slack), false);
    out += "}\n";
    return out;
}

std::string to_csv(const CoverageReport& report) {
    std::string out = "trials,failures,delta,failure_rate,z_slack,summands,true_mean,seed\n";
    out += std::to_string(report.trials);
    out += ',';
    out += std::to_string(report.failures);
    out += ',';
    out += format_double(report.delta);
    out += ',';
    out += format_double(report.failure_rate);
    out += ',';
    out += format_double(report.z_slack);
    out += ',';
    out += std::to_string(report.summands);
    out += ',';
    out += format_double(report.true_mean);
    out += ',';
    out += std::to_string(report.seed);
    out += '\n';
    return out;
}

std::string to_canonical_json(const BudgetComparison& cmp) {
    std::string out = "{";
    append_kv(out, "bound_classic", format_double(cmp.bound_classic.value()), false);
    out += ',';
    append_kv(out, "bound_fresh", format_double(cmp.bound_fresh.value()), false);
    out += ',';
    append_kv(out, "delta", format_double(cmp.delta), false);
    out += ',';
    append_kv(out, "fresh_passes_equal_guarantee",
              std::to_string(cmp.fresh_passes_equal_guarantee), false);
    out += ',';
    append_kv(out, "m", std::to_string(cmp.m), false);
    out += ',';
    append_kv(out, "n_classic", std::to_string(cmp.n_classic), false);
    out += ',';
    append_kv(out, "pass_ratio", format_double(cmp.pass_ratio), false);
    out += ',';
    append_kv(out, "q", format_double(cmp.q.value()), false);
    out += ',';
    append_kv(out, "slack_classic", format_double(cmp.slack_classic), false);
    out += ',';
    append_kv(out, "slack_fresh_equal_budget", format_double(cmp.slack_fresh_equal_budget),
              false);
    out += "}\n";
    return out;
}

std::string to_csv(const BudgetComparison& cmp) {
    std::string out =
        "m,n_classic,delta,q,slack_classic,slack_fresh_equal_budget,bound_classic,"
        "bound_fresh,pass_ratio,fresh_passes_equal_guarantee\n";
    out += std::to_string(cmp.m);
    out += ',';
    out += std::to_string(cmp.n_classic);
    out += ',';
    out += format_double(cmp.delta);
    out += ',';
    out += format_double(cmp.q.value());
    out += ',';
    out += format_double(cmp.slack_classic);
    out += ',';
    out += format_double(cmp.slack_fresh_equal_budget);
    out += ',';
    out += format_double(cmp.bound_classic.value());
    out += ',';
    out += format_double(cmp.bound_fresh.value());
    out += ',';
    out += format_double(cmp.pass_ratio);
    out += ',';
    out += std::to_string(cmp.fresh_passes_equal_guarantee);
    out += '\n';
    return out;
}

} // namespace riskcert
