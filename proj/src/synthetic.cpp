#include "riskcert/synthetic.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <string>

#include "riskcert/digest.hpp"
#include "riskcert/rng.hpp"
#include "riskcert/summation.hpp"

namespace riskcert {

namespace {

double parse_number(std::string_view text) {
    double v = 0.0;
    const auto* end = text.data() + text.size();
    const auto [ptr, ec] = std::from_chars(text.data(), end, v);
    if (ec != std::errc{} || ptr != end) {
        throw ValidationError("malformed number in synthetic spec: '" + std::string(text) + "'");
    }
    return v;
}

std::vector<double> split_numbers(std::string_view text) {
    std::vector<double> out;
    while (!text.empty()) {
        const auto comma = text.find(',');
        out.push_back(parse_number(text.substr(0, comma)));
        if (comma == std::string_view::npos) {
            break;
        }
        text.remove_prefix(comma + 1);
    }
    return out;
}

std::uint64_t parse_count(std::string_view text) {
    std::uint64_t v = 0;
    const auto* end = text.data() + text.size();
    const auto [ptr, ec] = std::from_chars(text.data(), end, v);
    if (ec != std::errc{} || ptr != end || v == 0) {
        throw ValidationError("malformed count in synthetic spec: '" + std::string(text) + "'");
    }
    return v;
}

std::string_view kind_name(SyntheticKind kind) {
    switch (kind) {
        case SyntheticKind::bernoulli_per_example: return "bernoulli";
        case SyntheticKind::point_mass: return "point-mass";
        case SyntheticKind::beta_loss: return "beta";
    }
    throw InternalError("unknown synthetic kind");
}

} // namespace

std::vector<double> parse_value_grid(std::string_view text) {
    const bool linear = text.substr(0, 7) == "linear:";
    if (linear) {
        text.remove_prefix(7);
    }
    const auto x = text.rfind('x');
    if (x == std::string_view::npos) {
        if (linear) {
            throw ValidationError("linear grid needs a trailing x<count>");
        }
        return split_numbers(text);
    }
    const std::vector<double> vals = split_numbers(text.substr(0, x));
    const std::uint64_t count = parse_count(text.substr(x + 1));
    std::vector<double> out;
    out.reserve(count);
    if (linear) {
        if (vals.size() != 2) {
            throw ValidationError("linear grid needs exactly two endpoints");
        }
        for (std::uint64_t j = 0; j < count; ++j) {
            const double frac =
                count == 1 ? 0.0 : static_cast<double>(j) / static_cast<double>(count - 1);
            out.push_back(vals[0] + (vals[1] - vals[0]) * frac);
        }
    } else {
        if (vals.size() != 1) {
            throw ValidationError("constant grid needs exactly one value before 'x'");
        }
        out.assign(count, vals[0]);
    }
    return out;
}

SyntheticPosteriorSpec SyntheticPosteriorSpec::parse(std::string_view text) {
    const auto eq = text.find('=');
    if (eq == std::string_view::npos) {
        throw ValidationError("synthetic spec must look like kind=values, got '" +
                              std::string(text) + "'");
    }
    const std::string_view kind_text = text.substr(0, eq);
    std::string_view body = text.substr(eq + 1);

    SyntheticPosteriorSpec spec;
    if (kind_text == "bernoulli") {
        spec.kind = SyntheticKind::bernoulli_per_example;
    } else if (kind_text == "point-mass") {
        spec.kind = SyntheticKind::point_mass;
    } else if (kind_text == "beta") {
        spec.kind = SyntheticKind::beta_loss;
    } else {
        throw ValidationError("unknown synthetic kind '" + std::string(kind_text) +
                              "' (expected bernoulli, point-mass, or beta)");
    }

    if (spec.kind == SyntheticKind::beta_loss) {
        const auto x = body.rfind('x');
        if (x == std::string_view::npos) {
            throw ValidationError("beta spec needs beta=<alpha>,<beta>x<m>");
        }
        spec.params = split_numbers(body.substr(0, x));
        spec.m = parse_count(body.substr(x + 1));
        spec.validate();
        return spec;
    }

    spec.params = parse_value_grid(body);
    spec.m = spec.params.size();
    spec.validate();
    return spec;
}

void SyntheticPosteriorSpec::validate() const {
    if (m == 0) {
        throw ValidationError("synthetic spec needs at least one example");
    }
    if (kind == SyntheticKind::beta_loss) {
        if (params.size() != 2 || !(params[0] > 0.0) || !(params[1] > 0.0)) {
            throw ValidationError("beta spec needs two positive shape parameters");
        }
        return;
    }
    if (params.size() != m) {
        throw InternalError("synthetic spec parameter count disagrees with m");
    }
    for (double p : params) {
        if (!(p >= 0.0 && p <= 1.0)) {
            throw ValidationError("synthetic per-example value out of [0,1]: " +
                                  std::to_string(p));
        }
    }
}

std::string SyntheticPosteriorSpec::canonical() const {
    std::string out(kind_name(kind));
    out += '=';
    char buf[40];
    for (std::size_t i = 0; i < params.size(); ++i) {
        std::snprintf(buf, sizeof buf, "%.17g", params[i]);
        if (i > 0) {
            out += ',';
        }
        out += buf;
    }
    out += 'x';
    out += std::to_string(m);
    return out;
}

double SyntheticPosteriorSpec::gibbs_risk() const {
    if (kind == SyntheticKind::beta_loss) {
        return params[0] / (params[0] + params[1]);
    }
    NeumaierSum sum;
    for (double p : params) {
        sum.add(p);
    }
    return sum.value() / static_cast<double>(m);
}

SyntheticPosterior::SyntheticPosterior(SyntheticPosteriorSpec spec, std::uint64_t master_seed)
    : spec_(std::move(spec)), seed_(master_seed), digest_(fnv1a64(spec_.canonical())) {
    spec_.validate();
}

Hypothesis SyntheticPosterior::draw(std::uint64_t index) const {
    if (spec_.kind == SyntheticKind::point_mass) {
        // A point-mass posterior has a single hypothesis: every draw is the
        // same handle apart from its counter.
        return Hypothesis{index, 0};
    }
    return Hypothesis{index, derive_stream(seed_, index)};
}

Probability SyntheticPosterior::loss(const Hypothesis& h, ExampleToken z) const {
    if (z >= spec_.m) {
        throw ValidationError("example index " + std::to_string(z) + " outside dataset of size " +
                              std::to_string(spec_.m));
    }
    switch (spec_.kind) {
        case SyntheticKind::point_mass:
            return Probability(spec_.params[z]);
        case SyntheticKind::bernoulli_per_example: {
            CounterRng rng(derive_stream(h.stream, z));
            return Probability(rng.bernoulli(spec_.params[z]) ? 1.0 : 0.0);
        }
        case SyntheticKind::beta_loss: {
            CounterRng rng(derive_stream(h.stream, z));
            return Probability(rng.beta(spec_.params[0], spec_.params[1]));
        }
    }
    throw InternalError("unknown synthetic kind");
}

ExampleToken SyntheticPosterior::example(std::uint64_t j) const {
    if (j >= spec_.m) {
        throw ValidationError("example index " + std::to_string(j) + " outside dataset of size " +
                              std::to_string(spec_.m));
    }
    return j;
}

} // namespace riskcert
