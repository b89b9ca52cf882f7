#include "hawkeslab/distributions.hpp"

#include <cmath>
#include <limits>
#include <map>
#include <sstream>

#include "hawkeslab/errors.hpp"

namespace hawkeslab {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

void require(bool ok, const std::string& msg) {
    if (!ok) throw ConfigError(msg);
}

}  // namespace

DisplacementSpec DisplacementSpec::pareto(double alpha, double x_m, std::string label) {
    require(alpha > 0.0 && alpha <= 1.0, "pareto alpha must lie in (0, 1]");
    require(x_m > 0.0, "pareto x_m must be > 0");
    return DisplacementSpec(ParetoParams{alpha, x_m}, std::move(label));
}

DisplacementSpec DisplacementSpec::exponential(double rate, std::string label) {
    require(rate > 0.0, "exponential rate must be > 0");
    return DisplacementSpec(ExponentialParams{rate}, std::move(label));
}

DisplacementSpec DisplacementSpec::deterministic(double a, std::string label) {
    require(a > 0.0, "deterministic a must be > 0");
    return DisplacementSpec(DeterministicParams{a}, std::move(label));
}

DisplacementSpec DisplacementSpec::uniform(double a, double b, std::string label) {
    require(a >= 0.0 && b > a, "uniform needs 0 <= a < b");
    return DisplacementSpec(UniformParams{a, b}, std::move(label));
}

double DisplacementSpec::cdf(double x) const {
    return std::visit(
        overloaded{
            [x](const ParetoParams& p) {
                return x < p.x_m ? 0.0 : 1.0 - std::pow(p.x_m / x, p.alpha);
            },
            [x](const ExponentialParams& p) { return x < 0.0 ? 0.0 : -std::expm1(-p.rate * x); },
            [x](const DeterministicParams& p) { return x < p.a ? 0.0 : 1.0; },
            [x](const UniformParams& p) {
                if (x < p.a) return 0.0;
                if (x >= p.b) return 1.0;
                return (x - p.a) / (p.b - p.a);
            },
        },
        params_);
}

double DisplacementSpec::sample(RngStream& stream) const {
    return std::visit(
        overloaded{
            [&](const ParetoParams& p) {
                // 1 - u in (0, 1], so the draw is >= x_m and finite.
                return p.x_m * std::pow(1.0 - stream.uniform01(), -1.0 / p.alpha);
            },
            [&](const ExponentialParams& p) { return stream.exponential(p.rate); },
            [&](const DeterministicParams& p) {
                (void)stream;
                return p.a;
            },
            [&](const UniformParams& p) { return stream.uniform(p.a, p.b); },
        },
        params_);
}

bool DisplacementSpec::has_density() const {
    return !std::holds_alternative<DeterministicParams>(params_);
}

double DisplacementSpec::density(double x) const {
    return std::visit(
        overloaded{
            [x](const ParetoParams& p) {
                if (x < p.x_m) return 0.0;
                return p.alpha / p.x_m * std::pow(p.x_m / x, p.alpha + 1.0);
            },
            [x](const ExponentialParams& p) { return x < 0.0 ? 0.0 : p.rate * std::exp(-p.rate * x); },
            [](const DeterministicParams&) -> double {
                throw LabError(ErrorCode::no_density, "deterministic displacement has no density");
            },
            [x](const UniformParams& p) { return (x < p.a || x > p.b) ? 0.0 : 1.0 / (p.b - p.a); },
        },
        params_);
}

double DisplacementSpec::density_sup(double lo, double hi) const {
    if (hi < lo) return 0.0;
    return std::visit(
        overloaded{
            [&](const ParetoParams& p) {
                if (hi < p.x_m) return 0.0;
                return density(std::max(lo, p.x_m));
            },
            [&](const ExponentialParams& p) {
                if (hi < 0.0) return 0.0;
                return p.rate * std::exp(-p.rate * std::max(lo, 0.0));
            },
            [](const DeterministicParams&) -> double {
                throw LabError(ErrorCode::no_density, "deterministic displacement has no density");
            },
            [&](const UniformParams& p) {
                return (hi < p.a || lo > p.b) ? 0.0 : 1.0 / (p.b - p.a);
            },
        },
        params_);
}

double DisplacementSpec::truncated_mean(double c) const {
    if (c <= 0.0) return 0.0;
    return std::visit(
        overloaded{
            [c](const ParetoParams& p) {
                if (c <= p.x_m) return 0.0;
                if (p.alpha == 1.0) return p.x_m * std::log(c / p.x_m);
                const double am1 = 1.0 - p.alpha;
                return p.alpha * std::pow(p.x_m, p.alpha) *
                       (std::pow(c, am1) - std::pow(p.x_m, am1)) / am1;
            },
            [c](const ExponentialParams& p) {
                const double rc = p.rate * c;
                return (1.0 - std::exp(-rc) * (1.0 + rc)) / p.rate;
            },
            [c](const DeterministicParams& p) { return c >= p.a ? p.a : 0.0; },
            [c](const UniformParams& p) {
                if (c <= p.a) return 0.0;
                if (c >= p.b) return 0.5 * (p.a + p.b);
                return (c * c - p.a * p.a) / (2.0 * (p.b - p.a));
            },
        },
        params_);
}

double DisplacementSpec::truncated_mean_inverse(double y) const {
    if (y <= 0.0) return 0.0;
    const double total = mean();
    if (std::isfinite(total)) {
        // Attainability: mu reaches its supremum at the right support endpoint
        // when that endpoint is finite, and only in the limit otherwise.
        const double right = support_right();
        if (y > total || (y == total && !std::isfinite(right)))
            throw LabError(ErrorCode::unreachable_level,
                           "truncated mean never reaches requested level");
    }
    double lo = 0.0;
    double hi = std::max(1.0, 2.0 * support_left());
    while (truncated_mean(hi) < y) {
        lo = hi;
        hi *= 2.0;
        if (hi > 1e308) throw LabError(ErrorCode::unreachable_level, "no finite truncation level");
    }
    // Invariant: mu(lo) < y <= mu(hi).
    for (int it = 0; it < 200 && hi - lo > 1e-9 * std::max(1.0, hi); ++it) {
        const double mid = 0.5 * (lo + hi);
        (truncated_mean(mid) >= y ? hi : lo) = mid;
    }
    return hi;
}

double DisplacementSpec::truncation_for_branching(double m) const {
    require(m >= 0.0 && m < 1.0, "branching coefficient must lie in [0, 1)");
    return truncated_mean_inverse(1.0 / (1.0 - m));
}

std::optional<DisplacementSpec::TailDensityConstants> DisplacementSpec::tail_density_constants()
    const {
    if (const auto* p = std::get_if<ParetoParams>(&params_)) {
        // f(x) x^{1+alpha} = alpha x_m^alpha identically on the support.
        const double c = p->alpha * std::pow(p->x_m, p->alpha);
        return TailDensityConstants{c, c, p->alpha};
    }
    return std::nullopt;
}

double DisplacementSpec::mean() const {
    return std::visit(
        overloaded{
            [](const ParetoParams&) { return kInf; },  // alpha <= 1
            [](const ExponentialParams& p) { return 1.0 / p.rate; },
            [](const DeterministicParams& p) { return p.a; },
            [](const UniformParams& p) { return 0.5 * (p.a + p.b); },
        },
        params_);
}

double DisplacementSpec::support_left() const {
    return std::visit(overloaded{
                          [](const ParetoParams& p) { return p.x_m; },
                          [](const ExponentialParams&) { return 0.0; },
                          [](const DeterministicParams& p) { return p.a; },
                          [](const UniformParams& p) { return p.a; },
                      },
                      params_);
}

double DisplacementSpec::support_right() const {
    return std::visit(overloaded{
                          [](const ParetoParams&) { return kInf; },
                          [](const ExponentialParams&) { return kInf; },
                          [](const DeterministicParams& p) { return p.a; },
                          [](const UniformParams& p) { return p.b; },
                      },
                      params_);
}

double DisplacementSpec::tail_index() const {
    if (const auto* p = std::get_if<ParetoParams>(&params_)) return p->alpha;
    throw LabError(ErrorCode::config_invalid, "tail index defined for the pareto family only");
}

double DisplacementSpec::tail_scale() const {
    const auto* p = std::get_if<ParetoParams>(&params_);
    if (!p) throw LabError(ErrorCode::config_invalid, "tail scale defined for the pareto family only");
    return std::pow(p->x_m, p->alpha);
}

double DisplacementSpec::tail_ell_laplace() const {
    const auto* p = std::get_if<ParetoParams>(&params_);
    if (!p) throw LabError(ErrorCode::config_invalid, "tail ell defined for the pareto family only");
    if (p->alpha >= 1.0)
        throw LabError(ErrorCode::config_invalid,
                       "the Laplace tail constant needs alpha < 1");
    return std::pow(p->x_m, p->alpha) * std::tgamma(1.0 - p->alpha);
}

double DisplacementSpec::tail_ell_gamma1p() const {
    const auto* p = std::get_if<ParetoParams>(&params_);
    if (!p) throw LabError(ErrorCode::config_invalid, "tail ell defined for the pareto family only");
    return std::pow(p->x_m, p->alpha) * std::tgamma(1.0 + p->alpha);
}

namespace {

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

}  // namespace

std::string DisplacementSpec::to_string() const {
    return std::visit(
        overloaded{
            [](const ParetoParams& p) {
                return "family=pareto alpha=" + fmt(p.alpha) + " x_m=" + fmt(p.x_m);
            },
            [](const ExponentialParams& p) { return "family=exponential rate=" + fmt(p.rate); },
            [](const DeterministicParams& p) { return "family=deterministic a=" + fmt(p.a); },
            [](const UniformParams& p) {
                return "family=uniform a=" + fmt(p.a) + " b=" + fmt(p.b);
            },
        },
        params_);
}

DisplacementSpec DisplacementSpec::parse(std::string_view text) {
    std::map<std::string, std::string> kv;
    std::istringstream in{std::string(text)};
    std::string token;
    while (in >> token) {
        const auto eq = token.find('=');
        require(eq != std::string::npos && eq > 0,
                "malformed distribution token '" + token + "' (expected key=value)");
        kv[token.substr(0, eq)] = token.substr(eq + 1);
    }
    require(kv.count("family") > 0, "distribution needs a family= token");
    const std::string family = kv["family"];
    kv.erase("family");

    auto take = [&](const char* key) {
        auto it = kv.find(key);
        require(it != kv.end(), "distribution family '" + family + "' needs " + key + "=");
        double v = 0.0;
        try {
            v = std::stod(it->second);
        } catch (const std::exception&) {
            throw ConfigError("bad numeric value for " + std::string(key) + ": " + it->second);
        }
        kv.erase(it);
        return v;
    };
    auto done = [&] {
        require(kv.empty(), "unknown distribution parameter '" +
                                (kv.empty() ? "" : kv.begin()->first) + "' for family " + family);
    };

    if (family == "pareto") {
        const double alpha = take("alpha"), x_m = take("x_m");
        done();
        return pareto(alpha, x_m);
    }
    if (family == "exponential") {
        const double rate = take("rate");
        done();
        return exponential(rate);
    }
    if (family == "deterministic") {
        const double a = take("a");
        done();
        return deterministic(a);
    }
    if (family == "uniform") {
        const double a = take("a"), b = take("b");
        done();
        return uniform(a, b);
    }
    throw ConfigError("unknown distribution family '" + family + "'");
}

double TruncatedSpec::cdf(double x) const {
    if (x < 0.0) return 0.0;
    return base.cdf(std::min(x, c)) + (1.0 - base.cdf(c));
}

double TruncatedSpec::sample(RngStream& stream) const {
    const double x = base.sample(stream);
    return x <= c ? x : 0.0;
}

}  // namespace hawkeslab
