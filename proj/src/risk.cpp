#include "cyberins/risk.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

namespace cyberins {

std::string RiskClassSpec::invalid_field() const {
    if (!(p0 > 0.0 && p0 < 1.0)) return "p0";
    if (!(beta > 0.0) || !std::isfinite(beta)) return "beta";
    if (!(binv >= 0.0) || !std::isfinite(binv)) return "binv";
    return {};
}

namespace {

void require_insurable(double binv, double x) {
    if (!(x >= binv)) {
        throw std::domain_error("investment " + std::to_string(x) +
                                " is below the base investment " + std::to_string(binv));
    }
}

}  // namespace

double loss_probability(const RiskClassSpec& spec, double x) {
    require_insurable(spec.binv, x);
    return spec.p0 * std::exp(-spec.beta * (x - spec.binv));
}

double loss_probability_derivative(const RiskClassSpec& spec, double x) {
    return -spec.beta * loss_probability(spec, x);
}

double loss_probability_second_derivative(const RiskClassSpec& spec, double x) {
    return spec.beta * spec.beta * loss_probability(spec, x);
}

RiskFunction::RiskFunction(const RiskClassSpec& single)
    : terms_{Term{1.0, single}, Term{0.0, single}}, binv_(single.binv) {}

RiskFunction::RiskFunction(double w_first, const RiskClassSpec& first, double w_second,
                           const RiskClassSpec& second)
    : terms_{Term{w_first, first}, Term{w_second, second}} {
    if (w_first < 0.0 || w_second < 0.0) {
        throw std::invalid_argument("risk blend weights must be non-negative");
    }
    binv_ = std::max(w_first > 0.0 ? first.binv : 0.0, w_second > 0.0 ? second.binv : 0.0);
    if (w_first == 0.0 && w_second == 0.0) binv_ = std::max(first.binv, second.binv);
}

void RiskFunction::check(double x) const { require_insurable(binv_, x); }

double RiskFunction::value(double x) const {
    check(x);
    double p = 0.0;
    for (const auto& t : terms_) {
        p += t.weight * (t.spec.p0 * std::exp(-t.spec.beta * (x - t.spec.binv)));
    }
    return p;
}

double RiskFunction::derivative(double x) const {
    check(x);
    double d = 0.0;
    for (const auto& t : terms_) {
        d += t.weight * (-t.spec.beta * (t.spec.p0 * std::exp(-t.spec.beta * (x - t.spec.binv))));
    }
    return d;
}

double RiskFunction::second_derivative(double x) const {
    check(x);
    double d = 0.0;
    for (const auto& t : terms_) {
        d += t.weight * (t.spec.beta * t.spec.beta *
                         (t.spec.p0 * std::exp(-t.spec.beta * (x - t.spec.binv))));
    }
    return d;
}

std::string to_string(RiskClass c) { return c == RiskClass::HC ? "HC" : "LC"; }

RiskFunction blend_alpha(const ClassMix& mix) {
    return RiskFunction(mix.theta, mix.hc, 1.0 - mix.theta, mix.lc);
}

std::vector<RiskViolation> validate(const ClassMix& mix, double span, double step) {
    // First witness per property, in a stable order.
    std::map<std::string, double> first;
    auto flag = [&](const std::string& property, double x) { first.try_emplace(property, x); };

    if (!(mix.theta >= 0.0 && mix.theta <= 1.0)) flag("theta in [0, 1]", 0.0);

    const double lo = std::max(mix.hc.binv, mix.lc.binv);
    const auto steps = static_cast<long>(std::floor(span / step + 0.5));
    auto p = [](const RiskClassSpec& s, double x) {
        return s.p0 * std::exp(-s.beta * (x - s.binv));
    };
    auto dp = [&](const RiskClassSpec& s, double x) { return -s.beta * p(s, x); };
    auto d2p = [&](const RiskClassSpec& s, double x) { return s.beta * s.beta * p(s, x); };

    if (mix.hc.binv != mix.lc.binv) flag("equal base investment", lo);

    for (long k = 0; k <= steps; ++k) {
        const double x = lo + static_cast<double>(k) * step;
        for (const RiskClassSpec* s : {&mix.hc, &mix.lc}) {
            if (!(dp(*s, x) < 0.0)) flag("p decreasing", x);
            if (!(d2p(*s, x) > 0.0)) flag("p convex", x);
        }
        const double ph = p(mix.hc, x);
        const double pl = p(mix.lc, x);
        if (!(ph < 1.0)) flag("p_HC < 1", x);
        if (!(pl > 0.0)) flag("p_LC > 0", x);
        if (!(ph > pl)) flag("p_HC > p_LC", x);
        if (!(dp(mix.hc, x) < dp(mix.lc, x))) flag("derivative ordering", x);
    }

    std::vector<RiskViolation> out;
    out.reserve(first.size());
    for (const auto& [property, x] : first) out.push_back({property, x});
    return out;
}

}  // namespace cyberins
