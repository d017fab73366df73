/**
 * @file risk.hpp
 * @brief Loss-probability functions per risk class and the blended class.
 *
 * Each class uses p(x) = p0 * exp(-beta * (x - binv)) for x >= binv, where
 * binv is the mandatory base investment below which nobody is insurable.
 */

#pragma once

#include <array>
#include <string>
#include <vector>

namespace cyberins {

struct RiskClassSpec {
    double p0 = 0.5;    ///< loss probability at x = binv, in (0, 1)
    double beta = 1.0;  ///< decay rate per investment unit, > 0
    double binv = 0.0;  ///< base investment, >= 0

    /// Empty string when the invariants hold, else the first failing field.
    std::string invalid_field() const;
};

/// Throws std::domain_error when x < spec.binv.
double loss_probability(const RiskClassSpec& spec, double x);
double loss_probability_derivative(const RiskClassSpec& spec, double x);
double loss_probability_second_derivative(const RiskClassSpec& spec, double x);

/**
 * Convex combination of at most two exponential classes.
 *
 * A single class is stored as {1, spec} + {0, spec}; the zero-weight term
 * contributes exactly 0, so a blend with theta in {0, 1} evaluates
 * bit-identically to the pure class.
 */
class RiskFunction {
public:
    struct Term {
        double weight;
        RiskClassSpec spec;
    };

    explicit RiskFunction(const RiskClassSpec& single);
    RiskFunction(double w_first, const RiskClassSpec& first, double w_second,
                 const RiskClassSpec& second);

    double value(double x) const;
    double derivative(double x) const;
    double second_derivative(double x) const;

    /// Smallest admissible investment (max binv over the weighted terms).
    double binv() const noexcept { return binv_; }
    const std::array<Term, 2>& terms() const noexcept { return terms_; }

private:
    void check(double x) const;

    std::array<Term, 2> terms_;
    double binv_;
};

enum class RiskClass { HC, LC };

std::string to_string(RiskClass c);

/// Population of high-chance (HC, share theta) and low-chance (LC) users.
struct ClassMix {
    double theta = 0.5;
    RiskClassSpec hc{0.8, 1.0, 0.0};
    RiskClassSpec lc{0.4, 1.0, 0.0};

    RiskFunction risk(RiskClass c) const {
        return RiskFunction(c == RiskClass::HC ? hc : lc);
    }
    double weight(RiskClass c) const { return c == RiskClass::HC ? theta : 1.0 - theta; }
};

/// theta * p_HC + (1 - theta) * p_LC.
RiskFunction blend_alpha(const ClassMix& mix);

struct RiskViolation {
    std::string property;
    double x;  ///< smallest witnessing investment on the sample grid
};

/**
 * Check the class-ordering and shape properties on x in [binv, binv + span]
 * at the given step. Each failing property is reported once with its first witness.
 */
std::vector<RiskViolation> validate(const ClassMix& mix, double span = 10.0,
                                    double step = 0.01);

}  // namespace cyberins
