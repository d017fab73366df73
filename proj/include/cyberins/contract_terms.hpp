/**
 * @file contract_terms.hpp
 * @brief Insurance contract C = (z, c) and the wealth state it applies to.
 */

#pragma once

#include <string>

namespace cyberins {

/// Initial wealth and the size of the loss the user faces.
struct WealthState {
    double w0 = 10.0;  ///< initial wealth, > 0
    double r = 5.0;    ///< loss size, 0 < r < w0

    std::string invalid_field() const;
};

/**
 * Premium z and net coverage c.
 *
 * Net coverage is the indemnity minus the premium, so the loss-state
 * wealth is w0 - r + c and the no-loss wealth is w0 - z. Gross coverage
 * z + c is what the insurer pays out on a loss.
 */
struct Contract {
    double z = 0.0;  ///< premium
    double c = 0.0;  ///< net coverage

    double gross() const noexcept { return z + c; }
    bool is_null() const noexcept { return z == 0.0 && c == 0.0; }

    /// Empty when z >= 0, c >= 0, z < w0 and z + c <= r (up to a 1e-12 * r rounding slack).
    std::string invalid_field(const WealthState& wealth) const;

    friend bool operator==(const Contract&, const Contract&) = default;
};

inline constexpr Contract kNullContract{0.0, 0.0};

}  // namespace cyberins
