#pragma once

#include <cmath>
#include <stdexcept>

namespace fracns {

/// Universal constants entering every bound: c_bar is the Sobolev embedding
/// constant sup, d_bar the commutator constant sup, c2_lemma the symbol-
/// difference constant. c_a is derived and tracks c_bar/d_bar automatically.
struct ConstantsLedger {
    double c_bar = 1.0;
    double d_bar = 1.0;
    double c2_lemma = 3.1622776601683795;  // sqrt(10)

    void validate() const {
        if (!(c_bar >= 1.0) || !(d_bar >= 1.0))
            throw std::invalid_argument("ConstantsLedger: c_bar and d_bar must be >= 1");
        if (!(c2_lemma > 0.0))
            throw std::invalid_argument("ConstantsLedger: c2_lemma must be > 0");
    }

    double c_a() const { return 8.0 * d_bar * d_bar * std::pow(c_bar, 4); }
};

}  // namespace fracns
