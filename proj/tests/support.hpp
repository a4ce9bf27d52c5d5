#pragma once

#include "gptnc/rational.hpp"

#include <initializer_list>

namespace test {

inline gptnc::Vector v(std::initializer_list<gptnc::Rational> xs) { return gptnc::Vector(xs); }

/// p/q in lowest terms; mpq_class(p, q) alone does not reduce.
inline gptnc::Rational q(long p, long d) {
    gptnc::Rational x(p, d);
    x.canonicalize();
    return x;
}

inline const gptnc::Rational half(1, 2);
inline const gptnc::Rational quarter(1, 4);

} // namespace test
