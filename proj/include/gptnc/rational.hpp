#pragma once

#include <gmpxx.h>

#include <string>
#include <string_view>
#include <vector>

namespace gptnc {

/// Exact scalar used by every decision procedure.
using Rational = mpq_class;

/// A point or direction in the ambient coordinate space.
using Vector = std::vector<Rational>;

/// Parses "p/q", an integer, or a decimal literal ("0.25", "-1e-3") exactly.
Rational parse_rational(std::string_view text);

/// "p/q" form, or "p" when the denominator is 1.
std::string to_string(const Rational& q);

/// Best rational approximation within `eps` (continued fractions).
Rational rationalize(double x, double eps);

/// Exact binary value of a double.
Rational from_double(double x);

inline double to_double(const Rational& q) { return q.get_d(); }

inline int sign(const Rational& q) { return sgn(q); }

Rational dot(const Vector& a, const Vector& b);
Vector operator+(const Vector& a, const Vector& b);
Vector operator-(const Vector& a, const Vector& b);
Vector operator*(const Rational& s, const Vector& a);
bool is_zero(const Vector& a);

/// Scales a nonzero direction to its primitive integer representative.
Vector primitive(const Vector& a);

std::vector<double> to_double(const Vector& v);

} // namespace gptnc
