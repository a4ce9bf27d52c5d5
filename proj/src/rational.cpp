#include "gptnc/rational.hpp"

#include "gptnc/errors.hpp"

#include <cmath>
#include <limits>

namespace gptnc {

namespace {

bool all_digits(std::string_view s) {
    if (s.empty()) return false;
    for (char c : s)
        if (c < '0' || c > '9') return false;
    return true;
}

Rational parse_decimal(std::string_view text) {
    std::string_view s = text;
    bool negative = false;
    if (!s.empty() && (s.front() == '-' || s.front() == '+')) {
        negative = s.front() == '-';
        s.remove_prefix(1);
    }
    long exponent = 0;
    if (auto e = s.find_first_of("eE"); e != std::string_view::npos) {
        std::string_view exp_part = s.substr(e + 1);
        bool exp_negative = false;
        if (!exp_part.empty() && (exp_part.front() == '-' || exp_part.front() == '+')) {
            exp_negative = exp_part.front() == '-';
            exp_part.remove_prefix(1);
        }
        if (!all_digits(exp_part) || exp_part.size() > 6)
            throw MalformedInput("bad exponent in number '" + std::string(text) + "'");
        exponent = std::stol(std::string(exp_part));
        if (exp_negative) exponent = -exponent;
        s = s.substr(0, e);
    }
    std::string digits;
    if (auto dot_pos = s.find('.'); dot_pos != std::string_view::npos) {
        std::string_view whole = s.substr(0, dot_pos);
        std::string_view frac = s.substr(dot_pos + 1);
        if ((!whole.empty() && !all_digits(whole)) || (!frac.empty() && !all_digits(frac)) ||
            (whole.empty() && frac.empty()))
            throw MalformedInput("bad number '" + std::string(text) + "'");
        digits = std::string(whole) + std::string(frac);
        exponent -= static_cast<long>(frac.size());
    } else {
        if (!all_digits(s)) throw MalformedInput("bad number '" + std::string(text) + "'");
        digits = std::string(s);
    }
    mpz_class mantissa(digits.empty() ? std::string("0") : digits, 10);
    mpz_class scale;
    mpz_ui_pow_ui(scale.get_mpz_t(), 10, static_cast<unsigned long>(std::labs(exponent)));
    Rational out = exponent >= 0 ? Rational(mantissa * scale) : Rational(mantissa, scale);
    out.canonicalize();
    return negative ? Rational(-out) : out;
}

} // namespace

Rational parse_rational(std::string_view text) {
    while (!text.empty() && (text.front() == ' ' || text.front() == '\t')) text.remove_prefix(1);
    while (!text.empty() && (text.back() == ' ' || text.back() == '\t' || text.back() == '\r'))
        text.remove_suffix(1);
    if (text.empty()) throw MalformedInput("empty number");
    if (auto slash = text.find('/'); slash != std::string_view::npos) {
        Rational num = parse_decimal(text.substr(0, slash));
        Rational den = parse_decimal(text.substr(slash + 1));
        if (den == 0) throw MalformedInput("zero denominator in '" + std::string(text) + "'");
        return num / den;
    }
    return parse_decimal(text);
}

std::string to_string(const Rational& x) {
    // mpq_class(p, q) does not reduce, so printing must.
    Rational q = x;
    q.canonicalize();
    if (q.get_den() == 1) return q.get_num().get_str();
    return q.get_num().get_str() + "/" + q.get_den().get_str();
}

Rational from_double(double x) {
    if (!std::isfinite(x)) throw MalformedInput("non-finite number");
    return Rational(x);
}

Rational rationalize(double x, double eps) {
    if (!std::isfinite(x)) throw MalformedInput("non-finite number");
    if (eps <= 0) return from_double(x);
    // Convergents h/k of the continued fraction of x until within eps.
    mpz_class h_prev = 1, h = static_cast<long>(std::floor(x));
    mpz_class k_prev = 0, k = 1;
    double rem = x - std::floor(x);
    for (int iter = 0; iter < 64; ++iter) {
        Rational approx(h, k);
        approx.canonicalize();
        if (std::fabs(approx.get_d() - x) <= eps || rem < std::numeric_limits<double>::min())
            return approx;
        double inv = 1.0 / rem;
        double a = std::floor(inv);
        if (a > 1e15) return from_double(x);
        rem = inv - a;
        mpz_class az = static_cast<long>(a);
        mpz_class h_next = az * h + h_prev;
        mpz_class k_next = az * k + k_prev;
        h_prev = h;
        k_prev = k;
        h = h_next;
        k = k_next;
    }
    return from_double(x);
}

Rational dot(const Vector& a, const Vector& b) {
    if (a.size() != b.size()) throw DimensionMismatch("dot product of vectors of different length");
    Rational s = 0;
    for (std::size_t i = 0; i < a.size(); ++i)
        if (sgn(a[i]) != 0 && sgn(b[i]) != 0) s += a[i] * b[i];
    return s;
}

Vector operator+(const Vector& a, const Vector& b) {
    if (a.size() != b.size()) throw DimensionMismatch("vector sum of different lengths");
    Vector out(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] + b[i];
    return out;
}

Vector operator-(const Vector& a, const Vector& b) {
    if (a.size() != b.size()) throw DimensionMismatch("vector difference of different lengths");
    Vector out(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] - b[i];
    return out;
}

Vector operator*(const Rational& s, const Vector& a) {
    Vector out(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) out[i] = s * a[i];
    return out;
}

bool is_zero(const Vector& a) {
    for (const auto& x : a)
        if (sgn(x) != 0) return false;
    return true;
}

Vector primitive(const Vector& a) {
    mpz_class den_lcm = 1;
    for (const auto& x : a)
        if (sgn(x) != 0) mpz_lcm(den_lcm.get_mpz_t(), den_lcm.get_mpz_t(), x.get_den_mpz_t());
    mpz_class num_gcd = 0;
    for (const auto& x : a) {
        if (sgn(x) == 0) continue;
        mpz_class n = x.get_num() * (den_lcm / x.get_den());
        mpz_gcd(num_gcd.get_mpz_t(), num_gcd.get_mpz_t(), n.get_mpz_t());
    }
    if (num_gcd == 0) return a;
    Vector out(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (sgn(a[i]) == 0) {
            out[i] = 0;
            continue;
        }
        mpz_class n = a[i].get_num() * (den_lcm / a[i].get_den());
        out[i] = Rational(mpz_class(n / num_gcd));
    }
    return out;
}

std::vector<double> to_double(const Vector& v) {
    std::vector<double> out;
    out.reserve(v.size());
    for (const auto& x : v) out.push_back(x.get_d());
    return out;
}

} // namespace gptnc
