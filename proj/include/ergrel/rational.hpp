#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace ergrel {

/// Exact rational scalar. All measure identities and covering certificates
/// default to this type; double is an opt-in mode for large instances.
using Rat = boost::multiprecision::cpp_rational;
using BigInt = boost::multiprecision::cpp_int;

inline void require(bool cond, const std::string& msg) {
    if (!cond) throw std::invalid_argument(msg);
}

/// Postcondition / certificate failure: an algorithm bug, never a soft report.
inline void ensure(bool cond, const std::string& msg) {
    if (!cond) throw std::logic_error("internal error: " + msg);
}

/// Comparison policy per scalar. Rational mode is exact; double mode uses the
/// absolute tolerance 1e-9.
template <class R>
struct scalar_traits {
    static bool eq(const R& a, const R& b) { return a == b; }
    static bool leq(const R& a, const R& b) { return a <= b; }
    static R from_fraction(long num, long den) { return R(num, den); }
    static double to_double(const R& x) { return x.template convert_to<double>(); }
    static std::string str(const R& x) {
        if (denominator(x) == 1) return numerator(x).str();
        return numerator(x).str() + "/" + denominator(x).str();
    }
    static constexpr bool exact = true;
};

template <>
struct scalar_traits<double> {
    static constexpr double tol = 1e-9;
    static bool eq(double a, double b) { return std::fabs(a - b) <= tol; }
    static bool leq(double a, double b) { return a <= b + tol; }
    static double from_fraction(long num, long den) { return double(num) / double(den); }
    static double to_double(double x) { return x; }
    static std::string str(double x) { return std::to_string(x); }
    static constexpr bool exact = false;
};

template <class R>
R pow_int(const R& base, long e) {
    if (e < 0) {
        require(base != R(0), "pow_int: zero base with negative exponent");
        return R(1) / pow_int(base, -e);
    }
    R acc(1), b = base;
    while (e > 0) {
        if (e & 1) acc *= b;
        b *= b;
        e >>= 1;
    }
    return acc;
}

/// Parse "p/q" or "p" into an exact rational. Rejects zero denominators.
inline Rat parse_rational(const std::string& s) {
    auto slash = s.find('/');
    try {
        if (slash == std::string::npos) return Rat(BigInt(s));
        BigInt num(s.substr(0, slash)), den(s.substr(slash + 1));
        require(den != 0, "rational with zero denominator: " + s);
        return Rat(num, den);
    } catch (const std::invalid_argument&) {
        throw;
    } catch (const std::exception&) {
        throw std::invalid_argument("malformed rational: " + s);
    }
}

inline std::string rational_str(const Rat& x) { return scalar_traits<Rat>::str(x); }

/// Solve ratio == lambda^(-k) for integer k, exactly. Returns false when the
/// ratio is not an integer power of 1/lambda.
inline bool log_power_of(const Rat& ratio, const Rat& lambda, long& k_out) {
    require(ratio > 0, "log_power_of: ratio must be positive");
    require(lambda > 0 && lambda < 1, "log_power_of: lambda must lie in (0,1)");
    if (ratio == 1) {
        k_out = 0;
        return true;
    }
    if (ratio > 1) {
        // ratio = lambda^{-k}, k > 0: multiply down by lambda until we reach 1.
        Rat acc = ratio;
        long k = 0;
        while (acc > 1) {
            acc *= lambda;
            ++k;
        }
        if (acc == 1) {
            k_out = k;
            return true;
        }
        return false;
    }
    Rat acc = ratio;
    long k = 0;
    while (acc < 1) {
        acc /= lambda;
        --k;
    }
    if (acc == 1) {
        k_out = k;
        return true;
    }
    return false;
}

}  // namespace ergrel
