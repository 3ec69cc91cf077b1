#pragma once

#include <cstdint>
#include <numeric>
#include <string>

#include "langbench/error.hpp"

namespace langbench {

// Exact rational weight. Kept reduced with a positive denominator so that
// encoding lengths and file round-trips are canonical.
struct Rational {
    long long num = 0;
    long long den = 1;

    Rational() = default;
    Rational(long long n, long long d = 1) : num(n), den(d) { normalize(); }

    void normalize() {
        if (den == 0) throw Error("rational with zero denominator");
        if (den < 0) {
            num = -num;
            den = -den;
        }
        long long g = std::gcd(num < 0 ? -num : num, den);
        if (g > 1) {
            num /= g;
            den /= g;
        }
        if (num == 0) den = 1;
    }

    double value() const { return static_cast<double>(num) / static_cast<double>(den); }

    Rational operator+(const Rational& o) const { return Rational(num * o.den + o.num * den, den * o.den); }
    bool operator==(const Rational&) const = default;
    auto operator<=>(const Rational& o) const {
        return num * o.den <=> o.num * den;
    }

    std::string str() const {
        if (den == 1) return std::to_string(num);
        return std::to_string(num) + "/" + std::to_string(den);
    }

    static Rational parse(const std::string& text) {
        auto slash = text.find('/');
        try {
            if (slash == std::string::npos) return Rational(std::stoll(text));
            return Rational(std::stoll(text.substr(0, slash)),
                            std::stoll(text.substr(slash + 1)));
        } catch (const std::exception&) {
            throw FormatError("cannot parse rational '" + text + "'");
        }
    }
};

}  // namespace langbench
