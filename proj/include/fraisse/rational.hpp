#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "fraisse/base.hpp"

namespace fraisse {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

inline Rational make_rational(long long num, long long den = 1) {
    return Rational(BigInt(num), BigInt(den));
}

inline std::string rational_to_string(const Rational& q) {
    return q.str();
}

inline Rational rational_from_string(const std::string& s) {
    auto slash = s.find('/');
    try {
        if (slash == std::string::npos) return Rational(BigInt(s));
        return Rational(BigInt(s.substr(0, slash)), BigInt(s.substr(slash + 1)));
    } catch (const std::exception&) {
        throw StructureError("malformed rational: " + s);
    }
}

/// Shrinking rational enclosure of pi. The enclosure is seeded at
/// [223/71, 22/7] and refined through the convergents of the continued
/// fraction of pi; the convergents are derived from a 100-digit decimal
/// enclosure, so roughly 90 digits of refinement are available. Each level of
/// the schedule is exact rational data; sign queries walk the schedule until
/// the sign resolves.
class PiEnclosure {
public:
    static const PiEnclosure& instance() {
        static PiEnclosure enc;
        return enc;
    }

    std::size_t levels() const { return schedule_.size(); }

    /// Enclosure [lo, hi] at the given refinement level.
    const std::pair<Rational, Rational>& level(std::size_t i) const { return schedule_[i]; }

    /// Exact sign of r + pi*s.
    int sign_of(const Rational& r, const Rational& s) const {
        if (s == 0) return r == 0 ? 0 : (r > 0 ? 1 : -1);
        if (r == 0) return s > 0 ? 1 : -1;
        // r + pi*s > 0  <=>  pi > -r/s (for s > 0), pi < -r/s (for s < 0).
        Rational t = -r / s;
        if (t <= 3) return s > 0 ? 1 : -1;       // pi > 3
        if (t >= Rational(22, 7)) return s > 0 ? -1 : 1;
        for (const auto& [lo, hi] : schedule_) {
            if (t < lo) return s > 0 ? 1 : -1;
            if (t > hi) return s > 0 ? -1 : 1;
        }
        throw StructureError("pi enclosure schedule exhausted (quantity too close to a multiple of pi)");
    }

    /// A rational strictly inside the real interval (lo_r + pi*lo_s, hi_r + pi*hi_s),
    /// chosen as the midpoint of the first enclosure level separating the bounds.
    std::optional<Rational> rational_between(const Rational& lo_r, const Rational& lo_s,
                                             const Rational& hi_r, const Rational& hi_s) const {
        for (const auto& [plo, phi] : schedule_) {
            // Upper rational bound of the lower endpoint, lower bound of the upper endpoint.
            Rational lo_ub = lo_r + (lo_s >= 0 ? phi : plo) * lo_s;
            Rational hi_lb = hi_r + (hi_s >= 0 ? plo : phi) * hi_s;
            if (lo_ub < hi_lb) return (lo_ub + hi_lb) / 2;
        }
        return std::nullopt;
    }

private:
    PiEnclosure() {
        // 100 decimal digits of pi (truncated), as an exact rational window.
        static const char* digits =
            "31415926535897932384626433832795028841971693993751"
            "05820974944592307816406286208998628034825342117067";
        BigInt mant(digits);
        BigInt den = boost::multiprecision::pow(BigInt(10), 99);
        Rational lo(mant, den), hi(mant + 1, den);

        schedule_.emplace_back(Rational(223, 71), Rational(22, 7));
        // Continued-fraction terms shared by lo and hi are genuine terms of pi;
        // their convergents alternate below/above pi.
        std::vector<BigInt> terms;
        {
            Rational a = lo, b = hi;
            while (true) {
                BigInt fa = boost::multiprecision::numerator(a) / boost::multiprecision::denominator(a);
                BigInt fb = boost::multiprecision::numerator(b) / boost::multiprecision::denominator(b);
                if (fa != fb) break;
                terms.push_back(fa);
                Rational ra = a - Rational(fa), rb = b - Rational(fb);
                if (ra == 0 || rb == 0) break;
                a = Rational(1) / ra;
                b = Rational(1) / rb;
                std::swap(a, b);  // reciprocation reverses the interval
            }
        }
        BigInt h0 = 1, h1 = terms.empty() ? BigInt(0) : terms[0];
        BigInt k0 = 0, k1 = 1;
        std::optional<Rational> below, above;
        for (std::size_t i = 1; i < terms.size(); ++i) {
            BigInt h2 = terms[i] * h1 + h0;
            BigInt k2 = terms[i] * k1 + k0;
            h0 = h1; h1 = h2;
            k0 = k1; k1 = k2;
            Rational conv(h1, k1);
            if (i % 2 == 1) above = conv;  // odd-index convergents exceed pi
            else below = conv;
            if (below && above && i >= 3) schedule_.emplace_back(*below, *above);
        }
    }

    std::vector<std::pair<Rational, Rational>> schedule_;
};

/// Exact value of the form r + pi*s with r, s rational. Every angle quantity
/// in the circle-order machinery has this shape, so signs are decidable.
struct QPi {
    Rational r;
    Rational s;

    QPi() = default;
    QPi(Rational r_, Rational s_) : r(std::move(r_)), s(std::move(s_)) {}
    static QPi rational(Rational q) { return QPi(std::move(q), Rational(0)); }
    static QPi pi_multiple(Rational s) { return QPi(Rational(0), std::move(s)); }

    QPi operator+(const QPi& o) const { return QPi(r + o.r, s + o.s); }
    QPi operator-(const QPi& o) const { return QPi(r - o.r, s - o.s); }
    QPi operator-() const { return QPi(-r, -s); }
    QPi scaled(const Rational& c) const { return QPi(r * c, s * c); }

    bool is_zero() const { return r == 0 && s == 0; }
    int sign() const { return PiEnclosure::instance().sign_of(r, s); }

    bool operator==(const QPi& o) const { return r == o.r && s == o.s; }
    bool operator<(const QPi& o) const { return (*this - o).sign() < 0; }
    bool operator<=(const QPi& o) const { return (*this - o).sign() <= 0; }

    double approx() const {
        return static_cast<double>(r) + 3.14159265358979323846 * static_cast<double>(s);
    }
};

/// A rational strictly between two QPi values (requires lo < hi).
inline Rational rational_strictly_between(const QPi& lo, const QPi& hi) {
    auto got = PiEnclosure::instance().rational_between(lo.r, lo.s, hi.r, hi.s);
    if (!got) throw StructureError("pi enclosure too coarse for rational selection");
    return *got;
}

}  // namespace fraisse
