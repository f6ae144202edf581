#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <memory>
#include <mutex>
#include <numeric>
#include <sstream>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "dgm/error.hpp"

namespace dgm {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

/// n/d for d != 0. Signs are moved to the numerator before construction
/// because the two-argument constructor rejects negative denominators.
inline Rational make_rational(BigInt n, BigInt d) {
    if (d < 0) {
        n = -n;
        d = -d;
    }
    return Rational(n, d);
}

enum class FieldKind { rationals, prime, extension };

namespace detail {

// Coefficient vectors over F_p, lowest degree first.
using Poly = std::vector<std::uint64_t>;

inline std::uint64_t mod_pow(std::uint64_t b, std::uint64_t e, std::uint64_t p) {
    std::uint64_t r = 1 % p;
    b %= p;
    while (e) {
        if (e & 1) r = r * b % p;
        b = b * b % p;
        e >>= 1;
    }
    return r;
}

inline std::uint64_t mod_inv(std::uint64_t a, std::uint64_t p) {
    // p prime, a != 0
    return mod_pow(a, p - 2, p);
}

inline bool is_prime(std::uint64_t n) {
    if (n < 2) return false;
    for (std::uint64_t d = 2; d * d <= n; ++d)
        if (n % d == 0) return false;
    return true;
}

inline void trim(Poly& a) {
    while (!a.empty() && a.back() == 0) a.pop_back();
}

inline Poly poly_mul(const Poly& a, const Poly& b, std::uint64_t p) {
    if (a.empty() || b.empty()) return {};
    Poly r(a.size() + b.size() - 1, 0);
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i] == 0) continue;
        for (std::size_t j = 0; j < b.size(); ++j) r[i + j] = (r[i + j] + a[i] * b[j]) % p;
    }
    trim(r);
    return r;
}

inline Poly poly_sub(Poly a, const Poly& b, std::uint64_t p) {
    if (a.size() < b.size()) a.resize(b.size(), 0);
    for (std::size_t i = 0; i < b.size(); ++i) a[i] = (a[i] + p - b[i]) % p;
    trim(a);
    return a;
}

// Remainder of a modulo b (b nonzero).
inline Poly poly_mod(Poly a, const Poly& b, std::uint64_t p) {
    trim(a);
    Poly bb = b;
    trim(bb);
    const std::uint64_t lead_inv = mod_inv(bb.back(), p);
    while (a.size() >= bb.size()) {
        const std::uint64_t c = a.back() * lead_inv % p;
        const std::size_t shift = a.size() - bb.size();
        for (std::size_t i = 0; i < bb.size(); ++i)
            a[shift + i] = (a[shift + i] + p - c * bb[i] % p) % p;
        trim(a);
    }
    return a;
}

inline Poly poly_gcd(Poly a, Poly b, std::uint64_t p) {
    trim(a);
    trim(b);
    while (!b.empty()) {
        Poly r = poly_mod(a, b, p);
        a = std::move(b);
        b = std::move(r);
    }
    if (!a.empty()) {
        const std::uint64_t inv = mod_inv(a.back(), p);
        for (auto& c : a) c = c * inv % p;
    }
    return a;
}

inline Poly poly_powmod(Poly base, std::uint64_t e, const Poly& m, std::uint64_t p) {
    Poly r{1};
    base = poly_mod(base, m, p);
    while (e) {
        if (e & 1) r = poly_mod(poly_mul(r, base, p), m, p);
        base = poly_mod(poly_mul(base, base, p), m, p);
        e >>= 1;
    }
    return r;
}

inline bool has_factor_of_degree_exhaustive(const Poly& f, std::size_t d, std::uint64_t p) {
    // Enumerate monic g of degree d.
    std::vector<std::uint64_t> low(d, 0);
    while (true) {
        Poly g = low;
        g.push_back(1);
        if (poly_mod(f, g, p).empty()) return true;
        std::size_t k = 0;
        while (k < d && ++low[k] == p) low[k++] = 0;
        if (k == d) return false;
    }
}

inline std::vector<std::uint64_t> prime_divisors(std::uint64_t n) {
    std::vector<std::uint64_t> out;
    for (std::uint64_t q = 2; q * q <= n; ++q) {
        if (n % q == 0) {
            out.push_back(q);
            while (n % q == 0) n /= q;
        }
    }
    if (n > 1) out.push_back(n);
    return out;
}

// Rabin's irreducibility test for a monic f of degree n over F_p.
inline bool rabin_irreducible(const Poly& f, std::uint64_t p) {
    const std::size_t n = f.size() - 1;
    const Poly x{0, 1};
    auto x_pow_p_k = [&](std::size_t k) {
        Poly r = x;
        for (std::size_t i = 0; i < k; ++i) r = poly_powmod(r, p, f, p);
        return r;
    };
    for (std::uint64_t q : prime_divisors(n)) {
        Poly h = poly_sub(x_pow_p_k(n / q), x, p);
        Poly g = poly_gcd(f, h, p);
        if (g.size() != 1) return false;
    }
    return poly_sub(x_pow_p_k(n), x, p).empty();
}

inline bool is_irreducible(const Poly& f, std::uint64_t p) {
    const std::size_t n = f.size() - 1;
    if (n == 0) return false;
    if (n == 1) return true;
    // Exhaustive factor search when the candidate space is small, Rabin otherwise.
    double candidates = 0;
    for (std::size_t d = 1; d <= n / 2; ++d) candidates += std::pow(static_cast<double>(p), double(d));
    if (n <= 4 && candidates <= 2e5) {
        for (std::size_t d = 1; d <= n / 2; ++d)
            if (has_factor_of_degree_exhaustive(f, d, p)) return false;
        return true;
    }
    return rabin_irreducible(f, p);
}

struct FieldData {
    FieldKind kind = FieldKind::rationals;
    std::uint64_t p = 0;
    Poly modulus;  // monic, lowest degree first; extension fields only

    bool operator==(const FieldData&) const = default;
};

}  // namespace detail

/// Handle to an interned field description. Two handles compare equal exactly
/// when they describe the same field, so comparisons are pointer compares.
class Field {
public:
    static Field rationals() { return Field(intern({FieldKind::rationals, 0, {}})); }

    static Field prime(std::uint64_t p) {
        if (p >= (std::uint64_t{1} << 31) || !detail::is_prime(p))
            throw InvalidInput("prime field characteristic must be a prime below 2^31, got " +
                               std::to_string(p));
        return Field(intern({FieldKind::prime, p, {}}));
    }

    /// F_p[x]/(f) for a monic irreducible f given lowest coefficient first.
    static Field extension(std::uint64_t p, std::vector<std::uint64_t> modulus) {
        if (p >= (std::uint64_t{1} << 31) || !detail::is_prime(p))
            throw InvalidInput("extension field characteristic must be a prime below 2^31");
        for (auto& c : modulus) c %= p;
        detail::trim(modulus);
        if (modulus.size() < 2 || modulus.back() != 1)
            throw InvalidInput("extension modulus must be monic of degree >= 1");
        if (!detail::is_irreducible(modulus, p))
            throw InvalidInput("extension modulus is reducible over F_" + std::to_string(p));
        if (modulus.size() == 2) return prime(p);
        return Field(intern({FieldKind::extension, p, std::move(modulus)}));
    }

    /// Smallest (in lexicographic coefficient order) monic irreducible of degree n.
    static std::vector<std::uint64_t> conway_like_modulus(std::uint64_t p, std::size_t n) {
        std::vector<std::uint64_t> low(n, 0);
        while (true) {
            detail::Poly f = low;
            f.push_back(1);
            if (low[0] != 0 || n == 1)
                if (detail::is_irreducible(f, p)) return f;
            std::size_t k = 0;
            while (k < n && ++low[k] == p) low[k++] = 0;
            if (k == n) throw InvalidInput("no irreducible polynomial found");
        }
    }

    FieldKind kind() const { return d_->kind; }
    std::uint64_t characteristic() const { return d_->p; }
    const std::vector<std::uint64_t>& modulus() const { return d_->modulus; }
    std::size_t extension_degree() const {
        return d_->kind == FieldKind::extension ? d_->modulus.size() - 1 : 1;
    }
    /// Number of elements, or 0 for the rationals.
    std::uint64_t order() const {
        if (d_->kind == FieldKind::rationals) return 0;
        std::uint64_t q = 1;
        for (std::size_t i = 0; i < extension_degree(); ++i) q *= d_->p;
        return q;
    }

    std::string name() const {
        switch (d_->kind) {
            case FieldKind::rationals: return "Q";
            case FieldKind::prime: return "F" + std::to_string(d_->p);
            case FieldKind::extension: {
                std::ostringstream os;
                os << "F" << d_->p << "[";
                for (std::size_t i = 0; i < d_->modulus.size(); ++i) os << (i ? "," : "") << d_->modulus[i];
                os << "]";
                return os.str();
            }
        }
        return "?";
    }

    bool operator==(const Field& o) const { return d_ == o.d_; }
    bool operator!=(const Field& o) const { return d_ != o.d_; }

    const detail::FieldData* data() const { return d_; }

private:
    explicit Field(const detail::FieldData* d) : d_(d) {}

    static const detail::FieldData* intern(detail::FieldData fd) {
        static std::mutex mu;
        static std::vector<std::unique_ptr<detail::FieldData>> table;
        std::lock_guard lock(mu);
        for (auto& e : table)
            if (*e == fd) return e.get();
        table.push_back(std::make_unique<detail::FieldData>(std::move(fd)));
        return table.back().get();
    }

    const detail::FieldData* d_;
};

/// An exact field element. Values are always kept in canonical form: reduced
/// fractions, least nonnegative residues, or polynomials of degree < n.
class Scalar {
public:
    using Value = std::variant<std::uint64_t, Rational, detail::Poly>;

    Scalar(Field f, long long v) : f_(f), v_(from_integer(f, v)) {}

    static Scalar zero(Field f) { return Scalar(f, 0); }
    static Scalar one(Field f) { return Scalar(f, 1); }

    static Scalar rational(const Rational& q) { return Scalar(Field::rationals(), Value(q)); }

    /// Element of an extension field from coefficients (lowest first); also
    /// accepted for prime fields when at most one coefficient is given.
    static Scalar from_coefficients(Field f, std::vector<std::uint64_t> c) {
        if (f.kind() == FieldKind::rationals) throw InvalidInput("coefficient lists need a finite field");
        const auto p = f.characteristic();
        for (auto& x : c) x %= p;
        if (f.kind() == FieldKind::prime) {
            detail::trim(c);
            if (c.size() > 1) throw InvalidInput("coefficient list too long for a prime field");
            return Scalar(f, Value(c.empty() ? std::uint64_t{0} : c[0]));
        }
        return Scalar(f, Value(normalize_poly(f, std::move(c))));
    }

    /// Parse the wire form: "a/b" or "a" over Q, "n" over F_p, "[c0,c1,...]"
    /// over an extension.
    static Scalar parse(Field f, std::string_view s);

    Field field() const { return f_; }
    const Value& value() const { return v_; }

    bool is_zero() const {
        switch (f_.kind()) {
            case FieldKind::prime: return std::get<std::uint64_t>(v_) == 0;
            case FieldKind::rationals: return std::get<Rational>(v_) == 0;
            case FieldKind::extension: return std::get<detail::Poly>(v_).empty();
        }
        return false;
    }
    bool is_one() const { return *this == one(f_); }

    /// Coefficients over the prime field, lowest first (finite fields only).
    std::vector<std::uint64_t> coefficients() const {
        if (f_.kind() == FieldKind::rationals) throw InvalidInput("rationals have no prime-field coordinates");
        if (f_.kind() == FieldKind::prime) return {std::get<std::uint64_t>(v_)};
        auto c = std::get<detail::Poly>(v_);
        c.resize(f_.extension_degree(), 0);
        return c;
    }

    Scalar operator+(const Scalar& o) const {
        check(o);
        switch (f_.kind()) {
            case FieldKind::prime: {
                const auto p = f_.characteristic();
                return Scalar(f_, Value((std::get<std::uint64_t>(v_) + std::get<std::uint64_t>(o.v_)) % p));
            }
            case FieldKind::rationals:
                return Scalar(f_, Value(Rational(std::get<Rational>(v_) + std::get<Rational>(o.v_))));
            case FieldKind::extension: {
                const auto p = f_.characteristic();
                detail::Poly a = std::get<detail::Poly>(v_);
                const auto& b = std::get<detail::Poly>(o.v_);
                if (a.size() < b.size()) a.resize(b.size(), 0);
                for (std::size_t i = 0; i < b.size(); ++i) a[i] = (a[i] + b[i]) % p;
                detail::trim(a);
                return Scalar(f_, Value(std::move(a)));
            }
        }
        throw InternalError("bad field kind");
    }

    Scalar operator-() const {
        switch (f_.kind()) {
            case FieldKind::prime: {
                const auto p = f_.characteristic();
                const auto a = std::get<std::uint64_t>(v_);
                return Scalar(f_, Value(a == 0 ? a : p - a));
            }
            case FieldKind::rationals: return Scalar(f_, Value(Rational(-std::get<Rational>(v_))));
            case FieldKind::extension: {
                const auto p = f_.characteristic();
                detail::Poly a = std::get<detail::Poly>(v_);
                for (auto& c : a) c = (p - c) % p;
                return Scalar(f_, Value(std::move(a)));
            }
        }
        throw InternalError("bad field kind");
    }

    Scalar operator-(const Scalar& o) const { return *this + (-o); }

    Scalar operator*(const Scalar& o) const {
        check(o);
        switch (f_.kind()) {
            case FieldKind::prime: {
                const auto p = f_.characteristic();
                return Scalar(f_, Value(std::get<std::uint64_t>(v_) * std::get<std::uint64_t>(o.v_) % p));
            }
            case FieldKind::rationals:
                return Scalar(f_, Value(Rational(std::get<Rational>(v_) * std::get<Rational>(o.v_))));
            case FieldKind::extension: {
                const auto p = f_.characteristic();
                auto prod = detail::poly_mul(std::get<detail::Poly>(v_), std::get<detail::Poly>(o.v_), p);
                return Scalar(f_, Value(detail::poly_mod(std::move(prod), f_.modulus(), p)));
            }
        }
        throw InternalError("bad field kind");
    }

    Scalar inverse() const {
        if (is_zero()) throw InvalidInput("division by zero");
        switch (f_.kind()) {
            case FieldKind::prime: {
                const auto p = f_.characteristic();
                return Scalar(f_, Value(detail::mod_inv(std::get<std::uint64_t>(v_), p)));
            }
            case FieldKind::rationals: return Scalar(f_, Value(Rational(1 / std::get<Rational>(v_))));
            case FieldKind::extension: return Scalar(f_, Value(poly_inverse()));
        }
        throw InternalError("bad field kind");
    }

    Scalar operator/(const Scalar& o) const { return *this * o.inverse(); }

    Scalar& operator+=(const Scalar& o) { return *this = *this + o; }
    Scalar& operator-=(const Scalar& o) { return *this = *this - o; }
    Scalar& operator*=(const Scalar& o) { return *this = *this * o; }

    bool operator==(const Scalar& o) const { return f_ == o.f_ && v_ == o.v_; }
    bool operator!=(const Scalar& o) const { return !(*this == o); }

    std::string to_string() const {
        switch (f_.kind()) {
            case FieldKind::prime: return std::to_string(std::get<std::uint64_t>(v_));
            case FieldKind::rationals: {
                const auto& q = std::get<Rational>(v_);
                if (denominator(q) == 1) return numerator(q).str();
                return numerator(q).str() + "/" + denominator(q).str();
            }
            case FieldKind::extension: {
                const auto& a = std::get<detail::Poly>(v_);
                std::string s = "[";
                for (std::size_t i = 0; i < f_.extension_degree(); ++i) {
                    if (i) s += ",";
                    s += std::to_string(i < a.size() ? a[i] : 0);
                }
                return s + "]";
            }
        }
        return "?";
    }

private:
    Scalar(Field f, Value v) : f_(f), v_(std::move(v)) {}

    void check(const Scalar& o) const {
        if (f_ != o.f_) throw FieldMismatch();
    }

    static detail::Poly normalize_poly(Field f, detail::Poly c) {
        return detail::poly_mod(std::move(c), f.modulus(), f.characteristic());
    }

    static Value from_integer(Field f, long long v) {
        switch (f.kind()) {
            case FieldKind::rationals: return Value(Rational(v));
            case FieldKind::prime:
            case FieldKind::extension: {
                const auto p = static_cast<long long>(f.characteristic());
                long long r = v % p;
                if (r < 0) r += p;
                if (f.kind() == FieldKind::prime) return Value(static_cast<std::uint64_t>(r));
                detail::Poly c;
                if (r) c.push_back(static_cast<std::uint64_t>(r));
                return Value(std::move(c));
            }
        }
        throw InternalError("bad field kind");
    }

    detail::Poly poly_inverse() const {
        // Extended Euclid on (a, modulus).
        const auto p = f_.characteristic();
        using detail::Poly;
        Poly r0 = f_.modulus(), r1 = std::get<Poly>(v_);
        Poly s0{}, s1{1};
        while (!r1.empty()) {
            // q = r0 / r1
            Poly q;
            Poly r = r0;
            const std::uint64_t lead_inv = detail::mod_inv(r1.back(), p);
            if (r.size() >= r1.size()) q.assign(r.size() - r1.size() + 1, 0);
            while (r.size() >= r1.size() && !r.empty()) {
                const std::uint64_t c = r.back() * lead_inv % p;
                const std::size_t shift = r.size() - r1.size();
                q[shift] = c;
                for (std::size_t i = 0; i < r1.size(); ++i) r[shift + i] = (r[shift + i] + p - c * r1[i] % p) % p;
                detail::trim(r);
            }
            detail::trim(q);
            Poly s2 = detail::poly_sub(s0, detail::poly_mul(q, s1, p), p);
            r0 = std::move(r1);
            r1 = std::move(r);
            s0 = std::move(s1);
            s1 = std::move(s2);
        }
        // r0 is a nonzero constant
        const std::uint64_t inv = detail::mod_inv(r0[0], p);
        for (auto& c : s0) c = c * inv % p;
        return detail::poly_mod(std::move(s0), f_.modulus(), p);
    }

    Field f_;
    Value v_;
};

namespace detail {

inline std::string_view strip(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
    return s;
}

inline BigInt parse_int(std::string_view s) {
    s = strip(s);
    if (s.empty()) throw InvalidInput("empty integer");
    std::size_t i = (s[0] == '-' || s[0] == '+') ? 1 : 0;
    if (i == s.size()) throw InvalidInput("malformed integer '" + std::string(s) + "'");
    for (std::size_t k = i; k < s.size(); ++k)
        if (s[k] < '0' || s[k] > '9') throw InvalidInput("malformed integer '" + std::string(s) + "'");
    return BigInt(std::string(s));
}

}  // namespace detail

inline Scalar Scalar::parse(Field f, std::string_view text) {
    auto s = detail::strip(text);
    switch (f.kind()) {
        case FieldKind::rationals: {
            const auto slash = s.find('/');
            BigInt num = detail::parse_int(s.substr(0, slash));
            BigInt den = slash == std::string_view::npos ? BigInt(1) : detail::parse_int(s.substr(slash + 1));
            if (den <= 0) throw InvalidInput("rational '" + std::string(s) + "' needs a positive denominator");
            return Scalar(f, Value(Rational(num, den)));
        }
        case FieldKind::prime: {
            BigInt n = detail::parse_int(s);
            BigInt p(f.characteristic());
            if (n < 0 || n >= p)
                throw InvalidInput("residue '" + std::string(s) + "' outside [0, " + p.str() + ")");
            return Scalar(f, Value(static_cast<std::uint64_t>(n)));
        }
        case FieldKind::extension: {
            if (s.size() < 2 || s.front() != '[' || s.back() != ']')
                throw InvalidInput("extension element '" + std::string(s) + "' must look like [c0,c1,...]");
            std::vector<std::uint64_t> coeffs;
            auto body = s.substr(1, s.size() - 2);
            while (!detail::strip(body).empty()) {
                const auto comma = body.find(',');
                BigInt c = detail::parse_int(body.substr(0, comma));
                if (c < 0 || c >= BigInt(f.characteristic()))
                    throw InvalidInput("coefficient out of range in '" + std::string(s) + "'");
                coeffs.push_back(static_cast<std::uint64_t>(c));
                if (comma == std::string_view::npos) break;
                body.remove_prefix(comma + 1);
            }
            if (coeffs.size() > f.extension_degree())
                throw InvalidInput("too many coefficients in '" + std::string(s) + "'");
            return from_coefficients(f, std::move(coeffs));
        }
    }
    throw InternalError("bad field kind");
}

/// Parse a field name: "Q", "F<p>", or "F<p>[c0,...,cn]" for F_p[x]/(c0 + ... + cn x^n).
inline Field parse_field(std::string_view name) {
    auto s = detail::strip(name);
    if (s == "Q" || s == "QQ") return Field::rationals();
    if (s.size() >= 2 && s[0] == 'F') {
        const auto br = s.find('[');
        const BigInt p = detail::parse_int(s.substr(1, br == std::string_view::npos ? s.npos : br - 1));
        if (p <= 1 || p >= BigInt(1) << 31) throw InvalidInput("bad characteristic in field '" + std::string(s) + "'");
        if (br == std::string_view::npos) return Field::prime(static_cast<std::uint64_t>(p));
        if (s.back() != ']') throw InvalidInput("bad field '" + std::string(s) + "'");
        std::vector<std::uint64_t> mod;
        auto body = s.substr(br + 1, s.size() - br - 2);
        while (true) {
            const auto comma = body.find(',');
            mod.push_back(static_cast<std::uint64_t>(detail::parse_int(body.substr(0, comma))));
            if (comma == std::string_view::npos) break;
            body.remove_prefix(comma + 1);
        }
        return Field::extension(static_cast<std::uint64_t>(p), std::move(mod));
    }
    throw InvalidInput("unknown field '" + std::string(s) + "'");
}

/// All elements of a finite field, in a fixed enumeration order.
inline std::vector<Scalar> field_elements(Field f) {
    if (f.kind() == FieldKind::rationals) throw InvalidInput("cannot enumerate the rationals");
    const auto p = f.characteristic();
    const auto n = f.extension_degree();
    std::vector<Scalar> out;
    std::vector<std::uint64_t> c(n, 0);
    while (true) {
        out.push_back(Scalar::from_coefficients(f, c));
        std::size_t k = 0;
        while (k < n && ++c[k] == p) c[k++] = 0;
        if (k == n) break;
    }
    return out;
}

}  // namespace dgm
