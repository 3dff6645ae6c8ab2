#pragma once

#include <compare>
#include <cstdint>
#include <functional>
#include <optional>
#include <ostream>
#include <random>
#include <string>
#include <string_view>
#include <variant>

#include <gmpxx.h>

#include "canonform/errors.hpp"

namespace canonform {

struct FieldSpec {
    enum class Kind { Prime, Rationals };

    Kind kind = Kind::Rationals;
    std::uint32_t p = 0;

    static FieldSpec prime(std::uint32_t p) { return {Kind::Prime, p}; }
    static FieldSpec rationals() { return {Kind::Rationals, 0}; }

    /// Accepts "q", "Q", "gf 7", "gf7", "GF(7)".
    static FieldSpec parse(std::string_view text);

    bool is_prime() const { return kind == Kind::Prime; }
    std::string name() const;

    friend bool operator==(const FieldSpec&, const FieldSpec&) = default;
};

bool is_prime(std::uint64_t n);

/// Element of GF(p). Carries its modulus so arithmetic needs no context; the
/// representative is always in [0, p).
class Fp {
public:
    Fp() = default;
    Fp(std::uint32_t value, std::uint32_t modulus) : v_(value % modulus), p_(modulus) {}

    std::uint32_t value() const { return v_; }
    std::uint32_t modulus() const { return p_; }
    bool is_zero() const { return v_ == 0; }
    bool is_one() const { return v_ == 1; }

    Fp operator+(Fp o) const {
        std::uint32_t s = v_ + o.v_;
        return raw(s >= p_ ? s - p_ : s);
    }
    Fp operator-(Fp o) const { return raw(v_ >= o.v_ ? v_ - o.v_ : v_ + p_ - o.v_); }
    Fp operator-() const { return raw(v_ == 0 ? 0 : p_ - v_); }
    Fp operator*(Fp o) const {
        return raw(static_cast<std::uint32_t>(static_cast<std::uint64_t>(v_) * o.v_ % p_));
    }
    Fp inverse() const;
    Fp operator/(Fp o) const { return *this * o.inverse(); }

    Fp& operator+=(Fp o) { return *this = *this + o; }
    Fp& operator-=(Fp o) { return *this = *this - o; }
    Fp& operator*=(Fp o) { return *this = *this * o; }
    Fp& operator/=(Fp o) { return *this = *this / o; }

    friend bool operator==(Fp a, Fp b) { return a.v_ == b.v_; }
    // Total order: by canonical representative 0 < 1 < ... < p-1.
    friend std::strong_ordering operator<=>(Fp a, Fp b) { return a.v_ <=> b.v_; }

    std::string to_string() const { return std::to_string(v_); }

private:
    Fp raw(std::uint32_t v) const {
        Fp r;
        r.v_ = v;
        r.p_ = p_;
        return r;
    }

    std::uint32_t v_ = 0;
    std::uint32_t p_ = 1;
};

/// Element of Q; gmp keeps the fraction reduced with a positive denominator.
class Rational {
public:
    Rational() = default;
    explicit Rational(mpq_class q) : q_(std::move(q)) { q_.canonicalize(); }
    Rational(long num, long den) : q_(num, den) {
        if (den == 0) fail(ErrorCode::DivisionByZero, "rational with zero denominator");
        q_.canonicalize();
    }

    const mpq_class& get() const { return q_; }
    bool is_zero() const { return sgn(q_) == 0; }
    bool is_one() const { return q_ == 1; }

    Rational operator+(const Rational& o) const { return Rational(mpq_class(q_ + o.q_)); }
    Rational operator-(const Rational& o) const { return Rational(mpq_class(q_ - o.q_)); }
    Rational operator-() const { return Rational(mpq_class(-q_)); }
    Rational operator*(const Rational& o) const { return Rational(mpq_class(q_ * o.q_)); }
    Rational inverse() const;
    Rational operator/(const Rational& o) const { return *this * o.inverse(); }

    Rational& operator+=(const Rational& o) { q_ += o.q_; return *this; }
    Rational& operator-=(const Rational& o) { q_ -= o.q_; return *this; }
    Rational& operator*=(const Rational& o) { q_ *= o.q_; return *this; }
    Rational& operator/=(const Rational& o) { return *this = *this / o; }

    friend bool operator==(const Rational& a, const Rational& b) { return a.q_ == b.q_; }
    friend std::strong_ordering operator<=>(const Rational& a, const Rational& b) {
        int c = cmp(a.q_, b.q_);
        return c < 0 ? std::strong_ordering::less
                     : (c > 0 ? std::strong_ordering::greater : std::strong_ordering::equal);
    }

    std::string to_string() const;

private:
    mpq_class q_{0};
};

inline std::ostream& operator<<(std::ostream& os, const Fp& x) { return os << x.to_string(); }
inline std::ostream& operator<<(std::ostream& os, const Rational& x) { return os << x.to_string(); }

class PrimeField {
public:
    using value_type = Fp;

    explicit PrimeField(std::uint32_t p);

    std::uint32_t modulus() const { return p_; }
    FieldSpec spec() const { return FieldSpec::prime(p_); }
    std::optional<std::uint64_t> order() const { return p_; }

    Fp zero() const { return Fp(0, p_); }
    Fp one() const { return Fp(1, p_); }
    Fp from_int(long long n) const;
    Fp from_fraction(long long num, long long den) const;
    Fp parse(std::string_view text) const;
    /// Element with canonical representative `index` (index < p).
    Fp element(std::uint64_t index) const { return Fp(static_cast<std::uint32_t>(index), p_); }

    template <class Rng>
    Fp random(Rng& rng) const {
        std::uniform_int_distribution<std::uint32_t> dist(0, p_ - 1);
        return Fp(dist(rng), p_);
    }

    friend bool operator==(const PrimeField&, const PrimeField&) = default;

private:
    std::uint32_t p_;
};

class RationalField {
public:
    using value_type = Rational;

    FieldSpec spec() const { return FieldSpec::rationals(); }
    std::optional<std::uint64_t> order() const { return std::nullopt; }

    Rational zero() const { return Rational(0, 1); }
    Rational one() const { return Rational(1, 1); }
    Rational from_int(long long n) const { return Rational(mpq_class(mpz_class(std::to_string(n)))); }
    Rational from_fraction(long long num, long long den) const;
    Rational parse(std::string_view text) const;
    /// Enumerates 0, 1, -1, 2, -2, ... ; used for probing and sampling.
    Rational element(std::uint64_t index) const;

    /// Small-height random rational: numerator in [-bound, bound], denominator in [1, 3].
    template <class Rng>
    Rational random(Rng& rng, long bound = 4) const {
        std::uniform_int_distribution<long> num(-bound, bound);
        std::uniform_int_distribution<long> den(1, 3);
        return Rational(num(rng), den(rng));
    }

    friend bool operator==(const RationalField&, const RationalField&) { return true; }
};

using AnyField = std::variant<PrimeField, RationalField>;

/// Builds the runtime field handle; throws NonPrimeModulus for composite p.
AnyField make_field(const FieldSpec& spec);

template <class F>
concept ExactField = requires(const F& f, typename F::value_type x) {
    { f.zero() } -> std::same_as<typename F::value_type>;
    { f.one() } -> std::same_as<typename F::value_type>;
    { f.parse(std::string_view{}) } -> std::same_as<typename F::value_type>;
    { x + x } -> std::same_as<typename F::value_type>;
    { x * x } -> std::same_as<typename F::value_type>;
    { x.inverse() } -> std::same_as<typename F::value_type>;
    { x.is_zero() } -> std::same_as<bool>;
    { x.to_string() } -> std::same_as<std::string>;
};

static_assert(ExactField<PrimeField>);
static_assert(ExactField<RationalField>);

struct ScalarHash {
    std::size_t operator()(const Fp& x) const noexcept { return std::hash<std::uint32_t>{}(x.value()); }
    std::size_t operator()(const Rational& x) const noexcept {
        return std::hash<std::string>{}(x.to_string());
    }
};

}  // namespace canonform
