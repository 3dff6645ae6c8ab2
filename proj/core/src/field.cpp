#include "canonform/field.hpp"

#include <cctype>
#include <charconv>
#include <string>

namespace canonform {

std::string_view to_string(ErrorCode code) noexcept {
    switch (code) {
        case ErrorCode::NonPrimeModulus: return "NonPrimeModulus";
        case ErrorCode::DivisionByZero: return "DivisionByZero";
        case ErrorCode::FieldMismatch: return "FieldMismatch";
        case ErrorCode::DimensionMismatch: return "DimensionMismatch";
        case ErrorCode::NonSplit: return "NonSplitError";
        case ErrorCode::AllZero: return "AllZero";
        case ErrorCode::DuplicateEigenvalue: return "DuplicateEigenvalue";
        case ErrorCode::NotTriangular: return "NotTriangular";
        case ErrorCode::NotClosedUnderMultiplication: return "NotClosedUnderMultiplication";
        case ErrorCode::MissingIdentity: return "MissingIdentity";
        case ErrorCode::DiagonalProjectionFails: return "DiagonalProjectionFails";
        case ErrorCode::ClassMismatch: return "ClassMismatch";
        case ErrorCode::NotStepSequence: return "NotStepSequence";
        case ErrorCode::NotClosedUnderAction: return "NotClosedUnderAction";
        case ErrorCode::NotInSpace: return "NotInSpace";
        case ErrorCode::NotInRadicalSpace: return "NotInRadicalSpace";
        case ErrorCode::StateOutOfOrder: return "StateOutOfOrder";
        case ErrorCode::InternalInconsistency: return "InternalInconsistency";
        case ErrorCode::ExhaustedRetries: return "ExhaustedRetries";
        case ErrorCode::BudgetExceeded: return "BudgetExceeded";
        case ErrorCode::BoundViolated: return "BoundViolated";
        case ErrorCode::LemmaViolated: return "LemmaViolated";
        case ErrorCode::ParseError: return "ParseError";
        case ErrorCode::InvalidArgument: return "InvalidArgument";
    }
    return "Unknown";
}

bool is_prime(std::uint64_t n) {
    if (n < 2) return false;
    for (std::uint64_t d = 2; d * d <= n; ++d)
        if (n % d == 0) return false;
    return true;
}

namespace {

std::string trim(std::string_view s) {
    std::size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return std::string(s.substr(b, e - b));
}

// Splits "a/b" into integer parts; validates syntax.
std::pair<mpz_class, mpz_class> parse_fraction(std::string_view text) {
    std::string t = trim(text);
    auto slash = t.find('/');
    auto parse_int = [&](const std::string& s) {
        if (s.empty()) fail(ErrorCode::ParseError, "empty integer in scalar '" + t + "'");
        std::size_t i = (s[0] == '-' || s[0] == '+') ? 1 : 0;
        if (i == s.size()) fail(ErrorCode::ParseError, "bad scalar '" + t + "'");
        for (; i < s.size(); ++i)
            if (!std::isdigit(static_cast<unsigned char>(s[i])))
                fail(ErrorCode::ParseError, "bad scalar '" + t + "'");
        return mpz_class(s[0] == '+' ? s.substr(1) : s);
    };
    if (slash == std::string::npos) return {parse_int(t), mpz_class(1)};
    mpz_class num = parse_int(t.substr(0, slash));
    mpz_class den = parse_int(t.substr(slash + 1));
    if (den <= 0) fail(ErrorCode::ParseError, "denominator must be positive in '" + t + "'");
    return {num, den};
}

}  // namespace

FieldSpec FieldSpec::parse(std::string_view text) {
    std::string t;
    for (char c : text)
        if (!std::isspace(static_cast<unsigned char>(c)) && c != '(' && c != ')')
            t.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
    if (t == "q" || t == "rationals") return rationals();
    if (t.rfind("gf", 0) == 0 && t.size() > 2) {
        std::uint32_t p = 0;
        auto [ptr, ec] = std::from_chars(t.data() + 2, t.data() + t.size(), p);
        if (ec != std::errc() || ptr != t.data() + t.size())
            fail(ErrorCode::ParseError, "bad field '" + std::string(text) + "'");
        return prime(p);
    }
    fail(ErrorCode::ParseError, "bad field '" + std::string(text) + "'");
}

std::string FieldSpec::name() const { return is_prime() ? "gf" + std::to_string(p) : "q"; }

Fp Fp::inverse() const {
    if (v_ == 0) fail(ErrorCode::DivisionByZero, "inverse of 0 in GF(" + std::to_string(p_) + ")");
    std::int64_t a = v_, m = p_, x0 = 1, x1 = 0;
    while (m != 0) {
        std::int64_t q = a / m;
        std::int64_t t = a - q * m;
        a = m;
        m = t;
        t = x0 - q * x1;
        x0 = x1;
        x1 = t;
    }
    std::int64_t r = x0 % static_cast<std::int64_t>(p_);
    if (r < 0) r += p_;
    return Fp(static_cast<std::uint32_t>(r), p_);
}

Rational Rational::inverse() const {
    if (is_zero()) fail(ErrorCode::DivisionByZero, "inverse of 0 in Q");
    return Rational(mpq_class(1 / q_));
}

std::string Rational::to_string() const {
    if (q_.get_den() == 1) return q_.get_num().get_str();
    return q_.get_num().get_str() + "/" + q_.get_den().get_str();
}

PrimeField::PrimeField(std::uint32_t p) : p_(p) {
    if (!is_prime(p)) fail(ErrorCode::NonPrimeModulus, "modulus " + std::to_string(p) + " is not prime");
    if (p > 0x7fffffffu) fail(ErrorCode::InvalidArgument, "modulus too large");
}

Fp PrimeField::from_int(long long n) const {
    long long r = n % static_cast<long long>(p_);
    if (r < 0) r += p_;
    return Fp(static_cast<std::uint32_t>(r), p_);
}

Fp PrimeField::from_fraction(long long num, long long den) const {
    if (den == 0) fail(ErrorCode::DivisionByZero, "zero denominator");
    return from_int(num) / from_int(den);
}

Fp PrimeField::parse(std::string_view text) const {
    auto [num, den] = parse_fraction(text);
    mpz_class p(p_);
    mpz_class n = num % p, d = den % p;
    if (n < 0) n += p;
    if (d == 0) fail(ErrorCode::DivisionByZero, "denominator vanishes mod " + std::to_string(p_));
    return Fp(static_cast<std::uint32_t>(n.get_ui()), p_) / Fp(static_cast<std::uint32_t>(d.get_ui()), p_);
}

Rational RationalField::from_fraction(long long num, long long den) const {
    if (den == 0) fail(ErrorCode::DivisionByZero, "zero denominator");
    return Rational(mpq_class(mpz_class(std::to_string(num)), mpz_class(std::to_string(den))));
}

Rational RationalField::parse(std::string_view text) const {
    auto [num, den] = parse_fraction(text);
    return Rational(mpq_class(num, den));
}

Rational RationalField::element(std::uint64_t index) const {
    if (index == 0) return zero();
    long long k = static_cast<long long>((index + 1) / 2);
    return from_int(index % 2 == 1 ? k : -k);
}

AnyField make_field(const FieldSpec& spec) {
    if (spec.is_prime()) return PrimeField(spec.p);
    return RationalField{};
}

}  // namespace canonform
