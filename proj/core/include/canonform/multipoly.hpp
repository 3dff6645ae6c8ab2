#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "canonform/errors.hpp"
#include "canonform/field.hpp"

namespace canonform {

using Exponents = std::vector<std::uint32_t>;

/// Lexicographic monomial order with the LAST variable most significant.
struct LastVarLex {
    bool operator()(const Exponents& a, const Exponents& b) const {
        for (std::size_t i = a.size(); i-- > 0;)
            if (a[i] != b[i]) return a[i] < b[i];
        return false;
    }
};

/// Sparse multivariate polynomial; zero coefficients are never stored.
template <class F>
class MultiPoly {
public:
    using Scalar = typename F::value_type;
    using Terms = std::map<Exponents, Scalar, LastVarLex>;

    MultiPoly(F field, std::vector<std::string> vars) : field_(std::move(field)), vars_(std::move(vars)) {}

    static MultiPoly constant(const F& field, std::vector<std::string> vars, const Scalar& c) {
        MultiPoly p(field, std::move(vars));
        p.add_term(Exponents(p.nvars(), 0), c);
        return p;
    }
    static MultiPoly variable(const F& field, std::vector<std::string> vars, std::size_t index) {
        MultiPoly p(field, std::move(vars));
        Exponents e(p.nvars(), 0);
        e.at(index) = 1;
        p.add_term(e, field.one());
        return p;
    }

    const F& field() const { return field_; }
    const std::vector<std::string>& vars() const { return vars_; }
    std::size_t nvars() const { return vars_.size(); }
    const Terms& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }
    bool is_constant() const {
        return terms_.empty() || (terms_.size() == 1 && total_degree() == 0);
    }

    void add_term(const Exponents& e, const Scalar& c) {
        if (e.size() != nvars()) fail(ErrorCode::DimensionMismatch, "exponent vector length");
        if (c.is_zero()) return;
        auto it = terms_.find(e);
        if (it == terms_.end()) {
            terms_.emplace(e, c);
            return;
        }
        it->second += c;
        if (it->second.is_zero()) terms_.erase(it);
    }

    int total_degree() const {
        int d = -1;
        for (const auto& [e, c] : terms_) {
            int s = 0;
            for (auto x : e) s += static_cast<int>(x);
            d = std::max(d, s);
        }
        return d;
    }

    /// Degree in one variable (-1 for zero).
    int degree_in(std::size_t var) const {
        int d = -1;
        for (const auto& [e, c] : terms_) d = std::max(d, static_cast<int>(e[var]));
        return d;
    }

    const Exponents& leading_exponents() const { return terms_.rbegin()->first; }
    const Scalar& leading_coefficient() const { return terms_.rbegin()->second; }

    MultiPoly operator+(const MultiPoly& o) const {
        check_compatible(o);
        MultiPoly r = *this;
        for (const auto& [e, c] : o.terms_) r.add_term(e, c);
        return r;
    }
    MultiPoly operator-(const MultiPoly& o) const {
        check_compatible(o);
        MultiPoly r = *this;
        for (const auto& [e, c] : o.terms_) r.add_term(e, -c);
        return r;
    }
    MultiPoly operator-() const { return *this * (-field_.one()); }
    MultiPoly operator*(const Scalar& s) const {
        MultiPoly r(field_, vars_);
        if (s.is_zero()) return r;
        for (const auto& [e, c] : terms_) r.terms_.emplace(e, c * s);
        return r;
    }
    MultiPoly operator*(const MultiPoly& o) const {
        check_compatible(o);
        MultiPoly r(field_, vars_);
        for (const auto& [ea, ca] : terms_)
            for (const auto& [eb, cb] : o.terms_) {
                Exponents e(nvars());
                for (std::size_t i = 0; i < nvars(); ++i) e[i] = ea[i] + eb[i];
                r.add_term(e, ca * cb);
            }
        return r;
    }

    /// Monomial shift: multiplies by the monomial with exponents `e`.
    MultiPoly shifted(const Exponents& e) const {
        MultiPoly r(field_, vars_);
        for (const auto& [ea, c] : terms_) {
            Exponents s(nvars());
            for (std::size_t i = 0; i < nvars(); ++i) s[i] = ea[i] + e[i];
            r.terms_.emplace(std::move(s), c);
        }
        return r;
    }

    Scalar eval(const std::vector<Scalar>& point) const {
        if (point.size() != nvars()) fail(ErrorCode::DimensionMismatch, "evaluation point length");
        Scalar s = field_.zero();
        for (const auto& [e, c] : terms_) {
            Scalar t = c;
            for (std::size_t i = 0; i < nvars(); ++i)
                for (std::uint32_t k = 0; k < e[i]; ++k) t *= point[i];
            s += t;
        }
        return s;
    }

    /// Scales so the leading coefficient (last-variable lex order) is one.
    MultiPoly monic() const { return is_zero() ? *this : *this * leading_coefficient().inverse(); }

    friend bool operator==(const MultiPoly& a, const MultiPoly& b) {
        return a.vars_ == b.vars_ && a.terms_ == b.terms_;
    }

    std::string to_string() const {
        if (terms_.empty()) return "0";
        std::string s;
        for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
            const auto& [e, c] = *it;
            if (!s.empty()) s += " + ";
            bool unit = c.is_one();
            std::string mono;
            for (std::size_t i = 0; i < nvars(); ++i) {
                if (e[i] == 0) continue;
                if (!mono.empty()) mono += "*";
                mono += vars_[i];
                if (e[i] > 1) mono += "^" + std::to_string(e[i]);
            }
            if (mono.empty()) s += c.to_string();
            else s += unit ? mono : c.to_string() + "*" + mono;
        }
        return s;
    }

private:
    void check_compatible(const MultiPoly& o) const {
        if (vars_ != o.vars_) fail(ErrorCode::DimensionMismatch, "polynomials over different variables");
    }

    F field_;
    std::vector<std::string> vars_;
    Terms terms_;
};

/// Exact quotient a / b; throws InvalidArgument when b does not divide a.
template <class F>
MultiPoly<F> exact_divide(const MultiPoly<F>& a, const MultiPoly<F>& b);

/// Remainder of multivariate long division in last-variable lex order.
template <class F>
MultiPoly<F> division_remainder(const MultiPoly<F>& a, const MultiPoly<F>& b);

/// Monic gcd of a nonempty list; throws AllZero when every input is zero.
template <class F>
MultiPoly<F> multipoly_gcd(const std::vector<MultiPoly<F>>& polys);

/// Determinant of a square matrix of polynomials (cofactor expansion).
template <class F>
MultiPoly<F> poly_determinant(const std::vector<std::vector<MultiPoly<F>>>& m);

}  // namespace canonform
