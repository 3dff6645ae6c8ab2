#pragma once

#include <algorithm>
#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "canonform/linalg.hpp"

namespace canonform {

/// Dense univariate polynomial, coefficients stored lowest degree first.
template <class F>
class Poly {
public:
    using Scalar = typename F::value_type;

    explicit Poly(F field) : field_(std::move(field)) {}
    Poly(F field, std::vector<Scalar> coeffs) : field_(std::move(field)), c_(std::move(coeffs)) { trim(); }

    static Poly constant(const F& field, Scalar c) { return Poly(field, {std::move(c)}); }
    static Poly x(const F& field) { return Poly(field, {field.zero(), field.one()}); }
    /// x - root
    static Poly linear(const F& field, const Scalar& root) { return Poly(field, {-root, field.one()}); }

    const F& field() const { return field_; }
    const std::vector<Scalar>& coeffs() const { return c_; }
    bool is_zero() const { return c_.empty(); }
    int degree() const { return static_cast<int>(c_.size()) - 1; }
    Scalar lead() const { return c_.empty() ? field_.zero() : c_.back(); }
    Scalar coeff(std::size_t i) const { return i < c_.size() ? c_[i] : field_.zero(); }

    Scalar eval(const Scalar& x) const {
        Scalar r = field_.zero();
        for (auto it = c_.rbegin(); it != c_.rend(); ++it) r = r * x + *it;
        return r;
    }

    Poly operator+(const Poly& o) const {
        std::vector<Scalar> r(std::max(c_.size(), o.c_.size()), field_.zero());
        for (std::size_t i = 0; i < c_.size(); ++i) r[i] += c_[i];
        for (std::size_t i = 0; i < o.c_.size(); ++i) r[i] += o.c_[i];
        return Poly(field_, std::move(r));
    }
    Poly operator-(const Poly& o) const { return *this + o * (-field_.one()); }
    Poly operator*(const Scalar& s) const {
        std::vector<Scalar> r = c_;
        for (auto& x : r) x *= s;
        return Poly(field_, std::move(r));
    }
    Poly operator*(const Poly& o) const {
        if (is_zero() || o.is_zero()) return Poly(field_);
        std::vector<Scalar> r(c_.size() + o.c_.size() - 1, field_.zero());
        for (std::size_t i = 0; i < c_.size(); ++i)
            for (std::size_t j = 0; j < o.c_.size(); ++j) r[i + j] += c_[i] * o.c_[j];
        return Poly(field_, std::move(r));
    }

    /// Quotient and remainder; divisor must be nonzero.
    std::pair<Poly, Poly> divmod(const Poly& d) const {
        if (d.is_zero()) fail(ErrorCode::DivisionByZero, "polynomial division by zero");
        std::vector<Scalar> rem = c_;
        if (degree() < d.degree()) return {Poly(field_), *this};
        std::vector<Scalar> q(c_.size() - d.c_.size() + 1, field_.zero());
        auto inv = d.lead().inverse();
        for (int k = degree() - d.degree(); k >= 0; --k) {
            Scalar f = rem[k + d.degree()] * inv;
            q[k] = f;
            if (f.is_zero()) continue;
            for (int j = 0; j <= d.degree(); ++j) rem[k + j] -= f * d.c_[j];
        }
        return {Poly(field_, std::move(q)), Poly(field_, std::move(rem))};
    }

    Poly monic() const { return is_zero() ? *this : *this * lead().inverse(); }

    friend bool operator==(const Poly& a, const Poly& b) { return a.c_ == b.c_; }

    std::string to_string() const {
        if (c_.empty()) return "0";
        std::string s;
        for (int i = degree(); i >= 0; --i) {
            if (c_[i].is_zero()) continue;
            if (!s.empty()) s += " + ";
            s += "(" + c_[i].to_string() + ")";
            if (i > 0) s += i == 1 ? "x" : "x^" + std::to_string(i);
        }
        return s;
    }

private:
    void trim() {
        while (!c_.empty() && c_.back().is_zero()) c_.pop_back();
    }

    F field_;
    std::vector<Scalar> c_;
};

/// det(xI - A) via reduction to upper Hessenberg form; valid over any field.
template <class F>
Poly<F> characteristic_polynomial(const Matrix<F>& a) {
    if (!a.square()) fail(ErrorCode::DimensionMismatch, "characteristic polynomial of non-square matrix");
    const auto& field = a.field();
    const std::size_t n = a.rows();
    Matrix<F> h = a;
    for (std::size_t j = 0; j + 2 < n; ++j) {
        std::size_t piv = j + 1;
        while (piv < n && h(piv, j).is_zero()) ++piv;
        if (piv == n) continue;
        if (piv != j + 1) {
            for (std::size_t k = 0; k < n; ++k) std::swap(h(piv, k), h(j + 1, k));
            for (std::size_t k = 0; k < n; ++k) std::swap(h(k, piv), h(k, j + 1));
        }
        auto inv = h(j + 1, j).inverse();
        for (std::size_t i = j + 2; i < n; ++i) {
            if (h(i, j).is_zero()) continue;
            auto u = h(i, j) * inv;
            for (std::size_t k = 0; k < n; ++k) h(i, k) -= u * h(j + 1, k);
            for (std::size_t k = 0; k < n; ++k) h(k, j + 1) += u * h(k, i);
        }
    }
    // p_m = (x - h_mm) p_{m-1} - sum_i h_{m-i,m} (prod_{k=m-i+1..m} h_{k,k-1}) p_{m-i-1}  (1-based)
    std::vector<Poly<F>> p;
    p.push_back(Poly<F>::constant(field, field.one()));
    for (std::size_t m = 1; m <= n; ++m) {
        Poly<F> next = Poly<F>::linear(field, h(m - 1, m - 1)) * p[m - 1];
        auto prod = field.one();
        for (std::size_t i = 1; i < m; ++i) {
            prod *= h(m - i, m - i - 1);
            auto coef = h(m - i - 1, m - 1) * prod;
            if (!coef.is_zero()) next = next - p[m - i - 1] * coef;
        }
        p.push_back(std::move(next));
    }
    return p[n];
}

/// Distinct roots of a nonzero polynomial lying in the field, sorted ascending.
std::vector<Fp> field_roots(const Poly<PrimeField>& f);
std::vector<Rational> field_roots(const Poly<RationalField>& f);

template <class F>
using Eigenvalues = std::vector<std::pair<typename F::value_type, std::size_t>>;

/// Factors the characteristic polynomial into linear factors over the field.
/// Eigenvalues come back strictly increasing; throws NonSplit otherwise.
template <class F>
Eigenvalues<F> split_char_poly(const Matrix<F>& a) {
    auto chi = characteristic_polynomial(a);
    Eigenvalues<F> out;
    std::size_t total = 0;
    for (const auto& root : field_roots(chi)) {
        std::size_t mult = 0;
        auto lin = Poly<F>::linear(a.field(), root);
        for (;;) {
            auto [q, r] = chi.divmod(lin);
            if (!r.is_zero()) break;
            chi = q;
            ++mult;
        }
        out.emplace_back(root, mult);
        total += mult;
    }
    if (total != a.rows())
        fail(ErrorCode::NonSplit, "characteristic polynomial has an irreducible factor of degree >= 2: " +
                                      chi.to_string());
    return out;
}

}  // namespace canonform
