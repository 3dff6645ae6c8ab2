#include "canonform/multipoly.hpp"

namespace canonform {

namespace {

template <class F>
std::pair<MultiPoly<F>, MultiPoly<F>> long_divide(const MultiPoly<F>& a, const MultiPoly<F>& b) {
    if (b.is_zero()) fail(ErrorCode::DivisionByZero, "multivariate division by zero");
    MultiPoly<F> q(a.field(), a.vars()), r(a.field(), a.vars()), rest = a;
    const auto& lb = b.leading_exponents();
    auto inv = b.leading_coefficient().inverse();
    while (!rest.is_zero()) {
        const auto lr = rest.leading_exponents();
        const auto lc = rest.leading_coefficient();
        bool divisible = true;
        Exponents shift(a.nvars());
        for (std::size_t i = 0; i < a.nvars(); ++i) {
            if (lr[i] < lb[i]) {
                divisible = false;
                break;
            }
            shift[i] = lr[i] - lb[i];
        }
        if (divisible) {
            auto f = lc * inv;
            q.add_term(shift, f);
            rest = rest - b.shifted(shift) * f;
        } else {
            r.add_term(lr, lc);
            Exponents e = lr;
            MultiPoly<F> lead(a.field(), a.vars());
            lead.add_term(e, lc);
            rest = rest - lead;
        }
    }
    return {q, r};
}

// Coefficients of p viewed as a polynomial in variable `var`.
template <class F>
std::vector<MultiPoly<F>> coefficients_in(const MultiPoly<F>& p, std::size_t var) {
    std::vector<MultiPoly<F>> out;
    int d = p.degree_in(var);
    for (int i = 0; i <= d; ++i) out.emplace_back(p.field(), p.vars());
    for (const auto& [e, c] : p.terms()) {
        Exponents f = e;
        f[var] = 0;
        out[e[var]].add_term(f, c);
    }
    return out;
}

template <class F>
MultiPoly<F> one_like(const MultiPoly<F>& p) {
    return MultiPoly<F>::constant(p.field(), p.vars(), p.field().one());
}

template <class F>
MultiPoly<F> gcd_rec(const MultiPoly<F>& a, const MultiPoly<F>& b, std::size_t nv);

// gcd of the coefficients in variable nv-1, a polynomial in the first nv-1 variables.
template <class F>
MultiPoly<F> content(const MultiPoly<F>& p, std::size_t nv) {
    MultiPoly<F> g(p.field(), p.vars());
    for (const auto& c : coefficients_in(p, nv - 1)) {
        if (c.is_zero()) continue;
        g = g.is_zero() ? c.monic() : gcd_rec(g, c, nv - 1);
        if (g.is_constant()) break;
    }
    return g;
}

// Pseudo-remainder of a by b with respect to variable `var`.
template <class F>
MultiPoly<F> pseudo_remainder(MultiPoly<F> a, const MultiPoly<F>& b, std::size_t var) {
    const int db = b.degree_in(var);
    const auto bc = coefficients_in(b, var);
    const auto& lcb = bc.back();
    while (!a.is_zero() && a.degree_in(var) >= db) {
        const int da = a.degree_in(var);
        auto lca = coefficients_in(a, var).back();
        Exponents shift(a.nvars(), 0);
        shift[var] = static_cast<std::uint32_t>(da - db);
        a = a * lcb - (b * lca).shifted(shift);
    }
    return a;
}

template <class F>
MultiPoly<F> gcd_rec(const MultiPoly<F>& a, const MultiPoly<F>& b, std::size_t nv) {
    if (a.is_zero()) return b.monic();
    if (b.is_zero()) return a.monic();
    if (nv == 0 || a.is_constant() || b.is_constant()) return one_like(a);
    const std::size_t var = nv - 1;
    if (a.degree_in(var) <= 0 && b.degree_in(var) <= 0) return gcd_rec(a, b, nv - 1);

    auto ca = content(a, nv), cb = content(b, nv);
    auto g_cont = gcd_rec(ca, cb, nv - 1);
    auto pa = exact_divide(a, ca), pb = exact_divide(b, cb);
    if (pa.degree_in(var) < pb.degree_in(var)) std::swap(pa, pb);
    while (pb.degree_in(var) > 0) {
        auto r = pseudo_remainder(pa, pb, var);
        pa = pb;
        if (r.is_zero()) {
            pb = MultiPoly<F>(a.field(), a.vars());
            break;
        }
        pb = exact_divide(r, content(r, nv));
    }
    // pb is zero (pa is the primitive gcd) or a nonzero primitive of degree 0 (gcd 1).
    MultiPoly<F> prim = pb.is_zero() ? pa : one_like(a);
    return (g_cont * prim).monic();
}

}  // namespace

template <class F>
MultiPoly<F> exact_divide(const MultiPoly<F>& a, const MultiPoly<F>& b) {
    auto [q, r] = long_divide(a, b);
    if (!r.is_zero())
        fail(ErrorCode::InvalidArgument, "'" + b.to_string() + "' does not divide '" + a.to_string() + "'");
    return q;
}

template <class F>
MultiPoly<F> division_remainder(const MultiPoly<F>& a, const MultiPoly<F>& b) {
    return long_divide(a, b).second;
}

template <class F>
MultiPoly<F> multipoly_gcd(const std::vector<MultiPoly<F>>& polys) {
    if (polys.empty()) fail(ErrorCode::InvalidArgument, "gcd of an empty list");
    MultiPoly<F> g(polys[0].field(), polys[0].vars());
    for (const auto& p : polys) {
        if (p.vars() != g.vars()) fail(ErrorCode::DimensionMismatch, "gcd inputs over different variables");
        if (p.is_zero()) continue;
        g = g.is_zero() ? p.monic() : gcd_rec(g, p, g.nvars());
    }
    if (g.is_zero()) fail(ErrorCode::AllZero, "every input polynomial is zero");
    return g;
}

template <class F>
MultiPoly<F> poly_determinant(const std::vector<std::vector<MultiPoly<F>>>& m) {
    const std::size_t n = m.size();
    if (n == 0) fail(ErrorCode::InvalidArgument, "determinant of an empty matrix");
    if (n == 1) return m[0][0];
    MultiPoly<F> det(m[0][0].field(), m[0][0].vars());
    for (std::size_t j = 0; j < n; ++j) {
        if (m[0][j].is_zero()) continue;
        std::vector<std::vector<MultiPoly<F>>> minor;
        for (std::size_t i = 1; i < n; ++i) {
            minor.emplace_back();
            for (std::size_t k = 0; k < n; ++k)
                if (k != j) minor.back().push_back(m[i][k]);
        }
        auto term = m[0][j] * poly_determinant(minor);
        det = (j % 2 == 0) ? det + term : det - term;
    }
    return det;
}

#define CANONFORM_INSTANTIATE(F)                                                              \
    template MultiPoly<F> exact_divide(const MultiPoly<F>&, const MultiPoly<F>&);              \
    template MultiPoly<F> division_remainder(const MultiPoly<F>&, const MultiPoly<F>&);        \
    template MultiPoly<F> multipoly_gcd(const std::vector<MultiPoly<F>>&);                     \
    template MultiPoly<F> poly_determinant(const std::vector<std::vector<MultiPoly<F>>>&);

CANONFORM_INSTANTIATE(PrimeField)
CANONFORM_INSTANTIATE(RationalField)

#undef CANONFORM_INSTANTIATE

}  // namespace canonform
