#include "canonform/poly.hpp"

#include <set>

namespace canonform {

std::vector<Fp> field_roots(const Poly<PrimeField>& f) {
    if (f.is_zero()) fail(ErrorCode::InvalidArgument, "roots of the zero polynomial");
    std::vector<Fp> roots;
    const auto& field = f.field();
    for (std::uint64_t i = 0; i < field.modulus(); ++i) {
        Fp x = field.element(i);
        if (f.eval(x).is_zero()) roots.push_back(x);
        if (roots.size() == static_cast<std::size_t>(f.degree())) break;
    }
    return roots;
}

namespace {

std::vector<mpz_class> positive_divisors(mpz_class n) {
    if (n < 0) n = -n;
    std::vector<mpz_class> small, large;
    for (mpz_class d = 1; d * d <= n; ++d) {
        if (n % d != 0) continue;
        small.push_back(d);
        if (d * d != n) large.push_back(n / d);
    }
    small.insert(small.end(), large.rbegin(), large.rend());
    return small;
}

}  // namespace

std::vector<Rational> field_roots(const Poly<RationalField>& f) {
    if (f.is_zero()) fail(ErrorCode::InvalidArgument, "roots of the zero polynomial");
    const auto& field = f.field();
    mpz_class lcm = 1;
    for (const auto& c : f.coeffs()) mpz_lcm(lcm.get_mpz_t(), lcm.get_mpz_t(), c.get().get_den().get_mpz_t());
    std::vector<mpz_class> ints;
    for (const auto& c : f.coeffs()) ints.push_back(mpz_class(c.get() * lcm));

    std::set<Rational> roots;
    std::size_t low = 0;
    while (low < ints.size() && ints[low] == 0) ++low;
    if (low > 0) roots.insert(field.zero());
    if (low + 1 < ints.size()) {
        const mpz_class& a0 = ints[low];
        const mpz_class& an = ints.back();
        auto num_divs = positive_divisors(a0);
        auto den_divs = positive_divisors(an);
        for (const auto& d : num_divs)
            for (const auto& e : den_divs)
                for (int sign : {1, -1}) {
                    Rational cand(mpq_class(mpz_class(sign * d), e));
                    if (roots.count(cand)) continue;
                    if (f.eval(cand).is_zero()) roots.insert(cand);
                }
    }
    return {roots.begin(), roots.end()};
}

}  // namespace canonform
