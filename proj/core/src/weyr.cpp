#include "canonform/weyr.hpp"

#include <algorithm>
#include <functional>

namespace canonform {

std::vector<std::size_t> conjugate_partition(std::vector<std::size_t> p) {
    std::sort(p.begin(), p.end(), std::greater<>());
    while (!p.empty() && p.back() == 0) p.pop_back();
    std::vector<std::size_t> c;
    if (p.empty()) return c;
    for (std::size_t k = 1; k <= p.front(); ++k)
        c.push_back(static_cast<std::size_t>(std::count_if(p.begin(), p.end(), [k](auto x) { return x >= k; })));
    return c;
}

template <class F>
std::size_t WeyrStructure<F>::size() const {
    std::size_t n = 0;
    for (const auto& b : blocks)
        for (auto m : b.partition) n += m;
    return n;
}

template <class F>
Matrix<F> WeyrStructure<F>::matrix(const F& field) const {
    Matrix<F> w(field, size(), size());
    std::size_t off = 0;
    for (const auto& b : blocks) {
        for (std::size_t j = 0; j < b.partition.size(); ++j) {
            for (std::size_t k = 0; k < b.partition[j]; ++k) w(off + k, off + k) = b.eigenvalue;
            if (j + 1 < b.partition.size())
                for (std::size_t k = 0; k < b.partition[j + 1]; ++k) w(off + k, off + b.partition[j] + k) = field.one();
            off += b.partition[j];
        }
    }
    return w;
}

template <class F>
std::vector<std::vector<std::size_t>> WeyrStructure<F>::jordan_sizes() const {
    std::vector<std::vector<std::size_t>> out;
    for (const auto& b : blocks) out.push_back(conjugate_partition(b.partition));
    return out;
}

template <class F>
std::string WeyrStructure<F>::to_string() const {
    std::string s;
    for (const auto& b : blocks) {
        if (!s.empty()) s += "; ";
        s += b.eigenvalue.to_string() + ":(";
        for (std::size_t j = 0; j < b.partition.size(); ++j) s += (j ? "," : "") + std::to_string(b.partition[j]);
        s += ")";
    }
    return s;
}

template <class F>
WeyrStructure<F> weyr_from_jordan(const std::vector<JordanData<F>>& data) {
    WeyrStructure<F> st;
    for (const auto& d : data) {
        for (const auto& b : st.blocks)
            if (b.eigenvalue == d.eigenvalue)
                fail(ErrorCode::DuplicateEigenvalue, "eigenvalue " + d.eigenvalue.to_string() + " listed twice");
        auto part = conjugate_partition(d.block_sizes);
        if (part.empty()) continue;
        st.blocks.push_back({d.eigenvalue, std::move(part)});
    }
    std::sort(st.blocks.begin(), st.blocks.end(),
              [](const auto& a, const auto& b) { return a.eigenvalue < b.eigenvalue; });
    return st;
}

template <class F>
WeyrResult<F> weyr_form(const Matrix<F>& a) {
    const auto& field = a.field();
    const std::size_t n = a.rows();
    auto eig = split_char_poly(a);
    WeyrResult<F> out{Matrix<F>(field, n, n), Matrix<F>(field, n, n), {}};
    std::size_t col = 0;
    for (const auto& [lambda, mult] : eig) {
        Matrix<F> nil = a - Matrix<F>::identity(field, n) * lambda;
        // kernels of nil^j until they reach the generalized eigenspace
        std::vector<std::vector<Vec<F>>> kernels{{}};
        Matrix<F> power = Matrix<F>::identity(field, n);
        while (kernels.back().size() < mult) {
            power = power * nil;
            kernels.push_back(nullspace(power));
        }
        const std::size_t q = kernels.size() - 1;
        std::vector<std::vector<Vec<F>>> layers(q + 1);
        for (std::size_t j = q; j >= 1; --j) {
            Subspace<F> span(field, n, kernels[j - 1]);
            if (j < q)
                for (const auto& v : layers[j + 1]) {
                    auto image = mat_vec(nil, v);
                    span.add(image);
                    layers[j].push_back(std::move(image));
                }
            for (const auto& v : kernels[j])
                if (span.add(v)) layers[j].push_back(v);
        }
        WeyrBlock<F> block{lambda, {}};
        for (std::size_t j = 1; j <= q; ++j) {
            block.partition.push_back(layers[j].size());
            for (const auto& v : layers[j]) {
                for (std::size_t i = 0; i < n; ++i) out.s(i, col) = v[i];
                ++col;
            }
        }
        out.structure.blocks.push_back(std::move(block));
    }
    out.w = out.structure.matrix(field);
    // exact arithmetic: the construction is checked, never assumed
    if (a * out.s != out.s * out.w || !try_inverse(out.s))
        fail(ErrorCode::InternalInconsistency, "Weyr transform failed to conjugate");
    return out;
}

template <class F>
std::vector<std::size_t> commutant_partition(const WeyrStructure<F>& structure) {
    std::vector<std::size_t> out;
    for (const auto& b : structure.blocks) out.insert(out.end(), b.partition.begin(), b.partition.end());
    return out;
}

#define CANONFORM_INSTANTIATE(F)                                                         \
    template struct WeyrStructure<F>;                                                    \
    template WeyrStructure<F> weyr_from_jordan(const std::vector<JordanData<F>>&);      \
    template WeyrResult<F> weyr_form(const Matrix<F>&);                                  \
    template std::vector<std::size_t> commutant_partition(const WeyrStructure<F>&);

CANONFORM_INSTANTIATE(PrimeField)
CANONFORM_INSTANTIATE(RationalField)

#undef CANONFORM_INSTANTIATE

}  // namespace canonform
