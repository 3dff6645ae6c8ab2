#include "canonform/families.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <random>

namespace canonform {

namespace {

template <class F>
std::string shape(const Box<F>& b) {
    return std::to_string(b.rows.start) + "+" + std::to_string(b.rows.size) + "x" + std::to_string(b.cols.start) + "+" +
           std::to_string(b.cols.size);
}

std::string partition_text(const std::vector<std::size_t>& p) {
    std::string s = "(";
    for (std::size_t k = 0; k < p.size(); ++k) s += (k ? "," : "") + std::to_string(p[k]);
    return s + ")";
}

// Key with the eigenvalue order inside a box forgotten: partitions sorted per
// box, and only the number of distinct eigenvalues kept.
template <class F>
std::string loose_key(const CanonicalForm<F>& form) {
    std::string key = form.partition.to_string();
    std::vector<typename F::value_type> seen;
    for (const auto& b : form.boxes) {
        key += ";" + shape(b) + std::string(to_string(b.kind));
        if (b.kind == BoxKind::Stairs) key += std::to_string(b.rank);
        if (b.kind != BoxKind::Weyr) continue;
        std::vector<std::string> parts;
        for (const auto& wb : b.weyr.blocks) {
            parts.push_back(partition_text(wb.partition));
            if (std::find(seen.begin(), seen.end(), wb.eigenvalue) == seen.end()) seen.push_back(wb.eigenvalue);
        }
        std::sort(parts.begin(), parts.end());
        for (const auto& p : parts) key += p;
    }
    return key + "#" + std::to_string(seen.size());
}

template <class F>
std::vector<typename F::value_type> probe_values(const F& field) {
    std::vector<typename F::value_type> out;
    std::size_t count = 12;
    if (auto q = field.order(); q && *q <= 64) count = static_cast<std::size_t>(*q);
    for (std::size_t i = 0; i < count; ++i) out.push_back(field.element(i));
    return out;
}

template <class F>
std::optional<Matrix<F>> assign(const Engine<F>& engine, const Matrix<F>& base,
                                const std::vector<const ParameterSlot<F>*>& slots,
                                const std::vector<typename F::value_type>& values) {
    Matrix<F> x = base;
    for (std::size_t k = 0; k < slots.size(); ++k)
        for (auto [i, j] : slots[k]->positions) x(i, j) = values[k];
    x = engine.space().from_free(engine.space().free_values(x));
    for (std::size_t k = 0; k < slots.size(); ++k)
        for (auto [i, j] : slots[k]->positions)
            if (!(x(i, j) == values[k])) return std::nullopt;
    return x;
}

}  // namespace

template <class F>
std::string family_key(const CanonicalForm<F>& form) {
    std::string key = form.partition.to_string();
    std::vector<typename F::value_type> seen;
    for (const auto& b : form.boxes) {
        key += ";" + shape(b) + std::string(to_string(b.kind));
        if (b.kind == BoxKind::Stairs) key += std::to_string(b.rank);
        if (b.kind != BoxKind::Weyr) continue;
        for (const auto& wb : b.weyr.blocks) {
            auto it = std::find(seen.begin(), seen.end(), wb.eigenvalue);
            std::size_t idx = static_cast<std::size_t>(it - seen.begin());
            if (it == seen.end()) seen.push_back(wb.eigenvalue);
            key += "e" + std::to_string(idx) + partition_text(wb.partition);
        }
    }
    return key;
}

template <class F>
std::string DomainConstraint<F>::to_string() const {
    auto name = [](std::size_t k) { return "l" + std::to_string(k + 1); };
    switch (kind) {
        case ConstraintKind::NotEqualConstant: return name(slot) + " != " + constant.to_string();
        case ConstraintKind::NotEqualSlot: return name(slot) + " != " + name(other);
        case ConstraintKind::Precedes: return name(slot) + " < " + name(other);
    }
    return "?";
}

template <class F>
std::size_t ParametricForm<F>::parameter_count() const {
    return static_cast<std::size_t>(std::count_if(slots.begin(), slots.end(), [](const auto& s) { return s.infinite; }));
}

template <class F>
Matrix<F> ParametricForm<F>::substitute(const Engine<F>& engine,
                                        const std::vector<typename F::value_type>& values) const {
    if (values.size() != parameter_count())
        fail(ErrorCode::DimensionMismatch, "expected " + std::to_string(parameter_count()) + " parameter values");
    std::vector<const ParameterSlot<F>*> ptrs;
    for (std::size_t k = 0; k < values.size(); ++k) ptrs.push_back(&slots[k]);
    auto x = assign(engine, skeleton.matrix, ptrs, values);
    if (!x) fail(ErrorCode::NotInSpace, "parameter positions are not free entries");
    return *x;
}

template <class F>
bool ParametricForm<F>::admits(const std::vector<typename F::value_type>& values) const {
    if (values.size() != parameter_count()) return false;
    auto value_of = [&](std::size_t k) { return k < values.size() ? values[k] : slots[k].value; };
    for (const auto& c : domain) {
        switch (c.kind) {
            case ConstraintKind::NotEqualConstant:
                if (value_of(c.slot) == c.constant) return false;
                break;
            case ConstraintKind::NotEqualSlot:
                if (value_of(c.slot) == value_of(c.other)) return false;
                break;
            case ConstraintKind::Precedes:
                if (!(value_of(c.slot) < value_of(c.other))) return false;
                break;
        }
    }
    return true;
}

template <class F>
ParametricForm<F> parametrize(const Engine<F>& engine, const CanonicalForm<F>& form) {
    const auto& field = form.matrix.field();
    ParametricForm<F> out{form, family_key(form), {}, {}, false};

    // one slot per distinct eigenvalue; equal eigenvalues in different boxes share it
    std::vector<ParameterSlot<F>> slots;
    std::vector<std::vector<std::size_t>> boxes_of;
    for (std::size_t bi = 0; bi < form.boxes.size(); ++bi) {
        const auto& b = form.boxes[bi];
        if (b.kind != BoxKind::Weyr) continue;
        std::size_t off = 0;
        for (const auto& wb : b.weyr.blocks) {
            std::size_t size = std::accumulate(wb.partition.begin(), wb.partition.end(), std::size_t{0});
            auto it = std::find_if(slots.begin(), slots.end(), [&](const auto& s) { return s.value == wb.eigenvalue; });
            if (it == slots.end()) {
                slots.push_back({bi, wb.eigenvalue, {}, false, 0, {}});
                boxes_of.emplace_back();
                it = slots.end() - 1;
            }
            auto k = static_cast<std::size_t>(it - slots.begin());
            if (std::find(boxes_of[k].begin(), boxes_of[k].end(), bi) == boxes_of[k].end()) boxes_of[k].push_back(bi);
            for (std::size_t d = 0; d < size; ++d) it->positions.emplace_back(b.rows.start + off + d, b.cols.start + off + d);
            off += size;
        }
    }

    const auto loose = loose_key(form);
    const auto probes = probe_values(field);
    const std::size_t threshold = std::max<std::size_t>(2, probes.size() > slots.size() ? probes.size() - slots.size() : 0);
    auto keeps = [&](const std::vector<const ParameterSlot<F>*>& which, const std::vector<typename F::value_type>& vals) {
        auto x = assign(engine, form.matrix, which, vals);
        if (!x) return false;
        try {
            return loose_key(engine.canonicalize(*x)) == loose;
        } catch (const Error& e) {
            if (e.code() != ErrorCode::NonSplit) throw;
        }
        return false;
    };
    for (auto& slot : slots) {
        for (const auto& c : probes) {
            if (keeps({&slot}, {c}))
                ++slot.admissible;
            else
                slot.excluded.push_back(c);
        }
        slot.infinite = slot.admissible >= threshold;
    }
    // infinite slots first, each group in order of first position
    std::vector<std::size_t> order(slots.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) {
        if (slots[a].infinite != slots[b].infinite) return slots[a].infinite;
        return slots[a].positions.front() < slots[b].positions.front();
    });
    std::vector<std::size_t> rank_of(slots.size());
    for (std::size_t k = 0; k < order.size(); ++k) {
        rank_of[order[k]] = k;
        out.slots.push_back(slots[order[k]]);
    }

    for (std::size_t a = 0; a < slots.size(); ++a) {
        if (!slots[a].infinite) continue;
        for (const auto& c : slots[a].excluded) {
            // a clash with another slot's value is explained only if moving
            // that slot away makes c admissible
            bool explained = false;
            for (std::size_t b = 0; b < slots.size() && !explained; ++b) {
                if (b == a || !(slots[b].value == c)) continue;
                for (const auto& v : probes) {
                    bool clash = std::any_of(slots.begin(), slots.end(), [&](const auto& o) { return o.value == v; });
                    if (clash) continue;
                    explained = keeps({&slots[a], &slots[b]}, {c, v});
                    break;
                }
            }
            if (!explained) out.domain.push_back({ConstraintKind::NotEqualConstant, rank_of[a], 0, c});
        }
    }
    for (std::size_t a = 0; a < slots.size(); ++a)
        for (std::size_t b = a + 1; b < slots.size(); ++b) {
            if (!slots[a].infinite && !slots[b].infinite) continue;
            bool shared = std::any_of(boxes_of[a].begin(), boxes_of[a].end(), [&](std::size_t bi) {
                return std::find(boxes_of[b].begin(), boxes_of[b].end(), bi) != boxes_of[b].end();
            });
            if (!shared)
                out.domain.push_back({ConstraintKind::NotEqualSlot, rank_of[a], rank_of[b], field.zero()});
            else if (slots[a].value < slots[b].value)
                out.domain.push_back({ConstraintKind::Precedes, rank_of[a], rank_of[b], field.zero()});
            else
                out.domain.push_back({ConstraintKind::Precedes, rank_of[b], rank_of[a], field.zero()});
        }

    // joint check: admitted assignments must reproduce themselves
    const std::size_t np = out.parameter_count();
    if (np > 0) {
        std::mt19937_64 rng(0);
        for (int trial = 0, hits = 0; trial < 200 && hits < 20; ++trial) {
            std::vector<typename F::value_type> vals;
            for (std::size_t k = 0; k < np; ++k) vals.push_back(probes[rng() % probes.size()]);
            if (!out.admits(vals)) continue;
            ++hits;
            try {
                auto x = out.substitute(engine, vals);
                if (!(engine.canonicalize(x).matrix == x)) out.flagged = true;
            } catch (const Error&) {
                out.flagged = true;
            }
        }
    }
    return out;
}

template <class F>
std::vector<Summand<F>> decompose(const Engine<F>& engine, const CanonicalForm<F>& form) {
    const auto& strips = form.partition.strips;
    const std::size_t n = form.matrix.rows();
    std::vector<std::size_t> parent(n);
    std::iota(parent.begin(), parent.end(), 0);
    auto find = [&](std::size_t x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    };
    auto unite = [&](std::size_t a, std::size_t b) { parent[find(a)] = find(b); };
    // index level: nonzero entries, and matching offsets of linked substrips
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            if (!form.matrix(i, j).is_zero()) unite(i, j);
    for (std::size_t p = 0; p < strips.size(); ++p)
        for (std::size_t q = p + 1; q < strips.size(); ++q)
            if (strips[p].link == strips[q].link)
                for (std::size_t k = 0; k < strips[p].range.size; ++k)
                    unite(strips[p].range.start + k, strips[q].range.start + k);

    std::map<std::size_t, std::vector<std::size_t>> components;
    for (std::size_t i = 0; i < n; ++i) components[find(i)].push_back(i);

    std::vector<Summand<F>> out;
    for (const auto& [root, indices] : components) {
        Summand<F> s{{indices}, StepSequence{std::vector<std::size_t>(form.n.sizes.size(), 0)}, form.matrix, true};
        for (auto i : indices) ++s.n.sizes[strips[form.partition.strip_at(i)].origin];
        Matrix<F> m(form.matrix.field(), indices.size(), indices.size());
        for (std::size_t a = 0; a < indices.size(); ++a)
            for (std::size_t b = 0; b < indices.size(); ++b) m(a, b) = form.matrix(indices[a], indices[b]);
        s.matrix = std::move(m);
        try {
            s.in_space = inflate(engine.problem(), s.n).contains(s.matrix);
        } catch (const Error&) {
            s.in_space = false;
        }
        auto same = std::find_if(out.begin(), out.end(), [&](const auto& o) { return o.n == s.n && o.matrix == s.matrix; });
        if (same != out.end())
            same->occurrences.push_back(indices);
        else
            out.push_back(std::move(s));
    }
    return out;
}

template <class F>
bool is_indecomposable(const Engine<F>& engine, const CanonicalForm<F>& form) {
    auto parts = decompose(engine, form);
    return parts.size() == 1 && parts.front().multiplicity() == 1;
}

#define CANONFORM_INSTANTIATE(F)                                                             \
    template std::string family_key(const CanonicalForm<F>&);                               \
    template struct DomainConstraint<F>;                                                     \
    template struct ParametricForm<F>;                                                       \
    template ParametricForm<F> parametrize(const Engine<F>&, const CanonicalForm<F>&);       \
    template std::vector<Summand<F>> decompose(const Engine<F>&, const CanonicalForm<F>&);   \
    template bool is_indecomposable(const Engine<F>&, const CanonicalForm<F>&);

CANONFORM_INSTANTIATE(PrimeField)
CANONFORM_INSTANTIATE(RationalField)

#undef CANONFORM_INSTANTIATE

}  // namespace canonform
