#include "canonform/engine.hpp"

#include <algorithm>
#include <map>
#include <numeric>

namespace canonform {

std::size_t Partition::strip_at(std::size_t index) const {
    for (std::size_t k = 0; k < strips.size(); ++k)
        if (index >= strips[k].range.start && index < strips[k].range.end()) return k;
    fail(ErrorCode::InvalidArgument, "index " + std::to_string(index) + " outside the partition");
}

std::size_t Partition::link_count() const {
    std::size_t c = 0;
    for (const auto& s : strips) c = std::max(c, s.link + 1);
    return c;
}

std::string Partition::to_string() const {
    std::string s = "[";
    for (std::size_t k = 0; k < strips.size(); ++k) {
        if (k) s += "|";
        const auto& r = strips[k].range;
        for (std::size_t i = r.start; i < r.end(); ++i) s += (i > r.start ? "," : "") + std::to_string(i + 1);
    }
    return s + "]";
}

std::string_view to_string(BoxKind kind) {
    switch (kind) {
        case BoxKind::Zero: return "zero";
        case BoxKind::Stairs: return "stairs";
        case BoxKind::Weyr: return "weyr";
    }
    return "?";
}

template <class F>
std::string Box<F>::describe() const {
    auto range = [](const Interval& r) {
        return std::to_string(r.start + 1) + (r.size > 1 ? ".." + std::to_string(r.end()) : "");
    };
    std::string s = "rows " + range(rows) + ", cols " + range(cols) + ": " + std::string(to_string(kind));
    if (kind == BoxKind::Stairs) s += " rank " + std::to_string(rank);
    if (kind == BoxKind::Weyr) s += " " + weyr.to_string();
    return s;
}

template <class F>
bool CanonicalForm<F>::same_as(const CanonicalForm& o) const {
    if (!(matrix == o.matrix) || !(partition == o.partition) || boxes.size() != o.boxes.size()) return false;
    for (std::size_t k = 0; k < boxes.size(); ++k) {
        const auto &a = boxes[k], &b = o.boxes[k];
        if (a.rows != b.rows || a.cols != b.cols || a.kind != b.kind || a.rank != b.rank || !(a.weyr == b.weyr))
            return false;
    }
    return true;
}

std::vector<std::pair<std::size_t, std::size_t>> box_order(std::size_t substrips) {
    std::vector<std::pair<std::size_t, std::size_t>> out;
    for (const auto& p : grid_order(substrips, substrips)) out.emplace_back(p.row, p.col);
    return out;
}

// ---------------------------------------------------------------- Engine

template <class F>
Engine<F>::Engine(LinearMatrixProblem<F> problem, StepSequence n)
    : problem_(std::move(problem)),
      n_(std::move(n)),
      space_(inflate(problem_, n_)),
      algebra_(inflate_algebra(problem_.gamma, n_)) {}

template <class F>
CanonicalForm<F> Engine<F>::canonicalize(const Matrix<F>& m, bool trace) const {
    EngineState<F> state(*this, m, trace);
    while (!state.done()) state.reduce_step();
    return state.result();
}

template <class F>
CanonicalForm<F> canonicalize(const Matrix<F>& m, const LinearMatrixProblem<F>& problem, const StepSequence& n) {
    return Engine<F>(problem, n).canonicalize(m);
}

// ---------------------------------------------------------------- state

namespace {

template <class F>
Matrix<F> block_of(const Matrix<F>& m, const Interval& rows, const Interval& cols) {
    return m.block(rows.start, cols.start, rows.size, cols.size);
}

template <class F>
bool is_scalar_identity(const Matrix<F>& b) {
    if (!b.square()) return false;
    for (std::size_t i = 0; i < b.rows(); ++i)
        for (std::size_t j = 0; j < b.cols(); ++j) {
            if (i == j ? !(b(i, i) == b(0, 0)) : !b(i, j).is_zero()) return false;
        }
    return true;
}

[[noreturn]] void inconsistent(const std::string& what) { fail(ErrorCode::InternalInconsistency, what); }

// Invertible X, Y with X^{-1} r Y = [[0, I], [0, 0]] (identity in the top-right corner).
template <class F>
std::pair<Matrix<F>, Matrix<F>> stairs_transform(const Matrix<F>& r) {
    const auto& field = r.field();
    const std::size_t a = r.rows(), b = r.cols();
    auto ker = nullspace(r);
    Subspace<F> span(field, b, ker);
    std::vector<Vec<F>> ycols = ker;
    std::vector<Vec<F>> images;
    for (std::size_t j = 0; j < b && ycols.size() < b; ++j) {
        Vec<F> e(b, field.zero());
        e[j] = field.one();
        if (span.add(e)) {
            ycols.push_back(e);
            images.push_back(mat_vec(r, e));
        }
    }
    Subspace<F> img(field, a, images);
    std::vector<Vec<F>> xcols = images;
    for (std::size_t i = 0; i < a && xcols.size() < a; ++i) {
        Vec<F> e(a, field.zero());
        e[i] = field.one();
        if (img.add(e)) xcols.push_back(e);
    }
    Matrix<F> x(field, a, a), y(field, b, b);
    for (std::size_t c = 0; c < a; ++c)
        for (std::size_t i = 0; i < a; ++i) x(i, c) = xcols[c][i];
    for (std::size_t c = 0; c < b; ++c)
        for (std::size_t i = 0; i < b; ++i) y(i, c) = ycols[c][i];
    return {x, y};
}

template <class F>
Matrix<F> stairs_matrix(const F& field, std::size_t a, std::size_t b, std::size_t rank) {
    Matrix<F> e(field, a, b);
    for (std::size_t k = 0; k < rank; ++k) e(k, b - rank + k) = field.one();
    return e;
}

}  // namespace

template <class F>
EngineState<F>::EngineState(const Engine<F>& engine, const Matrix<F>& m, bool trace)
    : engine_(&engine),
      m_(m),
      reduced_(engine.size() * engine.size(), false),
      reduced_span_(engine.problem().gamma.field(), engine.space().s()),
      tracing_(trace) {
    const std::size_t n = engine.size();
    if (m.rows() != n || m.cols() != n)
        fail(ErrorCode::DimensionMismatch, "matrix is " + std::to_string(m.rows()) + "x" + std::to_string(m.cols()) +
                                               ", expected " + std::to_string(n) + "x" + std::to_string(n));
    if (!engine.space().contains(m)) fail(ErrorCode::NotInSpace, "matrix is not in the inflated space");
    const auto& sizes = engine.n().sizes;
    auto off = engine.n().offsets();
    for (std::size_t i = 0; i < sizes.size(); ++i)
        if (sizes[i] > 0) partition_.strips.push_back({{off[i], sizes[i]}, i, 0});
    lambda_ = engine.algebra().basis();
    check_structure();
}

template <class F>
bool EngineState<F>::done() const {
    return !find_next().has_value();
}

template <class F>
std::optional<typename EngineState<F>::Next> EngineState<F>::find_next() const {
    const std::size_t n = engine_->size();
    for (auto [p, q] : box_order(partition_.count())) {
        const auto &r = partition_.strips[p].range, &c = partition_.strips[q].range;
        if (!reduced_[r.start * n + c.start]) return Next{p, q};
    }
    return std::nullopt;
}

template <class F>
std::pair<Interval, Interval> EngineState<F>::next_block() const {
    auto nx = find_next();
    if (!nx) fail(ErrorCode::StateOutOfOrder, "every block is already reduced");
    return {partition_.strips[nx->p].range, partition_.strips[nx->q].range};
}

template <class F>
bool EngineState<F>::is_dependent(const Interval& rows, const Interval& cols) const {
    const auto& basis = engine_->space().basis();
    std::size_t dep = 0;
    for (std::size_t i = rows.start; i < rows.end(); ++i)
        for (std::size_t j = cols.start; j < cols.end(); ++j) {
            Vec<F> f;
            f.reserve(basis.size());
            for (const auto& b : basis) f.push_back(b(i, j));
            if (reduced_span_.contains(f)) ++dep;
        }
    if (dep != 0 && dep != rows.size * cols.size) inconsistent("block is only partially determined by reduced entries");
    return dep != 0;
}

template <class F>
void EngineState<F>::mark_reduced(const Interval& rows, const Interval& cols) {
    const std::size_t n = engine_->size();
    const auto& basis = engine_->space().basis();
    for (std::size_t i = rows.start; i < rows.end(); ++i)
        for (std::size_t j = cols.start; j < cols.end(); ++j) {
            reduced_[i * n + j] = true;
            Vec<F> f;
            f.reserve(basis.size());
            for (const auto& b : basis) f.push_back(b(i, j));
            reduced_span_.add(f);
        }
}

template <class F>
Vec<F> EngineState<F>::commutator_on(const Matrix<F>& s, const Interval& rows, const Interval& cols) const {
    const std::size_t n = engine_->size();
    const auto& field = m_.field();
    Vec<F> out;
    out.reserve(rows.size * cols.size);
    for (std::size_t i = rows.start; i < rows.end(); ++i)
        for (std::size_t j = cols.start; j < cols.end(); ++j) {
            auto v = field.zero();
            for (std::size_t k = 0; k < n; ++k) {
                if (!s(i, k).is_zero()) v += s(i, k) * m_(k, j);
                if (!s(k, j).is_zero()) v -= m_(i, k) * s(k, j);
            }
            out.push_back(v);
        }
    return out;
}

template <class F>
void EngineState<F>::conjugate(const Matrix<F>& s) {
    m_ = inverse(s) * m_ * s;
}

template <class F>
std::vector<Matrix<F>> EngineState<F>::stabilizer_radical() const {
    const auto& field = m_.field();
    std::size_t diag_len = 0;
    for (const auto& st : partition_.strips) diag_len += st.range.size * st.range.size;
    Matrix<F> proj(field, diag_len, lambda_.size());
    for (std::size_t k = 0; k < lambda_.size(); ++k) {
        std::size_t row = 0;
        for (const auto& st : partition_.strips)
            for (std::size_t i = st.range.start; i < st.range.end(); ++i)
                for (std::size_t j = st.range.start; j < st.range.end(); ++j) proj(row++, k) = lambda_[k](i, j);
    }
    std::vector<Matrix<F>> out;
    const std::size_t n = engine_->size();
    for (const auto& c : nullspace(proj)) {
        Matrix<F> u(field, n, n);
        for (std::size_t k = 0; k < lambda_.size(); ++k)
            if (!c[k].is_zero()) u += lambda_[k] * c[k];
        out.push_back(std::move(u));
    }
    return out;
}

template <class F>
std::vector<Matrix<F>> EngineState<F>::addition_space() const {
    auto [rows, cols] = next_block();
    const auto& field = m_.field();
    std::vector<Vec<F>> vs;
    for (const auto& u : stabilizer_radical()) {
        auto v = commutator_on(u, rows, cols);
        for (auto& x : v) x = -x;
        vs.push_back(std::move(v));
    }
    std::vector<Matrix<F>> mats;
    for (auto& v : vs) {
        Matrix<F> b(field, rows.size, cols.size);
        b.data() = v;
        mats.push_back(std::move(b));
    }
    return MatrixSpace<F>(field, rows.size, cols.size, mats).basis();
}

template <class F>
void EngineState<F>::restrict_stabilizer(const Interval& rows, const Interval& cols) {
    const auto& field = m_.field();
    const std::size_t n = engine_->size();
    Matrix<F> a(field, rows.size * cols.size, lambda_.size());
    for (std::size_t k = 0; k < lambda_.size(); ++k) {
        auto v = commutator_on(lambda_[k], rows, cols);
        for (std::size_t i = 0; i < v.size(); ++i) a(i, k) = v[i];
    }
    std::vector<Matrix<F>> next;
    for (const auto& c : nullspace(a)) {
        Matrix<F> s(field, n, n);
        for (std::size_t k = 0; k < lambda_.size(); ++k)
            if (!c[k].is_zero()) s += lambda_[k] * c[k];
        next.push_back(std::move(s));
    }
    lambda_ = std::move(next);
}

template <class F>
Matrix<F> EngineState<F>::diagonal_transform(const std::vector<std::optional<Matrix<F>>>& per_link) const {
    const auto& field = m_.field();
    const std::size_t n = engine_->size();
    auto s = Matrix<F>::identity(field, n);
    for (const auto& st : partition_.strips)
        if (st.link < per_link.size() && per_link[st.link]) s.set_block(st.range.start, st.range.start, *per_link[st.link]);
    return s;
}

template <class F>
void EngineState<F>::split(std::size_t strip, std::size_t offset) {
    const auto target = partition_.strips.at(strip);
    if (offset == 0 || offset >= target.range.size) return;
    const std::size_t fresh = partition_.link_count();
    std::vector<Substrip> out;
    for (const auto& st : partition_.strips) {
        if (st.link != target.link) {
            out.push_back(st);
            continue;
        }
        if (st.range.size != target.range.size) inconsistent("linked substrips of different sizes");
        out.push_back({{st.range.start, offset}, st.origin, st.link});
        out.push_back({{st.range.start + offset, st.range.size - offset}, st.origin, fresh});
    }
    partition_.strips = std::move(out);
}

template <class F>
void EngineState<F>::refine_box(const Box<F>& box) {
    const std::size_t p = partition_.strip_at(box.rows.start), q = partition_.strip_at(box.cols.start);
    if (box.kind == BoxKind::Weyr) {
        // boundaries of the Weyr blocks; the rows and columns are linked
        std::vector<std::size_t> cuts;
        std::size_t acc = 0;
        for (auto m : commutant_partition(box.weyr)) {
            acc += m;
            if (acc < box.rows.size) cuts.push_back(acc);
        }
        for (auto it = cuts.rbegin(); it != cuts.rend(); ++it) split(partition_.strip_at(box.rows.start), *it);
        (void)q;
    } else if (box.kind == BoxKind::Stairs) {
        split(p, box.rank);
        split(partition_.strip_at(box.cols.start), box.cols.size - box.rank);
    }
}

template <class F>
void EngineState<F>::refine_all() {
    for (bool changed = true; changed;) {
        changed = false;
        for (const auto& box : boxes_) {
            for (std::size_t p = partition_.strip_at(box.rows.start);
                 !changed && p < partition_.count() && partition_.strips[p].range.start < box.rows.end(); ++p)
                for (std::size_t q = partition_.strip_at(box.cols.start);
                     !changed && q < partition_.count() && partition_.strips[q].range.start < box.cols.end(); ++q) {
                    const auto &r = partition_.strips[p].range, &c = partition_.strips[q].range;
                    auto sub = block_of(m_, r, c);
                    if (sub.is_zero() || is_scalar_identity(sub)) continue;
                    // cut where rows (or columns) switch between zero and nonzero
                    auto row_nz = [&](std::size_t i) {
                        for (std::size_t j = 0; j < sub.cols(); ++j)
                            if (!sub(i, j).is_zero()) return true;
                        return false;
                    };
                    auto col_nz = [&](std::size_t j) {
                        for (std::size_t i = 0; i < sub.rows(); ++i)
                            if (!sub(i, j).is_zero()) return true;
                        return false;
                    };
                    for (std::size_t i = 1; i < sub.rows() && !changed; ++i)
                        if (row_nz(i) != row_nz(i - 1)) {
                            split(p, i);
                            changed = true;
                        }
                    for (std::size_t j = 1; j < sub.cols() && !changed; ++j)
                        if (col_nz(j) != col_nz(j - 1)) {
                            split(q, j);
                            changed = true;
                        }
                    if (!changed) inconsistent("reduced sub-block is neither zero nor a scalar identity");
                }
            if (changed) break;
        }
    }
}

template <class F>
void EngineState<F>::check_structure() {
    const auto& field = m_.field();
    const std::size_t n = engine_->size();
    const auto& strips = partition_.strips;
    std::vector<std::size_t> strip_of(n);
    for (std::size_t k = 0; k < strips.size(); ++k)
        for (std::size_t i = strips[k].range.start; i < strips[k].range.end(); ++i) strip_of[i] = k;

    Subspace<F> span(field, n * n);
    for (const auto& s : lambda_) {
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j)
                if (strip_of[i] > strip_of[j] && !s(i, j).is_zero())
                    inconsistent("stabilizer is not block upper triangular for partition " + partition_.to_string());
        span.add(s.flatten());
    }
    std::vector<Matrix<F>> diag;
    for (const auto& s : lambda_) {
        Matrix<F> d(field, n, n);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j)
                if (strip_of[i] == strip_of[j]) d(i, j) = s(i, j);
        if (!span.contains(d.flatten())) inconsistent("diagonal part of the stabilizer is not in the stabilizer");
        diag.push_back(std::move(d));
    }
    // substrips x, y are linked when every diagonal member has equal blocks there
    std::vector<std::size_t> link(strips.size());
    std::iota(link.begin(), link.end(), 0);
    for (std::size_t x = 0; x < strips.size(); ++x) {
        if (link[x] != x) continue;
        for (std::size_t y = x + 1; y < strips.size(); ++y) {
            if (link[y] != y || strips[y].range.size != strips[x].range.size) continue;
            bool same = std::all_of(diag.begin(), diag.end(), [&](const Matrix<F>& d) {
                return block_of(d, strips[x].range, strips[x].range) == block_of(d, strips[y].range, strips[y].range);
            });
            if (same) link[y] = x;
        }
    }
    std::size_t expected = 0;
    std::map<std::size_t, std::size_t> renumber;
    for (std::size_t x = 0; x < strips.size(); ++x) {
        if (!renumber.count(link[x])) {
            renumber.emplace(link[x], renumber.size());
            expected += strips[x].range.size * strips[x].range.size;
        }
        partition_.strips[x].link = renumber[link[x]];
    }
    Subspace<F> dspan(field, n * n);
    for (const auto& d : diag) dspan.add(d.flatten());
    if (dspan.dim() != expected)
        inconsistent("diagonal blocks of the stabilizer are not independent full matrix algebras (dim " +
                     std::to_string(dspan.dim()) + ", expected " + std::to_string(expected) + ")");
}

template <class F>
void EngineState<F>::reduce_step() {
    auto nx = find_next();
    if (!nx) fail(ErrorCode::StateOutOfOrder, "every block is already reduced");
    const auto& field = m_.field();
    const Interval rows = partition_.strips[nx->p].range, cols = partition_.strips[nx->q].range;
    const std::size_t link_p = partition_.strips[nx->p].link, link_q = partition_.strips[nx->q].link;

    StepTrace<F> tr{steps_, rows, cols, false, lambda_.size(), 0, 0, partition_.to_string()};
    if (is_dependent(rows, cols)) {
        mark_reduced(rows, cols);
        if (tracing_) {
            tr.dependent = true;
            trace_.push_back(tr);
        }
        return;
    }

    // coset representative modulo the additions from reduced blocks
    auto rad = stabilizer_radical();
    std::vector<Vec<F>> vs;
    for (const auto& u : rad) {
        auto v = commutator_on(u, rows, cols);
        for (auto& x : v) x = -x;
        vs.push_back(std::move(v));
    }
    std::vector<std::size_t> order;
    for (std::size_t c = 0; c < cols.size; ++c)
        for (std::size_t r = rows.size; r-- > 0;) order.push_back(r * cols.size + c);
    Subspace<F> adds(field, rows.size * cols.size, vs, order);
    const auto current = block_of(m_, rows, cols).flatten();
    const auto rep = adds.reduce(current);
    if (rep != current) {
        Matrix<F> a(field, current.size(), vs.size());
        for (std::size_t k = 0; k < vs.size(); ++k)
            for (std::size_t i = 0; i < current.size(); ++i) a(i, k) = vs[k][i];
        Vec<F> delta(current.size());
        for (std::size_t i = 0; i < current.size(); ++i) delta[i] = rep[i] - current[i];
        auto coeff = solve(a, delta);
        if (!coeff) inconsistent("coset representative is not reachable by additions");
        auto s = Matrix<F>::identity(field, engine_->size());
        for (std::size_t k = 0; k < rad.size(); ++k)
            if (!(*coeff)[k].is_zero()) s += rad[k] * (*coeff)[k];
        conjugate(s);
        if (block_of(m_, rows, cols).flatten() != rep) inconsistent("additions did not produce the representative");
    }

    Box<F> box;
    box.step = boxes_.size();
    box.rows = rows;
    box.cols = cols;
    box.additions = adds.dim();
    Matrix<F> residual(field, rows.size, cols.size);
    residual.data() = rep;
    const bool zero = residual.is_zero();
    if (adds.dim() > 0) {
        if (!zero) inconsistent("nonzero residual under a partial addition space at " + box.describe());
        box.kind = BoxKind::Zero;
        box.content = residual;
    } else {
        std::vector<std::optional<Matrix<F>>> per_link(partition_.link_count());
        if (link_p == link_q) {
            auto wr = weyr_form(residual);
            per_link[link_p] = wr.s;
            box.kind = BoxKind::Weyr;
            box.weyr = wr.structure;
            box.content = wr.w;
        } else {
            auto [x, y] = stairs_transform(residual);
            per_link[link_p] = x;
            per_link[link_q] = y;
            box.rank = rank(residual);
            box.kind = box.rank == 0 ? BoxKind::Zero : BoxKind::Stairs;
            box.content = stairs_matrix(field, rows.size, cols.size, box.rank);
        }
        conjugate(diagonal_transform(per_link));
        if (!(block_of(m_, rows, cols) == box.content)) inconsistent("diagonal reduction missed its target form");
    }

    mark_reduced(rows, cols);
    restrict_stabilizer(rows, cols);
    boxes_.push_back(box);
    refine_box(box);
    refine_all();
    check_structure();
    ++steps_;
    if (tracing_) {
        tr.radical_dim = rad.size();
        tr.addition_dim = adds.dim();
        tr.partition = partition_.to_string();
        trace_.push_back(tr);
    }
}

template <class F>
CanonicalForm<F> EngineState<F>::result() const {
    return {m_, boxes_, partition_, engine_->n(), trace_};
}

#define CANONFORM_INSTANTIATE(F)                                                                              \
    template struct Box<F>;                                                                                   \
    template struct CanonicalForm<F>;                                                                         \
    template class Engine<F>;                                                                                 \
    template class EngineState<F>;                                                                            \
    template CanonicalForm<F> canonicalize(const Matrix<F>&, const LinearMatrixProblem<F>&, const StepSequence&);

CANONFORM_INSTANTIATE(PrimeField)
CANONFORM_INSTANTIATE(RationalField)

#undef CANONFORM_INSTANTIATE

}  // namespace canonform
