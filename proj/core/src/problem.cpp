#include "canonform/problem.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <numeric>
#include <sstream>

namespace canonform {

std::string format_classes(const IndexClasses& classes) {
    std::string s;
    for (const auto& c : classes) {
        if (!s.empty()) s += ",";
        s += "{";
        for (std::size_t k = 0; k < c.size(); ++k) s += (k ? "," : "") + std::to_string(c[k] + 1);
        s += "}";
    }
    return s;
}

// ---------------------------------------------------------------- MatrixSpace

template <class F>
MatrixSpace<F>::MatrixSpace(F field, std::size_t rows, std::size_t cols, const std::vector<Matrix<F>>& spanning)
    : field_(field), rows_(rows), cols_(cols), span_(field, rows * cols) {
    for (const auto& m : spanning) {
        if (m.rows() != rows || m.cols() != cols) fail(ErrorCode::DimensionMismatch, "space member shape");
        span_.add(m.flatten());
    }
    // sorted by pivot so the basis is canonical for the span
    std::vector<std::size_t> idx(span_.dim());
    std::iota(idx.begin(), idx.end(), 0);
    std::sort(idx.begin(), idx.end(), [&](auto a, auto b) { return span_.pivots()[a] < span_.pivots()[b]; });
    for (auto k : idx) {
        Matrix<F> b(field_, rows, cols);
        b.data() = span_.basis()[k];
        basis_.push_back(std::move(b));
    }
}

template <class F>
bool MatrixSpace<F>::contains(const Matrix<F>& m) const {
    if (m.rows() != rows_ || m.cols() != cols_) return false;
    return span_.contains(m.flatten());
}

template <class F>
std::optional<Vec<F>> MatrixSpace<F>::coordinates(const Matrix<F>& m) const {
    if (!contains(m)) return std::nullopt;
    // basis is reduced on its pivots, so coordinates are the pivot entries
    Vec<F> c;
    auto flat = m.flatten();
    for (const auto& b : basis_) {
        std::size_t piv = 0;
        while (b.data()[piv].is_zero()) ++piv;
        c.push_back(flat[piv]);
    }
    return c;
}

// ---------------------------------------------------------------- BasicAlgebra

template <class F>
BasicAlgebra<F>::BasicAlgebra(MatrixSpace<F> space, MatrixSpace<F> radical, IndexClasses classes)
    : space_(std::move(space)), radical_(std::move(radical)), classes_(std::move(classes)) {
    class_of_.assign(space_.rows(), 0);
    for (std::size_t a = 0; a < classes_.size(); ++a)
        for (auto i : classes_[a]) class_of_[i] = a;
}

namespace {

template <class F>
Matrix<F> diagonal_part(const Matrix<F>& m) {
    Matrix<F> d(m.field(), m.rows(), m.cols());
    for (std::size_t i = 0; i < m.rows(); ++i) d(i, i) = m(i, i);
    return d;
}

}  // namespace

template <class F>
BasicAlgebra<F> BasicAlgebra<F>::validate(F field, std::size_t t, const std::vector<Matrix<F>>& basis) {
    for (std::size_t k = 0; k < basis.size(); ++k) {
        const auto& b = basis[k];
        if (b.rows() != t || b.cols() != t)
            fail(ErrorCode::DimensionMismatch, "algebra member " + std::to_string(k + 1) + " is not " +
                                                   std::to_string(t) + "x" + std::to_string(t));
        for (std::size_t i = 0; i < t; ++i)
            for (std::size_t j = 0; j < i; ++j)
                if (!b(i, j).is_zero())
                    fail(ErrorCode::NotTriangular, "member " + std::to_string(k + 1) + " has nonzero entry (" +
                                                       std::to_string(i + 1) + "," + std::to_string(j + 1) + ")");
    }
    MatrixSpace<F> space(field, t, t, basis);
    if (!space.contains(Matrix<F>::identity(field, t)))
        fail(ErrorCode::MissingIdentity, "the identity is not in the span");
    const auto& eb = space.basis();
    for (std::size_t a = 0; a < eb.size(); ++a) {
        if (!space.contains(diagonal_part(eb[a])))
            fail(ErrorCode::DiagonalProjectionFails, "diagonal part of\n" + eb[a].to_string() + "is not a member");
        for (std::size_t b = 0; b < eb.size(); ++b)
            if (!space.contains(eb[a] * eb[b]))
                fail(ErrorCode::NotClosedUnderMultiplication,
                     "product of\n" + eb[a].to_string() + "and\n" + eb[b].to_string() + "is not a member");
    }
    IndexClasses classes;
    std::vector<bool> seen(t, false);
    for (std::size_t i = 0; i < t; ++i) {
        if (seen[i]) continue;
        classes.push_back({i});
        seen[i] = true;
        for (std::size_t j = i + 1; j < t; ++j) {
            if (seen[j]) continue;
            bool same = std::all_of(eb.begin(), eb.end(), [&](const Matrix<F>& b) { return b(i, i) == b(j, j); });
            if (same) {
                classes.back().push_back(j);
                seen[j] = true;
            }
        }
    }
    std::vector<Matrix<F>> rad;
    for (const auto& b : eb) rad.push_back(b - diagonal_part(b));
    MatrixSpace<F> radical(field, t, t, rad);
    return BasicAlgebra(std::move(space), std::move(radical), std::move(classes));
}

template <class F>
Matrix<F> BasicAlgebra<F>::idempotent(std::size_t alpha) const {
    Matrix<F> e(field(), t(), t());
    for (auto i : classes_.at(alpha)) e(i, i) = field().one();
    return e;
}

// ---------------------------------------------------------------- StepSequence

std::size_t StepSequence::total() const { return std::accumulate(sizes.begin(), sizes.end(), std::size_t{0}); }

std::vector<std::size_t> StepSequence::offsets() const {
    std::vector<std::size_t> off(sizes.size() + 1, 0);
    for (std::size_t i = 0; i < sizes.size(); ++i) off[i + 1] = off[i] + sizes[i];
    return off;
}

std::string StepSequence::to_string() const {
    std::string s = "(";
    for (std::size_t i = 0; i < sizes.size(); ++i) s += (i ? "," : "") + std::to_string(sizes[i]);
    return s + ")";
}

StepSequence StepSequence::parse(const std::string& text) {
    StepSequence n;
    std::string cur;
    bool any = false;
    auto flush = [&] {
        if (cur.empty()) {
            if (any) fail(ErrorCode::ParseError, "empty entry in size list '" + text + "'");
            return;
        }
        std::size_t pos = 0;
        unsigned long v = 0;
        try {
            v = std::stoul(cur, &pos);
        } catch (const std::exception&) {
            pos = 0;
        }
        if (pos != cur.size()) fail(ErrorCode::ParseError, "bad size '" + cur + "'");
        n.sizes.push_back(v);
        cur.clear();
    };
    for (char c : text) {
        if (c == '(' || c == ')' || std::isspace(static_cast<unsigned char>(c))) continue;
        if (c == ',') {
            any = true;
            flush();
            continue;
        }
        cur += c;
    }
    flush();
    if (n.sizes.empty()) fail(ErrorCode::ParseError, "empty size list");
    return n;
}

void check_step_sequence(const IndexClasses& classes, const StepSequence& n) {
    std::size_t t = 0;
    for (const auto& c : classes) t += c.size();
    if (n.length() != t)
        fail(ErrorCode::NotStepSequence,
             "size list " + n.to_string() + " has length " + std::to_string(n.length()) + ", expected " +
                 std::to_string(t));
    for (const auto& c : classes)
        for (auto i : c)
            if (n.sizes[i] != n.sizes[c[0]])
                fail(ErrorCode::NotStepSequence, n.to_string() + " is not constant on the class " +
                                                     format_classes({c}));
}

// ---------------------------------------------------------------- problems

template <class F>
LinearMatrixProblem<F> LinearMatrixProblem<F>::make(BasicAlgebra<F> gamma, MatrixSpace<F> space) {
    if (space.rows() != gamma.t() || space.cols() != gamma.t())
        fail(ErrorCode::DimensionMismatch, "space matrices must be t x t");
    for (const auto& g : gamma.basis())
        for (const auto& m : space.basis()) {
            if (!space.contains(g * m))
                fail(ErrorCode::NotClosedUnderAction, "left product leaves the space:\n" + (g * m).to_string());
            if (!space.contains(m * g))
                fail(ErrorCode::NotClosedUnderAction, "right product leaves the space:\n" + (m * g).to_string());
        }
    return {std::move(gamma), std::move(space)};
}

template <class F>
SeparatedProblem<F> SeparatedProblem<F>::make(BasicAlgebra<F> gamma, BasicAlgebra<F> delta, MatrixSpace<F> space) {
    if (space.rows() != gamma.t() || space.cols() != delta.t())
        fail(ErrorCode::DimensionMismatch, "space matrices must be t x l");
    for (const auto& m : space.basis()) {
        for (const auto& g : gamma.basis())
            if (!space.contains(g * m))
                fail(ErrorCode::NotClosedUnderAction, "row action leaves the space:\n" + (g * m).to_string());
        for (const auto& d : delta.basis())
            if (!space.contains(m * d))
                fail(ErrorCode::NotClosedUnderAction, "column action leaves the space:\n" + (m * d).to_string());
    }
    return {std::move(gamma), std::move(delta), std::move(space)};
}

template <class F>
LinearMatrixProblem<F> separated_to_linear(const SeparatedProblem<F>& sp) {
    const auto& field = sp.gamma.field();
    const std::size_t t = sp.gamma.t(), l = sp.delta.t(), n = t + l;
    std::vector<Matrix<F>> alg, sp_basis;
    for (const auto& g : sp.gamma.basis()) {
        Matrix<F> m(field, n, n);
        m.set_block(0, 0, g);
        alg.push_back(std::move(m));
    }
    for (const auto& d : sp.delta.basis()) {
        Matrix<F> m(field, n, n);
        m.set_block(t, t, d);
        alg.push_back(std::move(m));
    }
    for (const auto& b : sp.space.basis()) {
        Matrix<F> m(field, n, n);
        m.set_block(0, t, b);
        sp_basis.push_back(std::move(m));
    }
    auto gamma = BasicAlgebra<F>::validate(field, n, alg);
    return LinearMatrixProblem<F>::make(std::move(gamma), MatrixSpace<F>(field, n, n, sp_basis));
}

// ---------------------------------------------------------------- inflation

std::vector<BlockPos> grid_order(std::size_t rows, std::size_t cols) {
    std::vector<BlockPos> out;
    for (std::size_t i = rows; i-- > 0;)
        for (std::size_t j = 0; j < cols; ++j) out.push_back({i, j});
    return out;
}

namespace {

std::vector<std::size_t> class_index(const IndexClasses& classes, std::size_t t) {
    std::vector<std::size_t> of(t, 0);
    for (std::size_t a = 0; a < classes.size(); ++a)
        for (auto i : classes[a]) {
            if (i >= t) fail(ErrorCode::DimensionMismatch, "class index out of range");
            of[i] = a;
        }
    return of;
}

}  // namespace

template <class F>
Inflation<F>::Inflation(const MatrixSpace<F>& space, const IndexClasses& row_classes,
                        const IndexClasses& col_classes, StepSequence m, StepSequence n)
    : space_(space),
      row_classes_(row_classes),
      col_classes_(col_classes),
      row_class_of_(class_index(row_classes, space.rows())),
      col_class_of_(class_index(col_classes, space.cols())),
      m_(std::move(m)),
      n_(std::move(n)) {
    check_step_sequence(row_classes_, m_);
    check_step_sequence(col_classes_, n_);
    row_off_ = m_.offsets();
    col_off_ = n_.offsets();
    const auto& field = space_.field();
    const auto& basis = space_.basis();

    // Greedy selection: a position is free when its coordinate is not a linear
    // function of the coordinates of earlier free positions on the space.
    std::vector<std::size_t> free_idx;  // indices into free_.blocks
    Subspace<F> seen(field, basis.size());
    for (const auto& pos : grid_order(space_.rows(), space_.cols())) {
        BlockInfo<F> info;
        info.pos = pos;
        Vec<F> column;
        for (const auto& b : basis) column.push_back(b(pos.row, pos.col));
        // rows of `seen` span the coordinate functionals of earlier free positions
        if (seen.add(column)) {
            info.free = true;
            free_idx.push_back(free_.blocks.size());
            free_.s += m_.sizes[pos.row] * n_.sizes[pos.col];
        } else if (!free_idx.empty()) {
            Matrix<F> a(field, basis.size(), free_idx.size());
            for (std::size_t c = 0; c < free_idx.size(); ++c) {
                const auto& fp = free_.blocks[free_idx[c]].pos;
                for (std::size_t r = 0; r < basis.size(); ++r) a(r, c) = basis[r](fp.row, fp.col);
            }
            auto coeff = solve(a, column);
            if (!coeff) fail(ErrorCode::InternalInconsistency, "dependent block without expression");
            for (std::size_t c = 0; c < free_idx.size(); ++c) {
                if ((*coeff)[c].is_zero()) continue;
                const auto& fp = free_.blocks[free_idx[c]].pos;
                if (m_.sizes[fp.row] != m_.sizes[pos.row] || n_.sizes[fp.col] != n_.sizes[pos.col])
                    fail(ErrorCode::InternalInconsistency, "dependent block references a block of another shape");
                info.expression.emplace_back(free_idx[c], (*coeff)[c]);
            }
        }
        free_.blocks.push_back(std::move(info));
    }

    for (std::size_t k = 0; k < free_.s; ++k) {
        Vec<F> e(free_.s, field.zero());
        e[k] = field.one();
        basis_.push_back(from_free(e));
    }
}

template <class F>
Matrix<F> Inflation<F>::from_free(const Vec<F>& values) const {
    if (values.size() != free_.s) fail(ErrorCode::DimensionMismatch, "free-entry vector length");
    const auto& field = space_.field();
    Matrix<F> x(field, rows(), cols());
    std::size_t k = 0;
    for (const auto& b : free_.blocks) {
        const std::size_t r0 = row_off_[b.pos.row], c0 = col_off_[b.pos.col];
        const std::size_t nr = m_.sizes[b.pos.row], nc = n_.sizes[b.pos.col];
        if (b.free) {
            for (std::size_t i = 0; i < nr; ++i)
                for (std::size_t j = 0; j < nc; ++j) x(r0 + i, c0 + j) = values[k++];
            continue;
        }
        for (const auto& [src, coeff] : b.expression) {
            const auto& sp = free_.blocks[src].pos;
            const std::size_t sr = row_off_[sp.row], sc = col_off_[sp.col];
            for (std::size_t i = 0; i < nr; ++i)
                for (std::size_t j = 0; j < nc; ++j) x(r0 + i, c0 + j) += coeff * x(sr + i, sc + j);
        }
    }
    return x;
}

template <class F>
Vec<F> Inflation<F>::free_values(const Matrix<F>& x) const {
    if (x.rows() != rows() || x.cols() != cols()) fail(ErrorCode::DimensionMismatch, "inflated matrix shape");
    Vec<F> v;
    v.reserve(free_.s);
    for (const auto& b : free_.blocks) {
        if (!b.free) continue;
        const std::size_t r0 = row_off_[b.pos.row], c0 = col_off_[b.pos.col];
        for (std::size_t i = 0; i < m_.sizes[b.pos.row]; ++i)
            for (std::size_t j = 0; j < n_.sizes[b.pos.col]; ++j) v.push_back(x(r0 + i, c0 + j));
    }
    return v;
}

template <class F>
bool Inflation<F>::contains(const Matrix<F>& x) const {
    if (x.rows() != rows() || x.cols() != cols()) return false;
    return from_free(free_values(x)) == x;
}

template <class F>
Inflation<F> inflate(const LinearMatrixProblem<F>& problem, const StepSequence& n) {
    const auto& c = problem.gamma.classes();
    return Inflation<F>(problem.space, c, c, n, n);
}

template <class F>
Inflation<F> inflate_algebra(const BasicAlgebra<F>& gamma, const StepSequence& n) {
    return Inflation<F>(gamma.space(), gamma.classes(), gamma.classes(), n, n);
}

template <class F>
Inflation<F> inflate_radical(const BasicAlgebra<F>& gamma, const StepSequence& n) {
    return Inflation<F>(gamma.radical(), gamma.classes(), gamma.classes(), n, n);
}

// ---------------------------------------------------------------- sampling

template <class F>
InvertibleSampler<F>::InvertibleSampler(const BasicAlgebra<F>& gamma, const StepSequence& n)
    : field_(gamma.field()),
      classes_(gamma.classes()),
      n_(n),
      offsets_(n.offsets()),
      radical_(inflate_radical(gamma, n)) {}

template <class F>
Matrix<F> InvertibleSampler<F>::operator()(std::mt19937_64& rng, int max_retries) const {
    Matrix<F> s(field_, n_.total(), n_.total());
    for (const auto& cls : classes_) {
        const std::size_t k = n_.sizes[cls[0]];
        std::optional<Matrix<F>> block;
        for (int attempt = 0; attempt < max_retries && !block; ++attempt) {
            Matrix<F> a(field_, k, k);
            for (auto& x : a.data()) x = field_.random(rng);
            if (!determinant(a).is_zero()) block = std::move(a);
        }
        if (!block) fail(ErrorCode::ExhaustedRetries, "could not sample an invertible diagonal block");
        for (auto i : cls) s.set_block(offsets_[i], offsets_[i], *block);
    }
    Vec<F> coeff(radical_.s());
    for (auto& c : coeff) c = field_.random(rng);
    return s + radical_.from_free(coeff);
}

template <class F>
Matrix<F> sample_invertible(const BasicAlgebra<F>& gamma, const StepSequence& n, std::mt19937_64& rng,
                            int max_retries) {
    return InvertibleSampler<F>(gamma, n)(rng, max_retries);
}

// ---------------------------------------------------------------- file format

namespace {

std::string strip(const std::string& s) {
    auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

std::vector<std::string> tokens(const std::string& s) {
    std::istringstream is(s);
    std::vector<std::string> out;
    std::string w;
    while (is >> w) out.push_back(w);
    return out;
}

[[noreturn]] void parse_fail(std::size_t line, const std::string& what) {
    fail(ErrorCode::ParseError, "line " + std::to_string(line) + ": " + what);
}

IndexClasses parse_classes(const std::string& text, std::size_t line) {
    IndexClasses out;
    std::vector<std::size_t>* cur = nullptr;
    std::string num;
    auto flush = [&] {
        if (num.empty()) return;
        if (!cur) parse_fail(line, "class index outside braces");
        unsigned long v = std::stoul(num);
        if (v == 0) parse_fail(line, "class indices are 1-based");
        cur->push_back(v - 1);
        num.clear();
    };
    for (char c : text) {
        if (std::isdigit(static_cast<unsigned char>(c))) {
            num += c;
        } else if (c == '{') {
            if (cur) parse_fail(line, "nested braces in classes");
            out.emplace_back();
            cur = &out.back();
        } else if (c == '}') {
            flush();
            if (!cur) parse_fail(line, "unbalanced braces in classes");
            std::sort(cur->begin(), cur->end());
            cur = nullptr;
        } else if (c == ',' || std::isspace(static_cast<unsigned char>(c))) {
            flush();
        } else {
            parse_fail(line, std::string("unexpected character '") + c + "' in classes");
        }
    }
    if (cur) parse_fail(line, "unbalanced braces in classes");
    std::sort(out.begin(), out.end());
    return out;
}

}  // namespace

ProblemText parse_problem_text(const std::string& text) {
    ProblemText p;
    bool have_field = false;
    enum class Section { None, Gamma, Delta, Space } section = Section::None;
    std::vector<std::vector<std::string>> current;
    std::size_t current_line = 0;

    auto rows_expected = [&]() -> std::size_t { return section == Section::Delta ? p.l.value_or(0) : p.t; };
    auto target = [&]() -> std::pair<std::vector<std::vector<std::vector<std::string>>>*, std::vector<std::size_t>*> {
        switch (section) {
            case Section::Gamma: return {&p.gamma, &p.gamma_lines};
            case Section::Delta: return {&p.delta, &p.delta_lines};
            case Section::Space: return {&p.space, &p.space_lines};
            default: return {nullptr, nullptr};
        }
    };
    auto flush = [&](std::size_t line) {
        if (current.empty()) return;
        if (current.size() != rows_expected())
            parse_fail(current_line, "matrix has " + std::to_string(current.size()) + " rows, expected " +
                                         std::to_string(rows_expected()) + " (near line " + std::to_string(line) +
                                         ")");
        auto [mats, lines] = target();
        mats->push_back(std::move(current));
        lines->push_back(current_line);
        current.clear();
    };

    std::istringstream in(text);
    std::string raw;
    std::size_t lineno = 0;
    while (std::getline(in, raw)) {
        ++lineno;
        auto hash = raw.find('#');
        std::string line = strip(hash == std::string::npos ? raw : raw.substr(0, hash));
        if (line.empty()) {
            flush(lineno);
            continue;
        }
        auto tok = tokens(line);
        const std::string& kw = tok[0];
        if (kw == "field") {
            flush(lineno);
            try {
                p.field = FieldSpec::parse(line.substr(5));
            } catch (const Error& e) {
                parse_fail(lineno, e.what());
            }
            have_field = true;
            section = Section::None;
        } else if (kw == "t" || kw == "l") {
            flush(lineno);
            if (tok.size() != 2) parse_fail(lineno, "expected '" + kw + " <count>'");
            std::size_t v = 0;
            try {
                v = std::stoul(tok[1]);
            } catch (const std::exception&) {
                parse_fail(lineno, "bad count '" + tok[1] + "'");
            }
            (kw == "t" ? p.t : p.l.emplace()) = v;
            section = Section::None;
        } else if (kw == "classes") {
            flush(lineno);
            p.classes = parse_classes(line.substr(7), lineno);
            section = Section::None;
        } else if (kw == "gamma" || kw == "delta" || kw == "space" || kw == "separated") {
            flush(lineno);
            if (tok.size() != 1) parse_fail(lineno, "unexpected text after '" + kw + "'");
            if (kw == "separated") {
                section = Section::None;
                continue;
            }
            if (p.t == 0) parse_fail(lineno, "'t' must precede matrix sections");
            if (kw == "delta" && !p.l) parse_fail(lineno, "'l' must precede the delta section");
            section = kw == "gamma" ? Section::Gamma : kw == "delta" ? Section::Delta : Section::Space;
        } else {
            if (section == Section::None) parse_fail(lineno, "unexpected '" + kw + "' outside a section");
            if (current.empty()) current_line = lineno;
            std::size_t start = 0;
            for (;;) {
                auto slash = line.find('/', start);
                // a '/' inside a scalar is a fraction: it has no blank on either side
                while (slash != std::string::npos && slash > 0 && slash + 1 < line.size() &&
                       !std::isspace(static_cast<unsigned char>(line[slash - 1])) &&
                       !std::isspace(static_cast<unsigned char>(line[slash + 1])))
                    slash = line.find('/', slash + 1);
                auto row = tokens(line.substr(start, slash == std::string::npos ? std::string::npos : slash - start));
                if (row.empty()) parse_fail(lineno, "empty matrix row");
                current.push_back(std::move(row));
                if (current.size() == rows_expected()) flush(lineno);
                if (slash == std::string::npos) break;
                start = slash + 1;
            }
        }
    }
    flush(lineno);
    if (!have_field) parse_fail(lineno, "missing 'field' line");
    if (p.t == 0) parse_fail(lineno, "missing 't' line");
    if (p.gamma.empty()) parse_fail(lineno, "missing gamma section");
    return p;
}

ProblemText read_problem_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) fail(ErrorCode::ParseError, "cannot open '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_problem_text(ss.str());
}

std::vector<std::vector<std::string>> split_matrix_rows(const std::string& text) {
    std::vector<std::vector<std::string>> rows;
    std::istringstream in(text);
    std::string raw;
    while (std::getline(in, raw)) {
        auto hash = raw.find('#');
        auto tok = tokens(hash == std::string::npos ? raw : raw.substr(0, hash));
        if (!tok.empty()) rows.push_back(std::move(tok));
    }
    return rows;
}

template <class F>
Matrix<F> parse_matrix(const F& field, const std::string& text) {
    auto rows = split_matrix_rows(text);
    std::vector<std::vector<typename F::value_type>> vals;
    for (std::size_t i = 0; i < rows.size(); ++i) {
        vals.emplace_back();
        for (const auto& s : rows[i]) vals.back().push_back(field.parse(s));
        if (vals.back().size() != vals.front().size())
            fail(ErrorCode::ParseError, "matrix row " + std::to_string(i + 1) + " has a different length");
    }
    return Matrix<F>::from_rows(field, vals);
}

namespace {

template <class F>
std::vector<Matrix<F>> build_matrices(const F& field, const std::vector<std::vector<std::vector<std::string>>>& mats,
                                      const std::vector<std::size_t>& lines, std::size_t cols) {
    std::vector<Matrix<F>> out;
    for (std::size_t k = 0; k < mats.size(); ++k) {
        std::vector<std::vector<typename F::value_type>> vals;
        for (const auto& row : mats[k]) {
            if (row.size() != cols)
                parse_fail(lines[k], "matrix row has " + std::to_string(row.size()) + " entries, expected " +
                                         std::to_string(cols));
            vals.emplace_back();
            try {
                for (const auto& s : row) vals.back().push_back(field.parse(s));
            } catch (const Error& e) {
                parse_fail(lines[k], e.what());
            }
        }
        out.push_back(Matrix<F>::from_rows(field, vals));
    }
    return out;
}

template <class F>
BasicAlgebra<F> validate_with_lines(const F& field, std::size_t t, const std::vector<Matrix<F>>& mats,
                                    const std::vector<std::size_t>& lines, const char* section) {
    for (std::size_t k = 0; k < mats.size(); ++k)
        for (std::size_t i = 0; i < t; ++i)
            for (std::size_t j = 0; j < i; ++j)
                if (!mats[k](i, j).is_zero())
                    fail(ErrorCode::NotTriangular, std::string(section) + " matrix " + std::to_string(k + 1) +
                                                       " (line " + std::to_string(lines[k]) + ") has nonzero entry (" +
                                                       std::to_string(i + 1) + "," + std::to_string(j + 1) + ")");
    return BasicAlgebra<F>::validate(field, t, mats);
}

}  // namespace

template <class F>
BasicAlgebra<F> load_algebra(const ProblemText& text, const F& field) {
    auto mats = build_matrices(field, text.gamma, text.gamma_lines, text.t);
    auto gamma = validate_with_lines(field, text.t, mats, text.gamma_lines, "gamma");
    if (text.classes && *text.classes != gamma.classes())
        fail(ErrorCode::ClassMismatch, "declared classes " + format_classes(*text.classes) + " but derived " +
                                           format_classes(gamma.classes()));
    return gamma;
}

template <class F>
LoadedProblem<F> load_problem(const ProblemText& text, const F& field) {
    auto gamma = load_algebra(text, field);
    std::optional<BasicAlgebra<F>> delta;
    std::size_t cols = text.t;
    if (text.separated()) {
        if (!text.l) fail(ErrorCode::ParseError, "separated problem needs an 'l' line");
        cols = *text.l;
        if (text.delta.empty()) fail(ErrorCode::ParseError, "separated problem needs a delta section");
        auto mats = build_matrices(field, text.delta, text.delta_lines, cols);
        delta = validate_with_lines(field, cols, mats, text.delta_lines, "delta");
    }
    auto space_mats = build_matrices(field, text.space, text.space_lines, cols);
    MatrixSpace<F> space(field, text.t, cols, space_mats);
    LoadedProblem<F> out{std::move(gamma), std::move(delta), std::move(space)};
    // run the bimodule checks now so errors surface at load time
    if (out.separated()) out.as_separated();
    else out.linear();
    return out;
}

template <class F>
LinearMatrixProblem<F> LoadedProblem<F>::linear() const {
    if (separated()) return separated_to_linear(as_separated());
    return LinearMatrixProblem<F>::make(gamma, space);
}

template <class F>
SeparatedProblem<F> LoadedProblem<F>::as_separated() const {
    if (!separated()) fail(ErrorCode::InvalidArgument, "problem is not separated");
    return SeparatedProblem<F>::make(gamma, *delta, space);
}

#define CANONFORM_INSTANTIATE(F)                                                                      \
    template class MatrixSpace<F>;                                                                    \
    template class BasicAlgebra<F>;                                                                   \
    template struct LinearMatrixProblem<F>;                                                           \
    template struct SeparatedProblem<F>;                                                              \
    template class Inflation<F>;                                                                      \
    template class InvertibleSampler<F>;                                                              \
    template struct LoadedProblem<F>;                                                                 \
    template LinearMatrixProblem<F> separated_to_linear(const SeparatedProblem<F>&);                  \
    template Inflation<F> inflate(const LinearMatrixProblem<F>&, const StepSequence&);                \
    template Inflation<F> inflate_algebra(const BasicAlgebra<F>&, const StepSequence&);               \
    template Inflation<F> inflate_radical(const BasicAlgebra<F>&, const StepSequence&);               \
    template Matrix<F> sample_invertible(const BasicAlgebra<F>&, const StepSequence&, std::mt19937_64&, \
                                         int);                                                        \
    template Matrix<F> parse_matrix(const F&, const std::string&);                                    \
    template BasicAlgebra<F> load_algebra(const ProblemText&, const F&);                              \
    template LoadedProblem<F> load_problem(const ProblemText&, const F&);

CANONFORM_INSTANTIATE(PrimeField)
CANONFORM_INSTANTIATE(RationalField)

#undef CANONFORM_INSTANTIATE

}  // namespace canonform
