#include "canonform/census.hpp"

#include <algorithm>
#include <cctype>
#include <future>
#include <map>

namespace canonform {

std::string to_string(CensusMode mode) { return mode == CensusMode::Exhaustive ? "exhaustive" : "sample"; }

std::size_t CensusReport::indecomposable_families() const {
    return static_cast<std::size_t>(std::count_if(families.begin(), families.end(), [](const auto& f) { return f.indecomposable; }));
}

std::size_t CensusReport::parametric_families() const {
    return static_cast<std::size_t>(std::count_if(families.begin(), families.end(), [](const auto& f) { return f.parameters > 0; }));
}

std::uint64_t CensusReport::member_total() const {
    std::uint64_t t = 0;
    for (const auto& f : families) t += f.members;
    return t;
}

namespace {

mpz_class power(unsigned long base, std::size_t e) {
    mpz_class r;
    mpz_ui_pow_ui(r.get_mpz_t(), base, e);
    return r;
}

std::vector<std::uint64_t> flat_values(const Matrix<PrimeField>& m) {
    std::vector<std::uint64_t> v;
    v.reserve(m.data().size());
    for (const auto& x : m.data()) v.push_back(x.value());
    return v;
}

Matrix<PrimeField> from_values(const PrimeField& field, std::size_t n, const std::vector<std::uint32_t>& v) {
    Matrix<PrimeField> m(field, n, n);
    for (std::size_t k = 0; k < v.size(); ++k) m.data()[k] = field.from_int(v[k]);
    return m;
}

CensusReport empty_report(const Engine<PrimeField>& engine, const CensusOptions& options, const std::string& id) {
    CensusReport r;
    r.problem_id = id;
    r.n = engine.n();
    r.modulus = engine.problem().gamma.field().modulus();
    r.mode = options.mode;
    r.shard_index = options.shard_index;
    r.shard_count = options.shard_count;
    r.s = engine.space().s();
    r.bound = power(4, r.s);
    return r;
}

void check_budget(const Engine<PrimeField>& engine, const CensusOptions& options) {
    const auto p = engine.problem().gamma.field().modulus();
    if (options.mode == CensusMode::Exhaustive) {
        mpz_class total = power(p, engine.space().s());
        if (total > mpz_class(std::to_string(options.budget)))
            fail(ErrorCode::BudgetExceeded, std::to_string(p) + "^" + std::to_string(engine.space().s()) +
                                                " matrices exceed the budget of " + std::to_string(options.budget));
    } else if (options.sample_size > options.budget) {
        fail(ErrorCode::BudgetExceeded, "sample of " + std::to_string(options.sample_size) + " exceeds the budget of " +
                                            std::to_string(options.budget));
    }
    if (options.shard_count == 0 || options.shard_index >= options.shard_count)
        fail(ErrorCode::InvalidArgument, "shard index out of range");
}

}  // namespace

CensusReport census_scan(const Engine<PrimeField>& engine, const CensusOptions& options, const std::string& problem_id) {
    check_budget(engine, options);
    const auto& field = engine.problem().gamma.field();
    const std::uint64_t p = field.modulus();
    const std::size_t s = engine.space().s();
    CensusReport report = empty_report(engine, options, problem_id);

    std::uint64_t total = options.sample_size;
    if (options.mode == CensusMode::Exhaustive) {
        total = 1;
        for (std::size_t k = 0; k < s; ++k) total *= p;
    }
    const std::uint64_t lo = total / options.shard_count * options.shard_index +
                             std::min<std::uint64_t>(options.shard_index, total % options.shard_count);
    const std::uint64_t hi = lo + total / options.shard_count + (options.shard_index < total % options.shard_count ? 1 : 0);

    std::map<std::string, FamilyRecord> families;
    Vec<PrimeField> values(s, field.zero());
    for (std::uint64_t index = lo; index < hi; ++index) {
        if (options.mode == CensusMode::Exhaustive) {
            std::uint64_t rest = index;
            for (std::size_t k = 0; k < s; ++k) {
                values[k] = field.from_int(static_cast<long long>(rest % p));
                rest /= p;
            }
        } else {
            std::mt19937_64 rng(options.seed * 0x9E3779B97F4A7C15ull + index);
            for (auto& v : values) v = field.random(rng);
        }
        auto m = engine.space().from_free(values);
        ++report.scanned;
        try {
            auto form = engine.canonicalize(m);
            auto key = family_key(form);
            auto [it, fresh] = families.try_emplace(key);
            auto& rec = it->second;
            if (fresh) {
                rec.key = key;
                rec.first_index = index;
                for (const auto& x : m.data()) rec.representative.push_back(x.value());
            }
            ++rec.members;
            report.forms.insert(flat_values(form.matrix));
        } catch (const Error& e) {
            if (e.code() != ErrorCode::NonSplit) throw;
            ++report.non_split;
        }
    }
    for (auto& [k, rec] : families) report.families.push_back(std::move(rec));
    return report;
}

CensusReport merge_reports(const CensusReport& a, const CensusReport& b) {
    if (!(a.n == b.n) || a.modulus != b.modulus || a.s != b.s)
        fail(ErrorCode::InvalidArgument, "merging census reports of different problems");
    CensusReport r = a;
    r.shard_index = 0;
    r.shard_count = std::max(a.shard_count, b.shard_count);
    r.scanned += b.scanned;
    r.non_split += b.non_split;
    r.forms.insert(b.forms.begin(), b.forms.end());
    std::map<std::string, FamilyRecord> fam;
    for (const auto& f : a.families) fam.emplace(f.key, f);
    for (const auto& f : b.families) {
        auto [it, fresh] = fam.try_emplace(f.key, f);
        if (fresh) continue;
        auto& rec = it->second;
        rec.members += f.members;
        if (f.first_index < rec.first_index) {
            rec.first_index = f.first_index;
            rec.representative = f.representative;
        }
    }
    r.families.clear();
    for (auto& [k, rec] : fam) r.families.push_back(std::move(rec));
    return r;
}

void finalize_report(CensusReport& report, const Engine<PrimeField>& engine, bool parametrize_families) {
    const auto& field = engine.problem().gamma.field();
    for (auto& rec : report.families) {
        auto m = from_values(field, engine.size(), rec.representative);
        auto form = engine.canonicalize(m);
        rec.indecomposable = is_indecomposable(engine, form);
        if (parametrize_families) {
            auto pf = parametrize(engine, form);
            rec.parameters = pf.parameter_count();
            rec.flagged = pf.flagged;
        }
    }
}

void check_bound(const CensusReport& report) {
    if (mpz_class(static_cast<unsigned long>(report.families.size())) <= report.bound) return;
    std::string witness;
    for (std::size_t k = 0; k < report.families.size() && k < 8; ++k) witness += "\n  " + report.families[k].key;
    fail(ErrorCode::BoundViolated, std::to_string(report.families.size()) + " families exceed 4^" +
                                       std::to_string(report.s) + "; first families:" + witness);
}

CensusReport full_census(const LinearMatrixProblem<PrimeField>& problem, const StepSequence& n, const PrimeField& field,
                         const CensusOptions& options, const std::string& problem_id) {
    if (!(problem.gamma.field().modulus() == field.modulus()))
        fail(ErrorCode::FieldMismatch, "problem is over GF(" + std::to_string(problem.gamma.field().modulus()) + ")");
    Engine<PrimeField> engine(problem, n);
    check_budget(engine, options);
    CensusReport report;
    if (options.shard_count > 1 || options.threads <= 1) {
        report = census_scan(engine, options, problem_id);
    } else {
        std::vector<std::future<CensusReport>> parts;
        for (std::size_t k = 0; k < options.threads; ++k) {
            CensusOptions sub = options;
            sub.shard_index = k;
            sub.shard_count = options.threads;
            parts.push_back(std::async(std::launch::async, [&engine, sub, &problem_id] {
                return census_scan(engine, sub, problem_id);
            }));
        }
        report = parts.front().get();
        for (std::size_t k = 1; k < parts.size(); ++k) report = merge_reports(report, parts[k].get());
        report.shard_count = 1;
    }
    finalize_report(report, engine, options.parametrize);
    check_bound(report);
    return report;
}

// ------------------------------------------------------------ point counts

namespace {

const std::vector<std::string> kXY{"x", "y"};

[[noreturn]] void bad_poly(const std::string& text, const std::string& why) {
    fail(ErrorCode::ParseError, "polynomial '" + text + "': " + why);
}

}  // namespace

BiPoly parse_bipoly(const PrimeField& field, const std::string& text) {
    BiPoly out(field, kXY);
    std::string t;
    for (char c : text)
        if (!std::isspace(static_cast<unsigned char>(c))) t += c;
    if (t.empty()) bad_poly(text, "empty");
    std::size_t i = 0;
    while (i < t.size()) {
        long long sign = 1;
        if (t[i] == '+' || t[i] == '-') {
            sign = t[i] == '-' ? -1 : 1;
            ++i;
        } else if (i != 0) {
            bad_poly(text, "expected + or -");
        }
        auto coeff = field.from_int(sign);
        bool any = false;
        std::size_t j = i;
        while (j < t.size() && std::isdigit(static_cast<unsigned char>(t[j]))) ++j;
        if (j > i) {
            coeff = coeff * field.parse(t.substr(i, j - i));
            any = true;
            i = j;
            if (i < t.size() && t[i] == '*') ++i;
        }
        Exponents e{0, 0};
        while (i < t.size() && (t[i] == 'x' || t[i] == 'y')) {
            std::size_t var = t[i] == 'x' ? 0 : 1;
            ++i;
            std::uint32_t k = 1;
            if (i < t.size() && t[i] == '^') {
                ++i;
                std::size_t d = i;
                while (d < t.size() && std::isdigit(static_cast<unsigned char>(t[d]))) ++d;
                if (d == i) bad_poly(text, "missing exponent");
                k = static_cast<std::uint32_t>(std::stoul(t.substr(i, d - i)));
                i = d;
            }
            e[var] += k;
            any = true;
            if (i < t.size() && t[i] == '*') ++i;
        }
        if (!any) bad_poly(text, "empty term");
        out.add_term(e, coeff);
    }
    return out;
}

BivariateLinearMatrix BivariateLinearMatrix::make(const PrimeField& field, std::size_t rows, std::size_t cols,
                                                  std::vector<BiPoly> entries) {
    if (entries.size() != rows * cols)
        fail(ErrorCode::DimensionMismatch, "expected " + std::to_string(rows * cols) + " entries");
    for (const auto& e : entries) {
        if (e.nvars() != 2) fail(ErrorCode::InvalidArgument, "entries must be polynomials in x, y");
        if (e.total_degree() > 1) fail(ErrorCode::InvalidArgument, "entry " + e.to_string() + " is not linear");
    }
    return {field, rows, cols, std::move(entries)};
}

BivariateLinearMatrix BivariateLinearMatrix::random(const PrimeField& field, std::size_t rows, std::size_t cols,
                                                    std::mt19937_64& rng) {
    std::vector<BiPoly> entries;
    for (std::size_t k = 0; k < rows * cols; ++k) {
        BiPoly p(field, kXY);
        p.add_term({0, 0}, field.random(rng));
        p.add_term({1, 0}, field.random(rng));
        p.add_term({0, 1}, field.random(rng));
        entries.push_back(std::move(p));
    }
    return make(field, rows, cols, std::move(entries));
}

Matrix<PrimeField> BivariateLinearMatrix::eval(const Fp& x, const Fp& y) const {
    Matrix<PrimeField> m(field, rows, cols);
    for (std::size_t k = 0; k < entries.size(); ++k) m.data()[k] = entries[k].eval({x, y});
    return m;
}

std::vector<BiPoly> BivariateLinearMatrix::maximal_minors() const {
    std::vector<BiPoly> out;
    if (rows > cols) return out;
    std::vector<std::size_t> pick(rows);
    for (std::size_t k = 0; k < rows; ++k) pick[k] = k;
    for (;;) {
        std::vector<std::vector<BiPoly>> sub;
        for (std::size_t i = 0; i < rows; ++i) {
            sub.emplace_back();
            for (auto j : pick) sub.back().push_back(at(i, j));
        }
        out.push_back(poly_determinant(sub));
        // next combination
        std::size_t k = rows;
        while (k > 0 && pick[k - 1] == cols - rows + k - 1) --k;
        if (k == 0) break;
        ++pick[k - 1];
        for (std::size_t r = k; r < rows; ++r) pick[r] = pick[r - 1] + 1;
    }
    return out;
}

namespace {

void set_gcd(PointCount& pc, const std::vector<BiPoly>& polys) {
    bool all_zero = std::all_of(polys.begin(), polys.end(), [](const auto& q) { return q.is_zero(); });
    if (all_zero) return;
    pc.gcd = multipoly_gcd(polys);
    pc.hypothesis_ok = pc.gcd->is_constant() && !pc.gcd->is_zero();
}

std::string points_text(const PointCount& pc) {
    std::string s;
    for (const auto& [x, y] : pc.points) s += " (" + x.to_string() + "," + y.to_string() + ")";
    return s;
}

}  // namespace

PointCount dependent_points(const BivariateLinearMatrix& a) {
    if (a.rows > a.cols) fail(ErrorCode::DimensionMismatch, "dependent_points needs rows <= cols");
    PointCount pc;
    set_gcd(pc, a.maximal_minors());
    const auto& f = a.field;
    const auto p = f.modulus();
    for (std::uint32_t i = 0; i < p; ++i)
        for (std::uint32_t j = 0; j < p; ++j) {
            auto x = f.from_int(i), y = f.from_int(j);
            if (rank(a.eval(x, y)) < a.rows) pc.points.emplace_back(x, y);
        }
    pc.count = pc.points.size();
    pc.bound = a.rows == 2 ? 3 : a.rows * a.rows;
    if (pc.hypothesis_ok && pc.count > pc.bound)
        fail(ErrorCode::LemmaViolated, std::to_string(pc.count) + " dependent points exceed " +
                                           std::to_string(pc.bound) + ":" + points_text(pc));
    return pc;
}

PointCount common_roots(const std::vector<BiPoly>& polys) {
    if (polys.size() < 2) fail(ErrorCode::InvalidArgument, "common_roots needs at least two polynomials");
    PointCount pc;
    set_gcd(pc, polys);
    const auto& f = polys.front().field();
    int m = 0;
    for (const auto& q : polys) m = std::max(m, q.total_degree());
    const auto p = f.modulus();
    for (std::uint32_t i = 0; i < p; ++i)
        for (std::uint32_t j = 0; j < p; ++j) {
            auto x = f.from_int(i), y = f.from_int(j);
            if (std::all_of(polys.begin(), polys.end(), [&](const auto& q) { return q.eval({x, y}).is_zero(); }))
                pc.points.emplace_back(x, y);
        }
    pc.count = pc.points.size();
    pc.bound = static_cast<std::size_t>(m) * static_cast<std::size_t>(m);
    if (pc.hypothesis_ok && pc.count > pc.bound)
        fail(ErrorCode::LemmaViolated, std::to_string(pc.count) + " common roots exceed " + std::to_string(pc.bound) +
                                           ":" + points_text(pc));
    return pc;
}

}  // namespace canonform
