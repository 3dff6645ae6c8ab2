#include "canonform/modules.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <memory>
#include <numeric>
#include <random>
#include <set>
#include <tuple>

#include "canonform/linalg.hpp"

namespace canonform {

std::string format_vector(const std::vector<std::size_t>& v) {
    std::string s = "(";
    for (std::size_t k = 0; k < v.size(); ++k) s += (k ? "," : "") + std::to_string(v[k]);
    return s + ")";
}

template <class F>
ModuleProblem<F> build_module_problem(const BasicAlgebra<F>& gamma) {
    const auto& field = gamma.field();
    const std::size_t r = gamma.r();
    std::vector<Matrix<F>> idem;
    for (std::size_t a = 0; a < r; ++a) idem.push_back(gamma.idempotent(a));

    const auto& rad = gamma.radical().basis();
    std::vector<std::vector<std::size_t>> L(r, std::vector<std::size_t>(r, 0));
    for (std::size_t a = 0; a < r; ++a)
        for (std::size_t b = 0; b < r; ++b) {
            std::vector<Matrix<F>> span;
            for (const auto& x : rad) span.push_back(idem[a] * x * idem[b]);
            L[a][b] = MatrixSpace<F>(field, gamma.t(), gamma.t(), span).dim();
        }

    std::vector<std::size_t> delta(r), pdims(r);
    std::vector<std::vector<Matrix<F>>> pbases(r);
    for (std::size_t b = 0; b < r; ++b) {
        std::vector<Matrix<F>> re, ge, eg;
        for (const auto& x : rad) re.push_back(x * idem[b]);
        for (const auto& g : gamma.basis()) {
            ge.push_back(g * idem[b]);
            eg.push_back(idem[b] * g);
        }
        delta[b] = MatrixSpace<F>(field, gamma.t(), gamma.t(), re).dim();
        std::size_t col_sum = 0;
        for (std::size_t a = 0; a < r; ++a) col_sum += L[a][b];
        std::size_t left = MatrixSpace<F>(field, gamma.t(), gamma.t(), ge).dim();
        if (col_sum != delta[b] || left != delta[b] + 1)
            fail(ErrorCode::InternalInconsistency,
                 "class " + std::to_string(b + 1) + ": dim R e = " + std::to_string(delta[b]) + ", column sum " +
                     std::to_string(col_sum) + ", dim Gamma e = " + std::to_string(left));
        MatrixSpace<F> proj(field, gamma.t(), gamma.t(), eg);
        pdims[b] = proj.dim();
        pbases[b] = proj.basis();
    }
    auto separated = SeparatedProblem<F>::make(gamma, gamma, gamma.radical());
    return ModuleProblem<F>{gamma, std::move(idem), std::move(L), std::move(delta), std::move(pdims),
                            std::move(pbases), std::move(separated)};
}

StepSequence DimensionPlan::combined() const {
    StepSequence s = m;
    s.sizes.insert(s.sizes.end(), n.sizes.begin(), n.sizes.end());
    return s;
}

std::string DimensionPlan::to_string() const { return "q=" + format_vector(q) + " p=" + format_vector(p); }

template <class F>
DimensionPlan make_plan(const ModuleProblem<F>& mp, std::vector<std::size_t> q, std::vector<std::size_t> p) {
    if (q.size() != mp.r() || p.size() != mp.r()) fail(ErrorCode::DimensionMismatch, "plan vectors need one entry per class");
    DimensionPlan plan;
    for (std::size_t i = 0; i < mp.gamma.t(); ++i) {
        plan.m.sizes.push_back(q[mp.gamma.class_of(i)]);
        plan.n.sizes.push_back(p[mp.gamma.class_of(i)]);
    }
    for (std::size_t a = 0; a < mp.r(); ++a)
        for (std::size_t b = 0; b < mp.r(); ++b) plan.free_entries += q[a] * p[b] * mp.L[a][b];
    plan.q = std::move(q);
    plan.p = std::move(p);
    return plan;
}

template <class F>
std::vector<DimensionPlan> dimension_plans(const ModuleProblem<F>& mp, std::size_t d) {
    const std::size_t r = mp.r();
    std::vector<DimensionPlan> plans;
    std::vector<std::size_t> q(r, 0);
    // graded: total 0, 1, ..., d; within a grade lexicographically decreasing
    auto rec = [&](auto&& self, std::size_t pos, std::size_t left) -> void {
        if (pos + 1 == r || r == 0) {
            if (r) q[pos] = left;
            std::vector<std::size_t> p(r, 0);
            for (std::size_t b = 0; b < r; ++b)
                for (std::size_t a = 0; a < r; ++a) p[b] += q[a] * mp.L[a][b];
            plans.push_back(make_plan(mp, q, p));
            return;
        }
        for (std::size_t v = left + 1; v-- > 0;) {
            q[pos] = v;
            self(self, pos + 1, left - v);
        }
    };
    for (std::size_t total = 0; total <= d; ++total) {
        rec(rec, 0, total);
        if (r == 0) break;
    }
    return plans;
}

template <class F>
std::size_t module_dimension(const Matrix<F>& phi, const ModuleProblem<F>& mp, const DimensionPlan& plan) {
    const auto& gamma = mp.gamma;
    const auto& field = gamma.field();
    const std::size_t t = gamma.t(), r = mp.r();
    if (phi.rows() != plan.m.total() || phi.cols() != plan.n.total())
        fail(ErrorCode::DimensionMismatch, "corner is " + std::to_string(phi.rows()) + "x" + std::to_string(phi.cols()) +
                                               ", plan needs " + std::to_string(plan.m.total()) + "x" +
                                               std::to_string(plan.n.total()));
    auto moff = plan.m.offsets(), noff = plan.n.offsets();

    std::vector<std::size_t> row_base(r + 1, 0), col_base(r + 1, 0);
    for (std::size_t a = 0; a < r; ++a) {
        row_base[a + 1] = row_base[a] + plan.q[a] * mp.projective_dims[a];
        col_base[a + 1] = col_base[a] + plan.p[a] * mp.projective_dims[a];
    }
    Matrix<F> map(field, row_base[r], col_base[r]);
    std::vector<MatrixSpace<F>> proj;
    for (std::size_t a = 0; a < r; ++a) proj.emplace_back(field, t, t, mp.projective_bases[a]);

    for (std::size_t a = 0; a < r; ++a)
        for (std::size_t b = 0; b < r; ++b)
            for (std::size_t ca = 0; ca < plan.q[a]; ++ca)
                for (std::size_t cb = 0; cb < plan.p[b]; ++cb) {
                    Matrix<F> x(field, t, t);
                    bool nonzero = false;
                    for (std::size_t i : gamma.classes()[a])
                        for (std::size_t j : gamma.classes()[b]) {
                            x(i, j) = phi(moff[i] + ca, noff[j] + cb);
                            nonzero = nonzero || !x(i, j).is_zero();
                        }
                    if (!nonzero) continue;
                    if (!gamma.radical().contains(x))
                        fail(ErrorCode::NotInRadicalSpace, "block entry for copies (" + std::to_string(ca) + "," +
                                                               std::to_string(cb) + ") of classes (" + std::to_string(a + 1) +
                                                               "," + std::to_string(b + 1) + ") is not in the radical");
                    const auto& src = mp.projective_bases[b];
                    for (std::size_t k = 0; k < src.size(); ++k) {
                        auto image = x * src[k];
                        auto coords = proj[a].coordinates(image);
                        if (!coords) fail(ErrorCode::InternalInconsistency, "left multiplication leaves the projective");
                        for (std::size_t l = 0; l < coords->size(); ++l)
                            map(row_base[a] + ca * mp.projective_dims[a] + l, col_base[b] + cb * src.size() + k) = (*coords)[l];
                    }
                }
    return row_base[r] - rank(map);
}

namespace {

mpz_class power(unsigned long base, std::size_t e) {
    mpz_class out;
    mpz_ui_pow_ui(out.get_mpz_t(), base, e);
    return out;
}

}  // namespace

template <class F>
BoundsRecord bounds_report(const ModuleProblem<F>& mp, std::size_t d) {
    BoundsRecord b;
    b.d = d;
    for (const auto& plan : dimension_plans(mp, d)) b.lemma_sum += power(4, plan.free_entries);
    const std::size_t r = mp.r();
    std::size_t delta_sq = 0;
    for (auto x : mp.delta) delta_sq += x * x;
    mpz_class binom;
    mpz_bin_uiui(binom.get_mpz_t(), d + r, r);
    b.theorem_bound1 = binom * power(4, d * d * delta_sq);
    const std::size_t dim = mp.gamma.dim();
    b.theorem_bound2 = power(d + 1, r) * power(4, d * d * dim * dim);
    const double rad = static_cast<double>(mp.gamma.radical().dim());
    const double dd = static_cast<double>(d);
    b.brustle_log = (rad > 0 ? std::log(rad) : -std::numeric_limits<double>::infinity()) +
                    64.0 * std::pow(3.0, dd - 1) * std::pow(dd - 1, 2 * dd - 1);
    if (!b.chain_holds())
        fail(ErrorCode::BoundViolated, "bound chain fails at d = " + std::to_string(d) + ": " + b.lemma_sum.get_str() +
                                           ", " + b.theorem_bound1.get_str() + ", " + b.theorem_bound2.get_str());
    return b;
}

std::size_t ModuleFamilyReport::parametric() const {
    return static_cast<std::size_t>(std::count_if(families.begin(), families.end(), [](const auto& f) { return f.parameters > 0; }));
}

namespace {

Matrix<PrimeField> from_row_major(const PrimeField& field, std::size_t n, const std::vector<std::uint64_t>& values) {
    Matrix<PrimeField> m(field, n, n);
    for (std::size_t k = 0; k < values.size(); ++k) m(k / n, k % n) = field.from_int(static_cast<long>(values[k]));
    return m;
}

struct EngineCache {
    const LinearMatrixProblem<PrimeField>& problem;
    std::map<std::vector<std::size_t>, std::unique_ptr<Engine<PrimeField>>> engines;

    const Engine<PrimeField>& get(const StepSequence& n) {
        auto& slot = engines[n.sizes];
        if (!slot) slot = std::make_unique<Engine<PrimeField>>(problem, n);
        return *slot;
    }
};

}  // namespace

ModuleFamilyReport classify_modules(const ModuleProblem<PrimeField>& mp, std::size_t d, const ClassifyOptions& options) {
    const auto& field = mp.gamma.field();
    const std::size_t t = mp.gamma.t();
    ModuleFamilyReport report;
    report.d = d;
    report.modulus = field.modulus();
    report.bounds = bounds_report(mp, d);

    auto linear = separated_to_linear(mp.separated);
    EngineCache cache{linear, {}};
    std::set<std::vector<std::uint64_t>> seen_summands;
    std::map<std::tuple<std::vector<std::size_t>, std::vector<std::size_t>, std::string>, ModuleFamily> found;

    for (const auto& plan : dimension_plans(mp, d)) {
        const auto& engine = cache.get(plan.combined());
        PlanSummary summary;
        summary.plan = plan;
        summary.s = engine.space().s();

        CensusOptions co;
        co.seed = options.seed;
        co.budget = options.budget;
        co.parametrize = false;
        mpz_class total = power(field.modulus(), summary.s);
        if (total > mpz_class(static_cast<unsigned long>(options.budget))) {
            if (!options.allow_sampling)
                fail(ErrorCode::BudgetExceeded, plan.to_string() + ": " + total.get_str() + " matrices exceed the budget");
            co.mode = CensusMode::Sample;
            co.sample_size = std::min(options.sample_size, options.budget);
            report.sampled = true;
        }
        summary.mode = co.mode;
        auto census = census_scan(engine, co, plan.to_string());
        summary.scanned = census.scanned;
        summary.families = census.families.size();
        report.plans.push_back(summary);

        for (const auto& values : census.forms) {
            auto form = engine.canonicalize(from_row_major(field, engine.size(), values));
            for (const auto& part : decompose(engine, form)) {
                std::vector<std::size_t> q(mp.r(), 0), p(mp.r(), 0);
                for (std::size_t i = 0; i < t; ++i) {
                    q[mp.gamma.class_of(i)] = part.n.sizes[i];
                    p[mp.gamma.class_of(i)] = part.n.sizes[t + i];
                }
                if (std::all_of(q.begin(), q.end(), [](auto x) { return x == 0; })) continue;  // a padded projective

                std::vector<std::uint64_t> sig(part.n.sizes.begin(), part.n.sizes.end());
                sig.push_back(~std::uint64_t{0});
                for (const auto& x : part.matrix.data()) sig.push_back(x.value());
                if (!seen_summands.insert(sig).second) continue;

                auto sub_plan = make_plan(mp, q, p);
                const std::size_t rows = sub_plan.m.total();
                auto corner = part.matrix.block(0, rows, rows, sub_plan.n.total());
                ModuleFamily fam;
                fam.q = q;
                fam.p = p;
                fam.dimension = module_dimension(corner, mp, sub_plan);
                if (fam.dimension == 0 || fam.dimension > d) continue;
                if (part.in_space) {
                    const auto& sub = cache.get(part.n);
                    auto sub_form = sub.canonicalize(part.matrix);
                    fam.key = family_key(sub_form);
                    if (found.count({q, p, fam.key})) continue;
                    auto pf = parametrize(sub, sub_form);
                    fam.parameters = pf.parameter_count();
                    fam.flagged = pf.flagged;
                    fam.corner = sub_form.matrix.block(0, rows, rows, sub_plan.n.total()).to_string();
                } else {
                    fam.key = "raw " + part.matrix.to_string();
                    fam.flagged = true;
                    fam.corner = corner.to_string();
                }
                found.emplace(std::make_tuple(q, p, fam.key), std::move(fam));
            }
        }
    }
    for (auto& [k, fam] : found) report.families.push_back(std::move(fam));

    const mpz_class observed(static_cast<unsigned long>(report.f_observed()));
    if (observed > report.bounds.theorem_bound1 || observed > report.bounds.lemma_sum)
        fail(ErrorCode::BoundViolated, std::to_string(report.f_observed()) + " module families exceed the bound " +
                                           std::min(report.bounds.theorem_bound1, report.bounds.lemma_sum).get_str());
    return report;
}

#define CANONFORM_INSTANTIATE(F)                                                                           \
    template ModuleProblem<F> build_module_problem(const BasicAlgebra<F>&);                                \
    template std::vector<DimensionPlan> dimension_plans(const ModuleProblem<F>&, std::size_t);             \
    template DimensionPlan make_plan(const ModuleProblem<F>&, std::vector<std::size_t>, std::vector<std::size_t>); \
    template std::size_t module_dimension(const Matrix<F>&, const ModuleProblem<F>&, const DimensionPlan&); \
    template BoundsRecord bounds_report(const ModuleProblem<F>&, std::size_t);

CANONFORM_INSTANTIATE(PrimeField)
CANONFORM_INSTANTIATE(RationalField)

#undef CANONFORM_INSTANTIATE

}  // namespace canonform
