// canonform: command-line front end (validate, canon, weyr, census, roots,
// classify, bounds). JSON goes to stdout; errors go to stderr.
#include <CLI11.hpp>
#include <json.hpp>

#include <canonform/modules.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

using namespace canonform;
using json = nlohmann::ordered_json;

namespace {

struct Flags {
    std::string problem, matrix, field, n, m, shard = "0/1";
    std::size_t d = 0;
    std::uint64_t budget = std::uint64_t{1} << 24, seed = 0, sample = 0;
    std::size_t threads = 1;
    bool table = false, trace = false, common = false;
};

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    if (!in) fail(ErrorCode::ParseError, "cannot open '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

template <class F>
std::vector<std::string> rows_of(const Matrix<F>& m) {
    std::vector<std::string> out;
    for (std::size_t i = 0; i < m.rows(); ++i) out.push_back(m.block(i, 0, 1, m.cols()).to_string());
    return out;
}

json interval(const Interval& r) { return json::array({r.start + 1, r.end()}); }

template <class F>
json weyr_json(const WeyrStructure<F>& w) {
    json out = json::array();
    for (const auto& b : w.blocks) out.push_back({{"eigenvalue", b.eigenvalue.to_string()}, {"partition", b.partition}});
    return out;
}

AnyField field_for(const Flags& flags, const ProblemText* text) {
    if (!flags.field.empty()) return make_field(FieldSpec::parse(flags.field));
    return make_field(text ? text->field : FieldSpec::rationals());
}

PrimeField prime_field_for(const Flags& flags, const ProblemText& text) {
    auto any = field_for(flags, &text);
    if (!std::holds_alternative<PrimeField>(any))
        fail(ErrorCode::FieldMismatch, "this command needs a prime field (use --field gf<p>)");
    return std::get<PrimeField>(any);
}

std::pair<std::size_t, std::size_t> parse_shard(const std::string& s) {
    auto slash = s.find('/');
    std::size_t i = 0, n = 0;
    try {
        if (slash == std::string::npos) throw std::invalid_argument(s);
        i = std::stoul(s.substr(0, slash));
        n = std::stoul(s.substr(slash + 1));
    } catch (const std::exception&) {
        fail(ErrorCode::InvalidArgument, "--shard expects i/n, got '" + s + "'");
    }
    if (n == 0 || i >= n) fail(ErrorCode::InvalidArgument, "--shard index must be below the shard count");
    return {i, n};
}

/// The linear problem and step sequence a command works on: separated files
/// are embedded, with --m giving the row sizes.
template <class F>
std::pair<LinearMatrixProblem<F>, StepSequence> linear_target(const LoadedProblem<F>& lp, const Flags& flags) {
    if (flags.n.empty()) fail(ErrorCode::InvalidArgument, "--n is required");
    auto n = StepSequence::parse(flags.n);
    if (!lp.separated()) return {lp.linear(), n};
    if (flags.m.empty()) fail(ErrorCode::InvalidArgument, "separated problems need --m (row sizes) and --n (column sizes)");
    auto sizes = StepSequence::parse(flags.m);
    sizes.sizes.insert(sizes.sizes.end(), n.sizes.begin(), n.sizes.end());
    return {separated_to_linear(lp.as_separated()), sizes};
}

void emit(const json& j, const std::string& table, const Flags& flags) {
    if (flags.table)
        std::cout << table;
    else
        std::cout << j.dump(2) << "\n";
}

// ------------------------------------------------------------ validate

int cmd_validate(const Flags& flags) {
    auto text = read_problem_file(flags.problem);
    return std::visit(
        [&](const auto& field) {
            auto lp = load_problem(text, field);
            json j{{"valid", true},
                   {"field", field.spec().name()},
                   {"t", lp.gamma.t()},
                   {"r", lp.gamma.r()},
                   {"classes", format_classes(lp.gamma.classes())},
                   {"dim_gamma", lp.gamma.dim()},
                   {"dim_radical", lp.gamma.radical().dim()},
                   {"separated", lp.separated()},
                   {"dim_space", lp.space.dim()}};
            if (lp.delta) j["dim_delta"] = lp.delta->dim();
            std::string table = "valid; r=" + std::to_string(lp.gamma.r()) + "; classes " +
                                format_classes(lp.gamma.classes()) + "; dim Γ=" + std::to_string(lp.gamma.dim()) +
                                "; dim M=" + std::to_string(lp.space.dim()) + "\n";
            emit(j, table, flags);
            return 0;
        },
        field_for(flags, &text));
}

// ------------------------------------------------------------ canon

template <class F>
json form_json(const Engine<F>& engine, const CanonicalForm<F>& form, bool trace) {
    json boxes = json::array();
    for (const auto& b : form.boxes) {
        json jb{{"step", b.step + 1}, {"rows", interval(b.rows)}, {"cols", interval(b.cols)},
                {"kind", std::string(to_string(b.kind))}};
        if (b.kind == BoxKind::Stairs) jb["rank"] = b.rank;
        if (b.kind == BoxKind::Weyr) jb["weyr"] = weyr_json(b.weyr);
        jb["additions"] = b.additions;
        boxes.push_back(jb);
    }
    json j{{"n", form.n.to_string()},
           {"partition", form.partition.to_string()},
           {"boxes", boxes},
           {"matrix", rows_of(form.matrix)},
           {"key", family_key(form)}};

    auto pf = parametrize(engine, form);
    json slots = json::array();
    for (std::size_t k = 0; k < pf.slots.size(); ++k) {
        const auto& s = pf.slots[k];
        json pos = json::array();
        for (auto [i, c] : s.positions) pos.push_back(json::array({i + 1, c + 1}));
        slots.push_back({{"name", "l" + std::to_string(k + 1)},
                         {"box", s.box + 1},
                         {"value", s.value.to_string()},
                         {"free", s.infinite},
                         {"positions", pos}});
    }
    json domain = json::array();
    for (const auto& c : pf.domain) domain.push_back(c.to_string());
    j["parameters"] = {{"count", pf.parameter_count()}, {"slots", slots}, {"domain", domain}, {"flagged", pf.flagged}};

    json summands = json::array();
    for (const auto& s : decompose(engine, form)) {
        json occ = json::array();
        for (const auto& idx : s.occurrences) {
            json one = json::array();
            for (auto i : idx) one.push_back(i + 1);
            occ.push_back(one);
        }
        summands.push_back({{"n", s.n.to_string()},
                            {"multiplicity", s.multiplicity()},
                            {"indices", occ},
                            {"matrix", rows_of(s.matrix)},
                            {"in_space", s.in_space}});
    }
    j["summands"] = summands;

    if (trace) {
        json steps = json::array();
        for (const auto& t : form.trace)
            steps.push_back({{"step", t.step + 1},
                             {"rows", interval(t.rows)},
                             {"cols", interval(t.cols)},
                             {"dependent", t.dependent},
                             {"stabilizer_dim", t.stabilizer_dim},
                             {"radical_dim", t.radical_dim},
                             {"addition_dim", t.addition_dim},
                             {"partition", t.partition}});
        j["trace"] = steps;
    }
    return j;
}

template <class F>
std::string form_table(const CanonicalForm<F>& form, const json& j) {
    std::ostringstream os;
    os << "partition " << form.partition.to_string() << "\n";
    os << form.boxes.size() << " boxes\n";
    for (std::size_t k = 0; k < form.boxes.size(); ++k) os << "  " << k + 1 << ". " << form.boxes[k].describe() << "\n";
    os << "canonical matrix\n" << form.matrix.to_string() << "\n";
    const auto& params = j["parameters"];
    os << params["count"].get<std::size_t>() << " parameters";
    for (const auto& c : params["domain"]) os << "; " << c.get<std::string>();
    os << "\n" << j["summands"].size() << " summand types\n";
    return os.str();
}

int cmd_canon(const Flags& flags) {
    auto text = read_problem_file(flags.problem);
    return std::visit(
        [&](const auto& field) {
            using F = std::decay_t<decltype(field)>;
            auto lp = load_problem(text, field);
            auto [problem, n] = linear_target(lp, flags);
            Engine<F> engine(problem, n);
            auto m = parse_matrix(field, slurp(flags.matrix));
            auto form = engine.canonicalize(m, flags.trace);
            auto j = form_json(engine, form, flags.trace);
            j["fixed_point"] = (form.matrix == m);
            emit(j, form_table(form, j), flags);
            return 0;
        },
        field_for(flags, &text));
}

// ------------------------------------------------------------ weyr

int cmd_weyr(const Flags& flags) {
    return std::visit(
        [&](const auto& field) {
            auto a = parse_matrix(field, slurp(flags.matrix));
            auto res = weyr_form(a);
            json j{{"structure", weyr_json(res.structure)},
                   {"jordan", res.structure.jordan_sizes()},
                   {"w", rows_of(res.w)},
                   {"s", rows_of(res.s)}};
            std::string table = res.structure.to_string() + "\nW\n" + res.w.to_string() + "\nS\n" + res.s.to_string() + "\n";
            emit(j, table, flags);
            return 0;
        },
        field_for(flags, nullptr));
}

// ------------------------------------------------------------ census

int cmd_census(const Flags& flags) {
    auto text = read_problem_file(flags.problem);
    auto field = prime_field_for(flags, text);
    auto lp = load_problem(text, field);
    auto [problem, n] = linear_target(lp, flags);
    CensusOptions opts;
    opts.seed = flags.seed;
    opts.budget = flags.budget;
    opts.threads = flags.threads;
    if (flags.sample > 0) {
        opts.mode = CensusMode::Sample;
        opts.sample_size = flags.sample;
    }
    std::tie(opts.shard_index, opts.shard_count) = parse_shard(flags.shard);
    auto rep = full_census(problem, n, field, opts, flags.problem);

    json fams = json::array();
    for (const auto& f : rep.families)
        fams.push_back({{"key", f.key},
                        {"members", f.members},
                        {"first_index", f.first_index},
                        {"parameters", f.parameters},
                        {"indecomposable", f.indecomposable},
                        {"flagged", f.flagged}});
    json j{{"n", rep.n.to_string()},
           {"field", field.spec().name()},
           {"mode", to_string(rep.mode)},
           {"shard", std::to_string(rep.shard_index) + "/" + std::to_string(rep.shard_count)},
           {"s", rep.s},
           {"bound", rep.bound.get_str()},
           {"scanned", rep.scanned},
           {"non_split", rep.non_split},
           {"distinct_forms", rep.distinct_forms()},
           {"families", rep.families.size()},
           {"indecomposable_families", rep.indecomposable_families()},
           {"parametric_families", rep.parametric_families()},
           {"within_bound", true},
           {"family_list", fams}};
    std::ostringstream os;
    os << "n " << rep.n.to_string() << " over " << field.spec().name() << ", " << to_string(rep.mode) << ", s=" << rep.s
       << "\n"
       << rep.scanned << " matrices, " << rep.distinct_forms() << " canonical forms, " << rep.families.size()
       << " families (" << rep.indecomposable_families() << " indecomposable, " << rep.parametric_families()
       << " with parameters); bound 4^" << rep.s << "\n";
    for (const auto& f : rep.families)
        os << "  " << f.members << "\t" << f.parameters << "p\t" << (f.indecomposable ? "ind " : "dec ") << f.key << "\n";
    emit(j, os.str(), flags);
    return 0;
}

// ------------------------------------------------------------ roots

std::vector<std::string> split_on(const std::string& line, char sep) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : line) {
        if (c == sep) {
            out.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    out.push_back(cur);
    return out;
}

bool blank(const std::string& s) { return s.find_first_not_of(" \t\r") == std::string::npos; }

int cmd_roots(const Flags& flags) {
    auto any = field_for(flags, nullptr);
    if (!std::holds_alternative<PrimeField>(any)) fail(ErrorCode::FieldMismatch, "roots needs --field gf<p>");
    const auto& field = std::get<PrimeField>(any);
    std::istringstream in(slurp(flags.matrix));
    std::vector<std::vector<BiPoly>> rows;
    std::string line;
    while (std::getline(in, line)) {
        if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        if (blank(line)) continue;
        std::vector<BiPoly> row;
        for (const auto& cell : split_on(line, ';')) row.push_back(parse_bipoly(field, cell));
        rows.push_back(std::move(row));
    }
    if (rows.empty()) fail(ErrorCode::ParseError, "no polynomials in '" + flags.matrix + "'");

    PointCount pc;
    json j;
    if (flags.common) {
        std::vector<BiPoly> polys;
        for (auto& r : rows) polys.insert(polys.end(), r.begin(), r.end());
        pc = common_roots(polys);
        j["mode"] = "common_roots";
        j["polynomials"] = polys.size();
    } else {
        std::vector<BiPoly> entries;
        for (auto& r : rows) {
            if (r.size() != rows.front().size()) fail(ErrorCode::ParseError, "rows of different lengths");
            entries.insert(entries.end(), r.begin(), r.end());
        }
        auto a = BivariateLinearMatrix::make(field, rows.size(), rows.front().size(), entries);
        pc = dependent_points(a);
        j["mode"] = "dependent_points";
        j["shape"] = json::array({a.rows, a.cols});
    }
    json pts = json::array();
    for (const auto& [x, y] : pc.points) pts.push_back(json::array({x.value(), y.value()}));
    j["field"] = field.spec().name();
    j["hypothesis"] = pc.hypothesis_ok;
    j["gcd"] = pc.gcd ? pc.gcd->to_string() : "0";
    j["count"] = pc.count;
    j["bound"] = pc.bound;
    j["points"] = pts;
    std::ostringstream os;
    os << pc.count << " points";
    if (pc.hypothesis_ok) os << " (bound " << pc.bound << ")";
    else os << " (gcd " << j["gcd"].get<std::string>() << " is not constant; no bound applies)";
    os << "\n";
    for (const auto& [x, y] : pc.points) os << "  (" << x << ", " << y << ")\n";
    emit(j, os.str(), flags);
    return 0;
}

// ------------------------------------------------------------ classify, bounds

json bounds_json(const BoundsRecord& b) {
    return {{"d", b.d},
            {"lemma_sum", b.lemma_sum.get_str()},
            {"theorem_bound1", b.theorem_bound1.get_str()},
            {"theorem_bound2", b.theorem_bound2.get_str()},
            {"brustle_log", std::isinf(b.brustle_log) ? json("-inf") : json(b.brustle_log)},
            {"chain_holds", b.chain_holds()}};
}

template <class F>
json class_data(const ModuleProblem<F>& mp) {
    return {{"r", mp.r()}, {"L", mp.L}, {"delta", mp.delta}, {"projective_dims", mp.projective_dims}};
}

int cmd_classify(const Flags& flags) {
    auto text = read_problem_file(flags.problem);
    auto field = prime_field_for(flags, text);
    auto mp = build_module_problem(load_algebra(text, field));
    ClassifyOptions opts;
    opts.budget = flags.budget;
    opts.seed = flags.seed;
    if (flags.sample > 0) opts.sample_size = flags.sample;
    auto rep = classify_modules(mp, flags.d, opts);

    json plans = json::array();
    for (const auto& p : rep.plans)
        plans.push_back({{"q", p.plan.q},
                         {"p", p.plan.p},
                         {"s", p.s},
                         {"mode", to_string(p.mode)},
                         {"scanned", p.scanned},
                         {"families", p.families}});
    json fams = json::array();
    for (const auto& f : rep.families)
        fams.push_back({{"q", f.q},
                        {"p", f.p},
                        {"dimension", f.dimension},
                        {"parameters", f.parameters},
                        {"flagged", f.flagged},
                        {"key", f.key},
                        {"corner", f.corner}});
    json j{{"field", field.spec().name()},
           {"d", rep.d},
           {"modules", "right"},
           {"classes", class_data(mp)},
           {"sampled", rep.sampled},
           {"f_observed", rep.f_observed()},
           {"one_parameter", rep.parametric()},
           {"plans", plans},
           {"families", fams},
           {"bounds", bounds_json(rep.bounds)}};
    std::ostringstream os;
    os << rep.f_observed() << " indecomposable families; " << rep.parametric() << " one-parameter"
       << (rep.sampled ? " (some plans sampled)" : "") << "\n";
    for (const auto& f : rep.families)
        os << "  q=" << format_vector(f.q) << " p=" << format_vector(f.p) << " dim " << f.dimension << ", "
           << f.parameters << " parameters\n";
    os << "bound " << rep.bounds.theorem_bound1.get_str() << ", lemma sum " << rep.bounds.lemma_sum.get_str() << "\n";
    emit(j, os.str(), flags);
    return 0;
}

int cmd_bounds(const Flags& flags) {
    auto text = read_problem_file(flags.problem);
    return std::visit(
        [&](const auto& field) {
            auto mp = build_module_problem(load_algebra(text, field));
            auto b = bounds_report(mp, flags.d);
            json j = bounds_json(b);
            j["classes"] = class_data(mp);
            std::ostringstream os;
            os << "d=" << b.d << "\nlemma_sum " << b.lemma_sum.get_str() << "\ntheorem_bound1 "
               << b.theorem_bound1.get_str() << "\ntheorem_bound2 " << b.theorem_bound2.get_str() << "\nbrustle_log "
               << b.brustle_log << "\n";
            emit(j, os.str(), flags);
            return 0;
        },
        field_for(flags, &text));
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Canonical forms of linear matrix problems"};
    app.require_subcommand(1);
    Flags flags;

    auto format = [&](CLI::App* sub) {
        auto* js = sub->add_flag("--json", "JSON output (default)");
        sub->add_flag("--table", flags.table, "human-readable output")->excludes(js);
    };
    auto field_opt = [&](CLI::App* sub) { sub->add_option("--field", flags.field, "field override: q or gf<p>"); };

    auto* validate = app.add_subcommand("validate", "check a problem file");
    validate->add_option("problem", flags.problem)->required()->check(CLI::ExistingFile);
    field_opt(validate);
    format(validate);

    auto* canon = app.add_subcommand("canon", "canonical form of one matrix");
    canon->add_option("problem", flags.problem)->required()->check(CLI::ExistingFile);
    canon->add_option("matrix", flags.matrix)->required()->check(CLI::ExistingFile);
    canon->add_option("--n", flags.n, "step sequence, e.g. 2,2")->required();
    canon->add_option("--m", flags.m, "row sizes for separated problems");
    canon->add_flag("--trace", flags.trace, "include the per-step log");
    field_opt(canon);
    format(canon);

    auto* weyr = app.add_subcommand("weyr", "Weyr form of a square matrix");
    weyr->add_option("matrix", flags.matrix)->required()->check(CLI::ExistingFile);
    field_opt(weyr);
    format(weyr);

    auto* census = app.add_subcommand("census", "enumerate canonical forms over GF(p)");
    census->add_option("problem", flags.problem)->required()->check(CLI::ExistingFile);
    census->add_option("--n", flags.n)->required();
    census->add_option("--m", flags.m);
    census->add_option("--budget", flags.budget, "largest number of matrices to canonicalize");
    census->add_option("--seed", flags.seed);
    census->add_option("--sample", flags.sample, "sample this many matrices instead of enumerating");
    census->add_option("--shard", flags.shard, "i/n: this run's share of the enumeration");
    census->add_option("--threads", flags.threads)->check(CLI::PositiveNumber);
    field_opt(census);
    format(census);

    auto* roots = app.add_subcommand("roots", "dependent points of a bivariate linear matrix");
    roots->add_option("matrix", flags.matrix, "rows of ';'-separated polynomials in x, y")
        ->required()
        ->check(CLI::ExistingFile);
    roots->add_flag("--common", flags.common, "common zeros of all listed polynomials instead");
    field_opt(roots);
    format(roots);

    auto* classify = app.add_subcommand("classify", "indecomposable right modules up to dimension d");
    classify->add_option("problem", flags.problem)->required()->check(CLI::ExistingFile);
    classify->add_option("--d", flags.d)->required();
    classify->add_option("--budget", flags.budget);
    classify->add_option("--seed", flags.seed);
    classify->add_option("--sample", flags.sample, "sample size for plans over budget");
    field_opt(classify);
    format(classify);

    auto* bounds = app.add_subcommand("bounds", "module family bounds");
    bounds->add_option("problem", flags.problem)->required()->check(CLI::ExistingFile);
    bounds->add_option("--d", flags.d)->required();
    field_opt(bounds);
    format(bounds);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        if (*validate) return cmd_validate(flags);
        if (*canon) return cmd_canon(flags);
        if (*weyr) return cmd_weyr(flags);
        if (*census) return cmd_census(flags);
        if (*roots) return cmd_roots(flags);
        if (*classify) return cmd_classify(flags);
        if (*bounds) return cmd_bounds(flags);
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return e.code() == ErrorCode::BudgetExceeded ? 2 : 1;
    }
    return 1;
}
