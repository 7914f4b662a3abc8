#pragma once

// Command layer behind the qosc executable. Each command takes a RunConfig and
// returns the exit code together with the text destined for stdout and stderr,
// so that the front end only parses flags and writes files.

#include <cstdio>
#include <cstdlib>
#include <future>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "qosc/algcheck.hpp"
#include "qosc/hopfstar.hpp"
#include "qosc/normform.hpp"
#include "qosc/repbuild.hpp"
#include "qosc/serialize.hpp"
#include "qosc/sumap.hpp"

namespace qosc {

enum class Format { json, csv, text };

enum class Expectation { pass, fail, any };

inline std::string_view to_string(Expectation e)
{
    switch (e) {
    case Expectation::pass: return "pass";
    case Expectation::fail: return "fail";
    default: return "any";
    }
}

inline bool expectation_met(Expectation e, bool pass)
{
    return e == Expectation::any || (e == Expectation::pass) == pass;
}

struct EpsGrid {
    double lo = 0.0;
    double hi = 0.0;
    double step = 0.0;
};

inline const std::vector<std::string>& check_families()
{
    static const std::vector<std::string> all{"algebra", "ladder", "casimir", "hopf",
                                              "star:canonical7", "star:eq13", "suq2", "symbolic"};
    return all;
}

inline constexpr int kSymbolicMaxN = 16;
inline constexpr int kDefaultSymbolicN = 8;

struct RunConfig {
    Mode mode = Mode::Unimodular;
    std::optional<double> epsilon;
    std::optional<EpsGrid> grid;
    std::optional<int> l; // empty means auto
    int k_lo = 0;
    int k_hi = 0;
    std::vector<std::string> checks; // empty means every family applicable to the mode
    double tol = kDefaultTol;
    Format format = Format::json;
    int n_max = kDefaultSymbolicN;
    /// Perturbation of the symbolic rewrite rule; nonzero only for negative controls.
    double delta_tamper = 0.0;
    std::optional<InvolutionSpec> involution;
};

struct CommandResult {
    int exit_code = 0;
    std::string out;
    std::string err;
};

// ---------------------------------------------------------------------------
// Parsing helpers shared by the CLI and the tests. All throw Error on bad input.

inline Format parse_format(std::string_view s)
{
    if (s == "json") return Format::json;
    if (s == "csv") return Format::csv;
    if (s == "text") return Format::text;
    throw Error("format must be json|csv|text, got '" + std::string(s) + "'");
}

namespace detail {

inline double parse_double(const std::string& s)
{
    std::size_t pos = 0;
    double v = 0.0;
    try {
        v = std::stod(s, &pos);
    } catch (const std::exception&) {
        throw Error("not a number: '" + s + "'");
    }
    if (pos != s.size()) throw Error("not a number: '" + s + "'");
    return v;
}

inline int parse_int(const std::string& s)
{
    std::size_t pos = 0;
    int v = 0;
    try {
        v = std::stoi(s, &pos);
    } catch (const std::exception&) {
        throw Error("not an integer: '" + s + "'");
    }
    if (pos != s.size()) throw Error("not an integer: '" + s + "'");
    return v;
}

inline std::vector<std::string> split(const std::string& s, char sep)
{
    std::vector<std::string> out;
    std::string cur;
    std::istringstream in(s);
    while (std::getline(in, cur, sep)) out.push_back(cur);
    if (!s.empty() && s.back() == sep) out.emplace_back();
    return out;
}

} // namespace detail

inline std::optional<int> parse_l(const std::string& s)
{
    if (s == "auto") return std::nullopt;
    return detail::parse_int(s);
}

/// "3" or "0..6".
inline std::pair<int, int> parse_k_range(const std::string& s)
{
    const auto dots = s.find("..");
    if (dots == std::string::npos) {
        const int k = detail::parse_int(s);
        if (k < 0) throw Error("k must be nonnegative");
        return {k, k};
    }
    const int lo = detail::parse_int(s.substr(0, dots));
    const int hi = detail::parse_int(s.substr(dots + 2));
    if (lo < 0 || hi < lo) throw Error("k range must satisfy 0 <= lo <= hi: '" + s + "'");
    return {lo, hi};
}

/// "lo:hi:step" with step > 0 and lo <= hi.
inline EpsGrid parse_grid(const std::string& s)
{
    const auto parts = detail::split(s, ':');
    if (parts.size() != 3) throw Error("epsilon grid must be lo:hi:step, got '" + s + "'");
    EpsGrid g{detail::parse_double(parts[0]), detail::parse_double(parts[1]), detail::parse_double(parts[2])};
    if (!(g.step > 0.0) || g.hi < g.lo) throw Error("epsilon grid needs step > 0 and lo <= hi");
    return g;
}

/// Points lo + i*step up to hi inclusive (with a relative slack of 1e-9 steps).
inline std::vector<double> grid_points(const EpsGrid& g)
{
    const auto count = static_cast<long>(std::floor((g.hi - g.lo) / g.step + 1e-9)) + 1;
    if (count > 100000) throw Error("epsilon grid has too many points");
    std::vector<double> pts;
    for (long i = 0; i < count; ++i) pts.push_back(g.lo + double(i) * g.step);
    return pts;
}

inline std::vector<std::string> parse_checks(const std::string& csv)
{
    std::vector<std::string> out;
    for (const auto& raw : detail::split(csv, ',')) {
        if (raw.empty()) continue;
        const auto& known = check_families();
        if (std::find(known.begin(), known.end(), raw) == known.end())
            throw Error("unknown check family '" + raw + "'");
        if (std::find(out.begin(), out.end(), raw) == out.end()) out.push_back(raw);
    }
    if (out.empty()) throw Error("--checks must name at least one family");
    return out;
}

/// QOSC_TOL when set and valid, otherwise the library default.
inline double default_tolerance()
{
    if (const char* env = std::getenv("QOSC_TOL")) {
        const double v = detail::parse_double(env);
        if (!(v > 0.0)) throw Error("QOSC_TOL must be positive");
        return v;
    }
    return kDefaultTol;
}

// ---------------------------------------------------------------------------
// Output helpers

/// Serializes with fixed key order and every float printed with 17 significant digits.
inline void write_json(std::ostream& os, const json& j, int indent = 2, int depth = 0)
{
    const std::string pad(std::size_t(indent * (depth + 1)), ' ');
    const std::string close_pad(std::size_t(indent * depth), ' ');
    switch (j.type()) {
    case json::value_t::object: {
        if (j.empty()) {
            os << "{}";
            return;
        }
        os << "{\n";
        bool first = true;
        for (const auto& [key, value] : j.items()) {
            if (!first) os << ",\n";
            first = false;
            os << pad << json(key).dump() << ": ";
            write_json(os, value, indent, depth + 1);
        }
        os << "\n" << close_pad << "}";
        return;
    }
    case json::value_t::array: {
        if (j.empty()) {
            os << "[]";
            return;
        }
        // Short scalar arrays such as [re, im] stay on one line.
        const bool flat = j.size() <= 2 && std::all_of(j.begin(), j.end(), [](const json& e) {
                              return e.is_primitive();
                          });
        os << (flat ? "[" : "[\n");
        bool first = true;
        for (const auto& e : j) {
            if (!first) os << (flat ? ", " : ",\n");
            first = false;
            if (!flat) os << pad;
            write_json(os, e, indent, depth + 1);
        }
        os << (flat ? "]" : "\n" + close_pad + "]");
        return;
    }
    case json::value_t::number_float: {
        const double v = j.get<double>();
        if (!std::isfinite(v)) {
            os << "null";
            return;
        }
        char buf[40];
        std::snprintf(buf, sizeof buf, "%.17g", v);
        os << buf;
        return;
    }
    default:
        os << j.dump();
    }
}

inline std::string to_json_text(const json& j)
{
    std::ostringstream os;
    write_json(os, j);
    os << "\n";
    return os.str();
}

inline std::string format_double(double v)
{
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

inline std::string format_complex(cplx z)
{
    char buf[90];
    std::snprintf(buf, sizeof buf, "%.17g%+.17gi", z.real(), z.imag());
    return buf;
}

// ---------------------------------------------------------------------------
// Single-point evaluation

struct ExpectedCheck {
    std::string family;
    CheckReport report;
    Expectation expected = Expectation::pass;

    bool met() const { return expectation_met(expected, report.pass); }
};

struct PointResult {
    QParams params;
    int k = 0;
    std::vector<ExpectedCheck> checks;
    std::optional<cplx> casimir;
    /// Families that could not be evaluated at this point, with the reason.
    std::map<std::string, std::string> skipped;

    bool expectations_met() const
    {
        return std::all_of(checks.begin(), checks.end(), [](const auto& c) { return c.met(); });
    }
};

inline QParams resolve_params(Mode mode, double epsilon, std::optional<int> l)
{
    if (l) return make_params(mode, epsilon, *l);
    return make_params(mode, epsilon, choose_branch(mode, epsilon));
}

inline std::vector<std::string> selected_families(const RunConfig& cfg)
{
    if (!cfg.checks.empty()) return cfg.checks;
    std::vector<std::string> out;
    for (const auto& f : check_families())
        if (f != "star:eq13" || cfg.mode == Mode::RealLine) out.push_back(f);
    return out;
}

/// Sign pattern of the squared norms; the basis is orthonormal for diag(signature).
inline std::vector<int> norm_signature(const Rep& rep)
{
    const NormProfile prof = norm_profile(rep.params, rep.k);
    std::vector<int> sig;
    for (double v : prof.norms) sig.push_back(v < 0.0 ? -1 : 1);
    return sig;
}

namespace detail {

inline void add_all(PointResult& r, const std::string& family, const std::vector<CheckReport>& reports,
                    Expectation e, const std::string& prefix = {})
{
    for (auto rep : reports) {
        if (!prefix.empty()) rep.name = prefix + rep.name;
        r.checks.push_back({family, std::move(rep), e});
    }
}

/// Expected outcomes for the canonical conjugation a+ = abar, N+ = N.
inline Expectation canonical_expectation(Mode mode, Flavor flavor, int k, const std::string& name)
{
    if (mode == Mode::Unimodular) {
        if (flavor == Flavor::NonStandard) return Expectation::pass;
        if (name == "star.coproduct") return k == 0 ? Expectation::any : Expectation::fail;
        if (name == "star.antipode") return Expectation::any;
        return Expectation::pass;
    }
    if (name == "star.algebra") return Expectation::pass;
    if (name == "star.matrix.N" || name == "star.coproduct") return Expectation::fail;
    return Expectation::any;
}

inline CheckReport derived_involution_report(const Rep& rep, double tol)
{
    const auto found = derive_involutions(rep, tol);
    const cplx i(0.0, 1.0);
    const cplx eta_expect(0.0, -2.0 * rep.params.branch_shift());
    std::ostringstream detail;
    detail << found.size() << " solution(s):";
    double res = 0.0;
    for (const auto& d : found) {
        detail << " alpha=" << format_complex(d.spec.alpha) << " signature=";
        for (int s : d.signature) detail << (s > 0 ? '+' : '-');
        res = std::max({res, std::abs(d.spec.eta - eta_expect) / std::abs(eta_expect), max_residual(d.reports)});
    }
    if (found.size() != 2) {
        res = std::numeric_limits<double>::infinity();
    } else {
        res = std::max({res, std::abs(found[0].spec.alpha + i), std::abs(found[1].spec.alpha - i)});
    }
    return CheckReport::make("involutions.derived", res, tol, detail.str());
}

} // namespace detail

/// Runs the selected families at one parameter point. Parameter errors propagate.
inline PointResult evaluate_point(const QParams& p, int k, const RunConfig& cfg, bool singular_suq2_throws)
{
    const double tol = cfg.tol;
    const Rep rep = build_rep(p, k);
    PointResult r;
    r.params = p;
    r.k = k;

    // Matrix star checks are taken in the hermitian form fixed by the norm signs, so that an
    // indefinite point shows up once, in norm.positivity, rather than in every star check.
    const std::vector<int> sig = rep.definite ? std::vector<int>{} : norm_signature(rep);

    for (const auto& fam : selected_families(cfg)) {
        if (fam == "algebra") {
            detail::add_all(r, fam, check_defining_relations(rep, tol), Expectation::pass);
            detail::add_all(r, fam, {norm_profile(p, k).positivity}, Expectation::pass);
        } else if (fam == "ladder") {
            detail::add_all(r, fam, check_ladder_identities(rep, k + 1, tol), Expectation::pass);
        } else if (fam == "casimir") {
            const CasimirResult c = casimir(rep, tol);
            r.casimir = c.scalar;
            detail::add_all(r, fam, c.reports, Expectation::pass);
            if (p.mode == Mode::Unimodular) {
                const double closed = casimir_closed_form_unimodular(p, k);
                const double res = std::abs(c.scalar - closed) / std::max(1.0, std::abs(closed));
                detail::add_all(r, fam, {CheckReport::make("casimir.closed_form", res, tol)}, Expectation::pass);
            }
        } else if (fam == "hopf") {
            try {
                detail::add_all(r, fam, check_hopf_axioms(rep, tol), Expectation::pass);
            } catch (const DimensionTooLarge& e) {
                r.skipped[fam] = "skipped:dimension";
            }
        } else if (fam == "star:canonical7") {
            InvolutionSpec inv = involution(InvolutionKind::Canonical, p);
            for (Flavor fl : {Flavor::NonStandard, Flavor::Standard}) {
                inv.flavor = fl;
                const std::string prefix = "canonical." + std::string(to_string(fl)) + ":";
                for (auto& rep_check : check_star_structure(rep, inv, tol, sig)) {
                    const Expectation e = detail::canonical_expectation(p.mode, fl, k, rep_check.name);
                    rep_check.name = prefix + rep_check.name;
                    r.checks.push_back({fam, std::move(rep_check), e});
                }
            }
        } else if (fam == "star:eq13") {
            if (p.mode != Mode::RealLine)
                throw ModeMismatch("star:eq13 applies to real q only (use --mode realline)");
            const InvolutionSpec inv = involution(InvolutionKind::RealFormMinus, p);
            detail::add_all(r, fam, check_star_structure(rep, inv, tol, sig), Expectation::pass, "real-minus:");
            try {
                detail::add_all(r, fam, {detail::derived_involution_report(rep, tol)}, Expectation::pass);
            } catch (const NoSolution& e) {
                detail::add_all(r, fam,
                                {CheckReport::make("involutions.derived", std::numeric_limits<double>::infinity(),
                                                   tol, e.what())},
                                Expectation::pass);
            }
        } else if (fam == "suq2") {
            if (su_map_singular(p)) {
                if (singular_suq2_throws)
                    throw DegenerateParameter("su(2) map is singular near eps = p pi and (2p+1) pi/2: " +
                                              p.describe());
                r.skipped[fam] = "skipped:singular";
                continue;
            }
            detail::add_all(r, fam, check_su2(to_su2(rep), tol), Expectation::pass);
            detail::add_all(r, fam, {check_equivalence(rep, tol)}, Expectation::pass);
        } else if (fam == "symbolic") {
            detail::add_all(r, fam,
                            check_identities_symbolic(p, cfg.n_max, std::min(tol, kSymbolicTol), cfg.delta_tamper),
                            Expectation::pass);
        }
    }

    if (cfg.involution) {
        detail::add_all(r, "star:custom", check_star_structure(rep, *cfg.involution, tol, sig), Expectation::pass,
                        cfg.involution->label.empty() ? "custom:" : cfg.involution->label + ":");
    }
    return r;
}

// ---------------------------------------------------------------------------
// Rendering

inline json point_params_json(const QParams& p, int k)
{
    json j = params_to_json(p);
    j["k"] = k;
    j["nu0"] = complex_to_json(nu0(p, k));
    return j;
}

inline json point_to_json(const PointResult& r)
{
    json out;
    out["params"] = point_params_json(r.params, r.k);
    json checks = json::array();
    for (const auto& c : r.checks) {
        json item;
        item["name"] = c.report.name;
        item["family"] = c.family;
        item["residual"] = c.report.residual;
        item["tolerance"] = c.report.tolerance;
        item["pass"] = c.report.pass;
        item["expected"] = std::string(to_string(c.expected));
        item["met"] = c.met();
        if (c.report.detail) item["detail"] = *c.report.detail;
        checks.push_back(std::move(item));
    }
    out["checks"] = std::move(checks);
    out["casimir"] = r.casimir ? complex_to_json(*r.casimir) : json(nullptr);
    json skipped = json::object();
    for (const auto& [fam, why] : r.skipped) skipped[fam] = why;
    out["skipped"] = std::move(skipped);
    out["expectations_met"] = r.expectations_met();
    return out;
}

inline std::string render_point(const PointResult& r, Format fmt)
{
    std::ostringstream os;
    if (fmt == Format::json) return to_json_text(point_to_json(r));
    if (fmt == Format::csv) {
        os << "name,family,residual,tolerance,pass,expected,met\n";
        for (const auto& c : r.checks)
            os << c.report.name << ',' << c.family << ',' << format_double(c.report.residual) << ','
               << format_double(c.report.tolerance) << ',' << (c.report.pass ? "true" : "false") << ','
               << to_string(c.expected) << ',' << (c.met() ? "true" : "false") << '\n';
        return os.str();
    }
    os << r.params.describe() << " k=" << r.k << "\n";
    for (const auto& c : r.checks) {
        char line[200];
        std::snprintf(line, sizeof line, "  %-44s %-5s residual=%.3e tol=%.1e expected=%s%s\n",
                      c.report.name.c_str(), c.report.pass ? "PASS" : "FAIL", c.report.residual,
                      c.report.tolerance, std::string(to_string(c.expected)).c_str(),
                      c.met() ? "" : "  <-- UNEXPECTED");
        os << line;
    }
    for (const auto& [fam, why] : r.skipped) os << "  " << fam << ": " << why << "\n";
    if (r.casimir) os << "  casimir = " << format_complex(*r.casimir) << "\n";
    os << (r.expectations_met() ? "all expectations met\n" : "expectation violated\n");
    return os.str();
}

inline std::string render_matrix_text(const std::string& name, const Matrix& m)
{
    std::ostringstream os;
    os << name << " =\n";
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        os << "  ";
        for (Eigen::Index j = 0; j < m.cols(); ++j) {
            char buf[64];
            std::snprintf(buf, sizeof buf, "(%10.6f,%10.6f) ", m(i, j).real(), m(i, j).imag());
            os << buf;
        }
        os << "\n";
    }
    return os.str();
}

// ---------------------------------------------------------------------------
// Commands

namespace detail {

inline CommandResult param_error(const std::exception& e)
{
    return {2, {}, std::string("error: ") + e.what() + "\n"};
}

inline std::optional<std::string> single_point_error(const RunConfig& cfg)
{
    if (!cfg.epsilon) return "this command needs --epsilon";
    if (cfg.grid) return "this command takes a single point; use sweep for --epsilon-grid";
    if (cfg.k_lo != cfg.k_hi) return "this command takes a single k; use sweep for a range";
    if (!(cfg.tol > 0.0)) return "tolerance must be positive";
    return std::nullopt;
}

} // namespace detail

inline CommandResult cmd_build(const RunConfig& cfg)
{
    if (auto msg = detail::single_point_error(cfg)) return {2, {}, "error: " + *msg + "\n"};
    Rep rep;
    try {
        rep = build_rep(resolve_params(cfg.mode, *cfg.epsilon, cfg.l), cfg.k_lo);
    } catch (const Error& e) {
        return detail::param_error(e);
    }
    CommandResult res;
    if (cfg.format == Format::json) {
        res.out = to_json_text(rep_to_json(rep));
    } else if (cfg.format == Format::csv) {
        std::ostringstream os;
        os << "matrix,row,col,re,im\n";
        const std::pair<const char*, const Matrix*> mats[] = {{"A", &rep.A}, {"Abar", &rep.Abar}, {"N", &rep.Nmat}};
        for (const auto& [name, m] : mats)
            for (Eigen::Index i = 0; i < m->rows(); ++i)
                for (Eigen::Index j = 0; j < m->cols(); ++j)
                    os << name << ',' << i << ',' << j << ',' << format_double((*m)(i, j).real()) << ','
                       << format_double((*m)(i, j).imag()) << '\n';
        res.out = os.str();
    } else {
        std::ostringstream os;
        os << rep.params.describe() << " k=" << rep.k << " dim=" << rep.dim()
           << (rep.definite ? "" : " (indefinite norms)") << "\n";
        os << "nu0 = " << format_complex(rep.nu0) << "\n";
        os << render_matrix_text("A", rep.A) << render_matrix_text("Abar", rep.Abar)
           << render_matrix_text("N", rep.Nmat);
        res.out = os.str();
    }
    return res;
}

inline CommandResult cmd_verify(const RunConfig& cfg)
{
    if (auto msg = detail::single_point_error(cfg)) return {2, {}, "error: " + *msg + "\n"};
    if (cfg.n_max < 1 || cfg.n_max > kSymbolicMaxN)
        return {2, {}, "error: --n-max must lie in 1.." + std::to_string(kSymbolicMaxN) + "\n"};
    PointResult r;
    try {
        const QParams p = resolve_params(cfg.mode, *cfg.epsilon, cfg.l);
        r = evaluate_point(p, cfg.k_lo, cfg, true);
    } catch (const Error& e) {
        return detail::param_error(e);
    }
    CommandResult res;
    res.out = render_point(r, cfg.format);
    if (!r.expectations_met()) {
        res.exit_code = 1;
        std::ostringstream os;
        for (const auto& c : r.checks)
            if (!c.met())
                os << "unexpected: " << c.report.name << " expected " << to_string(c.expected) << ", residual "
                   << format_double(c.report.residual) << "\n";
        res.err = os.str();
    }
    return res;
}

/// Fixed sweep header; a family that was not selected leaves its cell blank.
inline const std::vector<std::string>& sweep_columns()
{
    static const std::vector<std::string> cols{"epsilon", "k",         "l",     "status", "algebra", "ladder",
                                               "casimir", "hopf",      "star",  "suq2",   "symbolic",
                                               "casimir_value"};
    return cols;
}

struct SweepRow {
    double epsilon = 0.0;
    int k = 0;
    std::optional<int> l;
    std::string status;
    std::map<std::string, std::string> cells;
    bool singular = false;
    bool unexpected = false;
};

namespace detail {

inline std::string family_column(const std::string& family)
{
    return family.rfind("star:", 0) == 0 ? "star" : family;
}

inline SweepRow sweep_point(double eps, int k, const RunConfig& cfg)
{
    SweepRow row;
    row.epsilon = eps;
    row.k = k;
    QParams p;
    try {
        p = resolve_params(cfg.mode, eps, cfg.l);
    } catch (const DegenerateParameter&) {
        row.status = "skipped:singular";
        row.singular = true;
        return row;
    } catch (const Error& e) {
        row.status = "error";
        row.unexpected = true;
        return row;
    }
    row.l = p.l;
    PointResult r;
    try {
        r = evaluate_point(p, k, cfg, false);
    } catch (const ParityViolation&) {
        row.status = "skipped:parity";
        return row;
    } catch (const DegenerateParameter&) {
        row.status = "skipped:singular";
        row.singular = true;
        return row;
    }

    // Max residual over checks expected to pass; an unmet expectation marks the column.
    std::map<std::string, double> worst;
    std::set<std::string> bad;
    for (const auto& c : r.checks) {
        const std::string col = family_column(c.family);
        auto& w = worst[col];
        if (c.expected == Expectation::pass) w = std::max(w, c.report.residual);
        if (!c.met()) bad.insert(col);
    }
    for (const auto& [col, w] : worst) row.cells[col] = format_double(w) + (bad.count(col) ? "!" : "");
    for (const auto& [fam, why] : r.skipped) row.cells[family_column(fam)] = why;
    if (r.casimir) row.cells["casimir_value"] = format_complex(*r.casimir);
    row.unexpected = !r.expectations_met();
    row.status = row.unexpected ? "unexpected" : "ok";
    return row;
}

} // namespace detail

inline std::vector<SweepRow> run_sweep(const RunConfig& cfg)
{
    std::vector<double> eps;
    if (cfg.grid) eps = grid_points(*cfg.grid);
    else if (cfg.epsilon) eps.push_back(*cfg.epsilon);
    else throw Error("sweep needs --epsilon or --epsilon-grid");

    struct Job {
        double eps;
        int k;
    };
    std::vector<Job> jobs;
    for (double e : eps)
        for (int k = cfg.k_lo; k <= cfg.k_hi; ++k) jobs.push_back({e, k});

    std::vector<SweepRow> rows(jobs.size());
    const std::size_t workers = std::max(1u, std::min(8u, std::thread::hardware_concurrency()));
    std::vector<std::future<void>> pending;
    for (std::size_t w = 0; w < workers; ++w) {
        pending.push_back(std::async(std::launch::async, [&, w] {
            for (std::size_t i = w; i < jobs.size(); i += workers)
                rows[i] = detail::sweep_point(jobs[i].eps, jobs[i].k, cfg);
        }));
    }
    for (auto& f : pending) f.get();
    return rows;
}

inline CommandResult cmd_sweep(const RunConfig& cfg)
{
    if (!(cfg.tol > 0.0)) return {2, {}, "error: tolerance must be positive\n"};
    if (cfg.n_max < 1 || cfg.n_max > kSymbolicMaxN)
        return {2, {}, "error: --n-max must lie in 1.." + std::to_string(kSymbolicMaxN) + "\n"};
    std::vector<SweepRow> rows;
    try {
        rows = run_sweep(cfg);
    } catch (const Error& e) {
        return detail::param_error(e);
    }

    CommandResult res;
    const auto& cols = sweep_columns();
    auto cell = [](const SweepRow& row, const std::string& col) -> std::string {
        if (col == "epsilon") return format_double(row.epsilon);
        if (col == "k") return std::to_string(row.k);
        if (col == "l") return row.l ? std::to_string(*row.l) : std::string{};
        if (col == "status") return row.status;
        auto it = row.cells.find(col);
        return it == row.cells.end() ? std::string{} : it->second;
    };

    std::ostringstream os;
    if (cfg.format == Format::json) {
        json doc;
        doc["mode"] = std::string(to_string(cfg.mode));
        json jc = json::array();
        for (const auto& c : cols) jc.push_back(c);
        doc["columns"] = std::move(jc);
        json jr = json::array();
        for (const auto& row : rows) {
            json item;
            item["epsilon"] = row.epsilon;
            item["k"] = row.k;
            item["l"] = row.l ? json(*row.l) : json(nullptr);
            for (std::size_t i = 3; i < cols.size(); ++i) item[cols[i]] = cell(row, cols[i]);
            jr.push_back(std::move(item));
        }
        doc["rows"] = std::move(jr);
        os << to_json_text(doc);
    } else {
        const char sep = cfg.format == Format::csv ? ',' : '\t';
        for (std::size_t i = 0; i < cols.size(); ++i) os << (i ? std::string(1, sep) : "") << cols[i];
        os << '\n';
        for (const auto& row : rows) {
            for (std::size_t i = 0; i < cols.size(); ++i) os << (i ? std::string(1, sep) : "") << cell(row, cols[i]);
            os << '\n';
        }
    }
    res.out = os.str();

    const bool all_singular =
        std::all_of(rows.begin(), rows.end(), [](const SweepRow& r) { return r.singular; });
    if (rows.empty() || all_singular) {
        res.exit_code = 2;
        res.err = "error: every sweep point is singular\n";
    } else if (std::any_of(rows.begin(), rows.end(), [](const SweepRow& r) { return r.unexpected; })) {
        res.exit_code = 1;
        res.err = "some sweep points violate their expectations (status=unexpected)\n";
    }
    return res;
}

inline CommandResult cmd_symbolic(const RunConfig& cfg)
{
    if (!cfg.epsilon) return {2, {}, "error: symbolic needs --epsilon\n"};
    if (cfg.n_max < 1 || cfg.n_max > kSymbolicMaxN)
        return {2, {}, "error: --n-max must lie in 1.." + std::to_string(kSymbolicMaxN) + "\n"};
    PointResult r;
    try {
        r.params = resolve_params(cfg.mode, *cfg.epsilon, cfg.l);
        detail::add_all(r, "symbolic",
                        check_identities_symbolic(r.params, cfg.n_max, std::min(cfg.tol, kSymbolicTol),
                                                  cfg.delta_tamper),
                        Expectation::pass);
    } catch (const Error& e) {
        return detail::param_error(e);
    }
    CommandResult res;
    if (cfg.format == Format::text) {
        std::ostringstream os;
        os << render_point(r, Format::text);
        const NCPoly c2 = casimir_element(r.params);
        os << "  C2 = " << to_string(c2) << "\n";
        res.out = os.str();
    } else {
        res.out = render_point(r, cfg.format);
    }
    if (!r.expectations_met()) {
        res.exit_code = 1;
        res.err = "nonzero symbolic defect\n";
    }
    return res;
}

} // namespace qosc
