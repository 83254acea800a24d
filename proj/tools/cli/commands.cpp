#include "cli/commands.hpp"

#include "cli/args.hpp"
#include "cli/emit.hpp"
#include "cli/sampled.hpp"

#include "convapprox/best_approx.hpp"
#include "convapprox/bounds.hpp"
#include "convapprox/errors.hpp"
#include "convapprox/extremal.hpp"
#include "convapprox/format.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <numbers>
#include <optional>
#include <sstream>
#include <thread>

namespace convapprox::cli {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

struct Settings {
    std::vector<PsiTemplate> psi;
    BetaSequence beta = BetaSequence::constant(0.0);
    std::vector<long> n;
    std::vector<double> p;
    double tol = 1e-10;
    int max_iter = 50;
    Format format = Format::Csv;
    std::string out;
    int jobs = 1;
    int grid = 256;
    std::optional<double> delta;
    std::string input;
};

// Raw option text as given on the command line; empty when absent.
struct RawOptions {
    std::string config;
    std::vector<std::string> psi;
    std::string beta, n, p, tol, max_iter, format, out, jobs, grid, delta, input;
};

const std::vector<std::string> kConfigKeys{"psi",    "beta", "n",   "p",    "tol",   "max_iter",
                                           "format", "out",  "jobs", "grid", "delta", "input"};

int parse_int(const std::string& key, const std::string& text, int lo) {
    const double v = parse_real(text);
    if (v != std::floor(v) || v < lo || v > 1e9) throw UsageError(key + " must be an integer >= " + std::to_string(lo));
    return static_cast<int>(v);
}

Settings resolve(const RawOptions& raw) {
    std::map<std::string, std::string> cfg;
    if (!raw.config.empty()) {
        cfg = read_config(raw.config);
        for (const auto& [k, v] : cfg)
            if (std::find(kConfigKeys.begin(), kConfigKeys.end(), k) == kConfigKeys.end())
                throw UsageError("unknown config key '" + k + "'");
    }
    auto pick = [&](const std::string& flag, const std::string& key) -> std::optional<std::string> {
        if (!flag.empty()) return flag;
        if (auto it = cfg.find(key); it != cfg.end()) return it->second;
        return std::nullopt;
    };

    Settings s;
    std::vector<std::string> psi_texts = raw.psi;
    if (psi_texts.empty()) {
        if (auto it = cfg.find("psi"); it != cfg.end()) {
            std::istringstream in(it->second);
            std::string item;
            while (std::getline(in, item, ';'))
                if (item.find_first_not_of(" \t") != std::string::npos) psi_texts.push_back(item);
        }
    }
    for (const auto& t : psi_texts) s.psi.push_back(PsiTemplate::parse(t));
    if (auto v = pick(raw.beta, "beta")) s.beta = parse_beta(*v);
    if (auto v = pick(raw.n, "n")) s.n = parse_n_list(*v);
    if (auto v = pick(raw.p, "p")) s.p = parse_p_list(*v);
    if (auto v = pick(raw.tol, "tol")) {
        s.tol = parse_real(*v);
        if (!(s.tol > 0.0 && s.tol < 1.0)) throw UsageError("--tol must lie in (0, 1)");
    }
    if (auto v = pick(raw.max_iter, "max_iter")) s.max_iter = parse_int("--max-iter", *v, 1);
    if (auto v = pick(raw.format, "format")) s.format = parse_format(*v);
    if (auto v = pick(raw.out, "out")) s.out = *v;
    if (auto v = pick(raw.jobs, "jobs")) s.jobs = parse_int("--jobs", *v, 1);
    if (auto v = pick(raw.grid, "grid")) s.grid = parse_int("--grid", *v, 1);
    if (auto v = pick(raw.delta, "delta")) s.delta = parse_real(*v);
    if (auto v = pick(raw.input, "input")) s.input = *v;
    return s;
}

void add_common(CLI::App& sub, RawOptions& raw) {
    sub.add_option("--config", raw.config, "key = value configuration file; flags override it");
    sub.add_option("--psi", raw.psi, "power:r=EXPR | exp:alpha=EXPR,r=EXPR | table:v1,v2,...; repeatable")
        ->expected(1)
        ->multi_option_policy(CLI::MultiOptionPolicy::TakeAll);
    sub.add_option("--beta", raw.beta, "const:v | list:v1,v2,...");
    sub.add_option("--n", raw.n, "n values, e.g. 4 or 2..8 or 2,4,8");
    sub.add_option("--p", raw.p, "p values, e.g. 1,2,inf");
    sub.add_option("--tol", raw.tol, "Remez relative tolerance");
    sub.add_option("--max-iter", raw.max_iter, "Remez iteration cap");
    sub.add_option("--format", raw.format, "csv | jsonl");
    sub.add_option("--out", raw.out, "output file (default: standard output)");
    sub.add_option("--jobs", raw.jobs, "worker threads");
}

// ---------------------------------------------------------------------------

struct Point {
    std::size_t psi_index;
    long n;
    double p;
};

std::vector<Point> grid_points(const Settings& s) {
    if (s.psi.empty()) throw UsageError("--psi is required");
    if (s.n.empty()) throw UsageError("--n is required");
    if (s.p.empty()) throw UsageError("--p is required");
    std::vector<Point> pts;
    for (std::size_t i = 0; i < s.psi.size(); ++i)
        for (long n : s.n)
            for (double p : s.p) pts.push_back({i, n, p});
    return pts;
}

const PsiTemplate& single_psi(const Settings& s) {
    if (s.psi.size() != 1) throw UsageError("exactly one --psi is required");
    return s.psi.front();
}

long single_n(const Settings& s) {
    if (s.n.size() != 1) throw UsageError("exactly one --n value is required");
    return s.n.front();
}

double single_p(const Settings& s) {
    if (s.p.size() != 1) throw UsageError("exactly one --p value is required");
    return s.p.front();
}

// Theorem-specific report when its hypotheses hold, the generic report otherwise.
BoundsReport best_report(long n, double p, const PsiSequence& psi, const ReportOptions& opts) {
    if (const auto* pw = std::get_if<PowerLaw>(&psi.family())) {
        if (pw->r >= static_cast<double>(n) + 1.0 && hypothesis_check(psi, n, Condition::PowerLawGrowth).holds)
            return weyl_nagy_report(n, pw->r, p, opts);
    } else if (const auto* ex = std::get_if<ExpPower>(&psi.family())) {
        if (ex->r > 1.0) return exp_class_report(n, ex->alpha, ex->r, p, opts);
    }
    return bounds_report(n, p, psi, opts);
}

ReportOptions report_options(const Settings& s) {
    ReportOptions o;
    o.beta = s.beta;
    o.remez_tol = s.tol;
    o.remez_max_iter = s.max_iter;
    return o;
}

Value opt(const std::optional<double>& v) { return v ? Value(*v) : Value(); }

std::string describe_or(const Settings& s, const Point& pt) {
    try {
        return s.psi[pt.psi_index].instantiate(pt.n).describe();
    } catch (const std::exception&) {
        return s.psi[pt.psi_index].text;
    }
}

enum class Outcome { Ok, Skipped, Failed };

struct Evaluated {
    Row row;
    Outcome outcome;
};

// Runs `eval` over all points on `jobs` threads; results keep the point order.
std::vector<Evaluated> evaluate_all(const std::vector<Point>& pts, int jobs,
                                    const std::function<Evaluated(const Point&)>& eval) {
    std::vector<std::optional<Evaluated>> slots(pts.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next++; i < pts.size(); i = next++) slots[i] = eval(pts[i]);
    };
    const auto workers = static_cast<std::size_t>(std::max(1, std::min<int>(jobs, static_cast<int>(pts.size()))));
    if (workers <= 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(worker);
    }
    std::vector<Evaluated> out;
    out.reserve(pts.size());
    for (auto& s : slots) out.push_back(std::move(*s));
    return out;
}

Row point_header(const Settings& s, const Point& pt) {
    Row r;
    r.add("psi", describe_or(s, pt)).add("beta", s.beta.describe()).add("n", pt.n).add("p", shortest(pt.p));
    return r;
}

// Classifies exceptions raised while evaluating one point.
template <typename F>
Evaluated guarded(Row base, const std::vector<std::string>& numeric_keys, F&& body) {
    auto refusal = [&](const std::string& status, const std::string& reason, Outcome o) {
        Row r = base;
        r.add("status", status).add("reason", reason);
        for (const auto& k : numeric_keys) r.add(k, Value());
        return Evaluated{std::move(r), o};
    };
    try {
        return body(base);
    } catch (const HypothesisViolation& e) {
        return refusal("skipped", e.what(), Outcome::Skipped);
    } catch (const DivergentTailError& e) {
        return refusal("skipped", e.what(), Outcome::Skipped);
    } catch (const DomainError& e) {
        return refusal("skipped", e.what(), Outcome::Skipped);
    } catch (const ConfigurationError& e) {
        return refusal("skipped", e.what(), Outcome::Skipped);
    } catch (const CertificationError& e) {
        return refusal("error", e.what(), Outcome::Failed);
    } catch (const std::exception& e) {
        return refusal("error", e.what(), Outcome::Failed);
    }
}

// ---------------------------------------------------------------------------

void write_output(const Settings& s, std::ostream& out, const std::string& text) {
    if (s.out.empty() || s.out == "-") {
        out << text;
        out.flush();
        return;
    }
    std::ofstream f(s.out, std::ios::binary | std::ios::trunc);
    if (!f) throw IoError("cannot open output file '" + s.out + "'");
    f << text;
    f.close();
    if (!f) throw IoError("failed writing output file '" + s.out + "'");
}

std::string render(const Settings& s, const std::vector<Row>& rows) {
    std::ostringstream os;
    emit(os, s.format, rows);
    return os.str();
}

int cmd_kernel(const Settings& s, std::ostream& out) {
    const auto& tpl = single_psi(s);
    long n = 1;
    if (tpl.uses_n()) n = single_n(s);
    KernelSpec spec{tpl.instantiate(n), s.beta, 1e-12};
    std::vector<Row> rows;
    for (int i = 0; i < s.grid; ++i) {
        const double t = kTwoPi * i / s.grid;
        Row r;
        r.add("t", t).add("kernel", kernel_eval(spec, t));
        rows.push_back(std::move(r));
    }
    write_output(s, out, render(s, rows));
    return kExitOk;
}

void flatten_report(Row& r, const BoundsReport& rep) {
    for (const auto& [tag, holds] : rep.hypothesis) r.add("hyp_" + tag, holds);
    r.add("psi_n", rep.psi_n).add("tail", rep.tail).add("lower", rep.lower);
    r.add("witness_En", opt(rep.witness_value)).add("upper", rep.upper);
    r.add("witness_leveled", opt(rep.witness_leveled)).add("vp_lower", opt(rep.witness_vp_lower));
    r.add("certified", rep.witness_certified).add("iterations", static_cast<long>(rep.remez_iterations));
    for (const auto& [k, v] : rep.ratios) r.add("ratio_" + k, v);
    for (const auto& [k, v] : rep.reference) r.add("ref_" + k, v);
    for (const auto& [k, c] : rep.checks) r.add("check_" + k, c.holds);
}

int cmd_bounds(const Settings& s, std::ostream& out) {
    const Point pt{0, single_n(s), single_p(s)};
    single_psi(s);
    bool failed = false;
    auto ev = guarded(point_header(s, pt), {}, [&](Row r) {
        const auto rep = best_report(pt.n, pt.p, s.psi[0].instantiate(pt.n), report_options(s));
        r.add("status", rep.passed() ? "ok" : "fail").add("reason", "");
        flatten_report(r, rep);
        return Evaluated{std::move(r), rep.passed() ? Outcome::Ok : Outcome::Failed};
    });
    failed = ev.outcome != Outcome::Ok;
    write_output(s, out, render(s, {ev.row}));
    return failed ? kExitInvariant : kExitOk;
}

int cmd_witness(const Settings& s, std::ostream& out) {
    const long n = single_n(s);
    const double p = single_p(s);
    WitnessSpec spec{n, p, single_psi(s).instantiate(n), s.beta, s.delta};
    const auto w = build_witness(spec);
    const double vp = vallee_poussin_lower(w);
    std::vector<Row> rows;
    auto row = [&](const std::string& kind, long idx, double x) {
        Row r;
        r.add("kind", kind).add("index", idx).add("x", x);
        r.add("phi", w.phi(x)).add("f", w.f(x)).add("F1", w.F1(x)).add("F2", w.F2(x));
        r.add("vp_lower", kind == "point" ? Value(vp) : Value());
        rows.push_back(std::move(r));
    };
    for (int i = 0; i < s.grid; ++i) row("sample", i, kTwoPi * i / s.grid);
    for (std::size_t m = 0; m < w.points.size(); ++m) row("point", static_cast<long>(m), w.points[m]);
    write_output(s, out, render(s, rows));
    return kExitOk;
}

int cmd_remez(const Settings& s, std::ostream& out) {
    if (s.input.empty()) throw UsageError("remez needs --input FILE");
    const long n = single_n(s);
    const auto f = periodic_spline(read_samples_file(s.input));
    RemezOptions o;
    o.tol = s.tol;
    o.max_iter = s.max_iter;
    const auto res = remez_trig(f, n, o);
    std::vector<Row> rows;
    auto add = [&](const std::string& key, Value idx, Value v) {
        Row r;
        r.add("key", key).add("index", std::move(idx)).add("value", std::move(v));
        rows.push_back(std::move(r));
    };
    add("n", Value(), n);
    add("value", Value(), res.value);
    add("leveled_error", Value(), res.leveled_error);
    add("iterations", Value(), static_cast<long>(res.iterations));
    add("alternations", Value(), static_cast<long>(res.alternations));
    add("certified", Value(), res.certified);
    for (long k = 0; k <= res.best.order(); ++k) add("a", k, res.best.a()(k));
    for (long k = 1; k <= res.best.order(); ++k) add("b", k, res.best.b()(k - 1));
    for (std::size_t i = 0; i < res.extrema.size(); ++i) {
        add("extremum", static_cast<long>(i), res.extrema[i]);
        add("extremum_error", static_cast<long>(i), res.extrema_errors[i]);
    }
    write_output(s, out, render(s, rows));
    return res.certified ? kExitOk : kExitInvariant;
}

std::string describe_failures(const BoundsReport& rep) {
    std::string text;
    for (const auto& [name, c] : rep.checks) {
        if (c.holds) continue;
        if (!text.empty()) text += "; ";
        text += name + ": " + shortest(c.lhs) + " vs " + shortest(c.rhs);
    }
    return text;
}

int cmd_verify(const Settings& s, std::ostream& out) {
    const auto pts = grid_points(s);
    const std::vector<std::string> numeric{"lower", "witness_En", "upper", "failed"};
    const auto results = evaluate_all(pts, s.jobs, [&](const Point& pt) {
        return guarded(point_header(s, pt), numeric, [&](Row r) {
            const auto rep = best_report(pt.n, pt.p, s.psi[pt.psi_index].instantiate(pt.n), report_options(s));
            const bool ok = rep.passed();
            r.add("status", ok ? "pass" : "fail").add("reason", "");
            r.add("lower", rep.lower).add("witness_En", opt(rep.witness_value)).add("upper", rep.upper);
            r.add("failed", describe_failures(rep));
            return Evaluated{std::move(r), ok ? Outcome::Ok : Outcome::Failed};
        });
    });
    std::vector<Row> rows;
    bool any_failed = false;
    for (const auto& e : results) {
        rows.push_back(e.row);
        any_failed = any_failed || e.outcome == Outcome::Failed;
    }
    write_output(s, out, render(s, rows));
    return any_failed ? kExitInvariant : kExitOk;
}

int cmd_sweep(const Settings& s, std::ostream& out) {
    const auto pts = grid_points(s);
    const std::vector<std::string> numeric{"hyp_tail_below_lead", "hyp_ratio_to_zero", "lower", "witness_En", "upper", "ratio", "tau"};
    const auto results = evaluate_all(pts, s.jobs, [&](const Point& pt) {
        return guarded(point_header(s, pt), numeric, [&](Row r) {
            const auto psi = s.psi[pt.psi_index].instantiate(pt.n);
            const auto h2 = hypothesis_check(psi, pt.n, Condition::TailBelowLead);
            if (!h2.holds) throw HypothesisViolation("tail condition violated");
            const auto rep = bounds_report(pt.n, pt.p, psi, report_options(s));
            r.add("status", "ok").add("reason", "");
            r.add("hyp_tail_below_lead", rep.hypothesis.at("tail_below_lead")).add("hyp_ratio_to_zero", rep.hypothesis.at("ratio_to_zero"));
            r.add("lower", rep.lower).add("witness_En", opt(rep.witness_value)).add("upper", rep.upper);
            r.add("ratio", rep.ratios.at("witness_ratio")).add("tau", rep.ratios.at("tau"));
            return Evaluated{std::move(r), Outcome::Ok};
        });
    });
    std::vector<Row> rows;
    bool any_failed = false;
    for (const auto& e : results) {
        rows.push_back(e.row);
        any_failed = any_failed || e.outcome == Outcome::Failed;
    }
    write_output(s, out, render(s, rows));
    return any_failed ? kExitInvariant : kExitOk;
}

} // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Best uniform approximation of convolution classes: bounds, witnesses and sweeps", "convapprox"};
    app.require_subcommand(1);
    RawOptions raw;
    std::function<int(const Settings&, std::ostream&)> action;

    struct Sub {
        const char* name;
        const char* help;
        int (*fn)(const Settings&, std::ostream&);
    };
    const Sub subs[] = {
        {"kernel", "evaluate the kernel on a uniform grid of one period", cmd_kernel},
        {"bounds", "full bounds report for one (psi, n, p)", cmd_bounds},
        {"witness", "samples of the extremal function and its alternation points", cmd_witness},
        {"remez", "best approximation of a sampled periodic function", cmd_remez},
        {"verify", "check the sandwich and alternation invariants over a grid", cmd_verify},
        {"sweep", "bounds table over a parameter grid", cmd_sweep},
    };
    for (const auto& sub : subs) {
        auto* cmd = app.add_subcommand(sub.name, sub.help);
        add_common(*cmd, raw);
        const std::string name = sub.name;
        if (name == "kernel" || name == "witness")
            cmd->add_option("--grid", raw.grid, "number of sample points per period");
        if (name == "witness") cmd->add_option("--delta", raw.delta, "spike width for p = 1");
        if (name == "remez") cmd->add_option("--input", raw.input, "sample file with columns x, f(x)");
        auto fn = sub.fn;
        cmd->callback([&action, fn] { action = fn; });
    }

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        const Settings settings = resolve(raw);
        return action(settings, out);
    } catch (const UsageError& e) {
        err << "usage error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const IoError& e) {
        err << "I/O error: " << e.what() << "\n";
        return kExitIo;
    } catch (const HypothesisViolation& e) {
        err << "refused: " << e.what() << "\n";
        return kExitInvariant;
    } catch (const CertificationError& e) {
        err << "certification failed: " << e.what() << "\n";
        return kExitInvariant;
    } catch (const DivergentTailError& e) {
        err << "usage error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const DomainError& e) {
        err << "usage error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const ConfigurationError& e) {
        err << "usage error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kExitInvariant;
    }
}

} // namespace convapprox::cli
