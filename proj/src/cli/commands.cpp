#include "cli/commands.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <complex>
#include <cstdlib>
#include <exception>
#include <fstream>
#include <limits>
#include <mutex>
#include <numbers>
#include <thread>

#include "potrec/mp_scalar.hpp"
#include "potrec/oracle.hpp"

namespace potrec::cli {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// Runs body(i) for i in [0, n) on up to `threads` workers. Results go into
// caller-owned slots, so the output order never depends on scheduling. The
// exception from the lowest failing index wins.
template <class F>
void parallel_for(std::size_t n, int threads, F&& body) {
    const auto workers = std::min<std::size_t>(n, static_cast<std::size_t>(std::max(1, threads)));
    if (workers <= 1) {
        for (std::size_t i = 0; i < n; ++i) body(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::mutex mu;
    std::size_t failed_at = n;
    std::exception_ptr failure;
    auto loop = [&] {
        for (std::size_t i; (i = next.fetch_add(1)) < n;) {
            try {
                body(i);
            } catch (...) {
                std::lock_guard lock(mu);
                if (i < failed_at) {
                    failed_at = i;
                    failure = std::current_exception();
                }
            }
        }
    };
    std::vector<std::thread> pool;
    for (std::size_t w = 1; w < workers; ++w) pool.emplace_back(loop);
    loop();
    for (auto& t : pool) t.join();
    if (failure) std::rethrow_exception(failure);
}

bool is_corner(double x, double y) { return std::fabs(x) == 1.0 && std::fabs(y) == 1.0; }

// The Stieltjes oracle needs the outer split away from the top and bottom edges.
bool stieltjes_oracle_ok(double x, double y) { return !(std::fabs(x) <= 1.0 && std::fabs(y) == 1.0); }

template <RealScalar T>
TriTable<T> table_of(TableKind kind, const BranchComplex<T>& z, int p) {
    return kind == TableKind::Log ? log_table(z, p) : stieltjes_table(z, p);
}

TriTable<double> table_in(TableKind kind, Precision prec, double x, double y, int p) {
    if (prec == Precision::Double) return table_of(kind, BranchComplex<double>(x, y), p);
    const auto t = table_of(kind, convert_from_double<DoubleWord>(x, y), p);
    TriTable<double> out(kind, p, BranchComplex<double>(x, y));
    for (int k = 0; k <= p; ++k)
        for (int j = 0; j + k <= p; ++j) out(k, j) = {t(k, j).re.to_double(), t(k, j).im.to_double()};
    return out;
}

// max over k + j <= p of |a - b|, reading b from a possibly larger table.
double max_abs_diff(const TriTable<double>& a, const TriTable<double>& b, int p) {
    double m = 0.0;
    for (int k = 0; k <= p; ++k)
        for (int j = 0; j + k <= p; ++j) {
            const double d = std::hypot(a(k, j).re - b(k, j).re, a(k, j).im - b(k, j).im);
            if (std::isnan(d)) return kNaN;
            m = std::max(m, d);
        }
    return m;
}

TriTable<double> reference_float_table(TableKind kind, double x, double y, int p) {
    const BranchComplex<RefFloat> z{RefFloat(x), RefFloat(y)};
    const auto t = table_of(kind, z, p);
    TriTable<double> out(kind, p, BranchComplex<double>(x, y));
    for (int k = 0; k <= p; ++k)
        for (int j = 0; j + k <= p; ++j)
            out(k, j) = {t(k, j).re.convert_to<double>(), t(k, j).im.convert_to<double>()};
    return out;
}

std::ostream& open_out(const std::string& path, std::ofstream& file, std::ostream& fallback) {
    if (path.empty() || path == "-") return fallback;
    file.open(path);
    if (!file) throw ParseError(path, 0, "cannot open for writing");
    return file;
}

} // namespace

int thread_cap() {
    int n = static_cast<int>(std::thread::hardware_concurrency());
    if (n < 1) n = 1;
    if (const char* env = std::getenv("POTREC_THREADS")) {
        char* end = nullptr;
        const long cap = std::strtol(env, &end, 10);
        if (end != env && *end == '\0' && cap >= 1) n = std::min<long>(n, cap);
    }
    return n;
}

const char* precision_name(Precision p) { return p == Precision::Double ? "double" : "doubleword"; }

TableKind parse_kind(const std::string& s) {
    if (s == "log") return TableKind::Log;
    if (s == "stieltjes") return TableKind::Stieltjes;
    throw DomainError("unknown kind '" + s + "' (expected log or stieltjes)");
}

std::vector<EvalRow> eval_points(const CoeffMatrix<double>& c, const std::vector<Point>& pts, Precision prec,
                                 int threads) {
    if (c.m + c.n > kMaxDegree)
        throw CapacityError("degree " + std::to_string(c.m + c.n) + " exceeds limit " + std::to_string(kMaxDegree));
    std::vector<EvalRow> rows(pts.size());
    parallel_for(pts.size(), threads, [&](std::size_t i) {
        EvalRow& r = rows[i];
        r.pt = pts[i];
        try {
            r.value = potential_eval(c, r.pt.x, r.pt.y, prec);
            r.status = r.value.far_field_advisory ? "far-field" : "ok";
        } catch (const CornerSingularityError&) {
            r.value = {kNaN, kNaN, kNaN, false};
            r.status = "corner-singular";
        }
    });
    return rows;
}

void write_eval(std::ostream& out, const std::vector<EvalRow>& rows) {
    out << "x,y,potential,grad_x,grad_y,status\n";
    for (const auto& r : rows)
        write_row(out, {fmt(r.pt.x), fmt(r.pt.y), fmt(r.value.potential), fmt(r.value.grad_x), fmt(r.value.grad_y),
                        r.status});
}

std::vector<ErrGridRow> errgrid(int p, const Grid& g, Precision prec, TableKind kind, int threads) {
    if (p < 0 || p > kErrGridMaxDegree)
        throw CapacityError("errgrid: p must be in [0, " + std::to_string(kErrGridMaxDegree) + "]");
    if (g.nx < 1 || g.ny < 1) throw DomainError("errgrid: grid counts must be >= 1");
    const auto n = static_cast<std::size_t>(g.nx) * static_cast<std::size_t>(g.ny);
    std::vector<ErrGridRow> rows(n);
    parallel_for(n, threads, [&](std::size_t idx) {
        // y is the slow index so rows come out in scanline order.
        const int i = static_cast<int>(idx % static_cast<std::size_t>(g.nx));
        const int j = static_cast<int>(idx / static_cast<std::size_t>(g.nx));
        const double x = g.x(i), y = g.y(j);
        double err = kNaN;
        if (!is_corner(x, y) && (kind == TableKind::Log || stieltjes_oracle_ok(x, y))) {
            const auto ref = ref_square_table(kind, p, BranchComplex<double>(x, y), kOracleTol);
            err = max_abs_diff(table_in(kind, prec, x, y, p), ref, p);
        }
        rows[idx] = {x, y, err};
    });
    return rows;
}

void write_errgrid(std::ostream& out, const std::vector<ErrGridRow>& rows) {
    out << "x,y,maxabserr\n";
    for (const auto& r : rows) write_row(out, {fmt(r.x), fmt(r.y), fmt(r.maxabserr)});
}

std::vector<Point> default_sweep_points() { return {{0.1, 0.2}, {3.0, 3.0}}; }

std::vector<SweepRow> errsweep(const std::vector<Point>& pts, int pmax, int threads) {
    if (pmax < 0 || pmax > kSweepMaxDegree)
        throw CapacityError("errsweep: pmax must be in [0, " + std::to_string(kSweepMaxDegree) + "]");
    constexpr TableKind kinds[] = {TableKind::Log, TableKind::Stieltjes};
    constexpr Precision precs[] = {Precision::Double, Precision::DoubleWord};
    const auto per_point = static_cast<std::size_t>(pmax + 1) * 4;
    std::vector<SweepRow> rows(pts.size() * per_point);
    // One task per (point, kind): the reference tables are the expensive part.
    parallel_for(pts.size() * 2, threads, [&](std::size_t task) {
        const std::size_t pi = task / 2;
        const TableKind kind = kinds[task % 2];
        const double x = pts[pi].x, y = pts[pi].y;
        const bool corner = is_corner(x, y);
        const bool oracle_ok = kind == TableKind::Log || stieltjes_oracle_ok(x, y);
        const int p_oracle = std::min(pmax, kErrGridMaxDegree);
        TriTable<double> oracle, hi;
        if (!corner) {
            if (oracle_ok) oracle = ref_square_table(kind, p_oracle, BranchComplex<double>(x, y), kOracleTol);
            if (!oracle_ok || pmax > kErrGridMaxDegree) hi = reference_float_table(kind, x, y, pmax);
        }
        for (int p = 0; p <= pmax; ++p)
            for (int pr = 0; pr < 2; ++pr) {
                SweepRow r{static_cast<int>(pi), p, precs[pr], kind, kNaN, "corner-singular"};
                if (!corner) {
                    const auto t = table_in(kind, precs[pr], x, y, p);
                    const bool use_oracle = oracle_ok && p <= kErrGridMaxDegree;
                    r.err = max_abs_diff(t, use_oracle ? oracle : hi, p);
                    r.methodology = use_oracle ? "oracle" : "reference_float";
                }
                const std::size_t slot = pi * per_point + static_cast<std::size_t>(p) * 4 +
                                         static_cast<std::size_t>(task % 2) * 2 + static_cast<std::size_t>(pr);
                rows[slot] = std::move(r);
            }
    });
    return rows;
}

void write_errsweep(std::ostream& out, const std::vector<SweepRow>& rows) {
    out << "point_id,p,precision,kind,err,methodology\n";
    for (const auto& r : rows)
        write_row(out, {std::to_string(r.point_id), std::to_string(r.p), precision_name(r.precision),
                        to_string(r.kind), fmt(r.err), r.methodology});
}

std::vector<int> bench_p_samples(int pmax) {
    std::vector<int> ps;
    if (pmax >= 5) ps.push_back(5);
    for (int p = 10; p <= pmax; p += 10) ps.push_back(p);
    return ps;
}

namespace {

using Clock = std::chrono::steady_clock;

// Median nanoseconds per call of op over reps timed batches after one warmup.
template <class Op>
double median_ns(Op&& op, int reps) {
    // Calibrate so a batch lasts about 2 ms; timer resolution is then negligible.
    long batch = 1;
    for (;;) {
        const auto t0 = Clock::now();
        for (long i = 0; i < batch; ++i) op();
        const auto dt = std::chrono::duration<double, std::nano>(Clock::now() - t0).count();
        if (dt >= 2e6 || batch >= (1L << 24)) break;
        batch *= 2;
    }
    for (long i = 0; i < batch; ++i) op(); // warmup
    std::vector<double> t(static_cast<std::size_t>(reps));
    for (auto& v : t) {
        const auto t0 = Clock::now();
        for (long i = 0; i < batch; ++i) op();
        v = std::chrono::duration<double, std::nano>(Clock::now() - t0).count() / static_cast<double>(batch);
    }
    std::nth_element(t.begin(), t.begin() + reps / 2, t.end());
    return t[static_cast<std::size_t>(reps / 2)];
}

volatile double bench_sink = 0.0;

} // namespace

std::vector<BenchRow> bench(int pmax, int reps) {
    if (reps < 3) throw DomainError("bench: reps must be >= 3");
    if (pmax > kMaxDegree) throw CapacityError("bench: pmax exceeds " + std::to_string(kMaxDegree));
    const double x = 0.1, y = 0.2;
    std::vector<BenchRow> rows;
    for (const int p : bench_p_samples(pmax)) {
        const BranchComplex<double> z(x, y);
        const auto zw = convert_from_double<DoubleWord>(x, y);
        rows.push_back({p, "recurrence_double", median_ns([&] { bench_sink = bench_sink + log_table(z, p)(p, 0).re; }, reps)});
        rows.push_back({p, "recurrence_doubleword",
                        median_ns([&] { bench_sink = bench_sink + log_table(zw, p)(p, 0).re.hi(); }, reps)});
        // What a direct quadrature would pay just for the kernel on a (p+1)^2 grid.
        std::vector<double> nodes(static_cast<std::size_t>(p) + 1);
        for (std::size_t a = 0; a < nodes.size(); ++a)
            nodes[a] = std::cos(std::numbers::pi * (static_cast<double>(a) + 0.5) / static_cast<double>(nodes.size()));
        const std::complex<double> zc(x, y);
        rows.push_back({p, "kernel_proxy", median_ns(
                                               [&] {
                                                   double acc = 0.0;
                                                   for (double s : nodes)
                                                       for (double t : nodes) acc += std::log(zc - std::complex<double>(s, t)).real();
                                                   bench_sink = bench_sink + acc;
                                               },
                                               reps)});
    }
    return rows;
}

void write_bench(std::ostream& out, const std::vector<BenchRow>& rows) {
    out << "p,method,median_ns\n";
    for (const auto& r : rows) write_row(out, {std::to_string(r.p), r.method, fmt(r.median_ns)});
}

void write_table(std::ostream& out, TableKind kind, int p, double x, double y, Precision prec) {
    if (p < 0) throw DomainError("table: p must be >= 0");
    if (p > kMaxDegree) throw CapacityError("table: p exceeds " + std::to_string(kMaxDegree));
    if (prec == Precision::Double) {
        const auto t = table_of(kind, BranchComplex<double>(x, y), p);
        for (int k = 0; k <= p; ++k)
            for (int j = 0; j + k <= p; ++j)
                write_row(out, {std::to_string(k), std::to_string(j), fmt(t(k, j).re), fmt(t(k, j).im)});
        return;
    }
    const auto t = table_of(kind, convert_from_double<DoubleWord>(x, y), p);
    for (int k = 0; k <= p; ++k)
        for (int j = 0; j + k <= p; ++j) {
            const auto& v = t(k, j);
            write_row(out, {std::to_string(k), std::to_string(j), fmt(v.re.hi()), fmt(v.im.hi()), fmt(v.re.lo()),
                            fmt(v.im.lo())});
        }
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Potentials of Legendre-expanded densities on the square [-1,1]^2"};
    app.require_subcommand(1);
    RunConfig cfg;
    std::string precision = "double", kind = "log";
    std::vector<double> grid, window;

    auto add_precision = [&](CLI::App* sub) {
        sub->add_option("--precision", precision, "double or doubleword")
            ->check(CLI::IsMember({"double", "doubleword"}));
    };
    auto add_out = [&](CLI::App* sub) { sub->add_option("--out", cfg.out, "output path (default stdout)"); };

    auto* eval = app.add_subcommand("eval", "potential and gradient at points");
    eval->add_option("--coeffs", cfg.coeffs, "coefficient CSV")->required();
    eval->add_option("--points", cfg.points, "points CSV with header x,y")->required();
    add_precision(eval);
    add_out(eval);

    auto* eg = app.add_subcommand("errgrid", "table error against quadrature on a grid");
    eg->add_option("--p", cfg.p, "total degree")->default_val(5);
    eg->add_option("--grid", grid, "NX NY")->expected(2);
    eg->add_option("--window", window, "XMIN XMAX YMIN YMAX")->expected(4);
    eg->add_option("--kind", kind, "log or stieltjes");
    add_precision(eg);
    add_out(eg);

    auto* es = app.add_subcommand("errsweep", "table error as p grows");
    es->add_option("--points", cfg.points, "points CSV with header x,y");
    es->add_option("--pmax", cfg.pmax, "largest degree")->default_val(100);
    add_out(es);

    auto* bn = app.add_subcommand("bench", "timing of the recurrences against a kernel proxy");
    bn->add_option("--pmax", cfg.pmax, "largest degree")->default_val(100);
    bn->add_option("--reps", cfg.reps, "timed repetitions")->default_val(5);
    add_out(bn);

    auto* tb = app.add_subcommand("table", "print one table as k,j,re,im lines");
    tb->add_option("--kind", kind, "log or stieltjes");
    tb->add_option("--p", cfg.p, "total degree")->default_val(5);
    tb->add_option("--x", cfg.x, "real part")->default_val(0.0);
    tb->add_option("--y", cfg.y, "imaginary part")->default_val(0.0);
    add_precision(tb);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kOk : kUsage;
    }

    try {
        cfg.precision = precision == "double" ? Precision::Double : Precision::DoubleWord;
        if (grid.size() == 2) {
            if (grid[0] < 1 || grid[1] < 1 || grid[0] != std::floor(grid[0]) || grid[1] != std::floor(grid[1]))
                throw DomainError("--grid counts must be positive integers");
            cfg.grid.nx = static_cast<int>(grid[0]);
            cfg.grid.ny = static_cast<int>(grid[1]);
        }
        if (window.size() == 4) {
            cfg.grid.xmin = window[0];
            cfg.grid.xmax = window[1];
            cfg.grid.ymin = window[2];
            cfg.grid.ymax = window[3];
        }
        if (eg->parsed() || tb->parsed()) cfg.kind = parse_kind(kind);
        std::ofstream file;
        std::ostream& dst = open_out(cfg.out, file, out);
        const int threads = thread_cap();

        if (eval->parsed()) {
            write_eval(dst, eval_points(read_coeffs_file(cfg.coeffs), read_points_file(cfg.points), cfg.precision,
                                        threads));
        } else if (eg->parsed()) {
            write_errgrid(dst, errgrid(cfg.p, cfg.grid, cfg.precision, cfg.kind, threads));
        } else if (es->parsed()) {
            const auto pts = cfg.points.empty() ? default_sweep_points() : read_points_file(cfg.points);
            write_errsweep(dst, errsweep(pts, cfg.pmax, threads));
        } else if (bn->parsed()) {
            write_bench(dst, bench(cfg.pmax, cfg.reps));
        } else if (tb->parsed()) {
            write_table(dst, cfg.kind, cfg.p, cfg.x, cfg.y, cfg.precision);
        }
        dst.flush();
        return kOk;
    } catch (const ParseError& e) {
        err << "error: " << e.what() << '\n';
        return kUsage;
    } catch (const SingularPointError& e) {
        err << "error: " << e.what() << '\n';
        return kSingular;
    } catch (const AccuracyError& e) {
        err << "error: " << e.what() << '\n';
        return kAccuracy;
    } catch (const DomainError& e) {
        err << "error: " << e.what() << '\n';
        return kUsage;
    } catch (const CapacityError& e) {
        err << "error: " << e.what() << '\n';
        return kUsage;
    }
}

} // namespace potrec::cli
