#pragma once

// Subcommands of the potrec tool. Each command writes CSV (or table lines)
// to a stream; run() parses arguments and maps failures to exit codes.

#include <ostream>
#include <string>
#include <vector>

#include "cli/io.hpp"
#include "potrec/square2d.hpp"
#include "potrec/xprec.hpp"

namespace potrec::cli {

enum ExitCode : int { kOk = 0, kUsage = 2, kSingular = 3, kAccuracy = 4 };

struct Grid {
    int nx = 41;
    int ny = 41;
    double xmin = -2.0, xmax = 2.0, ymin = -2.0, ymax = 2.0;

    double x(int i) const { return nx == 1 ? xmin : xmin + (xmax - xmin) * i / (nx - 1); }
    double y(int j) const { return ny == 1 ? ymin : ymin + (ymax - ymin) * j / (ny - 1); }
};

struct RunConfig {
    std::string command;
    int p = 5;
    Grid grid;
    Precision precision = Precision::Double;
    std::string coeffs, points, out;
    int pmax = 100;
    int reps = 5;
    TableKind kind = TableKind::Log;
    double x = 0.0, y = 0.0;
};

/// Worker count: hardware concurrency, capped by POTREC_THREADS when set.
int thread_cap();

const char* precision_name(Precision p);
TableKind parse_kind(const std::string& s); // throws DomainError

// eval
struct EvalRow {
    Point pt;
    PotentialResult<double> value;
    std::string status; ///< ok, far-field, corner-singular
};
std::vector<EvalRow> eval_points(const CoeffMatrix<double>& c, const std::vector<Point>& pts, Precision prec,
                                 int threads);
void write_eval(std::ostream& out, const std::vector<EvalRow>& rows);

// errgrid: max |table - oracle| over k + j <= p; NaN at corners.
inline constexpr int kErrGridMaxDegree = 12;
inline constexpr double kOracleTol = 1e-12;
struct ErrGridRow {
    double x, y, maxabserr;
};
std::vector<ErrGridRow> errgrid(int p, const Grid& g, Precision prec, TableKind kind, int threads);
void write_errgrid(std::ostream& out, const std::vector<ErrGridRow>& rows);

// errsweep
inline constexpr int kSweepMaxDegree = 120;
struct SweepRow {
    int point_id;
    int p;
    Precision precision;
    TableKind kind;
    double err;
    std::string methodology; ///< oracle, reference_float, corner-singular
};
std::vector<Point> default_sweep_points();
std::vector<SweepRow> errsweep(const std::vector<Point>& pts, int pmax, int threads);
void write_errsweep(std::ostream& out, const std::vector<SweepRow>& rows);

// bench
struct BenchRow {
    int p;
    std::string method; ///< recurrence_double, recurrence_doubleword, kernel_proxy
    double median_ns;
};
std::vector<int> bench_p_samples(int pmax);
std::vector<BenchRow> bench(int pmax, int reps);
void write_bench(std::ostream& out, const std::vector<BenchRow>& rows);

// table
void write_table(std::ostream& out, TableKind kind, int p, double x, double y, Precision prec);

/// Full command line entry point; returns the process exit code.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

} // namespace potrec::cli
