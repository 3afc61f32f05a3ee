#include "tfelab/csv_io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace tfelab {

namespace {

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.15g", v);
    return buf;
}

std::ofstream open_out(const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write file: " + path);
    return out;
}

}  // namespace

void write_timeseries(const std::vector<DiagnosticsRecord>& records,
                      const std::string& path) {
    std::ofstream out = open_out(path);
    out << "t,mass,energy,dissipation_h,cum_dissipation,entropy_integral,"
           "bulk_dissipation,cum_bulk,support_measure,sup_slope_sq,"
           "lipschitz_rhs,weak_R_l1,dt,newton_iters\n";
    for (const auto& r : records) {
        out << fmt(r.t) << ',' << fmt(r.mass) << ',' << fmt(r.energy) << ','
            << fmt(r.dissipation_h) << ',' << fmt(r.cum_dissipation) << ','
            << fmt(r.entropy_integral) << ',' << fmt(r.bulk_dissipation) << ','
            << fmt(r.cum_bulk) << ',' << fmt(r.support_measure) << ','
            << fmt(r.sup_slope_sq) << ',' << fmt(r.lipschitz_rhs) << ','
            << fmt(r.weak_R_l1) << ',' << fmt(r.dt) << ',' << r.newton_iters
            << '\n';
    }
}

void write_snapshot(const Field& u, double t, const ModelParams& p,
                    const std::string& path) {
    std::ofstream out = open_out(path);
    out << "# t=" << fmt(t) << " epsilon=" << fmt(p.epsilon)
        << " n=" << fmt(p.n) << '\n';
    const Field rho = entropy_field(u, p);
    for (int i = 0; i < u.size(); ++i)
        out << fmt(u.grid.center(i)) << ',' << fmt(u[i]) << ',' << fmt(rho[i])
            << '\n';
}

void write_qs_trajectory(const std::vector<QsSample>& samples,
                         const std::string& path) {
    std::ofstream out = open_out(path);
    size_t kmax = 0;
    for (const auto& s : samples) kmax = std::max(kmax, s.state.intervals.size());
    out << "# intervals=" << kmax << " columns: t";
    for (size_t k = 1; k <= kmax; ++k)
        out << ",a_" << k << ",b_" << k << ",gamma_" << k;
    out << ",total_support\n";
    for (const auto& s : samples) {
        out << fmt(s.t);
        for (size_t k = 0; k < kmax; ++k) {
            if (k < s.state.intervals.size()) {
                const auto& iv = s.state.intervals[k];
                out << ',' << fmt(iv.a) << ',' << fmt(iv.b) << ','
                    << fmt(iv.gamma);
            } else {
                out << ",nan,nan,nan";
            }
        }
        out << ',' << fmt(total_support(s.state)) << '\n';
    }
}

int CsvTable::column_index(const std::string& name) const {
    for (size_t i = 0; i < columns.size(); ++i)
        if (columns[i] == name) return static_cast<int>(i);
    return -1;
}

CsvTable read_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot read file: " + path);
    CsvTable table;
    std::string line;
    bool have_header = false;
    while (std::getline(in, line)) {
        if (line.empty() || line.front() == '#') continue;
        std::vector<std::string> cells;
        std::string cur;
        std::istringstream ls(line);
        while (std::getline(ls, cur, ',')) cells.push_back(cur);
        if (!have_header) {
            table.columns = cells;
            have_header = true;
            continue;
        }
        std::vector<double> row;
        row.reserve(cells.size());
        for (const auto& c : cells) row.push_back(std::strtod(c.c_str(), nullptr));
        if (row.size() != table.columns.size())
            throw std::runtime_error(path + ": ragged CSV row");
        table.rows.push_back(std::move(row));
    }
    if (!have_header) throw std::runtime_error(path + ": missing CSV header");
    return table;
}

SnapshotData read_snapshot(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot read file: " + path);
    std::string line;
    if (!std::getline(in, line) || line.rfind("# t=", 0) != 0)
        throw std::runtime_error(path + ": missing snapshot header");
    SnapshotData snap;
    if (std::sscanf(line.c_str(), "# t=%lf epsilon=%lf n=%lf", &snap.t,
                    &snap.epsilon, &snap.n) != 3)
        throw std::runtime_error(path + ": malformed snapshot header");
    std::vector<double> xs, us, rhos;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        double x, u, rho;
        if (std::sscanf(line.c_str(), "%lf,%lf,%lf", &x, &u, &rho) != 3)
            throw std::runtime_error(path + ": malformed snapshot row");
        xs.push_back(x);
        us.push_back(u);
        rhos.push_back(rho);
    }
    if (xs.size() < 2) throw std::runtime_error(path + ": snapshot too small");
    const double h = xs[1] - xs[0];
    const int n = static_cast<int>(xs.size());
    const Grid g = make_uniform_grid(xs.front() - 0.5 * h,
                                     xs.front() - 0.5 * h + n * h, n);
    snap.u = Field(g);
    snap.u.values = us;
    snap.rho = rhos;
    return snap;
}

}  // namespace tfelab
