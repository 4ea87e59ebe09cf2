#include "sprd/plotdata.hpp"

#include <fstream>

namespace sprd {

namespace {

std::ofstream open_csv(const std::filesystem::path& path, const std::string& header) {
  std::ofstream out(path);
  if (!out) fail(ErrorCode::Io, "cannot write " + path.string());
  out << header;
  out.precision(17);
  return out;
}

double sum(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x;
  return s;
}

}  // namespace

void write_energy_curve(const std::filesystem::path& path,
                        const std::vector<EnergyRecord>& records, const std::string& header) {
  auto out = open_csv(path, header);
  out << "t,energy,dissipation,total\n";
  for (const auto& r : records) {
    const double e = sum(r.lzeta_per_component);
    const double d = sum(r.dissipation_cum);
    out << r.time << ',' << e << ',' << d << ',' << e + d << '\n';
  }
}

void write_tail_table(const std::filesystem::path& path, const std::vector<TailRow>& rows,
                      const std::string& header) {
  auto out = open_csv(path, header);
  out << "gamma,exceed,n,p,ci_lo,ci_hi\n";
  for (const auto& r : rows)
    out << r.gamma << ',' << r.exceed << ',' << r.n << ',' << r.p.p << ',' << r.p.lo << ','
        << r.p.hi << '\n';
}

void write_dependence_table(const std::filesystem::path& path,
                            const std::vector<DependenceRow>& rows, const std::string& header) {
  auto out = open_csv(path, header);
  out << "delta,distance,stderr,blowups\n";
  for (const auto& r : rows)
    out << r.delta << ',' << r.distance << ',' << r.stderr_distance << ',' << r.blowups << '\n';
}

void write_raster_1d(const std::filesystem::path& path, const std::vector<SystemState>& states,
                     std::size_t component, const std::string& header) {
  for (const auto& s : states) {
    require(component < s.ell(), "raster component out of range");
    require(s.components[component].grid().dim == 1, "raster needs a 1d grid",
            ErrorCode::GridMismatch);
  }
  auto out = open_csv(path, header);
  out << "t,x,value\n";
  for (const auto& s : states) {
    const Field& u = s.components[component];
    const double h = u.grid().spacing();
    for (std::size_t p = 0; p < u.size(); ++p)
      out << s.time << ',' << p * h << ',' << u[p] << '\n';
  }
}

std::size_t csv_data_rows(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorCode::Io, "cannot read " + path.string());
  std::string line;
  std::size_t rows = 0;
  bool columns = false;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    if (!columns) {
      columns = true;
      continue;
    }
    ++rows;
  }
  return rows;
}

}  // namespace sprd
