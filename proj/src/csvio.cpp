// CSV writers; see the header for the format contracts.
#include "raystone/csvio.hpp"

#include "raystone/errors.hpp"

#include <cstdio>
#include <ostream>

namespace raystone::csvio {

std::string format_value(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

namespace {

void write_row(std::ostream& os, const std::vector<double>& cells) {
  for (std::size_t k = 0; k < cells.size(); ++k) {
    if (k) os << ',';
    os << format_value(cells[k]);
  }
  os << '\n';
}

void write_header(std::ostream& os, const std::vector<std::string>& columns) {
  for (std::size_t k = 0; k < columns.size(); ++k) {
    if (k) os << ',';
    os << columns[k];
  }
  os << '\n';
}

}  // namespace

void write_table(std::ostream& os, const std::vector<std::string>& columns,
                 const std::vector<std::vector<double>>& rows) {
  if (columns.empty()) throw InvalidInput("table needs at least one column");
  write_header(os, columns);
  for (const auto& row : rows) {
    if (row.size() != columns.size()) {
      throw InvalidInput("table row width does not match the header");
    }
    write_row(os, row);
  }
}

void write_ray_csv(std::ostream& os, const std::vector<RayState<double>>& states) {
  write_header(os, {"t", "x1", "x2", "xi1", "xi2", "phase", "det_jac", "re_a0", "im_a0"});
  for (const auto& st : states) {
    const std::complex<double> a0 = std::exp(-st.log_amp);
    write_row(os, {st.t, st.x[0], st.x[1], st.xi[0], st.xi[1], st.phase,
                   st.jac.determinant(), a0.real(), a0.imag()});
  }
}

void write_field_csv(std::ostream& os, const std::vector<BoundaryFieldGrid<double>>& snaps) {
  write_header(os, {"t", "x1", "x2", "re_f1", "im_f1", "re_f2", "im_f2", "re_f3", "im_f3"});
  for (const auto& snap : snaps) {
    if (static_cast<int>(snap.f.size()) != snap.grid.count()) {
      throw InvalidInput("field sample count does not match the grid");
    }
    for (int idx = 0; idx < snap.grid.count(); ++idx) {
      const Vec2<double> x = snap.grid.at(idx);
      const CVec3<double>& f = snap.f[idx];
      write_row(os, {snap.t, x[0], x[1], f[0].real(), f[0].imag(), f[1].real(),
                     f[1].imag(), f[2].real(), f[2].imag()});
    }
  }
}

void write_depth_csv(std::ostream& os, const std::vector<EvanescentMode<double>>& modes,
                     const EvanescentProfile<double>& profile) {
  const int nd = static_cast<int>(profile.depth.size());
  if (profile.u.size() != modes.size() * profile.depth.size()) {
    throw InvalidInput("profile sample count does not match modes x depths");
  }
  write_header(os,
               {"t", "x1", "x2", "x3", "re_f1", "im_f1", "re_f2", "im_f2", "re_f3", "im_f3"});
  for (std::size_t mi = 0; mi < modes.size(); ++mi) {
    const EllipticPoint<double>& pt = modes[mi].pt;
    for (int d = 0; d < nd; ++d) {
      const CVec3<double>& u = profile.u_at(static_cast<int>(mi), d);
      write_row(os, {pt.t, pt.x[0], pt.x[1], profile.depth[d], u[0].real(), u[0].imag(),
                     u[1].real(), u[1].imag(), u[2].real(), u[2].imag()});
    }
  }
}

void write_orbit_csv(std::ostream& os, const std::vector<PolarizationSample<double>>& series,
                     const std::vector<double>& phase) {
  if (series.size() != phase.size()) {
    throw InvalidInput("orbit series and phase sample counts differ");
  }
  write_header(os, {"chi", "u1", "u2", "u3"});
  for (std::size_t k = 0; k < series.size(); ++k) {
    const std::complex<double> rot = std::polar(1.0, phase[k]);
    const CVec3<double> u = series[k].p * rot;
    write_row(os, {phase[k], u[0].real(), u[1].real(), u[2].real()});
  }
}

}  // namespace raystone::csvio
