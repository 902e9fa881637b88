// Plot-ready serialization: fixed-header CSV tables with round-trip precision.
//
// Every numeric cell is printed with 17 significant digits so that a written
// file re-parses to the exact same doubles; two runs over identical data are
// byte-identical.  The writers stream row-major in a fixed order and never
// depend on locale state.
#pragma once

#include "raystone/rays.hpp"
#include "raystone/synthesis.hpp"

#include <iosfwd>
#include <string>
#include <vector>

namespace raystone::csvio {

// One value, 17 significant digits ("%.17g").
std::string format_value(double v);

// Generic table: a fixed header line followed by one line per row.  All rows
// must have exactly one cell per column.
void write_table(std::ostream& os, const std::vector<std::string>& columns,
                 const std::vector<std::vector<double>>& rows);

// Ray samples: t,x1,x2,xi1,xi2,phase,det_jac,re_a0,im_a0.  The amplitude is
// exp(-log_amp) of each state (1 when transport was not integrated).
void write_ray_csv(std::ostream& os, const std::vector<RayState<double>>& states);

// Boundary field snapshots: t,x1,x2,re_f1,im_f1,re_f2,im_f2,re_f3,im_f3.
// Rows are ordered snapshot-by-snapshot, then row-major over each grid.
void write_field_csv(std::ostream& os, const std::vector<BoundaryFieldGrid<double>>& snaps);

// Bulk continuation profiles: t,x1,x2,x3,re_f1,...,im_f3 with x3 the depth
// into the half-space; rows ordered mode-by-mode, then by depth.
void write_depth_csv(std::ostream& os, const std::vector<EvanescentMode<double>>& modes,
                     const EvanescentProfile<double>& profile);

// Particle-orbit trace: chi,u1,u2,u3 where u is the real displacement of the
// polarization at rotation phase chi.
void write_orbit_csv(std::ostream& os, const std::vector<PolarizationSample<double>>& series,
                     const std::vector<double>& phase);

}  // namespace raystone::csvio
