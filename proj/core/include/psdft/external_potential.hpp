#pragma once

namespace psdft {

/// Wall attraction from integrating a Lennard-Jones solid over the
/// half-space below the wall: algebraically decaying 9-3 form,
/// 4 pi eps_w [ (1/45)(y2+1)^-9 - (1/6)(y2+1)^-3 ]. Diverges as y2 -> -1.
double wall_potential_93(double y2, double eps_w);
double wall_potential_93_dy(double y2, double eps_w);

/// Time modulation of the wall strength: factor 1 + (d_eps/eps_w) sin(pi t
/// / tau) while t < tau, 1 afterwards.
double dynamic_wall_factor(double t, double eps_w, double d_eps, double tau);
double dynamic_wall_potential(double y2, double t, double eps_w, double d_eps, double tau);

}  // namespace psdft
