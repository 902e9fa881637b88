// Frozen reference values for the surface/interface wave engine test suite.
//
// Every number below was produced by tests/reference/generate_reference_values.py
// (mpmath, 50 significant digits; see tests/reference/oracle_output.txt for the
// full run log) and hand-frozen here. Do not edit by hand without re-running
// the generator.
#pragma once

namespace refvals {

// ---------------------------------------------------------------------------
// One-material kernels at s = 0.5 for the unit Poisson solid (rho=lam=mu=1).
inline constexpr double kA_half = 0.866025403784438646764;
inline constexpr double kB_half = 0.957427107756338109975;
inline constexpr double kThetaBar_half = 0.0916876048223000754425;
inline constexpr double kR_half = 0.254124790355399849115;

// ---------------------------------------------------------------------------
// Free-surface root for the unit Poisson solid.
inline constexpr double kCR = 0.919401686761966121955;
inline constexpr double kRPrimeCR = -4.24653449076333701778;
inline constexpr double kRSecondCR = -51.955572004278920491;
inline constexpr double kA_cR = 0.393319893190328639165;
inline constexpr double kB_cR = 0.84748658561247082609;
inline constexpr double kThetaBar_cR = 0.488033871712584862352;
inline constexpr double kK1Bar_cR = 0.866820223124981715096;
// |p3|/|p1| = b*rho*cR^2 / (mu*thetabar) at the root.
inline constexpr double kAxisRatio = 1.46788982501387055872;
// m2bar(c_R) = (a+b) rho cR^2 (unit covector normalization).
inline constexpr double kM2Bar_cR = 1.04885304850754303777;
// e0 on the root: purely imaginary, value i*kE0Imag_cR.
inline constexpr double kE0Imag_cR = 4.04874114329543964748;

// ---------------------------------------------------------------------------
// Dirichlet-to-Neumann symbol spot values at tau=0.5, xi=(1,0), unit Poisson.
inline constexpr double kDN33 = 1.2672765876813537834;
inline constexpr double kDN11 = 1.40102698231365882894;

// ---------------------------------------------------------------------------
// Interface (two half-space) matrices with identical unit sides at s = 0.5.
inline constexpr double kDetMInterface_half = 7.10195477358383183704;
inline constexpr double kDetMCleared_half = 0.00605027085779607783634;
inline constexpr double kSInterface_half = 0.20728904939721249057;

// ---------------------------------------------------------------------------
// Shipped interface pair: plus = (rho,lam,mu) = (3,3,3), minus = (1,1,1).
// Pure impedance contrast, equal wave speeds both sides; denser side labeled
// plus so the interface polarization constant zeta1 is positive.
inline constexpr double kCST = 0.984172707382486774609;
inline constexpr double kM1PrimeCST = -31.4352521826083059981;
inline constexpr double kM1SecondCST = -922.095546543641020479;
inline constexpr double kZeta1 = 1.73209146896708294295;
inline constexpr double kZeta2 = 3.73244196235909049314;
inline constexpr double kK1ST = 4.11476170139262445567;

// Interface N(0) limit constant c = 2 mu (2 mu + lam) / (3 mu + lam) for the
// unit Poisson material, and the exact derivative-matrix invariants at
// iota = s^2 = 0.3 used by the definiteness report self-test.
inline constexpr double kCLimitPoisson = 1.5;
inline constexpr double kDetNPrime_03 = 0.407865899560355511325;
inline constexpr double kTrNPrime_03 = -1.45636132221153861467;

// ---------------------------------------------------------------------------
// Line-source standing-wave scenario (flat model, unit Poisson solid):
// Duhamel quadrature over (0,T) plus the transient-cancelling initial packet
// converges to standing_wave_constant times the closed-form field, where
// standing_wave_constant = -pi / c_R (exact; measured sup deviation 1.9e-4 at
// p = 6 with T = 240).
inline constexpr double kStandingWaveConstant = -3.41699683481563401386; // -pi/kCR

}  // namespace refvals
