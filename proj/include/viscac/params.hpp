#pragma once

#include <cmath>
#include <complex>
#include <stdexcept>
#include <string>

namespace viscac {

using cplx = std::complex<double>;
inline constexpr cplx I{0.0, 1.0};
inline constexpr double pi = 3.14159265358979323846;

// Physical constants of a run. Everything is dimensionless by default; the
// reference case (omega = 15, c = rho0 = 1) corresponds to a 1 m duct at
// roughly 800 Hz in air once lengths and times are rescaled.
struct MaterialParams {
  double omega = 15.0;
  double c = 1.0;
  double rho0 = 1.0;
  double eta = 1.6e-3;
  double eta_prime = 0.0;

  void validate() const {
    auto need = [](bool ok, const char* field, const char* what) {
      if (!ok) throw std::invalid_argument(std::string(field) + " " + what);
    };
    need(std::isfinite(omega) && omega > 0, "omega", "must be > 0");
    need(std::isfinite(c) && c > 0, "c", "must be > 0");
    need(std::isfinite(rho0) && rho0 > 0, "rho0", "must be > 0");
    need(std::isfinite(eta) && eta > 0, "eta", "must be > 0");
    need(std::isfinite(eta_prime) && eta_prime >= 0, "eta_prime", "must be >= 0");
  }

  double gamma_prime() const { return eta_prime == 0.0 ? 0.0 : eta_prime / eta; }
  double wavenumber_sq() const { return omega * omega / (c * c); }
};

// Boundary-layer thickness sqrt(2 eta / (omega rho0)).
inline double epsilon(const MaterialParams& p) {
  return std::sqrt(2.0 * p.eta / (p.omega * p.rho0));
}

class ModelOrder {
 public:
  constexpr explicit ModelOrder(int n) : n_(n) {
    if (n < 0 || n > 2) throw std::invalid_argument("model order must be 0, 1 or 2");
  }
  constexpr int value() const { return n_; }
  friend constexpr bool operator==(ModelOrder a, ModelOrder b) { return a.n_ == b.n_; }

 private:
  int n_;
};

// alpha and beta of the pressure impedance condition
//   alpha dp/dn + beta d^2p/dt^2 = (data)
// beta is stored with the sign it carries in the tabulated form, so its
// imaginary part is positive. The sesquilinear boundary form that actually
// appears in the weak problem carries -beta; weak_beta() exposes that value
// and it is the one with the dissipative sign Im < 0.
struct CanonicalPressureCoeffs {
  cplx alpha{1.0, 0.0};
  cplx beta{0.0, 0.0};
  cplx weak_beta() const { return -beta; }
};

// Same structure for the velocity system: alpha div v appears in the volume
// and (beta / alpha) d^2/dt^2 of the multiplier on the walls. beta here is the
// pressure beta scaled by c^2/omega^2.
struct CanonicalVelocityCoeffs {
  cplx alpha{1.0, 0.0};
  cplx beta{0.0, 0.0};
  double wavenumber_sq = 1.0;  // omega^2/c^2, to map back to the pressure form
  cplx weak_beta() const { return -beta * wavenumber_sq; }
};

// Volume coefficient alpha: 1 for orders 0/1, 1 - i omega (eta+eta')/(rho0 c^2) for order 2.
inline cplx volume_alpha(const MaterialParams& p, ModelOrder N) {
  if (N.value() < 2) return {1.0, 0.0};
  return 1.0 - I * p.omega * (p.eta + p.eta_prime) / (p.rho0 * p.c * p.c);
}

// Pressure wall coefficient; zero for order 0 (plain Neumann).
inline cplx wall_beta(const MaterialParams& p, ModelOrder N, double kappa) {
  if (N.value() == 0) return {0.0, 0.0};
  cplx b = cplx(1.0, 1.0) * std::sqrt(p.eta / (2.0 * p.omega * p.rho0));
  if (N.value() == 2) b += I * p.eta * kappa / (2.0 * p.omega * p.rho0);
  return b;
}

inline CanonicalPressureCoeffs pressure_coeffs(const MaterialParams& p, ModelOrder N,
                                               double kappa) {
  if (N.value() == 0)
    throw std::invalid_argument("order 0 has no canonical impedance coefficients");
  return {volume_alpha(p, N), wall_beta(p, N, kappa)};
}

inline CanonicalVelocityCoeffs velocity_coeffs(const MaterialParams& p, ModelOrder N,
                                               double kappa) {
  if (N.value() == 0)
    throw std::invalid_argument("order 0 has no canonical impedance coefficients");
  const double k2 = p.wavenumber_sq();
  return {volume_alpha(p, N), wall_beta(p, N, kappa) / k2, k2};
}

}  // namespace viscac
