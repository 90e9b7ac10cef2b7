#pragma once

// Sampling estimators for calmness and Lipschitz moduli.
//
// Limits cannot be computed, so every estimator reports a value together with
// the shell table it came from. Estimates are maxima over finitely many
// samples and therefore lower bounds.

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "robreg/common.hpp"
#include "robreg/domain.hpp"
#include "robreg/parallel.hpp"

namespace robreg {

class RobustEvaluator;

enum class ModulusKind { Calm, Lip };
enum class ModulusMethod { ProfileDerivative, SpatialSampling, LimsupOfCalm };

const char* to_string(ModulusKind k);
const char* to_string(ModulusMethod m);

struct Shell {
  double radius = 0.0;
  double max_ratio = 0.0;
  std::size_t samples = 0;  // feasible samples that produced a ratio
};

struct ModulusEstimate {
  double value = 0.0;
  bool infinite = false;
  ModulusKind kind = ModulusKind::Calm;
  ModulusMethod method = ModulusMethod::SpatialSampling;
  std::size_t samples = 0;
  std::vector<Shell> shells;
  /// Profile derivatives: extrapolated one-sided slopes and the raw quotients
  /// for h0, h0/2, h0/4 (left then right).
  std::optional<double> left;
  std::optional<double> right;
  std::vector<double> raw_quotients;
  std::vector<std::string> flags;
};

struct SubgradientInterval {
  double lower = 0.0;
  double upper = 0.0;
};

/// One-sided derivatives of a profile at eps, from quotients with
/// h in {h0, h0/2, h0/4}, h0 = rel_step * eps, Richardson-extrapolated.
struct OneSided {
  double left = 0.0;
  double right = 0.0;
  std::vector<double> raw;  // left quotients then right quotients
};
OneSided one_sided_derivatives(const ProfileFn& g, double eps, double rel_step = 1e-2);

/// calm fbar_eps(x) = g_x'(eps); value = max(|left|, |right|).
ModulusEstimate calm_from_profile(const ProfileFn& g, double eps, double rel_step = 1e-2);

/// Shell i of radius r draws points x̄ + r s u with s uniform in [1/2, 1] and u
/// uniform on the sphere. Sample j of shell i uses RNG stream (seed, i, j), so
/// adding samples never lowers a shell maximum.
struct SamplingConfig {
  std::vector<double> radii{1e-2, 1e-3};  // decreasing
  std::size_t samples_per_radius = 2000;
  std::uint64_t seed = 1;
  /// Pair separations for lip_direct are r * 10^(-pair_decades * U).
  double pair_decades = 3.0;
  /// Ratio growth across the two smallest shells above which the modulus is reported infinite.
  double infinite_growth = 10.0;
};

ModulusEstimate calm_direct(const PointFn& F, const DomainModel& X, const Vec& xbar, const SamplingConfig& cfg,
                            Exec exec = default_exec());
ModulusEstimate lip_direct(const PointFn& F, const DomainModel& X, const Vec& xbar, const SamplingConfig& cfg,
                           Exec exec = default_exec());

struct LimsupConfig {
  std::vector<double> neighborhoods{1e-2, 1e-3};  // decreasing
  std::size_t centers = 32;
  SamplingConfig inner{{1e-2, 1e-3}, 500, 1, 3.0, 10.0};  // radii relative to the neighborhood radius
};

/// max of calm_direct over centers sampled in shrinking neighborhoods of x̄.
/// Flags "nonconvex_domain" when X is not convex (the identity then may fail).
ModulusEstimate lip_via_calm_limsup(const PointFn& F, const DomainModel& X, const Vec& xbar, const LimsupConfig& cfg,
                                    Exec exec = default_exec());

SubgradientInterval subgradient_interval(const ProfileFn& g, double eps, double rel_step = 1e-2);

struct OOneOverEpsRow {
  double eps = 0.0;
  double calm = 0.0;
  double eps_calm = 0.0;
};

struct OOneOverEpsReport {
  std::vector<OOneOverEpsRow> rows;  // eps decreasing
  double decrease = 0.0;             // eps*calm at the largest eps over that at the smallest
  bool monotone = false;
  bool pass = false;
};

/// eps * calm(eps) over a grid spanning several decades. Passes when it
/// decreases monotonically toward small eps and by at least `factor` overall.
OOneOverEpsReport o_one_over_eps_report(const ProfileFn& g, std::vector<double> eps_grid, double factor = 10.0);

struct AgreementRow {
  double eps = 0.0;
  double calm_est = 0.0;
  double lip_est = 0.0;
  double gap_rel = 0.0;
  std::vector<std::string> flags;
};

struct AgreementConfig {
  /// Radii of the lip shells as fractions of eps.
  std::vector<double> relative_radii{1e-2, 1e-3};
  std::size_t pairs_per_radius = 200;
  double pair_decades = 1.0;
  std::uint64_t seed = 1;
  double tolerance = 0.05;
};

struct AgreementReport {
  std::vector<AgreementRow> rows;  // in the order of the eps grid
  bool pass = false;
};

/// Per eps: calm of fbar_eps at x̄(eps) from the profile derivative, lip of
/// fbar_eps from pair sampling, and their relative gap. Passes when the gap is
/// within tolerance at the two smallest eps.
AgreementReport calm_lip_agreement_report(const RobustEvaluator& ev, const std::function<Vec(double)>& base_point,
                                          const std::vector<double>& eps_grid, const AgreementConfig& cfg,
                                          Exec exec = default_exec());
AgreementReport calm_lip_agreement_report(const RobustEvaluator& ev, const Vec& xbar,
                                          const std::vector<double>& eps_grid, const AgreementConfig& cfg,
                                          Exec exec = default_exec());

}  // namespace robreg
