#include "sllg/galerkin.hpp"

#include <algorithm>
#include <fstream>
#include <optional>
#include <stdexcept>
#include <string>

#include "sllg/snapshot.hpp"

namespace sllg {

void GalerkinConfig::validate(const SpectralGrid& grid) const {
  if (n < 0 || n > grid.points() / 2)
    throw std::invalid_argument("galerkin.n: must lie in [0, " + std::to_string(grid.points() / 2) + "]");
  CutoffSpec{R}.validate();
  scheme.validate();
  if (n < grid.points() / 2 && scheme.renormalize_every != 0)
    throw std::invalid_argument("galerkin: renormalize_every must be 0 for a truncated system");
}

SllgSystem GalerkinConfig::system(const ModelParams& p, const NoiseModel* noise) const {
  SllgSystem sys(p, noise);
  sys.set_projection(n).set_cutoff(CutoffSpec{R, CutoffSpec::Argument::SupNorm});
  return sys;
}

GalerkinRhs galerkin_rhs(const MagnetizationField& u, const ModelParams& p, const NoiseModel* noise,
                         const GalerkinConfig& cfg) {
  cfg.validate(*u.grid());
  const double above = energy_above(u, cfg.n);
  if (above > 1e-12)
    throw std::invalid_argument("galerkin_rhs: input carries relative energy " + format_double(above) +
                                " above mode " + std::to_string(cfg.n));
  const auto sys = cfg.system(p, noise);
  GalerkinRhs out{sys.drift(u), {}};
  if (sys.has_noise()) {
    out.drift += sys.ito_correction(u);
    for (int k = 0; k < noise->size(); ++k) out.diffusions.push_back(sys.project(diffusion_apply(u, k, *noise)));
  }
  return out;
}

TrajectoryRecord run_galerkin(const MagnetizationField& m0, const ModelParams& p, const NoiseModel* noise,
                              const NoisePath* path, const GalerkinConfig& cfg) {
  cfg.validate(*m0.grid());
  const auto sys = cfg.system(p, noise);
  return detail::integrate(sys.project(m0), sys, cfg.scheme, path, false);
}

std::vector<ConvergenceRow> convergence_study(const MagnetizationField& m0, const ModelParams& p,
                                              const NoiseModel* noise, std::uint64_t seed,
                                              const std::vector<int>& n_list, const GalerkinConfig& cfg) {
  std::optional<NoisePath> path;
  if (noise && noise->size() > 0) path = sample_path(*noise, cfg.scheme.steps(), cfg.scheme.dt, seed);
  const NoisePath* pp = path ? &*path : nullptr;
  auto ref_cfg = cfg;
  ref_cfg.n = m0.grid()->points() / 2;
  const auto ref = run_galerkin(m0, p, noise, pp, ref_cfg);
  std::vector<ConvergenceRow> rows;
  for (int n : n_list) {
    auto c = cfg;
    c.n = n;
    const auto rec = run_galerkin(m0, p, noise, pp, c);
    ConvergenceRow row;
    row.n = n;
    row.endpoint_error = endpoint_distance(rec, ref);
    row.max_sphere_dev = *std::max_element(rec.sphere_l2.begin(), rec.sphere_l2.end());
    row.max_h2 = *std::max_element(rec.m_h2.begin(), rec.m_h2.end());
    rows.push_back(row);
  }
  return rows;
}

void write_convergence_csv(const std::filesystem::path& path, const std::vector<ConvergenceRow>& rows) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open " + path.string());
  out << "n,endpoint_l2_error,max_sphere_deviation,max_h2\n";
  for (const auto& r : rows)
    out << r.n << ',' << format_double(r.endpoint_error) << ',' << format_double(r.max_sphere_dev) << ','
        << format_double(r.max_h2) << '\n';
}

}  // namespace sllg
