#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "sllg/config.hpp"
#include "sllg/identities.hpp"

namespace sllg {

/// Process exit codes of the subcommands.
enum ExitCode : int { kExitOk = 0, kExitFailed = 1, kExitUsage = 2, kExitAborted = 3 };

/// One trajectory from base seed `cfg.seed`: record.csv, final.snap,
/// status.json and, with scheme.snapshot_every set, snapshots/. Returns
/// kExitAborted when the state became non-finite.
int cmd_run(const RunConfig& cfg, std::ostream& log);

/// `cfg.trajectories` runs with seeds seed + index on `cfg.threads` workers:
/// trajectory_NNN.csv per run and summary.json with the moment report.
int cmd_ensemble(const RunConfig& cfg, std::ostream& log);

/// Identity suite with a per-identity residual table; check.json in `out`
/// when `out` is not empty.
int cmd_check(const IdentitySuiteConfig& suite, const std::filesystem::path& out, std::ostream& log);

/// dispersion.csv: linear rate of every Fourier mode of the grid.
int cmd_dispersion(const RunConfig& cfg, std::ostream& log);

enum class Study { Galerkin, Dt, Coupling };
Study parse_study(const std::string& name);

/// converge_<study>.csv. The dt and coupling studies integrate every
/// resolution on one Brownian path sampled at the finest step.
int cmd_converge(const RunConfig& cfg, Study study, std::ostream& log);

/// Rows of the coupling study: endpoint L2 distances between schemes.
struct CouplingRow {
  double dt = 0.0;
  double heun_em = 0.0;
  double heun_imex = 0.0;
  double em_imex = 0.0;
};
/// Runs all three schemes at dt, dt/2, ... (`levels` values) on one path.
std::vector<CouplingRow> coupling_study(const MagnetizationField& m0, const ModelParams& p,
                                        const NoiseModel* noise, const SchemeConfig& base,
                                        std::uint64_t seed, int levels = 3);

struct DtRow {
  double dt = 0.0;
  double endpoint_error = 0.0;  // against the run at dt / 2^levels
  double sphere_dev = 0.0;      // max ||M| - 1| at the endpoint
  double energy = 0.0;
};
std::vector<DtRow> dt_study(const MagnetizationField& m0, const ModelParams& p, const NoiseModel* noise,
                            const SchemeConfig& base, std::uint64_t seed, int levels = 3);

}  // namespace sllg
