#include "sllg/commands.hpp"

#include <atomic>
#include <cstdio>
#include <exception>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <thread>

#include "json.hpp"
#include "sllg/galerkin.hpp"
#include "sllg/snapshot.hpp"

namespace sllg {

namespace {

using nlohmann::json;

void write_json(const std::filesystem::path& path, const json& j) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open " + path.string());
  out << j.dump(2) << '\n';
}

std::ofstream open_csv(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open " + path.string());
  return out;
}

std::string indexed(const std::string& stem, int i, const std::string& ext) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "_%03d", i);
  return stem + buf + ext;
}

// Everything a command needs from the config, built once.
struct Setup {
  GridPtr grid;
  ModelParams params;
  std::optional<NoiseModel> noise;
  MagnetizationField m0;

  explicit Setup(const RunConfig& cfg)
      : grid(build_grid(cfg)),
        params(build_model(cfg, grid)),
        noise(build_noise(cfg, grid)),
        m0(build_initial(cfg, grid)) {}

  const NoiseModel* noise_ptr() const { return noise ? &*noise : nullptr; }
};

json status_json(const TrajectoryRecord& r, std::uint64_t seed) {
  return json{{"status", to_string(r.status)},
              {"partial", r.status != TrajectoryRecord::Status::Ok},
              {"message", r.message},
              {"seed", seed},
              {"t_reached", r.times.empty() ? 0.0 : r.times.back()},
              {"records", r.size()}};
}

// Shared Brownian path sampled at the finest of `levels` halvings of base.dt.
std::optional<NoisePath> fine_path(const NoiseModel* noise, const SchemeConfig& base, std::uint64_t seed,
                                   int levels) {
  if (noise == nullptr || noise->size() == 0) return std::nullopt;
  const double dt = base.dt / static_cast<double>(1 << (levels - 1));
  const int steps = base.steps() << (levels - 1);
  return sample_path(*noise, steps, dt, seed);
}

TrajectoryRecord run_level(const MagnetizationField& m0, const SllgSystem& sys, SchemeConfig cfg,
                           const std::optional<NoisePath>& fine, int level, int finest, Scheme scheme) {
  cfg.scheme = scheme;
  cfg.dt /= static_cast<double>(1 << level);
  cfg.record_every = std::max(1, cfg.steps());
  cfg.snapshot_every = 0;
  if (!fine) return run_trajectory(m0, sys, cfg, nullptr);
  const auto path = fine->coarsen(1 << (finest - level));
  return run_trajectory(m0, sys, cfg, &path);
}

}  // namespace

int cmd_run(const RunConfig& cfg, std::ostream& log) {
  ensure_writable(cfg.out);
  const Setup s(cfg);
  const auto rec = run_trajectory(s.m0, s.params, s.noise_ptr(), cfg.scheme, cfg.seed);
  rec.write_csv(cfg.out / "record.csv");
  write_snapshot(cfg.out / "final.snap", rec.final(), rec.times.back());
  if (!rec.snapshots.empty()) {
    std::filesystem::create_directories(cfg.out / "snapshots");
    for (std::size_t i = 0; i < rec.snapshots.size(); ++i)
      write_snapshot(cfg.out / "snapshots" / indexed("snap", static_cast<int>(i), ".snap"), rec.snapshots[i],
                     rec.snapshot_times[i]);
  }
  write_json(cfg.out / "status.json", status_json(rec, cfg.seed));
  if (rec.status != TrajectoryRecord::Status::Ok) {
    log << "run aborted: " << rec.message << '\n';
    return kExitAborted;
  }
  log << "run finished: t = " << format_double(rec.times.back()) << ", energy "
      << format_double(rec.energy.front()) << " -> " << format_double(rec.energy.back()) << '\n';
  return kExitOk;
}

int cmd_ensemble(const RunConfig& cfg, std::ostream& log) {
  ensure_writable(cfg.out);
  const Setup s(cfg);
  const auto count = static_cast<std::size_t>(cfg.trajectories);
  std::vector<std::optional<TrajectoryRecord>> records(count);
  std::vector<std::exception_ptr> errors(count);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < count; i = next++) {
      try {
        records[i] = run_trajectory(s.m0, s.params, s.noise_ptr(), cfg.scheme, cfg.seed + i);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  std::vector<std::thread> pool;
  const auto workers = std::min<std::size_t>(static_cast<std::size_t>(cfg.threads), count);
  for (std::size_t w = 1; w < workers; ++w) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();

  // Deterministic fold in trajectory order.
  std::vector<TrajectoryRecord> done;
  std::vector<std::uint64_t> seeds;
  json runs = json::array();
  bool aborted = false;
  for (std::size_t i = 0; i < count; ++i) {
    if (errors[i]) std::rethrow_exception(errors[i]);
    const auto& r = *records[i];
    r.write_csv(cfg.out / indexed("trajectory", static_cast<int>(i), ".csv"));
    runs.push_back(status_json(r, cfg.seed + i));
    aborted |= r.status != TrajectoryRecord::Status::Ok;
    seeds.push_back(cfg.seed + i);
    done.push_back(r);
  }
  const auto rep = moment_report(done, seeds, cfg.moments);
  json moments = json::array();
  for (const auto& m : rep.moments)
    moments.push_back({{"p", m.p}, {"sup_grad_h1", m.grad_h1}, {"cross_bilap_l2t", m.cross_bilap}});
  const json summary{{"trajectories", count},
                     {"seeds", rep.seeds},
                     {"sup_grad_h1", rep.sup_grad_h1},
                     {"cross_bilap_l2t", rep.cross_bilap_l2t},
                     {"moments", moments},
                     {"all_finite", rep.all_finite()},
                     {"runs", runs}};
  write_json(cfg.out / "summary.json", summary);
  log << "ensemble of " << count << " trajectories written to " << cfg.out.string() << '\n';
  for (const auto& m : rep.moments)
    log << "  p = " << m.p << ": E sup|grad m|_H1^2p = " << format_double(m.grad_h1)
        << ", E |M x D2M|_L2(L2)^2p = " << format_double(m.cross_bilap) << '\n';
  if (aborted) {
    log << "at least one trajectory aborted\n";
    return kExitAborted;
  }
  return rep.all_finite() ? kExitOk : kExitFailed;
}

int cmd_check(const IdentitySuiteConfig& suite, const std::filesystem::path& out, std::ostream& log) {
  const auto rep = run_identity_suite(suite);
  json rows = json::array();
  log << "identity suite: " << suite.trials << " random triples on " << suite.points << "^2, tolerance "
      << rep.tolerance << '\n';
  for (const auto& o : rep.outcomes) {
    log << "  " << std::left << std::setw(26) << o.name << " worst relative residual "
        << std::scientific << std::setprecision(3) << o.worst << std::defaultfloat << "  "
        << (o.passed ? "pass" : "FAIL") << '\n';
    rows.push_back({{"identity", o.name}, {"worst_relative", o.worst}, {"trials", o.trials}, {"passed", o.passed}});
  }
  if (!out.empty()) {
    ensure_writable(out);
    write_json(out / "check.json", json{{"tolerance", rep.tolerance}, {"passed", rep.passed()}, {"identities", rows}});
  }
  log << (rep.passed() ? "all identities pass" : "identity suite FAILED") << '\n';
  return rep.passed() ? kExitOk : kExitFailed;
}

int cmd_dispersion(const RunConfig& cfg, std::ostream& log) {
  ensure_writable(cfg.out);
  const auto grid = build_grid(cfg);
  const auto p = build_model(cfg, grid);
  auto out = open_csv(cfg.out / "dispersion.csv");
  out << "mode_x,mode_y,mode_z,k_squared,re_rate,im_rate\n";
  int growing = 0;
  double worst = -std::numeric_limits<double>::infinity();
  for (std::size_t s = 0; s < grid->spectral_size(); ++s) {
    const auto rate = dispersion_rate(grid->k_squared(s), p);
    for (int a = 0; a < 3; ++a) out << (a < grid->dim() ? grid->mode(s, a) : 0) << ',';
    out << format_double(grid->k_squared(s)) << ',' << format_double(rate.real()) << ','
        << format_double(rate.imag()) << '\n';
    growing += rate.real() > 0.0;
    worst = std::max(worst, rate.real());
  }
  log << "dispersion: " << grid->spectral_size() << " modes, " << growing
      << " growing, largest real rate " << format_double(worst) << '\n';
  return kExitOk;
}

Study parse_study(const std::string& name) {
  if (name == "galerkin") return Study::Galerkin;
  if (name == "dt") return Study::Dt;
  if (name == "coupling") return Study::Coupling;
  throw std::invalid_argument("--study: expected galerkin, dt or coupling, got '" + name + "'");
}

std::vector<CouplingRow> coupling_study(const MagnetizationField& m0, const ModelParams& p,
                                        const NoiseModel* noise, const SchemeConfig& base,
                                        std::uint64_t seed, int levels) {
  const auto fine = fine_path(noise, base, seed, levels);
  const SllgSystem sys(p, noise);
  std::vector<CouplingRow> rows;
  for (int l = 0; l < levels; ++l) {
    const int finest = levels - 1;
    const auto heun = run_level(m0, sys, base, fine, l, finest, Scheme::HeunStratonovich);
    const auto em = run_level(m0, sys, base, fine, l, finest, Scheme::EulerMaruyamaIto);
    const auto imex = run_level(m0, sys, base, fine, l, finest, Scheme::SemiImplicitImex);
    rows.push_back({heun.dt, endpoint_distance(heun, em), endpoint_distance(heun, imex),
                    endpoint_distance(em, imex)});
  }
  return rows;
}

std::vector<DtRow> dt_study(const MagnetizationField& m0, const ModelParams& p, const NoiseModel* noise,
                            const SchemeConfig& base, std::uint64_t seed, int levels) {
  const auto fine = fine_path(noise, base, seed, levels + 1);
  const SllgSystem sys(p, noise);
  const auto ref = run_level(m0, sys, base, fine, levels, levels, base.scheme);
  std::vector<DtRow> rows;
  for (int l = 0; l < levels; ++l) {
    const auto r = run_level(m0, sys, base, fine, l, levels, base.scheme);
    rows.push_back({r.dt, endpoint_distance(r, ref), r.sphere_dev.back(), r.energy.back()});
  }
  return rows;
}

int cmd_converge(const RunConfig& cfg, Study study, std::ostream& log) {
  ensure_writable(cfg.out);
  const Setup s(cfg);
  switch (study) {
    case Study::Galerkin: {
      for (int n : cfg.converge.n_list)
        if (n > cfg.grid.points / 2)
          throw std::invalid_argument("converge.n_list: entries must be at most grid.points / 2 = " +
                                      std::to_string(cfg.grid.points / 2));
      GalerkinConfig g;
      g.R = cfg.converge.R;
      g.scheme = cfg.scheme;
      g.scheme.renormalize_every = 0;
      const auto rows = convergence_study(s.m0, s.params, s.noise_ptr(), cfg.seed, cfg.converge.n_list, g);
      write_convergence_csv(cfg.out / "converge_galerkin.csv", rows);
      for (const auto& r : rows)
        log << "n = " << r.n << ": endpoint error " << format_double(r.endpoint_error) << ", sup H2 "
            << format_double(r.max_h2) << '\n';
      break;
    }
    case Study::Dt: {
      const auto rows = dt_study(s.m0, s.params, s.noise_ptr(), cfg.scheme, cfg.seed);
      auto out = open_csv(cfg.out / "converge_dt.csv");
      out << "dt,endpoint_error,sphere_dev,energy\n";
      for (const auto& r : rows) {
        out << format_double(r.dt) << ',' << format_double(r.endpoint_error) << ',' << format_double(r.sphere_dev)
            << ',' << format_double(r.energy) << '\n';
        log << "dt = " << format_double(r.dt) << ": endpoint error " << format_double(r.endpoint_error) << '\n';
      }
      break;
    }
    case Study::Coupling: {
      const auto rows = coupling_study(s.m0, s.params, s.noise_ptr(), cfg.scheme, cfg.seed);
      auto out = open_csv(cfg.out / "converge_coupling.csv");
      out << "dt,heun_em,heun_imex,em_imex\n";
      for (const auto& r : rows) {
        out << format_double(r.dt) << ',' << format_double(r.heun_em) << ',' << format_double(r.heun_imex) << ','
            << format_double(r.em_imex) << '\n';
        log << "dt = " << format_double(r.dt) << ": heun-em " << format_double(r.heun_em) << ", heun-imex "
            << format_double(r.heun_imex) << '\n';
      }
      break;
    }
  }
  return kExitOk;
}

}  // namespace sllg
