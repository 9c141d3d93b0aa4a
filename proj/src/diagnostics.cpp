#include "sllg/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <stdexcept>

#include "sllg/snapshot.hpp"

namespace sllg {

namespace {

double min_norm(const MagnetizationField& m) {
  double lo = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < m.grid()->size(); ++i) {
    const auto v = m.at(i);
    lo = std::min(lo, std::sqrt(v[0] * v[0] + v[1] * v[1] + v[2] * v[2]));
  }
  return lo;
}

MagnetizationField normalized(const MagnetizationField& m) {
  MagnetizationField out(m.grid());
  for (std::size_t i = 0; i < m.grid()->size(); ++i) {
    auto v = m.at(i);
    const double n = std::sqrt(v[0] * v[0] + v[1] * v[1] + v[2] * v[2]);
    for (auto& c : v) c /= n;
    out.set(i, v);
  }
  return out;
}

// Least-squares slope and intercept of y against x.
std::pair<double, double> fit_line(const std::vector<double>& x, const std::vector<double>& y) {
  const double n = static_cast<double>(x.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
    sxx += x[i] * x[i];
    sxy += x[i] * y[i];
  }
  const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  return {slope, (sy - slope * sx) / n};
}

}  // namespace

void TrajectoryRecord::append(double t, const MagnetizationField& m, const ModelParams& p) {
  times.push_back(t);
  energy.push_back(sllg::energy(m, p));
  auto offset = m;
  for (auto& v : offset.component(2)) v -= 1.0;
  m_l2.push_back(sobolev_norm(offset, 0));
  m_h1.push_back(sobolev_norm(offset, 1));
  m_h2.push_back(sobolev_norm(offset, 2));
  // |grad m|_{H1}^2 = |grad m|^2 + |D^2 m|^2 = |m|_{H2}^2 - |m|_{L2}^2
  const double l2 = m_l2.back();
  grad_h1.push_back(std::sqrt(std::max(0.0, m_h2.back() * m_h2.back() - l2 * l2)));
  linf.push_back(norm(m, NormKind::Linf));
  sphere_dev.push_back(max_sphere_deviation(m));
  sphere_l2.push_back(sphere_deviation(m, false));
  double q = std::numeric_limits<double>::quiet_NaN();
  if (m.grid()->dim() == 2 && min_norm(m) > 0.1) {
    // Overflowing states normalize to garbage; leave the charge undefined there.
    const auto n = normalized(m);
    if (max_sphere_deviation(n) <= 1e-12) q = topological_charge(n, 1e-12);
  }
  charge.push_back(q);
  cross_bilap.push_back(cross_bilaplacian_sq(m));
}

void TrajectoryRecord::write_csv(const std::filesystem::path& path) const {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open " + path.string());
  out << "t,energy,m_l2,m_h1,m_h2,grad_m_h1,linf,sphere_dev,sphere_l2,charge,cross_bilap_sq\n";
  for (std::size_t i = 0; i < times.size(); ++i) {
    const double row[] = {times[i],   energy[i],     m_l2[i],      m_h1[i],
                          m_h2[i],    grad_h1[i],    linf[i],      sphere_dev[i],
                          sphere_l2[i], charge[i],   cross_bilap[i]};
    for (std::size_t c = 0; c < std::size(row); ++c) out << (c ? "," : "") << format_double(row[c]);
    out << '\n';
  }
}

double l2_distance(const MagnetizationField& a, const MagnetizationField& b) {
  if (a.grid()->same_shape(*b.grid())) {
    auto d = a;
    d -= b;
    return norm(d, NormKind::L2);
  }
  const bool a_finer = a.grid()->points() > b.grid()->points();
  const auto& fine = a_finer ? a : b;
  const auto& coarse = a_finer ? b : a;
  auto d = inject(coarse, fine.grid());
  d -= fine;
  return norm(d, NormKind::L2);
}

const char* to_string(TrajectoryRecord::Status s) {
  return s == TrajectoryRecord::Status::Ok ? "ok" : "aborted";
}

double topological_charge(const MagnetizationField& m, double tolerance) {
  if (m.grid()->dim() != 2) throw std::invalid_argument("topological_charge: requires d = 2");
  const double dev = max_sphere_deviation(m);
  if (dev > tolerance)
    throw std::domain_error("topological_charge: input deviates from the unit sphere by " +
                            format_double(dev));
  const auto grad = gradient(m);
  return integrate(dot(m, cross(grad[0], grad[1]))) / (4.0 * std::numbers::pi);
}

double sphere_deviation(const MagnetizationField& m, bool weighted) {
  ScalarField dev(m.grid());
  for (std::size_t i = 0; i < m.grid()->size(); ++i) {
    const auto v = m.at(i);
    const double e = 1.0 - (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]);
    dev[i] = e * e;
  }
  if (weighted) {
    const auto rho = weight_rho(m.grid());
    for (std::size_t i = 0; i < m.grid()->size(); ++i) dev[i] *= rho[i];
  }
  return integrate(dev);
}

double max_sphere_deviation(const MagnetizationField& m) {
  double dev = 0.0;
  for (std::size_t i = 0; i < m.grid()->size(); ++i) {
    const auto v = m.at(i);
    dev = std::max(dev, std::abs(std::sqrt(v[0] * v[0] + v[1] * v[1] + v[2] * v[2]) - 1.0));
  }
  return dev;
}

double cross_bilaplacian_sq(const MagnetizationField& m) {
  const auto c = cross(m, bilaplacian(m));
  return inner(c, c);
}

HolderEstimate holder_estimate(const TrajectoryRecord& record, int min_lag_steps) {
  const auto& snaps = record.snapshots;
  if (snaps.size() < 64)
    throw std::invalid_argument("holder_estimate: needs at least 64 snapshots, got " +
                                std::to_string(snaps.size()));
  if (min_lag_steps < 1) throw std::invalid_argument("holder_estimate: min_lag_steps must be >= 1");
  const double spacing = record.snapshot_times[1] - record.snapshot_times[0];
  HolderEstimate est;
  const std::size_t count = snaps.size();
  // Dyadic lags while at least 16 increment pairs remain.
  for (std::size_t lag = static_cast<std::size_t>(min_lag_steps); lag + 16 <= count; lag *= 2) {
    double sum = 0.0;
    std::size_t pairs = 0;
    for (std::size_t i = 0; i + lag < count; ++i) {
      const double d = l2_distance(snaps[i + lag], snaps[i]);
      sum += d * d;
      ++pairs;
    }
    est.lags.push_back(static_cast<double>(lag) * spacing);
    est.rms.push_back(std::sqrt(sum / static_cast<double>(pairs)));
  }
  if (est.lags.size() < 2) throw std::invalid_argument("holder_estimate: fewer than two usable lags");
  for (double r : est.rms)
    if (!(r > 0.0)) return est;  // frozen path: exponent stays +inf
  std::vector<double> lx, ly;
  for (std::size_t i = 0; i < est.lags.size(); ++i) {
    lx.push_back(std::log(est.lags[i]));
    ly.push_back(std::log(est.rms[i]));
  }
  const auto [slope, intercept] = fit_line(lx, ly);
  est.exponent = slope;
  est.constant = std::exp(intercept);
  est.degenerate = false;
  return est;
}

double sup_grad_h1(const TrajectoryRecord& record) {
  double s = 0.0;
  for (double v : record.grad_h1) s = std::max(s, v);
  return s;
}

double cross_bilap_time_l2(const TrajectoryRecord& record) {
  // Trapezoidal rule over the record times.
  double sum = 0.0;
  for (std::size_t i = 1; i < record.times.size(); ++i)
    sum += 0.5 * (record.times[i] - record.times[i - 1]) *
           (record.cross_bilap[i] + record.cross_bilap[i - 1]);
  return std::sqrt(sum);
}

bool EnsembleReport::all_finite() const {
  for (const auto& m : moments)
    if (!std::isfinite(m.grad_h1) || !std::isfinite(m.cross_bilap)) return false;
  return true;
}

EnsembleReport moment_report(const std::vector<TrajectoryRecord>& records,
                             const std::vector<std::uint64_t>& seeds, const std::vector<int>& p_list) {
  if (records.empty()) throw std::invalid_argument("moment_report: no trajectories");
  if (seeds.size() != records.size())
    throw std::invalid_argument("moment_report: one seed per trajectory is required");
  EnsembleReport rep;
  rep.seeds = seeds;
  for (const auto& r : records) {
    rep.sup_grad_h1.push_back(sup_grad_h1(r));
    rep.cross_bilap_l2t.push_back(cross_bilap_time_l2(r));
  }
  const double n = static_cast<double>(records.size());
  for (int p : p_list) {
    if (p < 1) throw std::invalid_argument("moment_report: p must be >= 1");
    EnsembleReport::Moment m;
    m.p = p;
    for (std::size_t i = 0; i < records.size(); ++i) {
      m.grad_h1 += std::pow(rep.sup_grad_h1[i], 2 * p);
      m.cross_bilap += std::pow(rep.cross_bilap_l2t[i], 2 * p);
    }
    m.grad_h1 /= n;
    m.cross_bilap /= n;
    rep.moments.push_back(m);
  }
  return rep;
}

std::vector<double> coupling_distance(const TrajectoryRecord& a, const TrajectoryRecord& b) {
  if (a.snapshot_times.size() != b.snapshot_times.size())
    throw std::invalid_argument("coupling_distance: snapshot counts differ");
  std::vector<double> out;
  for (std::size_t i = 0; i < a.snapshot_times.size(); ++i) {
    const double ta = a.snapshot_times[i], tb = b.snapshot_times[i];
    if (std::abs(ta - tb) > 1e-9 * std::max(1.0, std::abs(ta)))
      throw std::invalid_argument("coupling_distance: snapshot times differ at index " +
                                  std::to_string(i));
    out.push_back(l2_distance(a.snapshots[i], b.snapshots[i]));
  }
  return out;
}

double endpoint_distance(const TrajectoryRecord& a, const TrajectoryRecord& b) {
  if (a.times.empty() || b.times.empty()) throw std::invalid_argument("endpoint_distance: empty record");
  if (std::abs(a.times.back() - b.times.back()) > 1e-9 * std::max(1.0, std::abs(a.times.back())))
    throw std::invalid_argument("endpoint_distance: end times differ");
  return l2_distance(a.final(), b.final());
}

const std::vector<double>& constraint_series(const TrajectoryRecord& record) {
  return record.sphere_dev;
}

}  // namespace sllg
