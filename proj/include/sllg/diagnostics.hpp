#pragma once

#include <cstdint>
#include <filesystem>
#include <limits>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "sllg/energy.hpp"
#include "sllg/operators.hpp"

namespace sllg {

/// Diagnostics of one trajectory at the record times, plus optional field
/// snapshots. All series have the same length as `times`.
struct TrajectoryRecord {
  enum class Status { Ok, Aborted };

  double dt = 0.0;
  std::vector<double> times;
  std::vector<double> energy;
  std::vector<double> m_l2;       // |M - e3|_{L2}
  std::vector<double> m_h1;
  std::vector<double> m_h2;
  std::vector<double> grad_h1;    // |grad m|_{H1}
  std::vector<double> linf;       // max |M(x)|
  std::vector<double> sphere_dev; // max ||M(x)| - 1|
  std::vector<double> sphere_l2;  // int (1 - |M|^2)^2 dx
  std::vector<double> charge;     // NaN in 3D or when |M| collapses
  std::vector<double> cross_bilap;  // |M x D2M|_{L2}^2

  std::vector<double> snapshot_times;
  std::vector<MagnetizationField> snapshots;

  Status status = Status::Ok;
  std::string message;
  /// Last finite state (the endpoint for completed runs).
  std::optional<MagnetizationField> final_state;

  std::size_t size() const { return times.size(); }
  const MagnetizationField& final() const { return final_state.value(); }

  /// Appends one row computed from `m` at time `t`.
  void append(double t, const MagnetizationField& m, const ModelParams& p);

  /// CSV with one row per record time, all values at 17 significant digits.
  void write_csv(const std::filesystem::path& path) const;
};

const char* to_string(TrajectoryRecord::Status s);

/// Q = 1/(4 pi) int M . (d1 M x d2 M) dx for d = 2. Throws if any point is
/// further than `tolerance` from the unit sphere, or in 3D.
double topological_charge(const MagnetizationField& m, double tolerance = 1e-6);

/// int (1 - |M|^2)^2 dx, with the weight rho when `weighted` is set.
double sphere_deviation(const MagnetizationField& m, bool weighted = false);

/// max_x ||M(x)| - 1|
double max_sphere_deviation(const MagnetizationField& m);

/// |M x D2M|_{L2}^2
double cross_bilaplacian_sq(const MagnetizationField& m);

struct HolderEstimate {
  /// Slope of log RMS increment against log lag; +inf for a frozen path.
  double exponent = std::numeric_limits<double>::infinity();
  /// exp(intercept): increments ~ constant * lag^exponent.
  double constant = 0.0;
  std::vector<double> lags;
  std::vector<double> rms;
  bool degenerate = true;
};

/// Fits the L2 increment exponent from the snapshots of `record` over
/// dyadic lags of at least `min_lag_steps` record spacings.
/// Requires at least 64 snapshots.
HolderEstimate holder_estimate(const TrajectoryRecord& record, int min_lag_steps = 4);

/// sup_t |grad m|_{H1} and (int_0^T |M x D2M|^2 dt)^{1/2} of one trajectory.
double sup_grad_h1(const TrajectoryRecord& record);
double cross_bilap_time_l2(const TrajectoryRecord& record);

struct EnsembleReport {
  struct Moment {
    int p = 1;
    double grad_h1 = 0.0;      // E[(sup_t |grad m|_{H1})^{2p}]
    double cross_bilap = 0.0;  // E[|M x D2M|_{L2(0,T;L2)}^{2p}]
  };
  std::vector<std::uint64_t> seeds;
  std::vector<double> sup_grad_h1;
  std::vector<double> cross_bilap_l2t;
  std::vector<Moment> moments;

  bool all_finite() const;
};

/// Empirical 2p-th moments over the trajectories, in index order.
EnsembleReport moment_report(const std::vector<TrajectoryRecord>& records,
                             const std::vector<std::uint64_t>& seeds, const std::vector<int>& p_list);

/// |M_a(t) - M_b(t)|_{L2} at the common snapshot times. Snapshots on a
/// coarser grid are spectrally injected onto the finer one first.
std::vector<double> coupling_distance(const TrajectoryRecord& a, const TrajectoryRecord& b);
/// |a - b|_{L2}; the coarser field is injected onto the finer grid first.
double l2_distance(const MagnetizationField& a, const MagnetizationField& b);
/// Endpoint distance of two runs.
double endpoint_distance(const TrajectoryRecord& a, const TrajectoryRecord& b);

/// Pointwise constraint violation series max ||M| - 1| of a record.
const std::vector<double>& constraint_series(const TrajectoryRecord& record);

}  // namespace sllg
