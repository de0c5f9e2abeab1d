#pragma once

#include <vector>

#include "ch/grid.hpp"
#include "ch/sampler.hpp"

namespace ch {

// Velocity snapshots on a common grid, linear interpolation in time,
// cubic in space; the spatial gradient field is cached per snapshot.
class VelocityHistory {
 public:
  VelocityHistory(std::vector<double> times, std::vector<ScalarField> fields);

  double t_begin() const { return times_.front(); }
  double t_end() const { return times_.back(); }
  const Grid& grid() const { return v_.front().grid; }

  double velocity(double t, double x) const;
  double velocity_gradient(double t, double x) const;
  // nodal trace at an endpoint (side < 0: x=0, else x=1)
  double boundary_velocity(double t, int side) const;

  double max_abs_velocity() const { return vmax_; }
  double max_abs_gradient() const { return gmax_; }

 private:
  std::vector<double> times_;
  std::vector<ScalarField> v_, dvdx_;
  double vmax_ = 0.0, gmax_ = 0.0;

  void locate(double t, int& k, double& w) const;
};

enum class OriginKind { interior, left, right };

// Backward path record for one query point.
struct CharacteristicTrace {
  OriginKind origin = OriginKind::interior;
  double entry_time = 0.0;   // where the backward path stops
  double entry_point = 0.0;  // foot position (boundary coordinate for side origins)
  double stretch = 0.0;      // integral of dv/dx along the path
  double touch_speed = 0.0;  // boundary speed at contact (side origins only)
  bool corner = false;       // path ran into a span-start corner
};

// Integrate the backward characteristic through v from (t, x) until the
// span start or the first boundary contact. RK4 with substep bounded by
// min(snapshot spacing, h / (2 max|v|)); contact times located by bisection.
CharacteristicTrace integrate_characteristic(const VelocityHistory& v, double t, double x);

// A trace is singular when it contacts an endpoint at speed below eps_v or
// runs into a corner of the time-space box.
bool classify_singular(const CharacteristicTrace& trace, double eps_v);

struct MomentumValue {
  double value = 0.0;
  double origin_value = 0.0;
  CharacteristicTrace trace;
  bool singular = false;
};

// Momentum at (t, x): origin datum carried along the path with the
// accumulated stretching factor. Side origins sample the entering traces.
MomentumValue evaluate_momentum(const VelocityHistory& v, double t, double x,
                                const ScalarField& y_start, const TimeSampler& y_left_in,
                                const TimeSampler& y_right_in, double eps_v);

struct TransportDiagnostics {
  std::vector<int> singular_nodes;
  double max_origin = 0.0;
  double certified_bound = 0.0;
  double max_value = 0.0;
};

// Nodal transport of y_start from the span start to time t_to. Singular
// nodes take the value of the nearest regular neighbor and are reported.
// Enforces the growth bound max|y| <= max|origin data| * exp(2 dt max|dv/dx|).
ScalarField transport_field(const VelocityHistory& v, double t_to, const ScalarField& y_start,
                            const TimeSampler& y_left_in, const TimeSampler& y_right_in,
                            double eps_v, TransportDiagnostics* diag = nullptr);

}  // namespace ch
