#include "snowframe/runtime/thermal.hpp"

#include <cmath>

#include "snowframe/errors.hpp"

namespace snowframe::runtime {

void validate(const ThermalParams& p) {
  if (!std::isfinite(p.ambient)) throw ValidationError("thermal ambient must be finite");
  if (!(p.heat_rate >= 0.0)) throw ValidationError("thermal heat_rate must be >= 0");
  if (!(p.cool_fan > 0.0 && p.cool_fan * kThermalMaxStep <= 1.0)) {
    throw ValidationError("thermal cool_fan must be in (0, 1] per second");
  }
  if (!(p.cool_nofan > 0.0 && p.cool_nofan * kThermalMaxStep <= 1.0)) {
    throw ValidationError("thermal cool_nofan must be in (0, 1] per second");
  }
}

ThermalModel thermal_step(ThermalModel model, double load, double dt) {
  if (!(dt > 0.0)) throw ValidationError("thermal dt must be > 0");
  if (!(load >= 0.0 && load <= 1.0)) throw ValidationError("thermal load must be in [0, 1]");
  const ThermalParams& p = model.params;
  const double c = model.fan ? p.cool_fan : p.cool_nofan;
  double remaining = dt;
  while (remaining > 0.0) {
    const double h = remaining > kThermalMaxStep ? kThermalMaxStep : remaining;
    model.temp += h * (p.heat_rate * load - c * (model.temp - p.ambient));
    remaining -= h;
  }
  return model;
}

double steady_state(const ThermalParams& p, double load, bool fan) {
  return p.ambient + p.heat_rate * load / (fan ? p.cool_fan : p.cool_nofan);
}

double time_to_reach(ThermalModel model, double load, double threshold, double dt, double limit) {
  double t = 0.0;
  while (t < limit) {
    if (model.temp >= threshold) return t;
    model = thermal_step(model, load, dt);
    t += dt;
  }
  return model.temp >= threshold ? t : -1.0;
}

}  // namespace snowframe::runtime
