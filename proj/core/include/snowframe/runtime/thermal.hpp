#pragma once

namespace snowframe::runtime {

/// First-order thermal model constants. Defaults put the full-load steady
/// state at ambient + 5 with the fan and ambient + 25 without.
struct ThermalParams {
  double ambient = 20.0;  // degC
  double heat_rate = 0.05;  // degC/s at full load
  double cool_fan = 0.01;   // 1/s
  double cool_nofan = 0.002;  // 1/s
};

void validate(const ThermalParams& params);

struct ThermalModel {
  ThermalParams params;
  double temp = 20.0;
  bool fan = true;

  static ThermalModel at_ambient(ThermalParams params, bool fan) {
    return {params, params.ambient, fan};
  }
};

/// Longest explicit-Euler sub-step; larger dt is split into chunks.
inline constexpr double kThermalMaxStep = 1.0;

/// temp += dt * (q * load - c * (temp - ambient)), sub-stepped at 1 s.
ThermalModel thermal_step(ThermalModel model, double load, double dt);

double steady_state(const ThermalParams& params, double load, bool fan);

/// Simulated seconds until temp first reaches `threshold` under constant load
/// (stepping at `dt`), or a negative value if it does not within `limit`.
double time_to_reach(ThermalModel model, double load, double threshold, double dt, double limit);

}  // namespace snowframe::runtime
