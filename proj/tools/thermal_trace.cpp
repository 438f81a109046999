// Prints a CSV temperature trace of the thermal model, e.g. for charts:
//   snowframe-thermal --fan off --start 25 --duration 1800 --every 10
#include <cstdio>
#include <iostream>

#include "CLI11.hpp"
#include "snowframe/errors.hpp"
#include "snowframe/runtime/thermal.hpp"

int main(int argc, char** argv) {
  using namespace snowframe::runtime;
  CLI::App app{"Thermal model trace", "snowframe-thermal"};
  ThermalParams p;
  std::string fan = "on";
  double start = p.ambient, duration = 3600, every = 10, load = 1.0;
  bool start_set = false;
  app.add_option("--fan", fan)->check(CLI::IsMember({"on", "off"}));
  app.add_option("--ambient", p.ambient);
  app.add_option("--heat-rate", p.heat_rate);
  app.add_option("--cool-fan", p.cool_fan);
  app.add_option("--cool-nofan", p.cool_nofan);
  app.add_option("--start", start, "Initial temperature (default ambient)")->each([&](const std::string&) {
    start_set = true;
  });
  app.add_option("--load", load)->check(CLI::Range(0.0, 1.0));
  app.add_option("--duration", duration)->check(CLI::PositiveNumber);
  app.add_option("--every", every, "Sample period in seconds")->check(CLI::PositiveNumber);
  CLI11_PARSE(app, argc, argv);

  try {
    validate(p);
    ThermalModel m = ThermalModel::at_ambient(p, fan == "on");
    if (start_set) m.temp = start;
    std::printf("t_s,temp_c\n0,%.4f\n", m.temp);
    for (double t = every; t <= duration + 1e-9; t += every) {
      m = thermal_step(m, load, every);
      std::printf("%g,%.4f\n", t, m.temp);
    }
    std::fprintf(stderr, "steady state %.3f degC\n", steady_state(p, load, fan == "on"));
  } catch (const snowframe::Error& e) {
    std::cerr << "snowframe-thermal: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
