// Runs the cascade detector on PNG files and prints one JSON line per file:
//   {"file": "...", "faces": [[x, y, w, h, neighbors], ...]}
#include <iostream>

#include "CLI11.hpp"
#include "json.hpp"
#include "snowframe/detect/cascade.hpp"
#include "snowframe/detect/detector.hpp"
#include "snowframe/errors.hpp"
#include "snowframe/png_io.hpp"
#include "snowframe/version.hpp"

int main(int argc, char** argv) {
  using namespace snowframe;
  CLI::App app{"Detect faces in PNG images", "snowframe-detect"};
  std::string cascade = find_data_file("cascades/haarcascade_frontalface_default.xml").string();
  std::vector<std::string> files;
  detect::DetectParams p;
  int min_size = p.min_size.width;
  app.add_option("--cascade", cascade);
  app.add_option("--scale-factor", p.scale_factor);
  app.add_option("--min-neighbors", p.min_neighbors);
  app.add_option("--min-size", min_size);
  app.add_option("--max-faces", p.max_faces);
  app.add_option("files", files)->required();
  CLI11_PARSE(app, argc, argv);
  p.min_size = {min_size, min_size};

  try {
    const auto model = detect::load_cascade(cascade);
    for (const auto& f : files) {
      nlohmann::json faces = nlohmann::json::array();
      for (const auto& d : detect::detect_multiscale(model, to_gray(read_png(f)), p)) {
        faces.push_back({d.rect.x, d.rect.y, d.rect.w, d.rect.h, d.neighbors});
      }
      std::cout << nlohmann::json{{"file", f}, {"faces", faces}}.dump() << "\n";
    }
  } catch (const Error& e) {
    std::cerr << "snowframe-detect: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
