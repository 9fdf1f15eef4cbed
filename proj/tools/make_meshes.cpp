// Writes the shipped quad/pentagon mesh family, one file per level.

#include <filesystem>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "wg/meshgen.hpp"

int main(int argc, char** argv) {
  CLI::App app{"generate the quad/pentagon polygonal mesh family"};
  std::string out_dir = "meshes";
  int levels = 5;
  app.add_option("--out-dir", out_dir, "output directory")->capture_default_str();
  app.add_option("--levels", levels, "number of levels to generate")->capture_default_str();
  CLI11_PARSE(app, argc, argv);

  std::filesystem::create_directories(out_dir);
  for (int level = 1; level <= levels; ++level) {
    const wg::Mesh mesh = wg::build_quad_pentagon_level(level);
    const std::string path = out_dir + "/poly_l" + std::to_string(level) + ".msh";
    std::ofstream out(path);
    if (!out) {
      std::cerr << "cannot open " << path << "\n";
      return 1;
    }
    wg::save_mesh(mesh, out);
    std::cout << path << ": " << mesh.cell_count() << " cells, h = " << mesh.h << "\n";
  }
  return 0;
}
