#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "geoses/error.hpp"
#include "geoses/synth.hpp"

// Generates a synthetic census-like dataset (microdata, coordinates, grid
// geometry, outcome, mapping) for demos and smoke tests.
int main(int argc, char** argv) {
    CLI::App app{"geoses-synth: synthetic census-like demo dataset"};
    std::string out_dir = "demo_data";
    geoses::SynthConfig config;
    app.add_option("--out", out_dir, "output directory")->capture_default_str();
    app.add_option("--grid-side", config.grid_side, "units per grid side")
        ->capture_default_str();
    app.add_option("--persons", config.persons_per_unit, "person records per unit")
        ->capture_default_str();
    app.add_option("--households", config.households_per_unit, "household records per unit")
        ->capture_default_str();
    app.add_option("--seed", config.seed, "generator seed")->capture_default_str();
    app.add_option("--cell-size", config.cell_size, "projected size of one grid cell")
        ->capture_default_str();
    app.add_option("--noise-dimensions", config.noise_dimensions,
                   "comma-separated dimensions generated without signal")
        ->capture_default_str();
    CLI11_PARSE(app, argc, argv);

    try {
        geoses::write_synthetic_dataset(out_dir, config);
    } catch (const geoses::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return static_cast<int>(e.code());
    }
    std::cout << "wrote synthetic dataset to " << out_dir << "/ ("
              << config.grid_side * config.grid_side << " units)\n"
              << "next: geoses build-index --mapping " << out_dir << "/mapping.json --persons "
              << out_dir << "/persons.csv --households " << out_dir << "/households.csv --coords "
              << out_dir << "/coordinates.csv --out out\n";
    return 0;
}
