#pragma once

#include <cstdint>
#include <string>

#include "geoses/area_table.hpp"
#include "geoses/catalog.hpp"

namespace geoses {

// Synthetic census-like dataset on a square grid of units, driven by one
// latent socioeconomic factor per unit. Dimensions listed in
// noise_dimensions carry no signal (their variables are sampling noise), so
// they normally drop out of the index; by default that is mobility.
struct SynthConfig {
    int grid_side = 5;
    int persons_per_unit = 150;
    int households_per_unit = 90;
    std::uint64_t seed = 20100801;
    double cell_size = 10.0;  // projected units per grid cell
    std::string noise_dimensions = "mobility";  // comma separated
};

struct SynthDataset {
    std::string persons_csv;
    std::string households_csv;
    std::string coordinates_csv;
    std::string geometry_geojson;
    std::string outcome_csv;   // precomputed per-unit relative risk
    std::string mapping_json;  // recipes for the bundled catalog over this schema
};

SynthDataset make_synthetic_dataset(const SynthConfig& config);

// Writes persons.csv, households.csv, coordinates.csv, geometry.geojson,
// outcome.csv, mapping.json into the directory.
void write_synthetic_dataset(const std::string& directory, const SynthConfig& config);

// Directly synthesized AreaTable (no microdata): one latent factor, variable
// ranges respecting each kind (percentages in [0,100], ICE in [-1,1]).
AreaTable synth_area_table(std::size_t n_units, const VariableCatalog& catalog,
                           std::uint64_t seed,
                           const std::string& noise_dimensions = "mobility");

}  // namespace geoses
