#include "geoses/synth.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

#include <json.hpp>

#include "geoses/error.hpp"
#include "geoses/rng.hpp"
#include "geoses/util.hpp"

namespace geoses {

using nlohmann::json;

namespace {

double logistic(double t) { return 1.0 / (1.0 + std::exp(-t)); }

std::set<std::string> split_names(const std::string& csv) {
    std::set<std::string> out;
    std::stringstream ss(csv);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (!item.empty()) out.insert(item);
    }
    return out;
}

std::string unit_id(std::size_t idx, std::size_t total) {
    std::size_t width = total > 999 ? 4 : (total > 99 ? 3 : 2);
    std::string digits = std::to_string(idx + 1);
    if (digits.size() < width) digits.insert(0, width - digits.size(), '0');
    return "U" + digits;
}

std::vector<double> latent_factors(std::size_t n, Rng& rng) {
    std::vector<double> g(n);
    for (auto& v : g) v = std::clamp(rng.normal(), -2.5, 2.5);
    return g;
}

std::string csv_num(double v) { return format_double(v, 10); }

// -- person / household samplers ------------------------------------------

struct PersonRow {
    std::string educ_degree, educ_level, other_mun, daily_return, commute;
    double income, income_pc;
    std::string race, bolsa, outros;
    int age;
    double weight;
};

PersonRow sample_person(double g, Rng& rng) {
    PersonRow p;
    double s = g + rng.normal();
    p.educ_level = s < -0.8 ? "1" : (s < 0.2 ? "2" : (s < 1.0 ? "3" : "4"));
    if (p.educ_level == "4") {
        double u = rng.uniform();
        p.educ_degree = u < 0.06 ? "doct" : (u < 0.2 ? "mast" : "grad");
    } else {
        p.educ_degree = "none";
    }
    p.other_mun = rng.bernoulli(0.3) ? "1" : "0";
    p.daily_return = rng.bernoulli(0.8) ? "1" : "0";
    double cu = rng.uniform();  // commute bands carry no signal
    p.commute = cu < 0.10 ? "1" : (cu < 0.60 ? "2" : (cu < 0.85 ? "3" : (cu < 0.95 ? "4" : "5")));
    p.income = std::exp(rng.normal(6.8 + 0.55 * g, 0.7));
    p.income_pc = p.income * rng.uniform(0.25, 0.6);
    double ru = rng.uniform();
    double p_white = std::clamp(0.45 + 0.12 * g, 0.1, 0.85);
    if (ru < p_white)
        p.race = "branca";
    else if (ru < p_white + 0.32)
        p.race = "parda";
    else if (ru < p_white + 0.44)
        p.race = "preta";
    else if (ru < p_white + 0.47)
        p.race = "indigena";
    else
        p.race = "amarela";
    p.bolsa = rng.bernoulli(std::clamp(0.18 - 0.10 * g, 0.01, 0.9)) ? "1" : "0";
    p.outros = rng.bernoulli(std::clamp(0.06 - 0.02 * g, 0.01, 0.5)) ? "1" : "0";
    p.age = static_cast<int>(rng.below(91));
    p.weight = rng.uniform(5.0, 25.0);
    return p;
}

struct HouseholdRow {
    double hh_income, density;
    std::string walls_unfinished, sewer, water, garbage, electricity, tv, washer, fridge, cell,
        pc_internet, moto, car, adequate, rented;
    std::string rent;  // empty when not rented
    int bathrooms;
    double weight;
};

HouseholdRow sample_household(double g, Rng& rng) {
    HouseholdRow h;
    auto bern = [&](double p) { return rng.bernoulli(std::clamp(p, 0.02, 0.98)) ? "1" : "0"; };
    h.hh_income = std::exp(rng.normal(7.4 + 0.5 * g, 0.5));
    h.density = std::exp(rng.normal(0.0 - 0.22 * g, 0.25));
    h.walls_unfinished = bern(0.25 - 0.13 * g);
    h.sewer = bern(0.60 + 0.15 * g);
    h.water = bern(0.75 + 0.10 * g);
    h.garbage = bern(0.80 + 0.08 * g);
    h.electricity = bern(0.90 + 0.04 * g);
    h.tv = bern(0.85 + 0.05 * g);
    h.washer = bern(0.50 + 0.18 * g);
    h.fridge = bern(0.90 + 0.04 * g);
    h.cell = bern(0.75 + 0.10 * g);
    h.pc_internet = bern(0.35 + 0.20 * g);
    h.moto = bern(0.25 - 0.05 * g);
    h.car = bern(0.40 + 0.18 * g);
    h.adequate = bern(0.55 + 0.18 * g);
    h.rented = rng.bernoulli(0.3) ? "1" : "0";
    if (h.rented == "1") h.rent = csv_num(std::exp(rng.normal(6.2 + 0.5 * g, 0.4)));
    double p4 = std::clamp(0.05 + 0.06 * g, 0.005, 0.6);
    h.bathrooms = rng.bernoulli(p4) ? 4 + static_cast<int>(rng.below(3))
                                    : 1 + static_cast<int>(rng.below(3));
    h.weight = rng.uniform(5.0, 25.0);
    return h;
}

json cond(std::initializer_list<std::pair<const char*, json>> kv) {
    json j = json::object();
    for (const auto& [k, v] : kv) j[k] = v;
    return j;
}

json demo_mapping() {
    json m;
    m["missing_values"] = json::array({"NA"});
    m["thresholds"] = {
        {"income_p20", {{"universe", "persons"}, {"attribute", "income"}, {"percentile", 20}}},
        {"income_p80", {{"universe", "persons"}, {"attribute", "income"}, {"percentile", 80}}},
    };

    json v = json::object();
    auto pct = [&](const char* name, json numerator, json denominator) {
        v[name] = {{"universe", "persons"}, {"numerator", numerator}, {"denominator", denominator}};
    };
    auto pct_h = [&](const char* name, json numerator, json denominator) {
        v[name] = {{"universe", "households"}, {"numerator", numerator},
                   {"denominator", denominator}};
    };

    // education
    json deg_present = cond({{"attr", "educ_degree"}, {"present", true}});
    pct("P_GRAD", cond({{"attr", "educ_degree"}, {"eq", "grad"}}), deg_present);
    pct("P_MEST", cond({{"attr", "educ_degree"}, {"eq", "mast"}}), deg_present);
    pct("P_DOUTOR", cond({{"attr", "educ_degree"}, {"eq", "doct"}}), deg_present);
    json lvl_present = cond({{"attr", "educ_level"}, {"present", true}});
    pct("P_SEM_INST", cond({{"attr", "educ_level"}, {"eq", "1"}}), lvl_present);
    pct("P_FUND", cond({{"attr", "educ_level"}, {"eq", "2"}}), lvl_present);
    pct("P_ENSMED", cond({{"attr", "educ_level"}, {"eq", "3"}}), lvl_present);
    pct("P_ENSSUP", cond({{"attr", "educ_level"}, {"eq", "4"}}), lvl_present);

    // mobility
    pct("P_OUTROMUNC", cond({{"attr", "other_mun"}, {"eq", "1"}}),
        cond({{"attr", "other_mun"}, {"present", true}}));
    pct("P_CASADIA", cond({{"attr", "daily_return"}, {"eq", "1"}}),
        cond({{"attr", "daily_return"}, {"present", true}}));
    json commute_present = cond({{"attr", "commute"}, {"present", true}});
    pct("P_ATE5", cond({{"attr", "commute"}, {"eq", "1"}}), commute_present);
    pct("P_6A30", cond({{"attr", "commute"}, {"eq", "2"}}), commute_present);
    pct("P_1A2", cond({{"attr", "commute"}, {"eq", "4"}}), commute_present);
    pct("P_MAISDE2", cond({{"attr", "commute"}, {"eq", "5"}}), commute_present);

    // poverty
    v["MEDIA_DENSMORA"] = {{"universe", "households"}, {"attribute", "density"}};
    json pc_present = cond({{"attr", "income_pc"}, {"present", true}});
    pct("P_POBREZA", cond({{"attr", "income_pc"}, {"le", 255}}), pc_present);
    pct("P_PPI_POBREZA",
        cond({{"all", json::array({cond({{"attr", "income_pc"}, {"le", 255}}),
                                   cond({{"attr", "race"},
                                         {"in", json::array({"preta", "parda", "indigena"})}})})}}),
        cond({{"all", json::array({pc_present,
                                   cond({{"attr", "race"}, {"present", true}})})}}));
    pct("P_BOLSA_FAM", cond({{"attr", "bolsa"}, {"eq", "1"}}),
        cond({{"attr", "bolsa"}, {"present", true}}));
    pct("P_OUTROSPROG", cond({{"attr", "outros"}, {"eq", "1"}}),
        cond({{"attr", "outros"}, {"present", true}}));

    // wealth
    pct_h("P_ALUG1000",
          cond({{"all", json::array({cond({{"attr", "rented"}, {"eq", "1"}}),
                                     cond({{"attr", "rent"}, {"ge", 1000}})})}}),
          cond({{"attr", "rented"}, {"present", true}}));
    pct_h("P_BANH4OUMAIS", cond({{"attr", "bathrooms"}, {"ge", 4}}),
          cond({{"attr", "bathrooms"}, {"present", true}}));
    pct("P_IDOSO10SM",
        cond({{"all", json::array({cond({{"attr", "age"}, {"ge", 65}}),
                                   cond({{"attr", "income"}, {"ge", 4000}})})}}),
        cond({{"all", json::array({cond({{"attr", "age"}, {"present", true}}),
                                   cond({{"attr", "income"}, {"present", true}})})}}));

    // income
    v["MED_RENDDOM"] = {{"universe", "households"}, {"attribute", "hh_income"}};

    // segregation
    json income_present = cond({{"attr", "income"}, {"present", true}});
    json race_income_present =
        cond({{"all", json::array({cond({{"attr", "race"}, {"present", true}}),
                                   income_present})}});
    json top_income = cond({{"attr", "income"}, {"gt", {{"threshold", "income_p80"}}}});
    json white_top =
        cond({{"all", json::array({cond({{"attr", "race"}, {"eq", "branca"}}), top_income})}});
    auto ice = [&](const char* name, json top, json bottom, json universe) {
        v[name] = {{"universe", "persons"}, {"top", top}, {"bottom", bottom},
                   {"ice_universe", universe}};
    };
    ice("ICE_renda", top_income, cond({{"attr", "income"}, {"lt", {{"threshold", "income_p20"}}}}),
        income_present);
    ice("ICEedu", cond({{"attr", "educ_level"}, {"eq", "4"}}),
        cond({{"attr", "educ_level"}, {"eq", "1"}}), lvl_present);
    ice("ICE_renda_preto", white_top,
        cond({{"all", json::array({cond({{"attr", "race"}, {"eq", "preta"}}),
                                   cond({{"attr", "income"},
                                         {"le", {{"threshold", "income_p20"}}}})})}}),
        race_income_present);
    ice("ICE_renda_ppi", white_top,
        cond({{"all",
               json::array({cond({{"attr", "race"},
                                  {"in", json::array({"preta", "parda", "indigena"})}}),
                            cond({{"attr", "income"}, {"le", {{"threshold", "income_p20"}}}})})}}),
        race_income_present);
    ice("ICE_branco_renda", white_top,
        cond({{"all", json::array({cond({{"attr", "race"}, {"eq", "branca"}}),
                                   cond({{"attr", "income"},
                                         {"le", {{"threshold", "income_p20"}}}})})}}),
        race_income_present);

    // deprivation
    auto simple_h = [&](const char* name, const char* attr) {
        pct_h(name, cond({{"attr", attr}, {"eq", "1"}}),
              cond({{"attr", attr}, {"present", true}}));
    };
    simple_h("P_ALVSREV", "walls_unfinished");
    simple_h("P_REDE_ESG", "sewer");
    simple_h("P_REDE_AGUA", "water");
    simple_h("P_LIXO", "garbage");
    simple_h("P_ENERGIA", "electricity");
    simple_h("P_TV", "tv");
    simple_h("P_MAQLAV", "washer");
    simple_h("P_GELADEIRA", "fridge");
    pct_h("P_MAQTVGEL",
          cond({{"all", json::array({cond({{"attr", "washer"}, {"eq", "1"}}),
                                     cond({{"attr", "tv"}, {"eq", "1"}}),
                                     cond({{"attr", "fridge"}, {"eq", "1"}})})}}),
          cond({{"attr", "washer"}, {"present", true}}));
    simple_h("P_CELULAR", "cell");
    simple_h("P_COMP_INT", "pc_internet");
    pct_h("P_CELCOMPINT",
          cond({{"all", json::array({cond({{"attr", "cell"}, {"eq", "1"}}),
                                     cond({{"attr", "pc_internet"}, {"eq", "1"}})})}}),
          cond({{"attr", "cell"}, {"present", true}}));
    simple_h("P_MOTO", "moto");
    simple_h("P_CARRO", "car");
    simple_h("P_ADEQ", "adequate");
    pct_h("P_TUDOADEQ",
          cond({{"all", json::array({cond({{"attr", "sewer"}, {"eq", "1"}}),
                                     cond({{"attr", "water"}, {"eq", "1"}}),
                                     cond({{"attr", "garbage"}, {"eq", "1"}}),
                                     cond({{"attr", "electricity"}, {"eq", "1"}}),
                                     cond({{"attr", "adequate"}, {"eq", "1"}})})}}),
          cond({{"attr", "sewer"}, {"present", true}}));
    pct_h("P_NEM_MOTO_CARRO",
          cond({{"all", json::array({cond({{"attr", "moto"}, {"eq", "0"}}),
                                     cond({{"attr", "car"}, {"eq", "0"}})})}}),
          cond({{"attr", "moto"}, {"present", true}}));
    pct_h("P_SO_MOTO",
          cond({{"all", json::array({cond({{"attr", "moto"}, {"eq", "1"}}),
                                     cond({{"attr", "car"}, {"eq", "0"}})})}}),
          cond({{"attr", "moto"}, {"present", true}}));
    pct_h("P_SO_CARRO",
          cond({{"all", json::array({cond({{"attr", "car"}, {"eq", "1"}}),
                                     cond({{"attr", "moto"}, {"eq", "0"}})})}}),
          cond({{"attr", "car"}, {"present", true}}));

    m["variables"] = std::move(v);
    return m;
}

}  // namespace

SynthDataset make_synthetic_dataset(const SynthConfig& config) {
    if (config.grid_side < 2) throw ConfigError("synthetic dataset: grid_side must be >= 2");
    std::size_t n = static_cast<std::size_t>(config.grid_side) *
                    static_cast<std::size_t>(config.grid_side);
    Rng master(config.seed);
    std::vector<double> g = latent_factors(n, master);

    SynthDataset out;

    // persons
    {
        std::ostringstream os;
        os << "unit_id,weight,educ_degree,educ_level,other_mun,daily_return,commute,income,"
              "income_pc,race,bolsa,outros,age\n";
        for (std::size_t u = 0; u < n; ++u) {
            Rng rng = Rng::derive(config.seed, 1000 + u);
            for (int i = 0; i < config.persons_per_unit; ++i) {
                PersonRow p = sample_person(g[u], rng);
                os << unit_id(u, n) << ',' << csv_num(p.weight) << ',' << p.educ_degree << ','
                   << p.educ_level << ',' << p.other_mun << ',' << p.daily_return << ','
                   << p.commute << ',' << csv_num(p.income) << ',' << csv_num(p.income_pc) << ','
                   << p.race << ',' << p.bolsa << ',' << p.outros << ',' << p.age << '\n';
            }
        }
        out.persons_csv = os.str();
    }

    // households
    {
        std::ostringstream os;
        os << "unit_id,weight,hh_income,density,walls_unfinished,sewer,water,garbage,electricity,"
              "tv,washer,fridge,cell,pc_internet,moto,car,adequate,rented,rent,bathrooms\n";
        for (std::size_t u = 0; u < n; ++u) {
            Rng rng = Rng::derive(config.seed, 2000 + u);
            for (int i = 0; i < config.households_per_unit; ++i) {
                HouseholdRow h = sample_household(g[u], rng);
                os << unit_id(u, n) << ',' << csv_num(h.weight) << ',' << csv_num(h.hh_income)
                   << ',' << csv_num(h.density) << ',' << h.walls_unfinished << ',' << h.sewer
                   << ',' << h.water << ',' << h.garbage << ',' << h.electricity << ',' << h.tv
                   << ',' << h.washer << ',' << h.fridge << ',' << h.cell << ',' << h.pc_internet
                   << ',' << h.moto << ',' << h.car << ',' << h.adequate << ',' << h.rented << ','
                   << h.rent << ',' << h.bathrooms << '\n';
            }
        }
        out.households_csv = os.str();
    }

    // coordinates: cell centers
    {
        std::ostringstream os;
        os << "unit_id,x,y\n";
        for (std::size_t u = 0; u < n; ++u) {
            std::size_t row = u / config.grid_side;
            std::size_t col = u % config.grid_side;
            os << unit_id(u, n) << ',' << csv_num((col + 0.5) * config.cell_size) << ','
               << csv_num((row + 0.5) * config.cell_size) << '\n';
        }
        out.coordinates_csv = os.str();
    }

    // geometry: grid squares (closed rings, shared vertices)
    {
        json fc;
        fc["type"] = "FeatureCollection";
        fc["features"] = json::array();
        for (std::size_t u = 0; u < n; ++u) {
            std::size_t row = u / config.grid_side;
            std::size_t col = u % config.grid_side;
            double x0 = col * config.cell_size, x1 = (col + 1) * config.cell_size;
            double y0 = row * config.cell_size, y1 = (row + 1) * config.cell_size;
            json f;
            f["type"] = "Feature";
            f["properties"] = {{"unit_id", unit_id(u, n)}};
            f["geometry"] = {
                {"type", "Polygon"},
                {"coordinates", json::array({json::array({
                                    json::array({x0, y0}), json::array({x1, y0}),
                                    json::array({x1, y1}), json::array({x0, y1}),
                                    json::array({x0, y0})})})}};
            fc["features"].push_back(std::move(f));
        }
        out.geometry_geojson = fc.dump(1) + "\n";
    }

    // outcome: relative risk falling with the latent factor
    {
        std::ostringstream os;
        os << "unit_id,outcome\n";
        Rng rng = Rng::derive(config.seed, 3000);
        for (std::size_t u = 0; u < n; ++u)
            os << unit_id(u, n) << ',' << csv_num(std::exp(-0.4 * g[u] + rng.normal(0.0, 0.10)))
               << '\n';
        out.outcome_csv = os.str();
    }

    out.mapping_json = demo_mapping().dump(2) + "\n";
    return out;
}

void write_synthetic_dataset(const std::string& directory, const SynthConfig& config) {
    SynthDataset d = make_synthetic_dataset(config);
    write_file(directory + "/persons.csv", d.persons_csv);
    write_file(directory + "/households.csv", d.households_csv);
    write_file(directory + "/coordinates.csv", d.coordinates_csv);
    write_file(directory + "/geometry.geojson", d.geometry_geojson);
    write_file(directory + "/outcome.csv", d.outcome_csv);
    write_file(directory + "/mapping.json", d.mapping_json);
}

AreaTable synth_area_table(std::size_t n_units, const VariableCatalog& catalog,
                           std::uint64_t seed, const std::string& noise_dimensions) {
    if (n_units < 3) throw ConfigError("synth_area_table: needs at least 3 units");
    catalog.validate();
    std::set<std::string> noise = split_names(noise_dimensions);

    Rng master(seed);
    std::vector<double> g = latent_factors(n_units, master);

    AreaTable t;
    for (std::size_t u = 0; u < n_units; ++u) {
        t.unit_ids.push_back(unit_id(u, n_units));
        t.xs.push_back(master.uniform(0.0, 100.0));
        t.ys.push_back(master.uniform(0.0, 100.0));
    }

    std::size_t var_index = 0;
    for (const auto& dim : catalog.dimensions) {
        bool pure_noise = noise.count(dim.name) > 0;
        for (const auto& v : dim.variables) {
            Rng rng = Rng::derive(seed, 100 + var_index);
            double beta;
            switch (v.polarity_hint) {
                case PolarityHint::favorable: beta = 0.9; break;
                case PolarityHint::unfavorable: beta = -0.9; break;
                default: beta = 0.25; break;
            }
            if (pure_noise) beta = 0.0;
            double alpha = rng.uniform(-1.2, 1.2);

            std::vector<double> col(n_units);
            for (std::size_t u = 0; u < n_units; ++u) {
                double signal = alpha + beta * g[u] + 0.35 * rng.normal();
                switch (v.kind) {
                    case VariableKind::percentage:
                        col[u] = 100.0 * logistic(signal);
                        break;
                    case VariableKind::weighted_mean:
                        // income-like positive scale
                        col[u] = std::exp(3.0 + 0.5 * (beta == 0.0 ? 0.0 : std::copysign(1.0, beta)) *
                                                    g[u] +
                                          0.12 * rng.normal());
                        break;
                    case VariableKind::ice_ratio:
                        col[u] = std::tanh(0.5 * (pure_noise ? 0.0 : g[u]) + 0.3 * rng.normal());
                        break;
                }
            }
            t.column_names.push_back(v.name);
            t.columns.push_back(std::move(col));
            ++var_index;
        }
    }
    t.validate_shape();
    return t;
}

}  // namespace geoses
