// Generates a synthetic CNC fleet CSV with the same schema and failure
// mechanics as the public dataset, for demos and hermetic testing.

#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "pmbench/synthetic.hpp"

int main(int argc, char** argv) {
    CLI::App app{"synthetic CNC predictive-maintenance dataset generator"};
    pmbench::SyntheticConfig cfg;
    std::string out_path = "synthetic_cnc.csv";
    app.add_option("-o,--out", out_path, "output CSV path");
    app.add_option("--rows", cfg.rows, "number of rows");
    app.add_option("--seed", cfg.seed, "generator seed");
    CLI11_PARSE(app, argc, argv);

    const std::string csv = pmbench::generate_synthetic_csv(cfg);
    std::ofstream out(out_path, std::ios::binary | std::ios::trunc);
    if (!out) {
        std::cerr << "cannot write " << out_path << "\n";
        return 1;
    }
    out << csv;
    std::cout << "wrote " << out_path << " (" << cfg.rows << " rows, seed " << cfg.seed << ")\n";
    return 0;
}
