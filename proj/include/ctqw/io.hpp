#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "ctqw/dynamics.hpp"
#include "ctqw/hamiltonian.hpp"
#include "ctqw/lattice.hpp"

namespace ctqw {

// Shortest locale-independent representation with 17 significant digits, so
// identical runs serialize byte-identically.
std::string format_g17(double v);

// Canonical observable CSV: header "Jt,sigma_x2,sigma_y2,coherence" plus one
// row per sample, '\n' line endings.
std::string series_to_csv(const ObservableSeries& series);

// Inverse of series_to_csv. Throws ConfigError on a wrong header or malformed
// rows. Snapshot and boundary-contact info is not part of the CSV.
ObservableSeries series_from_csv(const std::string& text);

std::string read_text_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, const std::string& text);

nlohmann::json lattice_to_json(const Lattice& lat);
nlohmann::json patches_to_json(const Lattice& lat, const std::vector<DualPatch>& patches);

// Sparse triplet dump of a Hamiltonian, mostly for debugging and plotting.
nlohmann::json matrix_to_triplets(const HamiltonianMatrix& H);

}  // namespace ctqw
