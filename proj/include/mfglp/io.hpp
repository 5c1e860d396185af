#pragma once

#include <filesystem>
#include <string>

#include "mfglp/certify.hpp"
#include "mfglp/equilibrium.hpp"
#include "mfglp/hjbfp.hpp"

namespace mfglp {

// CSV layouts (long format, one value per line, '.17g' doubles):
//   flow:        node, i0[, i1], mass
//   occupation:  slab, i0[, i1], a, mass      plus terminal rows with slab = n_time
//                                             and a = -1 holding nu
//   psi:         node, i0[, i1], value
//   value:       node, i0[, i1], value
//   policy:      slab, i0[, i1], a, prob

void write_flow_csv(const std::filesystem::path& path, const GridSpec& grid,
                    const MeanFieldFlow& flow);
MeanFieldFlow read_flow_csv(const std::filesystem::path& path, const GridSpec& grid);

void write_occupation_csv(const std::filesystem::path& path, const GridSpec& grid,
                          const OccupationMeasure& occ);
OccupationMeasure read_occupation_csv(const std::filesystem::path& path, const GridSpec& grid);

void write_psi_csv(const std::filesystem::path& path, const GridSpec& grid,
                   const DualCertificate& psi);
DualCertificate read_psi_csv(const std::filesystem::path& path, const GridSpec& grid);

void write_value_csv(const std::filesystem::path& path, const GridSpec& grid,
                     const Matrix& values_by_node);
void write_policy_csv(const std::filesystem::path& path, const GridSpec& grid,
                      const Policy& policy);

std::string residual_report_json(const ResidualReport& report);

}  // namespace mfglp
