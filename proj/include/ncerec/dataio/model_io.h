#pragma once

#include <cstdint>
#include <istream>
#include <ostream>
#include <string>

#include "ncerec/models/trained_model.h"

namespace ncerec::dataio {

// Binary model layout, all integers and floats little-endian:
//   magic "NCEPLREC" (8 bytes), u32 version, u32 kind tag,
//   u64 num_users, u64 num_items, u64 rank,
//   hyperparameters: u64 rank, f64 beta, f64 alpha, f64 lambda,
//                    u64 power_iterations, u64 seed
//   u8 presence flags (1 item_embedding, 2 weights, 4 user_factor)
//   each present matrix: u64 rows, u64 cols, rows*cols f64 (row-major)
//   u64 n, n f64 popularity
//   u64 count, then per id: u64 length, bytes
inline constexpr char kModelMagic[8] = {'N', 'C', 'E', 'P', 'L', 'R', 'E', 'C'};
inline constexpr std::uint32_t kModelVersion = 1;

void write_model(std::ostream& out, const models::TrainedModel& model);
// Throws IncompatibleModelError on a wrong magic or version and
// FormatError on truncated or inconsistent data.
models::TrainedModel read_model(std::istream& in, const std::string& source = "<stream>");

void save_model(const models::TrainedModel& model, const std::string& path);
models::TrainedModel load_model(const std::string& path);

}  // namespace ncerec::dataio
