#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>

namespace ncerec::models {

enum class ModelKind {
  kNcePlrec,          // NCE embedding + global closed-form regression
  kNcePlrecWeighted,  // NCE embedding + per-item weighted regression
  kPlrec,             // SVD of R, unscaled V, global regression
  kPureSvd,           // U Sigma V^T of R
  kNceSvd,            // U* V*^T of the depopularized matrix
  kPop,               // training interaction counts
};

// Canonical names: "NCE-PLRec", "NCE-PLRec-W", "PLRec", "PureSVD", "NCE-SVD", "POP".
std::string_view to_string(ModelKind kind);
// Case-insensitive; throws std::invalid_argument for unknown names.
ModelKind parse_model_kind(std::string_view name);

bool uses_regression(ModelKind kind);
bool uses_nce(ModelKind kind);

struct Hyperparameters {
  std::size_t rank = 50;
  double beta = 1.0;
  double alpha = 0.0;
  double lambda = 1.0;
  std::size_t power_iterations = 7;
  std::uint64_t seed = 0;

  // Throws std::invalid_argument naming the offending field.
  void validate() const;

  bool operator==(const Hyperparameters&) const = default;
};

std::string describe(const Hyperparameters& h);

}  // namespace ncerec::models
