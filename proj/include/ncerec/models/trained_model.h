#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "ncerec/models/hyperparameters.h"
#include "ncerec/numkit/dense_matrix.h"

namespace ncerec::models {

// Which optional payloads are present depends on `kind`:
//   NCE-PLRec, NCE-PLRec-W, PLRec: item_embedding, weights
//   PureSVD, NCE-SVD:              item_embedding, user_factor
//   POP:                           none
// `popularity` (training counts per item) is always present; it ranks POP
// and breaks score ties for every other kind.
struct TrainedModel {
  ModelKind kind = ModelKind::kPop;
  Hyperparameters hyper;
  std::size_t num_users = 0;
  std::size_t num_items = 0;
  std::optional<numkit::DenseMatrix> item_embedding;  // n x k
  std::optional<numkit::DenseMatrix> weights;         // n x k
  std::optional<numkit::DenseMatrix> user_factor;     // m x k
  std::vector<double> popularity;                     // n
  std::vector<std::string> item_ids;                  // external ids, empty or n

  // Throws std::logic_error if the payloads do not match `kind`.
  void validate() const;

  bool operator==(const TrainedModel&) const = default;
};

}  // namespace ncerec::models
