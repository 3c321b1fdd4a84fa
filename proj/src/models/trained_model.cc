#include "ncerec/models/trained_model.h"

#include <stdexcept>
#include <string>

namespace ncerec::models {

void TrainedModel::validate() const {
  const bool regression = uses_regression(kind);
  const bool svd = kind == ModelKind::kPureSvd || kind == ModelKind::kNceSvd;
  const std::string name(to_string(kind));
  auto fail = [&](const std::string& what) { throw std::logic_error(name + " model: " + what); };

  if (item_embedding.has_value() != (regression || svd)) fail("item embedding presence");
  if (weights.has_value() != regression) fail("weights presence");
  if (user_factor.has_value() != svd) fail("user factor presence");
  if (popularity.size() != num_items) fail("popularity length");
  if (!item_ids.empty() && item_ids.size() != num_items) fail("item id table length");
  if (item_embedding && item_embedding->rows() != num_items) fail("item embedding rows");
  if (weights) {
    if (weights->rows() != num_items) fail("weights rows");
    if (weights->cols() != item_embedding->cols()) fail("weights and embedding rank differ");
  }
  if (user_factor) {
    if (user_factor->rows() != num_users) fail("user factor rows");
    if (user_factor->cols() != item_embedding->cols()) fail("user factor and embedding rank differ");
  }
}

}  // namespace ncerec::models
