#include "ncerec/models/hyperparameters.h"

#include <algorithm>
#include <array>
#include <cctype>
#include <cmath>
#include <sstream>
#include <stdexcept>
#include <utility>

namespace ncerec::models {
namespace {

constexpr std::array<std::pair<ModelKind, std::string_view>, 6> kNames{{
    {ModelKind::kNcePlrec, "NCE-PLRec"},
    {ModelKind::kNcePlrecWeighted, "NCE-PLRec-W"},
    {ModelKind::kPlrec, "PLRec"},
    {ModelKind::kPureSvd, "PureSVD"},
    {ModelKind::kNceSvd, "NCE-SVD"},
    {ModelKind::kPop, "POP"},
}};

bool iequals(std::string_view a, std::string_view b) {
  return a.size() == b.size() && std::equal(a.begin(), a.end(), b.begin(), [](char x, char y) {
           return std::tolower(static_cast<unsigned char>(x)) ==
                  std::tolower(static_cast<unsigned char>(y));
         });
}

}  // namespace

std::string_view to_string(ModelKind kind) {
  for (const auto& [k, name] : kNames)
    if (k == kind) return name;
  return "unknown";
}

ModelKind parse_model_kind(std::string_view name) {
  for (const auto& [k, n] : kNames)
    if (iequals(n, name)) return k;
  throw std::invalid_argument("unknown model kind '" + std::string(name) +
                              "' (expected NCE-PLRec, NCE-PLRec-W, PLRec, PureSVD, NCE-SVD or POP)");
}

bool uses_regression(ModelKind kind) {
  return kind == ModelKind::kNcePlrec || kind == ModelKind::kNcePlrecWeighted ||
         kind == ModelKind::kPlrec;
}

bool uses_nce(ModelKind kind) {
  return kind == ModelKind::kNcePlrec || kind == ModelKind::kNcePlrecWeighted ||
         kind == ModelKind::kNceSvd;
}

void Hyperparameters::validate() const {
  if (rank < 1) throw std::invalid_argument("hyperparameter rank must be >= 1");
  if (!std::isfinite(beta) || !(beta > 0.0))
    throw std::invalid_argument("hyperparameter beta must be > 0");
  if (!std::isfinite(alpha) || alpha < -1.0)
    throw std::invalid_argument("hyperparameter alpha must be >= -1");
  if (!std::isfinite(lambda) || !(lambda > 0.0))
    throw std::invalid_argument("hyperparameter lambda must be > 0");
}

std::string describe(const Hyperparameters& h) {
  std::ostringstream os;
  os << "rank=" << h.rank << " beta=" << h.beta << " alpha=" << h.alpha << " lambda=" << h.lambda
     << " power_iterations=" << h.power_iterations << " seed=" << h.seed;
  return os.str();
}

}  // namespace ncerec::models
