#pragma once

#include <array>
#include <string>
#include <string_view>

namespace nbproc {

enum class ModelKind {
  kLda,
  kDirPfa,
  kNbLda,
  kNbHdp,
  kNbFtm,
  kBetaNb,
  kGammaNb,
  kMarkedBetaNb,
  kMarkedGammaNb,
  kCrfHdp,
};

inline constexpr std::array<ModelKind, 10> kAllModelKinds = {
    ModelKind::kLda,          ModelKind::kDirPfa,       ModelKind::kNbLda,         ModelKind::kNbHdp,
    ModelKind::kNbFtm,        ModelKind::kBetaNb,       ModelKind::kGammaNb,       ModelKind::kMarkedBetaNb,
    ModelKind::kMarkedGammaNb, ModelKind::kCrfHdp};

/// CLI name, e.g. "gamma-nb".
std::string_view model_name(ModelKind kind);

/// Inverse of model_name. Throws ConfigError for unknown names.
ModelKind parse_model_kind(std::string_view name);

/// Which parameters a model infers. Fixed parameters keep their initial
/// value for the whole chain (e.g. p_j = 0.5 in NB-HDP and NB-FTM).
struct ModelTraits {
  bool r_k = false;
  bool r_j = false;
  bool p_k = false;
  bool p_j = false;
  bool pi_k = false;
  bool gamma0 = false;
  bool alpha = false;
  bool normalized_weights = false;  // lambda rows are probability vectors
};

ModelTraits model_traits(ModelKind kind);

}  // namespace nbproc
