#include "nbproc/model_kind.hpp"

#include "nbproc/errors.hpp"

namespace nbproc {

std::string_view model_name(ModelKind kind) {
  switch (kind) {
    case ModelKind::kLda: return "lda";
    case ModelKind::kDirPfa: return "dir-pfa";
    case ModelKind::kNbLda: return "nb-lda";
    case ModelKind::kNbHdp: return "nb-hdp";
    case ModelKind::kNbFtm: return "nb-ftm";
    case ModelKind::kBetaNb: return "beta-nb";
    case ModelKind::kGammaNb: return "gamma-nb";
    case ModelKind::kMarkedBetaNb: return "marked-beta-nb";
    case ModelKind::kMarkedGammaNb: return "marked-gamma-nb";
    case ModelKind::kCrfHdp: return "crf-hdp";
  }
  return "unknown";
}

ModelKind parse_model_kind(std::string_view name) {
  for (ModelKind kind : kAllModelKinds) {
    if (model_name(kind) == name) return kind;
  }
  throw ConfigError("unknown model \"" + std::string(name) + "\"");
}

ModelTraits model_traits(ModelKind kind) {
  ModelTraits t;
  switch (kind) {
    case ModelKind::kLda:
    case ModelKind::kDirPfa:
      t.normalized_weights = true;
      break;
    case ModelKind::kNbLda:
      t.r_j = t.p_j = t.gamma0 = true;
      break;
    case ModelKind::kNbHdp:
      t.r_k = t.gamma0 = true;
      break;
    case ModelKind::kNbFtm:
      t.r_k = t.pi_k = t.gamma0 = true;
      break;
    case ModelKind::kBetaNb:
      t.r_j = t.p_k = true;
      break;
    case ModelKind::kGammaNb:
      t.r_k = t.p_j = t.gamma0 = true;
      break;
    case ModelKind::kMarkedBetaNb:
      t.r_k = t.p_k = true;
      break;
    case ModelKind::kMarkedGammaNb:
      t.r_k = t.p_k = t.gamma0 = true;
      break;
    case ModelKind::kCrfHdp:
      t.alpha = t.normalized_weights = true;
      break;
  }
  return t;
}

}  // namespace nbproc
