#include "nbproc/models.hpp"

namespace nbproc {

void sweep(ModelState& state, const TokenSet& train, const HyperParams& hyper, RandomSource& rng,
           const SweepOptions& options) {
  switch (state.kind) {
    case ModelKind::kLda:
    case ModelKind::kDirPfa: return lda_sweep(state, train, hyper, rng, options);
    case ModelKind::kNbLda: return nb_lda_sweep(state, train, hyper, rng, options);
    case ModelKind::kNbHdp: return nb_hdp_sweep(state, train, hyper, rng, options);
    case ModelKind::kNbFtm: return nb_ftm_sweep(state, train, hyper, rng, options);
    case ModelKind::kBetaNb: return beta_nb_sweep(state, train, hyper, rng, options);
    case ModelKind::kGammaNb: return gamma_nb_sweep(state, train, hyper, rng, options);
    case ModelKind::kMarkedBetaNb: return marked_beta_nb_sweep(state, train, hyper, rng, options);
    case ModelKind::kMarkedGammaNb: return marked_gamma_nb_sweep(state, train, hyper, rng, options);
    case ModelKind::kCrfHdp: return crf_hdp_sweep(state, train, hyper, rng, options);
  }
}

}  // namespace nbproc
