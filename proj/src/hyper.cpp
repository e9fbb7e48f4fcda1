#include "nbproc/hyper.hpp"

#include <cmath>
#include <string>

#include "nbproc/errors.hpp"

namespace nbproc {
namespace {

void require_positive(double x, const char* name) {
  if (!std::isfinite(x) || !(x > 0.0)) throw ConfigError(std::string(name) + " must be positive");
}

}  // namespace

void HyperParams::validate() const {
  require_positive(c, "c");
  require_positive(eta, "eta");
  require_positive(a0, "a0");
  require_positive(b0, "b0");
  require_positive(e0, "e0");
  require_positive(f0, "f0");
  require_positive(lda_alpha_total, "lda_alpha_total");
  require_positive(crf_gamma0, "crf_gamma0");
  if (K < 1) throw ConfigError("K must be at least 1");
  if (iters < 1) throw ConfigError("iters must be at least 1");
  if (burnin < 0 || burnin >= iters) throw ConfigError("burnin must satisfy 0 <= burnin < iters");
  if (collect_every < 1) throw ConfigError("collect_every must be at least 1");
  if (init_iters < 0) throw ConfigError("init_iters must be non-negative");
}

}  // namespace nbproc
