#pragma once

namespace sgpipe {

// Material constant epsilon and Reynolds number R.
struct FluidParams {
  double epsilon = 0.0;
  double reynolds = 1.0;

  // Throws DomainError unless epsilon >= 0 (> 0 if require_positive_eps) and R > 0.
  void validate(bool require_positive_eps = false) const;
};

}  // namespace sgpipe
