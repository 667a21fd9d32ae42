#pragma once

namespace xycorr {

/// Nearest-neighbor two-site data in sigma units: the transverse
/// magnetization <sigma^z> and the correlators T^ab = <sigma^a (x) sigma^b>.
/// T^xy is taken equal to T^yx.
struct TwoSiteObservables {
  double mz = 0.0;
  double txx = 0.0;
  double tyy = 0.0;
  double tzz = 0.0;
  double txy = 0.0;
};

}  // namespace xycorr
