/*
 Copyright 2026 The metaoc Authors

 Licensed under the Apache License, Version 2.0 (the "License");
 you may not use this file except in compliance with the License.
 You may obtain a copy of the License at

      https://www.apache.org/licenses/LICENSE-2.0

 Unless required by applicable law or agreed to in writing, software
 distributed under the License is distributed on an "AS IS" BASIS,
 WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 See the License for the specific language governing permissions and
 limitations under the License.
*/
#ifndef METAOC_CONSTANTS_HPP
#define METAOC_CONSTANTS_HPP

#include "metaoc/lds.hpp"

namespace metaoc {

/// Regret-bound constants derived from the problem bounds.
///
/// D_tilde bounds the state/action magnitudes, G_f the surrogate gradient,
/// L the per-entry drift of the idealized cost, and
/// G_tilde = sqrt(G_f (G_f/2 + L H^2)) is the composite that scales every
/// step size. The domain diameter is exposed both as the closed form
/// kappa_B kappa^3 sqrt(d) / gamma (D_closed_form) and as the exact diameter of
/// the feasible set (D_domain).
struct ConstantsBundle {
  double D_tilde = 0.0;
  double G_f = 0.0;
  double L = 0.0;
  double D_closed_form = 0.0;
  double D_domain = 0.0;
  double G_tilde = 0.0;
  double d = 0.0;
  int H = 0;
  SystemBounds bounds;  // source inputs
};

/// Evaluates the bundle. Requires kappa^2 (1-gamma)^(H+1) < 1.
ConstantsBundle compute_constants(const SystemBounds& bounds, int H, double d);

}  // namespace metaoc

#endif  // METAOC_CONSTANTS_HPP
