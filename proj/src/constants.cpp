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
#include "metaoc/constants.hpp"

#include <cmath>

namespace metaoc {

ConstantsBundle compute_constants(const SystemBounds& bounds, int H, double d) {
  bounds.validate();
  if (H < 1) throw ConfigError("compute_constants: H must be >= 1");
  if (!(d > 0.0)) throw ConfigError("compute_constants: d must be positive");

  const double kappa = bounds.kappa;
  const double kappa_B = bounds.kappa_B;
  const double kappa_w = bounds.kappa_w;
  const double gamma = bounds.gamma;
  const double G = bounds.G;

  const double k2 = kappa * kappa;
  const double k3 = k2 * kappa;
  const double k5 = k3 * k2;
  const double decay = k2 * std::pow(1.0 - gamma, H + 1);
  if (decay >= 1.0) {
    throw ConfigError(
        "compute_constants: kappa^2 (1-gamma)^(H+1) must be below 1");
  }

  ConstantsBundle c;
  c.H = H;
  c.d = d;
  c.bounds = bounds;
  c.D_tilde = kappa_w * (k2 + H * kappa_B * kappa_B * k5) /
                  (gamma * (1.0 - decay)) +
              kappa_B * k3 * kappa_w / gamma;
  c.G_f = G * c.D_tilde * kappa_w * H * d * (2.0 * kappa_B * k3 / gamma + H);
  c.L = 2.0 * G * c.D_tilde * kappa_w * kappa_B * k3;
  c.D_closed_form = kappa_B * k3 * std::sqrt(d) / gamma;
  double sq = 0.0;
  for (int k = 1; k <= H; ++k) {
    const double r = k3 * kappa_B * std::pow(1.0 - gamma, k);
    sq += r * r;
  }
  c.D_domain = 2.0 * std::sqrt(sq);
  c.G_tilde = std::sqrt(c.G_f * (c.G_f / 2.0 + c.L * H * H));
  return c;
}

}  // namespace metaoc
