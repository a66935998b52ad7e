// Copyright 2026 The incluster Authors
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Builds a small incomplete matrix, asks both cluster questions and prints
// the certificates.

#include <iostream>

#include "incluster/diam.hpp"
#include "incluster/instances.hpp"
#include "incluster/rad.hpp"

int main() {
  using namespace incluster;
  const auto m = parse_instance(
      "6 5\n"
      "0?0110\n"
      "010?10\n"
      "0101?0\n"
      "111001\n"
      "1?1001\n");

  const auto show = [&](const char* what,
                        const std::optional<ClusterCertificate>& c) {
    std::cout << what << ": ";
    if (!c) {
      std::cout << "none\n";
      return;
    }
    std::cout << c->size() << " rows";
    if (c->center) std::cout << " around " << complete_to_string(*c->center);
    std::cout << '\n';
    for (std::size_t i = 0; i < c->size(); ++i) {
      std::cout << "  row " << c->rows[i] << " -> "
                << complete_to_string(c->completions[i]) << '\n';
    }
  };

  show("diameter 1, k=3", solve_diam_fpt(m, 3, 1));
  show("radius 1, k=3", solve_rad_xp(m, 3, 1));
  show("radius 1, k=4", solve_rad_xp(m, 4, 1));
  show("radius 1, k=4, eps=1/2", approx_rad(m, 4, 1, ApproxParams{1, 2}));
  return 0;
}
