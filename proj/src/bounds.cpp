/*
 * Copyright 2026 The setspace authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "setspace/bounds.hpp"

#include <algorithm>
#include <cmath>

#include "setspace/protocol.hpp"

namespace setspace {

BoundSet bounds(int n, int k, int m) {
  if (!(1 <= m && m <= k && k < n))
    throw ConfigError("bounds need 1 <= m <= k < n");
  BoundSet b;
  b.n = n;
  b.k = k;
  b.m = m;
  b.repeated_lower = n + m - k;
  b.repeated_upper = std::min(n + 2 * m - k, n);
  const double inner = m * (static_cast<double>(n) / k - 2.0);
  b.anon_oneshot_lower = inner > 0.0 ? std::sqrt(inner) : 0.0;
  b.anon_oneshot_lower_strict =
      static_cast<int>(std::floor(b.anon_oneshot_lower)) + 1;
  b.anon_repeated_upper = (m + 1) * (n - k) + m * m + 1;
  return b;
}

}  // namespace setspace
