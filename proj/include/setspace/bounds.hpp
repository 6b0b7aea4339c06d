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

#ifndef SETSPACE_BOUNDS_HPP_
#define SETSPACE_BOUNDS_HPP_

namespace setspace {

/// Register bounds for m-obstruction-free k-set agreement with n processes.
struct BoundSet {
  int n = 0;
  int k = 0;
  int m = 0;
  int repeated_lower = 0;           // n + m - k
  int repeated_upper = 0;           // min(n + 2m - k, n)
  double anon_oneshot_lower = 0.0;  // sqrt(m * (n/k - 2)), real-valued
  int anon_oneshot_lower_strict = 0;  // smallest integer register count
                                      // exceeding the real bound
  int anon_repeated_upper = 0;      // (m+1)(n-k) + m^2 + 1
};

/// Throws ConfigError unless 1 <= m <= k < n.
BoundSet bounds(int n, int k, int m);

}  // namespace setspace

#endif  // SETSPACE_BOUNDS_HPP_
