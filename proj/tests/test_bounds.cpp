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

#include <doctest.h>

#include <algorithm>

#include "setspace/bounds.hpp"
#include "setspace/protocol.hpp"

using namespace setspace;

TEST_CASE("obstruction-free repeated consensus needs exactly n registers") {
  BoundSet b = bounds(5, 1, 1);
  CHECK(b.repeated_lower == 5);
  CHECK(b.repeated_upper == 5);
}

TEST_CASE("general repeated bounds") {
  BoundSet b = bounds(6, 3, 2);
  CHECK(b.repeated_lower == 5);
  CHECK(b.repeated_upper == 6);  // min(7, 6)
  BoundSet c = bounds(10, 3, 2);
  CHECK(c.repeated_lower == 9);
  CHECK(c.repeated_upper == 10);
}

TEST_CASE("anonymous bounds") {
  BoundSet b = bounds(4, 2, 1);
  CHECK(b.anon_repeated_upper == 6);  // (2)(2) + 1 + 1
  CHECK(b.anon_oneshot_lower == doctest::Approx(0.0));
  CHECK(b.anon_oneshot_lower_strict == 1);

  BoundSet c = bounds(10, 2, 2);
  // sqrt(2 * (5 - 2)) = sqrt(6)
  CHECK(c.anon_oneshot_lower == doctest::Approx(2.449489742));
  CHECK(c.anon_oneshot_lower_strict == 3);
  CHECK(c.anon_repeated_upper == 3 * 8 + 4 + 1);
}

TEST_CASE("bound preconditions") {
  CHECK_THROWS_AS(bounds(3, 3, 1), ConfigError);  // k < n fails
  CHECK_THROWS_AS(bounds(3, 1, 2), ConfigError);  // m <= k fails
  CHECK_THROWS_AS(bounds(3, 2, 0), ConfigError);
}

TEST_CASE("upper bound matches the protocol component counts") {
  for (int n = 3; n <= 6; ++n) {
    for (int k = 1; k < n; ++k) {
      for (int m = 1; m <= k; ++m) {
        ProtocolParams p;
        p.protocol = Protocol::Fig2;
        p.n = n;
        p.k = k;
        p.m = m;
        p.domain_size = k + 1;
        // The protocol's component count caps at n only at the register
        // implementation layer (single-writer registers), which is what the
        // bound counts.
        CHECK(std::min(p.components(), n) == bounds(n, k, m).repeated_upper);
        p.protocol = Protocol::Fig4;
        CHECK(p.components() + 1 == bounds(n, k, m).anon_repeated_upper);
      }
    }
  }
}
