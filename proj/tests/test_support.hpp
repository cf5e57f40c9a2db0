// Copyright 2026 The becimp Authors
//
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


#ifndef BECIMP_TESTS_TEST_SUPPORT_HPP_
#define BECIMP_TESTS_TEST_SUPPORT_HPP_

#include <cmath>
#include <string>

#include "becimp/config.hpp"
#include "becimp/params.hpp"

namespace becimp::testing {

inline Model preset_model(const std::string& name) {
  return build_model(Config::preset(name));
}

inline Model model_with(const std::string& name,
                        std::initializer_list<std::pair<const char*, const char*>> kv) {
  Config c = Config::preset(name);
  for (const auto& [k, v] : kv) c.set(k, v);
  return build_model(c);
}

inline double relative(double a, double b) {
  return std::abs(a - b) / std::max(std::abs(b), 1e-300);
}

}  // namespace becimp::testing

#endif  // BECIMP_TESTS_TEST_SUPPORT_HPP_
