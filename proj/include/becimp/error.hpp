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

#ifndef BECIMP_ERROR_HPP_
#define BECIMP_ERROR_HPP_

#include <stdexcept>
#include <string>

namespace becimp {

// Values mirror bim_status in becimp.h.
enum class ErrorCode {
  kInvalidParameter = 1,
  kDomain = 2,
  kConfig = 3,
  kAccuracy = 4,
  kState = 5,
  kDecompositionUnavailable = 6,
  kIntegration = 7,
  kUnsupportedDimension = 8,
  kIo = 9,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

// Raised when a momentum-space quadrature fails to converge. Carries the last
// difference between successive refinements.
class AccuracyError : public Error {
 public:
  AccuracyError(const std::string& what, double residual)
      : Error(ErrorCode::kAccuracy, what), residual_(residual) {}

  double residual() const noexcept { return residual_; }

 private:
  double residual_;
};

}  // namespace becimp

#endif  // BECIMP_ERROR_HPP_
