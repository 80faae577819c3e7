// Copyright 2026 The ReachBot Planar Simulator Authors
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

#ifndef REACHBOT_ERRORS_HPP_
#define REACHBOT_ERRORS_HPP_

#include <stdexcept>
#include <string>

namespace reachbot {

// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// An anchor coincides with the shoulder it is assigned to; the boom bearing
// is undefined there.
class AnchorCoincidentError : public Error {
 public:
  using Error::Error;
};

// A boom length left its [b_min, b_max] envelope.
class ExtensionOutOfRangeError : public Error {
 public:
  using Error::Error;
};

// A boom has zero length; its Jacobian block is rank one and revolute torque
// cannot be transmitted.
class SingularBoomError : public Error {
 public:
  using Error::Error;
};

// A state magnitude blew past the sanity bound during integration.
class IntegrationDivergedError : public Error {
 public:
  using Error::Error;
};

// The wrench map lost full row rank (unstable stance).
class RankDeficientError : public Error {
 public:
  using Error::Error;
};

// A gain matrix is not symmetric positive definite.
class GainNotPositiveDefiniteError : public Error {
 public:
  using Error::Error;
};

// Detaching a boom would leave the remaining stance rank-deficient.
class StanceUnstableError : public Error {
 public:
  using Error::Error;
};

// A scenario file failed validation; `field()` names the offending entry.
class ScenarioInvalidError : public Error {
 public:
  ScenarioInvalidError(std::string field, const std::string& what)
      : Error("scenario field '" + field + "': " + what),
        field_(std::move(field)) {}
  const std::string& field() const { return field_; }

 private:
  std::string field_;
};

// A run exhausted its duration budget before finishing its program.
class NonConvergentError : public Error {
 public:
  using Error::Error;
};

// A trace ended mid-waypoint and cannot be summarized per waypoint.
class IncompleteTraceError : public Error {
 public:
  using Error::Error;
};

// A file could not be opened or written.
class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace reachbot

#endif  // REACHBOT_ERRORS_HPP_
