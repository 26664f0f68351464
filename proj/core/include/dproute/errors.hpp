/* Copyright 2026 The dproute Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *   http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef DPROUTE_ERRORS_HPP_
#define DPROUTE_ERRORS_HPP_

#include <stdexcept>
#include <string>

namespace dproute {

// Base of every error the library raises. Callers that only care about
// "something in dproute failed" catch this; the CLI maps subclasses to exit
// codes.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

#define DPROUTE_DEFINE_ERROR(Name)          \
  class Name : public Error {               \
   public:                                  \
    using Error::Error;                     \
  }

DPROUTE_DEFINE_ERROR(ParseError);
DPROUTE_DEFINE_ERROR(DisconnectedError);
DPROUTE_DEFINE_ERROR(SelfLoopError);
DPROUTE_DEFINE_ERROR(InvalidTopology);
DPROUTE_DEFINE_ERROR(UnknownSwitch);
DPROUTE_DEFINE_ERROR(UnknownLink);
DPROUTE_DEFINE_ERROR(UnknownDomain);
DPROUTE_DEFINE_ERROR(PartitionInfeasible);
DPROUTE_DEFINE_ERROR(WidthMismatch);
DPROUTE_DEFINE_ERROR(TruncatedHeader);
DPROUTE_DEFINE_ERROR(VersionMismatch);
DPROUTE_DEFINE_ERROR(StackUnderflow);
DPROUTE_DEFINE_ERROR(ZeroWeightSum);
DPROUTE_DEFINE_ERROR(IncompatibleTraversal);
DPROUTE_DEFINE_ERROR(DegreeTooHigh);
DPROUTE_DEFINE_ERROR(InvalidPolicy);
DPROUTE_DEFINE_ERROR(MissingRules);
DPROUTE_DEFINE_ERROR(InvalidRule);

#undef DPROUTE_DEFINE_ERROR

}  // namespace dproute

#endif  // DPROUTE_ERRORS_HPP_
