/*
 * Copyright 2026 The aad-evalkit Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef AAD_ERRORS_HPP_
#define AAD_ERRORS_HPP_

#include <stdexcept>
#include <string>

namespace aad {

// Base class for all toolkit errors. Each concrete error corresponds to one
// documented failure mode of the public API.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

#define AAD_DEFINE_ERROR(Name)                 \
  class Name : public Error {                  \
   public:                                     \
    using Error::Error;                        \
  }

// dataset-model
AAD_DEFINE_ERROR(InvalidPair);
AAD_DEFINE_ERROR(InvalidStimulusId);
AAD_DEFINE_ERROR(ParseError);

// balance-analysis
AAD_DEFINE_ERROR(EmptyDataset);
AAD_DEFINE_ERROR(NoFeasibleSubset);

// cv-partition
AAD_DEFINE_ERROR(PairUndefined);
AAD_DEFINE_ERROR(NeedThreeFolds);
AAD_DEFINE_ERROR(InsufficientKeys);
AAD_DEFINE_ERROR(PlanMismatch);
AAD_DEFINE_ERROR(UnknownTrial);

// metrics-and-losses
AAD_DEFINE_ERROR(ConstantSeries);
AAD_DEFINE_ERROR(LengthMismatch);
AAD_DEFINE_ERROR(NoFullWindow);
AAD_DEFINE_ERROR(AllZeroDifferences);
AAD_DEFINE_ERROR(TooFewPairs);
AAD_DEFINE_ERROR(InvalidPValue);

// decoders
AAD_DEFINE_ERROR(SingularSystem);
AAD_DEFINE_ERROR(InconsistentShapes);
AAD_DEFINE_ERROR(Diverged);
AAD_DEFINE_ERROR(ChannelMismatch);
AAD_DEFINE_ERROR(TooShort);
AAD_DEFINE_ERROR(MissingEnvelope);

// synth-generator
AAD_DEFINE_ERROR(InfeasibleBalance);
AAD_DEFINE_ERROR(InvalidConfig);

// experiment / IO
AAD_DEFINE_ERROR(IoError);
AAD_DEFINE_ERROR(SchemaMismatch);

#undef AAD_DEFINE_ERROR

}  // namespace aad

#endif  // AAD_ERRORS_HPP_
