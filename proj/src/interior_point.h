// Copyright 2026 The CES Authors
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

#ifndef CES_SRC_INTERIOR_POINT_H_
#define CES_SRC_INTERIOR_POINT_H_

#include "absl/status/statusor.h"
#include "ces/cone_solver.h"

namespace ces::internal {

// Primal-dual path-following method with Nesterov-Todd scaling and
// Mehrotra correction. Assumes the program has already been validated.
absl::StatusOr<Solution> SolveInteriorPoint(const ConeProgram& program,
                                            const SolverSettings& settings);

}  // namespace ces::internal

#endif  // CES_SRC_INTERIOR_POINT_H_
