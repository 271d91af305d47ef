// Copyright 2026 The wpir Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef WPIR_STATUS_MACROS_H_
#define WPIR_STATUS_MACROS_H_

#include <utility>

#include "absl/status/status.h"
#include "absl/status/statusor.h"

#define WPIR_STATUS_CONCAT_INNER(a, b) a##b
#define WPIR_STATUS_CONCAT(a, b) WPIR_STATUS_CONCAT_INNER(a, b)

#define WPIR_RETURN_IF_ERROR(expr)            \
  do {                                        \
    absl::Status wpir_status_ = (expr);       \
    if (!wpir_status_.ok()) return wpir_status_; \
  } while (0)

#define WPIR_ASSIGN_OR_RETURN_IMPL(statusor, lhs, rexpr) \
  auto statusor = (rexpr);                               \
  if (!statusor.ok()) return statusor.status();          \
  lhs = std::move(statusor).value()

#define WPIR_ASSIGN_OR_RETURN(lhs, rexpr) \
  WPIR_ASSIGN_OR_RETURN_IMPL(             \
      WPIR_STATUS_CONCAT(wpir_statusor_, __LINE__), lhs, rexpr)

#endif  // WPIR_STATUS_MACROS_H_
