// Copyright 2026 The dpaudit Authors
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

// Shared helpers for the dpaudit tests.

#ifndef DPAUDIT_TESTS_TEST_UTIL_H_
#define DPAUDIT_TESTS_TEST_UTIL_H_

#include <filesystem>
#include <string>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "gmock/gmock.h"
#include "gtest/gtest.h"

namespace dpaudit::testing {

inline const absl::Status& GetStatus(const absl::Status& s) { return s; }
template <typename T>
const absl::Status& GetStatus(const absl::StatusOr<T>& s) {
  return s.status();
}

MATCHER(IsOk, "") { return arg.ok(); }

MATCHER_P(StatusIs, code, "") {
  *result_listener << "status " << GetStatus(arg);
  return GetStatus(arg).code() == code;
}

// gtest's ASSERT_* only work in void functions; this unwraps a StatusOr.
#define DPAUDIT_ASSERT_OK_AND_ASSIGN(lhs, expr)          \
  auto lhs##_or = (expr);                                \
  ASSERT_TRUE(lhs##_or.ok()) << lhs##_or.status();       \
  auto lhs = std::move(*lhs##_or)

// Fresh directory under the gtest temp dir.
inline std::string TempDir(const std::string& name) {
  const std::filesystem::path dir =
      std::filesystem::path(::testing::TempDir()) / ("dpaudit_" + name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir.string();
}

}  // namespace dpaudit::testing

#endif  // DPAUDIT_TESTS_TEST_UTIL_H_
