// Copyright 2026 The polsim Authors
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

#pragma once

#include <stdexcept>
#include <string>

namespace polsim {

enum class ErrorKind {
  XmlSyntax,
  GrammarViolation,
  UnknownCombiner,
  UnsupportedCombiner,
  UnsupportedMatchFunction,
  UnboundAttribute,
  SchemaMismatch,
  ArityMismatch,
  ScopeOnUnsupportedOperator,
  IndeterminateUnsupported,
  InternalInconsistency,
  Config,
  Io,
};

const char* error_kind_name(ErrorKind k);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(std::string(error_kind_name(kind)) + ": " + message),
        kind_(kind) {}

  ErrorKind kind() const { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace polsim
