/*
 *   Copyright 2026 The cnas Authors
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

#ifndef CNAS_ERROR_HPP
#define CNAS_ERROR_HPP

#include <stdexcept>
#include <string>

namespace cnas {

/// Bad parameters or a violated precondition (CLI exit code 1).
class InvalidArgument : public std::invalid_argument {
public:
	using std::invalid_argument::invalid_argument;
};

/// Reading or writing a file failed (CLI exit code 2).
class IoError : public std::runtime_error {
public:
	using std::runtime_error::runtime_error;
};

/// A structural invariant does not hold, e.g. a cyclic "DAG" (CLI exit code 3).
class InvariantViolation : public std::logic_error {
public:
	using std::logic_error::logic_error;
};

}  // namespace cnas

#endif  // CNAS_ERROR_HPP
