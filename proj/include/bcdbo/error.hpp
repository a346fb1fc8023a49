// SPDX-License-Identifier: Apache-2.0
//
// bcdbo: block-coordinate Bayesian optimization of base-station layouts
// Copyright (C) 2026 The bcdbo authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#ifndef BCDBO_ERROR_HPP
#define BCDBO_ERROR_HPP

#include <stdexcept>
#include <string>

namespace bcdbo {

/// Base class of every exception thrown by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Vector or matrix with the wrong number of entries.
class ShapeError : public Error {
public:
    using Error::Error;
};

/// A parameter value outside its admissible interval.
class BoundsError : public Error {
public:
    using Error::Error;
};

/// Invalid run, scene or budget configuration.
class ConfigError : public Error {
public:
    using Error::Error;
};

/// Covariance factorization failed even at the largest jitter level.
class IllConditionedError : public Error {
public:
    using Error::Error;
};

class IoError : public Error {
public:
    using Error::Error;
};

} // namespace bcdbo

#endif
