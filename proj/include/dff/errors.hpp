// Copyright (c) 2026 the dff authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <stdexcept>
#include <string>

namespace dff {

class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

class IoError : public Error {
 public:
  using Error::Error;
};

class MismatchedStack : public Error {
 public:
  using Error::Error;
};

class TooFewSlices : public Error {
 public:
  using Error::Error;
};

class InvalidWindow : public Error {
 public:
  using Error::Error;
};

class InvalidKernel : public Error {
 public:
  using Error::Error;
};

class Underdetermined : public Error {
 public:
  using Error::Error;
};

class IllConditionedFit : public Error {
 public:
  using Error::Error;
};

class InvalidPenalty : public Error {
 public:
  using Error::Error;
};

class InvalidThreshold : public Error {
 public:
  using Error::Error;
};

class DivergenceDetected : public Error {
 public:
  using Error::Error;
};

class InvalidShape : public Error {
 public:
  using Error::Error;
};

class InvalidArgument : public Error {
 public:
  using Error::Error;
};

}  // namespace dff
