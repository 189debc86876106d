/*!
 * Copyright (c) 2026 by Contributors
 * \file error.hpp
 * \brief Exception hierarchy shared by the whole toolkit.
 */
#ifndef KQIPRED_ERROR_HPP_
#define KQIPRED_ERROR_HPP_

#include <stdexcept>
#include <string>

namespace kqipred {

/*! \brief Base class for every error raised by this library. */
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

/*! \brief A file does not match its expected schema (wrong header, wrong shape). */
class SchemaError : public Error {
 public:
  using Error::Error;
};

/*! \brief A value violates a domain-type invariant (negative size, bad token, ...). */
class ValidationError : public Error {
 public:
  using Error::Error;
};

/*! \brief An operation was called outside its precondition. */
class DomainError : public Error {
 public:
  using Error::Error;
};

/*! \brief A design matrix is rank deficient. */
class SingularMatrixError : public Error {
 public:
  using Error::Error;
};

/*! \brief Training data is degenerate (zero-variance feature or target). */
class DegenerateInputError : public Error {
 public:
  using Error::Error;
};

/*! \brief Reading or writing a file failed. */
class IoError : public Error {
 public:
  using Error::Error;
};

/*! \brief A document could not be parsed. */
class ParseError : public Error {
 public:
  using Error::Error;
};

/*! \brief A persisted document has an unsupported schema version. */
class IncompatibilityError : public Error {
 public:
  using Error::Error;
};

/*! \brief A configuration document has unknown keys or ill-typed values. */
class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace kqipred

#endif  // KQIPRED_ERROR_HPP_
