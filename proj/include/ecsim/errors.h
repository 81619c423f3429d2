// -*- mode:C++; tab-width:8; c-basic-offset:2; indent-tabs-mode:nil -*-
#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace ecsim {

// Field operation with no defined result (inverse of zero, division by zero).
class domain_error : public std::domain_error {
public:
  using std::domain_error::domain_error;
};

// Requested geometry exceeds what the field or cluster can hold.
class capacity_error : public std::length_error {
public:
  using std::length_error::length_error;
};

// Chunk counts, lengths or indices do not match the code geometry.
class shape_error : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

class insufficient_data_error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

class singular_matrix_error : public std::runtime_error {
public:
  singular_matrix_error(std::size_t column)
    : std::runtime_error("matrix is singular: no pivot in column " +
                         std::to_string(column)),
      column_(column) {}
  std::size_t column() const { return column_; }

private:
  std::size_t column_;
};

// More chunks of one stripe are gone than the code can rebuild.
class data_loss_error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

// Violated internal precondition (e.g. initializing an object twice).
class internal_error : public std::logic_error {
public:
  using std::logic_error::logic_error;
};

class config_error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

class parse_error : public std::runtime_error {
public:
  parse_error(std::size_t line, const std::string& what)
    : std::runtime_error("line " + std::to_string(line) + ": " + what),
      line_(line) {}
  std::size_t line() const { return line_; }

private:
  std::size_t line_;
};

class io_error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

} // namespace ecsim
