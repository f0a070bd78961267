#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace blx {

// Data and numerical failures. Usage mistakes (bad config values) are reported
// with std::invalid_argument instead.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class WindowNotCovered : public Error {
 public:
  using Error::Error;
};

class SingularSystem : public Error {
 public:
  using Error::Error;
};

class SeriesTooShort : public Error {
 public:
  using Error::Error;
};

class InsufficientHistory : public Error {
 public:
  using Error::Error;
};

class LengthMismatch : public Error {
 public:
  using Error::Error;
};

class IncomparableReports : public Error {
 public:
  using Error::Error;
};

class MissingColumn : public Error {
 public:
  explicit MissingColumn(std::string column)
      : Error("missing column: " + column), column_(std::move(column)) {}
  const std::string& column() const noexcept { return column_; }

 private:
  std::string column_;
};

/// Row numbers are 1-based data rows (the header line is not counted).
class NonNumericCell : public Error {
 public:
  NonNumericCell(std::size_t row, std::string column, const std::string& cell)
      : Error("non-numeric cell at row " + std::to_string(row) + ", column " + column +
              ": '" + cell + "'"),
        row_(row),
        column_(std::move(column)) {}
  std::size_t row() const noexcept { return row_; }
  const std::string& column() const noexcept { return column_; }

 private:
  std::size_t row_;
  std::string column_;
};

}  // namespace blx
