#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace levilab {

/// Base of every error raised by the library. `kind()` is a stable short tag
/// used in reports and batch summaries.
class Error : public std::runtime_error {
 public:
  Error(std::string kind, const std::string& what)
      : std::runtime_error(what), kind_(std::move(kind)) {}
  const std::string& kind() const noexcept { return kind_; }

 private:
  std::string kind_;
};

#define LEVILAB_DEFINE_ERROR(Name, tag)                                    \
  class Name : public Error {                                              \
   public:                                                                 \
    explicit Name(const std::string& what) : Error(tag, what) {}           \
  };

LEVILAB_DEFINE_ERROR(RangeError, "range")
LEVILAB_DEFINE_ERROR(ArgumentError, "argument")
LEVILAB_DEFINE_ERROR(ConstructionError, "construction")
LEVILAB_DEFINE_ERROR(CostError, "cost")
LEVILAB_DEFINE_ERROR(DomainError, "domain")
LEVILAB_DEFINE_ERROR(SingularityError, "singularity")
LEVILAB_DEFINE_ERROR(StiffnessError, "stiffness")
LEVILAB_DEFINE_ERROR(NotStarShapedError, "not_star_shaped")
LEVILAB_DEFINE_ERROR(TransversalityError, "transversality")
LEVILAB_DEFINE_ERROR(DegeneracyError, "degeneracy")
LEVILAB_DEFINE_ERROR(HypothesisError, "hypothesis")
LEVILAB_DEFINE_ERROR(UsageError, "usage")

#undef LEVILAB_DEFINE_ERROR

/// Parse failure with a 1-based line/column position into the source text.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t line, std::size_t column)
      : Error("parse", "line " + std::to_string(line) + ", column " +
                           std::to_string(column) + ": " + what),
        line_(line),
        column_(column) {}
  std::size_t line() const noexcept { return line_; }
  std::size_t column() const noexcept { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

}  // namespace levilab
