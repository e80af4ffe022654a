#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace sparkdet {

enum class Errc {
  cap_exceeded,
  sort_mismatch,
  operator_failure,
  empty_partition,
  empty_rdd,
  empty_list,
  invalid_plan,
  unknown_operator,
  dangling_edge,
  encoding_violation,
  parse_error,
  budget_exceeded,
  invalid_argument,
};

std::string_view to_string(Errc code);

/// The single exception type thrown by the library. Combinators attach the
/// partition/element position at which an operator failed so counterexamples
/// can point at concrete data.
class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& message);

  Errc code() const noexcept { return code_; }
  const std::string& detail() const noexcept { return detail_; }
  std::optional<std::size_t> partition() const noexcept { return partition_; }
  std::optional<std::size_t> element() const noexcept { return element_; }

  /// Copy of this error with provenance filled in (existing positions win).
  Error at(std::optional<std::size_t> partition, std::optional<std::size_t> element) const;

 private:
  static std::string render(Errc code, const std::string& detail,
                            std::optional<std::size_t> partition,
                            std::optional<std::size_t> element);

  Errc code_;
  std::string detail_;
  std::optional<std::size_t> partition_;
  std::optional<std::size_t> element_;
};

}  // namespace sparkdet
